#include "matrix.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace tsr {

namespace {

std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("Matrix: data length " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows_) + "x" +
                                    std::to_string(cols_));
    }
}

Matrix Matrix::from_values(std::size_t rows, std::size_t cols, std::vector<double> values) {
    Matrix m(rows, cols, std::move(values));
    m.require_finite("Matrix");
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void Matrix::require_finite(const char* what) const {
    if (!all_finite()) {
        throw std::invalid_argument(std::string(what) + ": non-finite entry (NaN/Inf) rejected");
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: dimension mismatch " + shape_str(a) + " * " +
                                    shape_str(b));
    }
    Matrix out(a.rows(), b.cols());
    const std::size_t inner = a.cols();
    const std::size_t width = b.cols();
    parallel_blocks(a.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double* arow = a.row_ptr(i);
            double* orow = out.row_ptr(i);
            for (std::size_t t = 0; t < inner; ++t) {
                const double c = arow[t];
                if (c == 0.0) continue;
                const double* brow = b.row_ptr(t);
                for (std::size_t j = 0; j < width; ++j) orow[j] += c * brow[j];
            }
        }
    });
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.row_ptr(i);
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = arow[j];
    }
    return out;
}

Matrix gram(const Matrix& a, double scale) {
    if (a.empty()) {
        throw std::invalid_argument("gram: empty matrix");
    }
    const std::size_t n = a.rows();
    const std::size_t d = a.cols();
    Matrix out(d, d);
    // Upper triangle of a^T a, accumulated row-by-row; workers own disjoint
    // output row blocks so the result is independent of the worker count.
    parallel_blocks(d, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = 0; r < n; ++r) {
            const double* row = a.row_ptr(r);
            for (std::size_t i = begin; i < end; ++i) {
                const double c = row[i];
                if (c == 0.0) continue;
                double* orow = out.row_ptr(i);
                for (std::size_t j = i; j < d; ++j) orow[j] += c * row[j];
            }
        }
    });
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            const double v = out(i, j) * scale;
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

namespace {

double off_diagonal_norm(const Matrix& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = i + 1; j < s.cols(); ++j) acc += s(i, j) * s(i, j);
    }
    return std::sqrt(2.0 * acc);
}

// Fix sign so the largest-magnitude entry of each eigenvector row (of vt) is
// positive; first occurrence wins on ties.
void fix_sign_rows(Matrix& vt) {
    for (std::size_t r = 0; r < vt.rows(); ++r) {
        double* row = vt.row_ptr(r);
        std::size_t arg = 0;
        double best = std::fabs(row[0]);
        for (std::size_t j = 1; j < vt.cols(); ++j) {
            const double m = std::fabs(row[j]);
            if (m > best) {
                best = m;
                arg = j;
            }
        }
        if (row[arg] < 0.0) {
            for (std::size_t j = 0; j < vt.cols(); ++j) row[j] = -row[j];
        }
    }
}

}  // namespace

SymEigResult sym_eig(const Matrix& a) {
    if (a.empty()) {
        throw std::invalid_argument("sym_eig: empty matrix");
    }
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("sym_eig: matrix is not square (" + shape_str(a) + ")");
    }
    const std::size_t n = a.rows();
    const double norm_a = frobenius_norm(a);

    // Symmetry check, then symmetrize as (A + A^T)/2.
    Matrix s(n, n);
    double max_asym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            max_asym = std::max(max_asym, std::fabs(a(i, j) - a(j, i)));
            s(i, j) = 0.5 * (a(i, j) + a(j, i));
        }
    }
    if (max_asym > 1e-10 * (1.0 + norm_a)) {
        throw std::invalid_argument("sym_eig: matrix is not symmetric (max |a_ij - a_ji| = " +
                                    std::to_string(max_asym) + ")");
    }

    // Eigenvectors accumulated as rows of vt (so rotations touch contiguous
    // memory); transposed into columns at the end.
    Matrix vt(n, n);
    for (std::size_t i = 0; i < n; ++i) vt(i, i) = 1.0;

    const double off_target = 1e-12 * norm_a;
    const double skip_tol = off_target / (10.0 * static_cast<double>(n));
    const int max_sweeps = 100;

    double off = off_diagonal_norm(s);
    int sweep = 0;
    while (off > off_target && sweep < max_sweeps) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (std::fabs(apq) <= skip_tol) continue;
                const double app = s(p, p);
                const double aqq = s(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::fabs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                const double tau = sn / (1.0 + c);

                double* rp = s.row_ptr(p);
                double* rq = s.row_ptr(q);
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = rp[i];
                    const double aiq = rq[i];
                    const double nip = aip - sn * (aiq + tau * aip);
                    const double niq = aiq + sn * (aip - tau * aiq);
                    rp[i] = nip;
                    rq[i] = niq;
                    s(i, p) = nip;
                    s(i, q) = niq;
                }
                s(p, p) = app - t * apq;
                s(q, q) = aqq + t * apq;
                s(p, q) = 0.0;
                s(q, p) = 0.0;

                double* vp = vt.row_ptr(p);
                double* vq = vt.row_ptr(q);
                for (std::size_t j = 0; j < n; ++j) {
                    const double up = vp[j];
                    const double uq = vq[j];
                    vp[j] = up - sn * (uq + tau * up);
                    vq[j] = uq + sn * (up - tau * uq);
                }
            }
        }
        ++sweep;
        off = off_diagonal_norm(s);
    }
    if (off > off_target) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3e", off);
        throw NumericError("sym_eig: no convergence after " + std::to_string(max_sweeps) +
                           " sweeps (off-diagonal residual " + buf + ")");
    }

    // Sort descending with stable tie order, then fix signs.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&s](std::size_t x, std::size_t y) { return s(x, x) > s(y, y); });

    SymEigResult res;
    res.eigenvalues.resize(n);
    Matrix sorted_vt(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        res.eigenvalues[r] = s(order[r], order[r]);
        const double* src = vt.row_ptr(order[r]);
        double* dst = sorted_vt.row_ptr(r);
        for (std::size_t j = 0; j < n; ++j) dst[j] = src[j];
    }
    fix_sign_rows(sorted_vt);
    res.eigenvectors = transpose(sorted_vt);
    return res;
}

namespace {

// A^T * B without materializing the transpose.
Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("matmul_at_b: dimension mismatch " + shape_str(a) + "^T * " +
                                    shape_str(b));
    }
    Matrix out(a.cols(), b.cols());
    const std::size_t n = a.rows();
    const std::size_t width = b.cols();
    parallel_blocks(a.cols(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = 0; r < n; ++r) {
            const double* arow = a.row_ptr(r);
            const double* brow = b.row_ptr(r);
            for (std::size_t j = begin; j < end; ++j) {
                const double c = arow[j];
                if (c == 0.0) continue;
                double* orow = out.row_ptr(j);
                for (std::size_t t = 0; t < width; ++t) orow[t] += c * brow[t];
            }
        }
    });
    return out;
}

// Modified Gram-Schmidt (two passes) on columns; collapsed columns are
// replaced by canonical basis vectors so the output is always orthonormal.
void orthonormalize_columns(Matrix& q) {
    const std::size_t n = q.rows();
    const std::size_t m = q.cols();
    std::size_t next_canonical = 0;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = q(i, j);
        double norm0 = 0.0;
        for (double x : v) norm0 += x * x;
        norm0 = std::sqrt(norm0);
        double norm = 0.0;
        for (int attempt = 0; attempt < 2 + static_cast<int>(n); ++attempt) {
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t c = 0; c < j; ++c) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < n; ++i) dot += q(i, c) * v[i];
                    for (std::size_t i = 0; i < n; ++i) v[i] -= dot * q(i, c);
                }
            }
            norm = 0.0;
            for (double x : v) norm += x * x;
            norm = std::sqrt(norm);
            if (norm > 1e-12 * (norm0 + 1.0)) break;
            // Column collapsed: seed with the next canonical direction.
            std::fill(v.begin(), v.end(), 0.0);
            v[next_canonical % n] = 1.0;
            ++next_canonical;
            norm0 = 1.0;
        }
        for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / norm;
    }
}

}  // namespace

Matrix randomized_range(const Matrix& a, std::size_t k, std::size_t oversample,
                        std::size_t power_iters, std::uint64_t seed) {
    const std::size_t ell = k + oversample;
    if (k == 0) {
        throw std::invalid_argument("randomized_range: k must be >= 1");
    }
    if (ell > a.cols()) {
        throw std::invalid_argument("randomized_range: k + oversample = " + std::to_string(ell) +
                                    " exceeds cols = " + std::to_string(a.cols()));
    }
    if (ell > a.rows()) {
        throw std::invalid_argument("randomized_range: k + oversample = " + std::to_string(ell) +
                                    " exceeds rows = " + std::to_string(a.rows()));
    }
    NormalSampler gauss(seed);
    Matrix omega(a.cols(), ell);
    for (double& v : omega.data()) v = gauss.next();

    Matrix q = matmul(a, omega);
    orthonormalize_columns(q);
    for (std::size_t it = 0; it < power_iters; ++it) {
        Matrix z = matmul_at_b(a, q);
        orthonormalize_columns(z);
        q = matmul(a, z);
        orthonormalize_columns(q);
    }
    return q;
}

}  // namespace tsr
