#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tsr {

// Dense row-major matrix of 64-bit floats. The storage invariant
// (data.size() == rows*cols) is enforced by every constructor; finiteness is
// checked only where values enter from outside (CSV, JSON, the C API) via
// from_values / require_finite.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);  // zero-filled
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    // Validating constructor for externally sourced values: rejects NaN/Inf.
    static Matrix from_values(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool all_finite() const;
    void require_finite(const char* what) const;  // throws std::invalid_argument

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Result of a symmetric eigendecomposition: eigenvalues sorted descending,
// eigenvectors as matching columns (unit norm, mutually orthonormal, sign
// fixed so each column's largest-magnitude entry is positive).
struct SymEigResult {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// scale * (a^T a), computed on the upper triangle and mirrored so the result
// is exactly symmetric.
Matrix gram(const Matrix& a, double scale);

// Cyclic Jacobi rotations, iterated until the off-diagonal Frobenius norm
// falls below 1e-12 * ||A||_F or 100 sweeps have run (then NumericError
// carrying the residual). Input must be square and symmetric within 1e-10
// relative; it is symmetrized as (A + A^T)/2 before iterating.
SymEigResult sym_eig(const Matrix& a);

// Orthonormal basis Q (a.rows x (k+oversample)) approximating the dominant
// column space of a: Gaussian test matrix, `power_iters` subspace iterations,
// orthonormalization. Deterministic for a fixed seed.
Matrix randomized_range(const Matrix& a, std::size_t k, std::size_t oversample,
                        std::size_t power_iters, std::uint64_t seed);

double frobenius_norm(const Matrix& a);

}  // namespace tsr
