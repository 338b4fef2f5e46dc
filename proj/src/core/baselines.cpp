#include "baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "errors.hpp"

namespace tsr {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::size_t SpectralModel::padded_len() const {
    return baselines::next_pow2(input_len);
}

namespace baselines {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

WindowMatrix truncate_last(const WindowMatrix& x, std::size_t k) {
    const std::size_t len = x.window_len();
    if (k < 1 || k > len) {
        throw std::invalid_argument("truncate_last: k = " + std::to_string(k) +
                                    " out of range [1, " + std::to_string(len) + "]");
    }
    WindowMatrix out;
    out.x = Matrix(x.count(), k);
    const std::size_t off = len - k;
    for (std::size_t i = 0; i < x.count(); ++i) {
        std::memcpy(out.x.row_ptr(i), x.x.row_ptr(i) + off, k * sizeof(double));
    }
    return out;
}

WindowMatrix downsample(const WindowMatrix& x, std::size_t stride) {
    const std::size_t len = x.window_len();
    if (stride < 1 || stride > len) {
        throw std::invalid_argument("downsample: stride = " + std::to_string(stride) +
                                    " out of range [1, " + std::to_string(len) + "]");
    }
    const std::size_t width = len / stride;
    WindowMatrix out;
    out.x = Matrix(x.count(), width);
    for (std::size_t i = 0; i < x.count(); ++i) {
        const double* src = x.x.row_ptr(i);
        double* dst = out.x.row_ptr(i);
        for (std::size_t j = 0; j < width; ++j) dst[j] = src[(j + 1) * stride - 1];
    }
    return out;
}

void fft_pow2(std::vector<double>& re, std::vector<double>& im, bool inverse) {
    const std::size_t n = re.size();
    if (n != im.size() || n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("fft_pow2: length must be a power of two");
    }
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) {
            std::swap(re[i], re[j]);
            std::swap(im[i], im[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const double wr = std::cos(ang);
        const double wi = std::sin(ang);
        for (std::size_t i = 0; i < n; i += len) {
            double cr = 1.0, ci = 0.0;
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::size_t a = i + j;
                const std::size_t b = a + len / 2;
                const double tr = re[b] * cr - im[b] * ci;
                const double ti = re[b] * ci + im[b] * cr;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
                const double ncr = cr * wr - ci * wi;
                ci = cr * wi + ci * wr;
                cr = ncr;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            re[i] *= inv;
            im[i] *= inv;
        }
    }
}

std::pair<double, double> dft_bin(const double* x, std::size_t len, std::size_t bin) {
    const double w = -2.0 * kPi * static_cast<double>(bin) / static_cast<double>(len);
    double sr = 0.0, si = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
        const double ang = w * static_cast<double>(n);
        sr += x[n] * std::cos(ang);
        si += x[n] * std::sin(ang);
    }
    return {sr, si};
}

namespace {

// Mean |X[b]| over all rows for the non-redundant bins 0 .. L/2. Uses the
// radix-2 path for power-of-two lengths, otherwise a blocked product with the
// DFT basis.
std::vector<double> mean_bin_amplitudes(const Matrix& x) {
    const std::size_t len = x.cols();
    const std::size_t nbins = len / 2 + 1;
    std::vector<double> sums(nbins, 0.0);

    if ((len & (len - 1)) == 0) {
        std::vector<double> re(len), im(len);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double* row = x.row_ptr(i);
            std::copy(row, row + len, re.begin());
            std::fill(im.begin(), im.end(), 0.0);
            fft_pow2(re, im, false);
            for (std::size_t b = 0; b < nbins; ++b) sums[b] += std::hypot(re[b], im[b]);
        }
    } else {
        // Basis with interleaved cos / -sin columns, applied in row blocks.
        Matrix basis(len, 2 * nbins);
        for (std::size_t n = 0; n < len; ++n) {
            double* brow = basis.row_ptr(n);
            for (std::size_t b = 0; b < nbins; ++b) {
                const double ang =
                    -2.0 * kPi * static_cast<double>(b) * static_cast<double>(n) / static_cast<double>(len);
                brow[2 * b] = std::cos(ang);
                brow[2 * b + 1] = std::sin(ang);
            }
        }
        const std::size_t block = 512;
        for (std::size_t start = 0; start < x.rows(); start += block) {
            const std::size_t rows = std::min(block, x.rows() - start);
            Matrix chunk(rows, len,
                         std::vector<double>(x.data().begin() + start * len,
                                             x.data().begin() + (start + rows) * len));
            const Matrix spec = matmul(chunk, basis);
            for (std::size_t i = 0; i < rows; ++i) {
                const double* srow = spec.row_ptr(i);
                for (std::size_t b = 0; b < nbins; ++b) {
                    sums[b] += std::hypot(srow[2 * b], srow[2 * b + 1]);
                }
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(x.rows());
    for (double& s : sums) s *= inv;
    return sums;
}

std::vector<std::size_t> top_indices(const std::vector<double>& score, std::size_t count) {
    std::vector<std::size_t> order(score.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&score](std::size_t a, std::size_t b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
    });
    order.resize(count);
    return order;
}

}  // namespace

SpectralModel fft_fit(const WindowMatrix& train, std::size_t k, FftMode mode) {
    const std::size_t len = train.window_len();
    if (k < 1 || k > len) {
        throw std::invalid_argument("fft_fit: k = " + std::to_string(k) + " out of range [1, " +
                                    std::to_string(len) + "]");
    }
    if (mode == FftMode::Pairs && k % 2 != 0) {
        throw std::invalid_argument("fft_fit: k must be even (real/imag pairs), got " +
                                    std::to_string(k));
    }
    const std::size_t nbins = len / 2 + 1;
    const std::size_t keep = (mode == FftMode::Pairs) ? k / 2 : k;
    if (keep > nbins) {
        throw std::invalid_argument("fft_fit: k selects " + std::to_string(keep) +
                                    " bins but only " + std::to_string(nbins) + " are available");
    }
    SpectralModel model;
    model.kind = SpectralKind::FFT;
    model.mode = mode;
    model.k = k;
    model.input_len = len;
    model.selected_indices = top_indices(mean_bin_amplitudes(train.x), keep);
    return model;
}

Matrix fft_transform(const SpectralModel& model, const WindowMatrix& x) {
    if (model.kind != SpectralKind::FFT) {
        throw std::invalid_argument("fft_transform: model is not an FFT model");
    }
    if (x.window_len() != model.input_len) {
        throw std::invalid_argument("fft_transform: window length " + std::to_string(x.window_len()) +
                                    " does not match model L = " + std::to_string(model.input_len));
    }
    const std::size_t len = model.input_len;
    const std::size_t nsel = model.selected_indices.size();
    // Selected-bin DFT as one basis product keeps the map linear and fast.
    Matrix basis(len, 2 * nsel);
    for (std::size_t n = 0; n < len; ++n) {
        double* brow = basis.row_ptr(n);
        for (std::size_t t = 0; t < nsel; ++t) {
            const double ang = -2.0 * kPi * static_cast<double>(model.selected_indices[t]) *
                               static_cast<double>(n) / static_cast<double>(len);
            brow[2 * t] = std::cos(ang);
            brow[2 * t + 1] = std::sin(ang);
        }
    }
    Matrix pairs = matmul(x.x, basis);
    if (model.mode == FftMode::Pairs) return pairs;

    Matrix mags(x.count(), nsel);
    for (std::size_t i = 0; i < x.count(); ++i) {
        const double* prow = pairs.row_ptr(i);
        double* mrow = mags.row_ptr(i);
        for (std::size_t t = 0; t < nsel; ++t) mrow[t] = std::hypot(prow[2 * t], prow[2 * t + 1]);
    }
    return mags;
}

WindowMatrix fft_inverse(const SpectralModel& model, const Matrix& features) {
    if (model.kind != SpectralKind::FFT || model.mode != FftMode::Pairs) {
        throw std::invalid_argument("fft_inverse: needs an FFT model in pairs mode");
    }
    const std::size_t nsel = model.selected_indices.size();
    if (features.cols() != 2 * nsel) {
        throw std::invalid_argument("fft_inverse: feature width " + std::to_string(features.cols()) +
                                    " does not match " + std::to_string(2 * nsel) + " kept values");
    }
    const std::size_t len = model.input_len;
    WindowMatrix out;
    out.x = Matrix(features.rows(), len);
    for (std::size_t i = 0; i < features.rows(); ++i) {
        const double* frow = features.row_ptr(i);
        double* orow = out.x.row_ptr(i);
        for (std::size_t t = 0; t < nsel; ++t) {
            const std::size_t b = model.selected_indices[t];
            // Hermitian weight: conjugate bins are implied except DC/Nyquist.
            const double w = (b == 0 || 2 * b == len) ? 1.0 : 2.0;
            const double re = frow[2 * t];
            const double im = frow[2 * t + 1];
            for (std::size_t n = 0; n < len; ++n) {
                const double ang =
                    2.0 * kPi * static_cast<double>(b) * static_cast<double>(n) / static_cast<double>(len);
                orow[n] += w * (re * std::cos(ang) - im * std::sin(ang));
            }
        }
        const double inv = 1.0 / static_cast<double>(len);
        for (std::size_t n = 0; n < len; ++n) orow[n] *= inv;
    }
    return out;
}

std::vector<double> haar_step(const std::vector<double>& x) {
    if (x.size() % 2 != 0) {
        throw std::invalid_argument("haar_step: length must be even");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<double> out(x.size());
    const std::size_t half = x.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
        out[i] = (x[2 * i] + x[2 * i + 1]) * inv_sqrt2;
        out[half + i] = (x[2 * i] - x[2 * i + 1]) * inv_sqrt2;
    }
    return out;
}

std::vector<double> haar_forward(const double* x, std::size_t len, std::size_t padded) {
    if (padded < len || (padded & (padded - 1)) != 0) {
        throw std::invalid_argument("haar_forward: bad padded length");
    }
    std::vector<double> buf(padded);
    std::copy(x, x + len, buf.begin());
    std::fill(buf.begin() + len, buf.end(), len > 0 ? x[len - 1] : 0.0);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<double> tmp(padded);
    for (std::size_t cur = padded; cur > 1; cur >>= 1) {
        const std::size_t half = cur / 2;
        for (std::size_t i = 0; i < half; ++i) {
            tmp[i] = (buf[2 * i] + buf[2 * i + 1]) * inv_sqrt2;
            tmp[half + i] = (buf[2 * i] - buf[2 * i + 1]) * inv_sqrt2;
        }
        std::copy(tmp.begin(), tmp.begin() + cur, buf.begin());
    }
    return buf;
}

std::vector<double> haar_inverse(const std::vector<double>& coeffs) {
    const std::size_t padded = coeffs.size();
    if (padded == 0 || (padded & (padded - 1)) != 0) {
        throw std::invalid_argument("haar_inverse: length must be a power of two");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<double> buf = coeffs;
    std::vector<double> tmp(padded);
    for (std::size_t cur = 2; cur <= padded; cur <<= 1) {
        const std::size_t half = cur / 2;
        for (std::size_t i = 0; i < half; ++i) {
            tmp[2 * i] = (buf[i] + buf[half + i]) * inv_sqrt2;
            tmp[2 * i + 1] = (buf[i] - buf[half + i]) * inv_sqrt2;
        }
        std::copy(tmp.begin(), tmp.begin() + cur, buf.begin());
    }
    return buf;
}

SpectralModel dwt_fit(const WindowMatrix& train, std::size_t k) {
    const std::size_t len = train.window_len();
    const std::size_t padded = next_pow2(len);
    if (k < 1 || k > padded) {
        throw std::invalid_argument("dwt_fit: k = " + std::to_string(k) + " out of range [1, " +
                                    std::to_string(padded) + "] (padded length)");
    }
    std::vector<double> sums(padded, 0.0);
    for (std::size_t i = 0; i < train.count(); ++i) {
        const auto coeffs = haar_forward(train.x.row_ptr(i), len, padded);
        for (std::size_t j = 0; j < padded; ++j) sums[j] += std::fabs(coeffs[j]);
    }
    const double inv = 1.0 / static_cast<double>(train.count());
    for (double& s : sums) s *= inv;

    SpectralModel model;
    model.kind = SpectralKind::DWT;
    model.k = k;
    model.input_len = len;
    model.selected_indices = top_indices(sums, k);
    return model;
}

Matrix dwt_transform(const SpectralModel& model, const WindowMatrix& x) {
    if (model.kind != SpectralKind::DWT) {
        throw std::invalid_argument("dwt_transform: model is not a DWT model");
    }
    if (x.window_len() != model.input_len) {
        throw std::invalid_argument("dwt_transform: window length " + std::to_string(x.window_len()) +
                                    " does not match model L = " + std::to_string(model.input_len));
    }
    const std::size_t padded = model.padded_len();
    Matrix out(x.count(), model.k);
    for (std::size_t i = 0; i < x.count(); ++i) {
        const auto coeffs = haar_forward(x.x.row_ptr(i), model.input_len, padded);
        double* orow = out.row_ptr(i);
        for (std::size_t t = 0; t < model.k; ++t) orow[t] = coeffs[model.selected_indices[t]];
    }
    return out;
}

WindowMatrix dwt_inverse(const SpectralModel& model, const Matrix& features) {
    if (model.kind != SpectralKind::DWT) {
        throw std::invalid_argument("dwt_inverse: model is not a DWT model");
    }
    if (features.cols() != model.k) {
        throw std::invalid_argument("dwt_inverse: feature width " + std::to_string(features.cols()) +
                                    " does not match k = " + std::to_string(model.k));
    }
    const std::size_t padded = model.padded_len();
    WindowMatrix out;
    out.x = Matrix(features.rows(), model.input_len);
    std::vector<double> coeffs(padded);
    for (std::size_t i = 0; i < features.rows(); ++i) {
        std::fill(coeffs.begin(), coeffs.end(), 0.0);
        const double* frow = features.row_ptr(i);
        for (std::size_t t = 0; t < model.k; ++t) coeffs[model.selected_indices[t]] = frow[t];
        const auto rec = haar_inverse(coeffs);
        std::copy(rec.begin(), rec.begin() + model.input_len, out.x.row_ptr(i));
    }
    return out;
}

void save_spectral(const SpectralModel& model, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["kind"] = model.kind == SpectralKind::FFT ? "fft" : "dwt";
    j["L"] = model.input_len;
    j["k"] = model.k;
    j["selected_indices"] = model.selected_indices;
    if (model.kind == SpectralKind::FFT) {
        j["mode"] = model.mode == FftMode::Pairs ? "pairs" : "magnitude";
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << j.dump() << "\n";
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

SpectralModel load_spectral(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        if (j.at("schema_version").get<int>() != 1) {
            throw ParseError(path + ": unsupported schema_version");
        }
        SpectralModel model;
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "fft") {
            model.kind = SpectralKind::FFT;
            const std::string mode = j.value("mode", "pairs");
            model.mode = mode == "magnitude" ? FftMode::Magnitude : FftMode::Pairs;
        } else if (kind == "dwt") {
            model.kind = SpectralKind::DWT;
        } else {
            throw ParseError(path + ": unknown spectral kind \"" + kind + "\"");
        }
        model.input_len = j.at("L").get<std::size_t>();
        model.k = j.at("k").get<std::size_t>();
        model.selected_indices = j.at("selected_indices").get<std::vector<std::size_t>>();
        const std::size_t limit =
            model.kind == SpectralKind::FFT ? model.input_len / 2 + 1 : model.padded_len();
        for (std::size_t idx : model.selected_indices) {
            if (idx >= limit) {
                throw ParseError(path + ": selected index " + std::to_string(idx) + " out of range");
            }
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace baselines
}  // namespace tsr
