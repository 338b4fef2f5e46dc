#include "pca.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "errors.hpp"

namespace tsr {
namespace pca {

namespace {

std::vector<double> column_means(const Matrix& x) {
    std::vector<double> mean(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double* row = x.row_ptr(i);
        for (std::size_t j = 0; j < x.cols(); ++j) mean[j] += row[j];
    }
    const double inv = 1.0 / static_cast<double>(x.rows());
    for (double& m : mean) m *= inv;
    return mean;
}

Matrix center(const Matrix& x, const std::vector<double>& mean) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double* src = x.row_ptr(i);
        double* dst = out.row_ptr(i);
        for (std::size_t j = 0; j < x.cols(); ++j) dst[j] = src[j] - mean[j];
    }
    return out;
}

void check_fit_args(const WindowMatrix& train, std::size_t k) {
    if (train.count() < 2) {
        throw std::invalid_argument("pca::fit: need at least 2 training windows, got " +
                                    std::to_string(train.count()));
    }
    if (k < 1 || k > train.window_len()) {
        throw std::invalid_argument("pca::fit: k = " + std::to_string(k) +
                                    " out of range [1, " + std::to_string(train.window_len()) + "]");
    }
}

void clamp_eigenvalues(std::vector<double>& lambda) {
    for (double& v : lambda) {
        if (v < 0.0) v = 0.0;
    }
}

// Sign convention shared with sym_eig: largest-magnitude entry of each kept
// column is positive. Applied to columns re-derived from the projected
// problem in the randomized path.
void fix_column_signs(Matrix& v) {
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t arg = 0;
        double best = std::fabs(v(0, j));
        for (std::size_t i = 1; i < v.rows(); ++i) {
            const double m = std::fabs(v(i, j));
            if (m > best) {
                best = m;
                arg = i;
            }
        }
        if (v(arg, j) < 0.0) {
            for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
        }
    }
}

}  // namespace

PcaModel fit(const WindowMatrix& train, std::size_t k) {
    check_fit_args(train, k);
    const std::size_t len = train.window_len();

    PcaModel model;
    model.mean = column_means(train.x);
    const Matrix centered = center(train.x, model.mean);
    const Matrix cov = gram(centered, 1.0 / static_cast<double>(train.count() - 1));
    SymEigResult eig = sym_eig(cov);
    clamp_eigenvalues(eig.eigenvalues);

    model.eigenvalues = std::move(eig.eigenvalues);
    model.k = k;
    model.components = Matrix(len, k);
    for (std::size_t i = 0; i < len; ++i) {
        const double* src = eig.eigenvectors.row_ptr(i);
        std::memcpy(model.components.row_ptr(i), src, k * sizeof(double));
    }
    return model;
}

PcaModel fit_randomized(const WindowMatrix& train, std::size_t k, std::size_t oversample,
                        std::size_t power_iters, std::uint64_t seed) {
    check_fit_args(train, k);
    const std::size_t len = train.window_len();
    if (k + oversample > len) {
        throw std::invalid_argument("pca::fit_randomized: k + oversample = " +
                                    std::to_string(k + oversample) + " exceeds window length " +
                                    std::to_string(len));
    }

    PcaModel model;
    model.mean = column_means(train.x);
    const Matrix centered = center(train.x, model.mean);
    const double inv_nm1 = 1.0 / static_cast<double>(train.count() - 1);

    // Exact total variance (trace of the covariance) is cheap and anchors the
    // stored spectrum even though only the top k values are estimated.
    double total_var = 0.0;
    for (const double v : centered.data()) total_var += v * v;
    total_var *= inv_nm1;

    const Matrix q = randomized_range(centered, k, oversample, power_iters, seed);
    // b = q^T centered, so cov ~= (b^T b) / (n-1) restricted to range(q).
    const Matrix b = matmul(transpose(q), centered);
    const Matrix small = gram(transpose(b), inv_nm1);  // (k+os) x (k+os)
    SymEigResult eig = sym_eig(small);
    clamp_eigenvalues(eig.eigenvalues);

    // Right singular directions: v_j = b^T w_j / sqrt((n-1) * lambda_j).
    const std::size_t ell = eig.eigenvalues.size();
    Matrix v(len, k);
    std::size_t usable = std::min(k, ell);
    for (std::size_t j = 0; j < usable; ++j) {
        const double sigma = std::sqrt(eig.eigenvalues[j] * static_cast<double>(train.count() - 1));
        if (sigma <= 1e-300) {
            usable = j;
            break;
        }
        for (std::size_t i = 0; i < len; ++i) {
            double acc = 0.0;
            for (std::size_t t = 0; t < ell; ++t) acc += b(t, i) * eig.eigenvectors(t, j);
            v(i, j) = acc / sigma;
        }
    }
    // Rank-deficient training data: complete the basis deterministically.
    for (std::size_t j = usable; j < k; ++j) {
        for (std::size_t i = 0; i < len; ++i) v(i, j) = (i == j % len) ? 1.0 : 0.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t c = 0; c < j; ++c) {
                double dot = 0.0;
                for (std::size_t i = 0; i < len; ++i) dot += v(i, c) * v(i, j);
                for (std::size_t i = 0; i < len; ++i) v(i, j) -= dot * v(i, c);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < len; ++i) norm += v(i, j) * v(i, j);
        norm = std::sqrt(norm);
        if (norm > 1e-12) {
            for (std::size_t i = 0; i < len; ++i) v(i, j) /= norm;
        }
    }
    fix_column_signs(v);

    model.k = k;
    model.components = std::move(v);
    model.eigenvalues.assign(len, 0.0);
    double kept = 0.0;
    for (std::size_t j = 0; j < std::min(k, ell); ++j) {
        model.eigenvalues[j] = eig.eigenvalues[j];
        kept += eig.eigenvalues[j];
    }
    if (len > k) {
        // Flat tail carrying the unexplained remainder; clamped so the stored
        // spectrum stays non-increasing.
        double tail = std::max(0.0, total_var - kept) / static_cast<double>(len - k);
        tail = std::min(tail, model.eigenvalues[k - 1]);
        for (std::size_t j = k; j < len; ++j) model.eigenvalues[j] = tail;
    }
    return model;
}

Matrix transform(const PcaModel& model, const WindowMatrix& x) {
    if (x.window_len() != model.window_len()) {
        throw std::invalid_argument("pca::transform: window length " +
                                    std::to_string(x.window_len()) + " does not match model L = " +
                                    std::to_string(model.window_len()));
    }
    return matmul(center(x.x, model.mean), model.components);
}

WindowMatrix inverse_transform(const PcaModel& model, const Matrix& scores) {
    if (scores.cols() != model.k) {
        throw std::invalid_argument("pca::inverse_transform: score width " +
                                    std::to_string(scores.cols()) + " does not match k = " +
                                    std::to_string(model.k));
    }
    WindowMatrix out;
    out.x = matmul(scores, transpose(model.components));
    for (std::size_t i = 0; i < out.x.rows(); ++i) {
        double* row = out.x.row_ptr(i);
        for (std::size_t j = 0; j < out.x.cols(); ++j) row[j] += model.mean[j];
    }
    return out;
}

double explained_variance_ratio(const PcaModel& model, std::size_t upto) {
    const std::size_t len = model.window_len();
    if (upto < 1 || upto > len) {
        throw std::invalid_argument("explained_variance_ratio: upto = " + std::to_string(upto) +
                                    " out of range [1, " + std::to_string(len) + "]");
    }
    double total = 0.0;
    for (double v : model.eigenvalues) total += v;
    if (total <= 0.0) return 1.0;
    double head = 0.0;
    for (std::size_t i = 0; i < upto; ++i) head += model.eigenvalues[i];
    return head / total;
}

PatchPcaModel patch_fit(const WindowMatrix& train, std::size_t patch_len, std::size_t k_per_patch,
                        bool shared) {
    const std::size_t len = train.window_len();
    if (patch_len < 1 || len % patch_len != 0) {
        throw std::invalid_argument("patch_fit: window length " + std::to_string(len) +
                                    " is not divisible by patch length " + std::to_string(patch_len));
    }
    if (k_per_patch < 1 || k_per_patch > patch_len) {
        throw std::invalid_argument("patch_fit: k per patch = " + std::to_string(k_per_patch) +
                                    " out of range [1, " + std::to_string(patch_len) + "]");
    }
    PatchPcaModel model;
    model.patch_len = patch_len;
    model.patches_per_window = len / patch_len;
    model.k_per_patch = k_per_patch;
    model.shared = shared;

    if (shared) {
        // Pool every patch position: each window contributes L/patch_len rows.
        WindowMatrix pooled;
        pooled.x = Matrix(train.count() * model.patches_per_window, patch_len);
        std::size_t r = 0;
        for (std::size_t i = 0; i < train.count(); ++i) {
            const double* row = train.x.row_ptr(i);
            for (std::size_t p = 0; p < model.patches_per_window; ++p, ++r) {
                std::memcpy(pooled.x.row_ptr(r), row + p * patch_len, patch_len * sizeof(double));
            }
        }
        model.models.push_back(fit(pooled, k_per_patch));
    } else {
        for (std::size_t p = 0; p < model.patches_per_window; ++p) {
            WindowMatrix slice;
            slice.x = Matrix(train.count(), patch_len);
            for (std::size_t i = 0; i < train.count(); ++i) {
                std::memcpy(slice.x.row_ptr(i), train.x.row_ptr(i) + p * patch_len,
                            patch_len * sizeof(double));
            }
            model.models.push_back(fit(slice, k_per_patch));
        }
    }
    return model;
}

Matrix patch_transform(const PatchPcaModel& model, const WindowMatrix& x) {
    if (x.window_len() != model.window_len()) {
        throw std::invalid_argument("patch_transform: window length " +
                                    std::to_string(x.window_len()) + " does not match model L = " +
                                    std::to_string(model.window_len()));
    }
    Matrix out(x.count(), model.output_width());
    WindowMatrix slice;
    slice.x = Matrix(x.count(), model.patch_len);
    for (std::size_t p = 0; p < model.patches_per_window; ++p) {
        for (std::size_t i = 0; i < x.count(); ++i) {
            std::memcpy(slice.x.row_ptr(i), x.x.row_ptr(i) + p * model.patch_len,
                        model.patch_len * sizeof(double));
        }
        const PcaModel& sub = model.shared ? model.models.front() : model.models[p];
        const Matrix scores = transform(sub, slice);
        for (std::size_t i = 0; i < x.count(); ++i) {
            std::memcpy(out.row_ptr(i) + p * model.k_per_patch, scores.row_ptr(i),
                        model.k_per_patch * sizeof(double));
        }
    }
    return out;
}

namespace {

constexpr int kSchemaVersion = 1;

nlohmann::json matrix_to_json(const Matrix& m) { return nlohmann::json(m.data()); }

}  // namespace

void save_model(const PcaModel& model, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "pca";
    j["L"] = model.window_len();
    j["k"] = model.k;
    j["mean"] = model.mean;
    j["eigenvalues"] = model.eigenvalues;
    j["components"] = matrix_to_json(model.components);
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << j.dump() << "\n";
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

PcaModel pca_model_from_json(const nlohmann::json& j) {
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != kSchemaVersion) {
        throw ParseError("pca model: unsupported or missing schema_version");
    }
    PcaModel model;
    const std::size_t len = j.at("L").get<std::size_t>();
    model.k = j.at("k").get<std::size_t>();
    model.mean = j.at("mean").get<std::vector<double>>();
    model.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    auto comp = j.at("components").get<std::vector<double>>();
    if (model.k > len) {
        throw ParseError("pca model: k = " + std::to_string(model.k) + " exceeds L = " +
                         std::to_string(len));
    }
    if (model.mean.size() != len || model.eigenvalues.size() != len ||
        comp.size() != len * model.k) {
        throw ParseError("pca model: field sizes inconsistent with L and k");
    }
    model.components = Matrix::from_values(len, model.k, std::move(comp));
    for (double v : model.mean) {
        if (!std::isfinite(v)) throw ParseError("pca model: non-finite mean entry");
    }
    for (double v : model.eigenvalues) {
        if (!std::isfinite(v)) throw ParseError("pca model: non-finite eigenvalue");
    }
    return model;
}

PcaModel load_model(const std::string& path) {
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
        return pca_model_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

namespace {

nlohmann::json pca_model_to_json(const PcaModel& model) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "pca";
    j["L"] = model.window_len();
    j["k"] = model.k;
    j["mean"] = model.mean;
    j["eigenvalues"] = model.eigenvalues;
    j["components"] = matrix_to_json(model.components);
    return j;
}

}  // namespace

void save_patch_model(const PatchPcaModel& model, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "patch_pca";
    j["patch_len"] = model.patch_len;
    j["patches_per_window"] = model.patches_per_window;
    j["k"] = model.k_per_patch;
    j["shared"] = model.shared;
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& sub : model.models) subs.push_back(pca_model_to_json(sub));
    j["models"] = std::move(subs);
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << j.dump() << "\n";
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

PatchPcaModel load_patch_model(const std::string& path) {
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
        if (j.at("schema_version").get<int>() != kSchemaVersion) {
            throw ParseError(path + ": unsupported schema_version");
        }
        PatchPcaModel model;
        model.patch_len = j.at("patch_len").get<std::size_t>();
        model.patches_per_window = j.at("patches_per_window").get<std::size_t>();
        model.k_per_patch = j.at("k").get<std::size_t>();
        model.shared = j.at("shared").get<bool>();
        for (const auto& sub : j.at("models")) model.models.push_back(pca_model_from_json(sub));
        const std::size_t expected = model.shared ? 1 : model.patches_per_window;
        if (model.models.size() != expected) {
            throw ParseError(path + ": expected " + std::to_string(expected) + " sub-models, got " +
                             std::to_string(model.models.size()));
        }
        for (const auto& sub : model.models) {
            if (sub.window_len() != model.patch_len || sub.k != model.k_per_patch) {
                throw ParseError(path + ": sub-model shape does not match patch layout");
            }
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace pca
}  // namespace tsr
