#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "windowing.hpp"

namespace tsr {

// Fitted PCA reducer for length-L windows. All parameters come from the
// training split; transform/inverse_transform never re-estimate anything.
struct PcaModel {
    std::vector<double> mean;         // per-column train means, length L
    std::vector<double> eigenvalues;  // length L, descending, clamped at 0
    Matrix components;                // L x k, orthonormal columns
    std::size_t k = 0;

    std::size_t window_len() const { return mean.size(); }
};

// One PCA basis applied to contiguous equal-length patches of each window.
// `models` holds a single entry when the basis is shared across patch
// positions (the default), otherwise one entry per position.
struct PatchPcaModel {
    std::size_t patch_len = 0;
    std::size_t patches_per_window = 0;
    std::size_t k_per_patch = 0;
    bool shared = true;
    std::vector<PcaModel> models;

    std::size_t window_len() const { return patch_len * patches_per_window; }
    std::size_t output_width() const { return patches_per_window * k_per_patch; }
};

namespace pca {

// Covariance-path fit: column means, C = gram(centered, 1/(n-1)), Jacobi
// eigendecomposition, first k components kept.
PcaModel fit(const WindowMatrix& train, std::size_t k);

// Randomized approximate fit: range finder on the centered matrix, exact
// eigendecomposition of the projected problem. Deterministic per seed.
// Eigenvalues beyond k are filled with a flat remainder so the stored total
// matches the exact column variance.
PcaModel fit_randomized(const WindowMatrix& train, std::size_t k, std::size_t oversample,
                        std::size_t power_iters, std::uint64_t seed);

constexpr std::size_t kDefaultOversample = 8;
constexpr std::size_t kDefaultPowerIters = 2;

// (x - mean) * V_k, row-wise.
Matrix transform(const PcaModel& model, const WindowMatrix& x);

// scores * V_k^T + mean; exact inverse of transform when k == L.
WindowMatrix inverse_transform(const PcaModel& model, const Matrix& scores);

// Cumulative variance share of the leading `upto` components; 1.0 when the
// total variance is zero.
double explained_variance_ratio(const PcaModel& model, std::size_t upto);

PatchPcaModel patch_fit(const WindowMatrix& train, std::size_t patch_len, std::size_t k_per_patch,
                        bool shared = true);
Matrix patch_transform(const PatchPcaModel& model, const WindowMatrix& x);

// JSON persistence; floats round-trip exactly.
void save_model(const PcaModel& model, const std::string& path);
PcaModel load_model(const std::string& path);

void save_patch_model(const PatchPcaModel& model, const std::string& path);
PatchPcaModel load_patch_model(const std::string& path);

}  // namespace pca

}  // namespace tsr
