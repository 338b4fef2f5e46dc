#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "baselines.hpp"
#include "pca.hpp"
#include "windowing.hpp"

namespace tsr {

// Declarative reducer description, parsed from config JSON. `k` is the
// reducer's primary parameter (components, kept coefficients, kept steps, or
// per-patch components); downsample uses `stride` instead.
struct ReducerSpec {
    std::string kind = "none";  // none|pca|pca_rand|patch_pca|truncate|downsample|fft|dwt
    std::size_t k = 0;
    std::size_t stride = 1;
    std::size_t patch_len = 0;
    bool per_position = false;           // patch_pca basis per patch position
    std::uint64_t seed = 0;              // pca_rand
    std::size_t oversample = pca::kDefaultOversample;
    std::size_t power_iters = pca::kDefaultPowerIters;
    FftMode fft_mode = FftMode::Pairs;

    static ReducerSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    // Compact name used in reports, e.g. "pca48", "downsample7", "patch_pca16x2".
    std::string label() const;

    std::size_t output_width(std::size_t window_len) const;
    void validate(std::size_t window_len) const;  // throws ConfigError
};

// A reducer under the shared fit/transform contract. Fit estimates every
// parameter from the training windows; transform never re-estimates.
class Reducer {
public:
    Reducer() = default;
    explicit Reducer(ReducerSpec spec) : spec_(std::move(spec)) {}

    void fit(const WindowMatrix& train);
    Matrix transform(const WindowMatrix& x) const;

    bool can_inverse() const;
    WindowMatrix inverse(const Matrix& features) const;

    bool fitted() const { return fitted_; }
    std::size_t input_len() const;
    std::size_t output_width() const;
    const ReducerSpec& spec() const { return spec_; }

    // Non-null for pca / pca_rand reducers (explained-variance queries).
    const PcaModel* pca_model() const;

    void save(const std::string& path) const;
    static Reducer load(const std::string& path);

private:
    ReducerSpec spec_;
    bool fitted_ = false;
    std::size_t input_len_ = 0;
    PcaModel pca_;
    PatchPcaModel patch_;
    SpectralModel spectral_;
};

}  // namespace tsr
