#include "reducer.hpp"

#include <fstream>
#include <stdexcept>

#include "errors.hpp"

namespace tsr {

namespace {

const char* kKinds[] = {"none",     "pca",        "pca_rand", "patch_pca",
                        "truncate", "downsample", "fft",      "dwt"};

bool known_kind(const std::string& kind) {
    for (const char* k : kKinds) {
        if (kind == k) return true;
    }
    return false;
}

}  // namespace

ReducerSpec ReducerSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("reducer spec must be a JSON object");
    }
    ReducerSpec spec;
    spec.kind = j.value("kind", std::string("none"));
    if (!known_kind(spec.kind)) {
        throw ConfigError("unknown reducer kind \"" + spec.kind + "\"");
    }
    spec.k = j.value("k", std::size_t{0});
    spec.stride = j.value("stride", std::size_t{1});
    spec.patch_len = j.value("patch_len", std::size_t{0});
    spec.per_position = j.value("per_position", false);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.oversample = j.value("oversample", pca::kDefaultOversample);
    spec.power_iters = j.value("power_iters", pca::kDefaultPowerIters);
    const std::string mode = j.value("mode", std::string("pairs"));
    if (mode == "pairs") {
        spec.fft_mode = FftMode::Pairs;
    } else if (mode == "magnitude") {
        spec.fft_mode = FftMode::Magnitude;
    } else {
        throw ConfigError("unknown fft mode \"" + mode + "\" (expected pairs or magnitude)");
    }
    return spec;
}

nlohmann::json ReducerSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    if (kind == "pca" || kind == "truncate" || kind == "fft" || kind == "dwt" ||
        kind == "pca_rand" || kind == "patch_pca") {
        j["k"] = k;
    }
    if (kind == "downsample") j["stride"] = stride;
    if (kind == "patch_pca") {
        j["patch_len"] = patch_len;
        j["per_position"] = per_position;
    }
    if (kind == "pca_rand") {
        j["seed"] = seed;
        j["oversample"] = oversample;
        j["power_iters"] = power_iters;
    }
    if (kind == "fft") j["mode"] = fft_mode == FftMode::Pairs ? "pairs" : "magnitude";
    return j;
}

std::string ReducerSpec::label() const {
    if (kind == "none") return "none";
    if (kind == "downsample") return "downsample" + std::to_string(stride);
    if (kind == "patch_pca") {
        return "patch_pca" + std::to_string(patch_len) + "x" + std::to_string(k);
    }
    std::string base = kind + std::to_string(k);
    if (kind == "fft" && fft_mode == FftMode::Magnitude) base += "mag";
    return base;
}

std::size_t ReducerSpec::output_width(std::size_t window_len) const {
    if (kind == "none") return window_len;
    if (kind == "downsample") return window_len / stride;
    if (kind == "patch_pca") return patch_len == 0 ? 0 : (window_len / patch_len) * k;
    return k;
}

void ReducerSpec::validate(std::size_t window_len) const {
    if (window_len < 1) {
        throw ConfigError("reducer " + label() + ": window length must be >= 1");
    }
    if (kind == "none") return;
    if (kind == "downsample") {
        if (stride < 1 || stride > window_len) {
            throw ConfigError("reducer " + label() + ": stride out of range [1, " +
                              std::to_string(window_len) + "]");
        }
        return;
    }
    if (kind == "patch_pca") {
        if (patch_len < 1 || window_len % patch_len != 0) {
            throw ConfigError("reducer " + label() + ": window length " +
                              std::to_string(window_len) + " not divisible by patch length");
        }
        if (k < 1 || k > patch_len) {
            throw ConfigError("reducer " + label() + ": k per patch out of range [1, " +
                              std::to_string(patch_len) + "]");
        }
        return;
    }
    if (k < 1 || k > window_len) {
        throw ConfigError("reducer " + label() + ": k exceeds window length " +
                          std::to_string(window_len));
    }
    if (kind == "fft" && fft_mode == FftMode::Pairs && k % 2 != 0) {
        throw ConfigError("reducer " + label() + ": k must be even in pairs mode");
    }
    if (kind == "pca_rand" && k + oversample > window_len) {
        throw ConfigError("reducer " + label() + ": k + oversample exceeds window length");
    }
}

void Reducer::fit(const WindowMatrix& train) {
    input_len_ = train.window_len();
    const std::string& kind = spec_.kind;
    if (kind == "pca") {
        pca_ = pca::fit(train, spec_.k);
    } else if (kind == "pca_rand") {
        pca_ = pca::fit_randomized(train, spec_.k, spec_.oversample, spec_.power_iters, spec_.seed);
    } else if (kind == "patch_pca") {
        patch_ = pca::patch_fit(train, spec_.patch_len, spec_.k, !spec_.per_position);
    } else if (kind == "fft") {
        spectral_ = baselines::fft_fit(train, spec_.k, spec_.fft_mode);
    } else if (kind == "dwt") {
        spectral_ = baselines::dwt_fit(train, spec_.k);
    } else if (kind == "truncate") {
        if (spec_.k < 1 || spec_.k > input_len_) {
            throw std::invalid_argument("truncate: k = " + std::to_string(spec_.k) +
                                        " out of range [1, " + std::to_string(input_len_) + "]");
        }
    } else if (kind == "downsample") {
        if (spec_.stride < 1 || spec_.stride > input_len_) {
            throw std::invalid_argument("downsample: stride out of range [1, " +
                                        std::to_string(input_len_) + "]");
        }
    }
    fitted_ = true;
}

Matrix Reducer::transform(const WindowMatrix& x) const {
    if (!fitted_) {
        throw std::logic_error("Reducer::transform called before fit");
    }
    if (x.window_len() != input_len_) {
        throw std::invalid_argument("reducer " + spec_.label() + ": window length " +
                                    std::to_string(x.window_len()) + " does not match fitted L = " +
                                    std::to_string(input_len_));
    }
    const std::string& kind = spec_.kind;
    if (kind == "none") return x.x;
    if (kind == "pca" || kind == "pca_rand") return pca::transform(pca_, x);
    if (kind == "patch_pca") return pca::patch_transform(patch_, x);
    if (kind == "fft") return baselines::fft_transform(spectral_, x);
    if (kind == "dwt") return baselines::dwt_transform(spectral_, x);
    if (kind == "truncate") return baselines::truncate_last(x, spec_.k).x;
    return baselines::downsample(x, spec_.stride).x;
}

bool Reducer::can_inverse() const {
    if (spec_.kind == "pca" || spec_.kind == "pca_rand" || spec_.kind == "dwt") return true;
    if (spec_.kind == "fft") return spec_.fft_mode == FftMode::Pairs;
    return false;
}

WindowMatrix Reducer::inverse(const Matrix& features) const {
    if (!fitted_) {
        throw std::logic_error("Reducer::inverse called before fit");
    }
    if (spec_.kind == "pca" || spec_.kind == "pca_rand") {
        return pca::inverse_transform(pca_, features);
    }
    if (spec_.kind == "fft") return baselines::fft_inverse(spectral_, features);
    if (spec_.kind == "dwt") return baselines::dwt_inverse(spectral_, features);
    throw std::invalid_argument("reducer " + spec_.label() + " has no inverse transform");
}

std::size_t Reducer::input_len() const {
    if (!fitted_) {
        throw std::logic_error("Reducer::input_len called before fit");
    }
    return input_len_;
}

std::size_t Reducer::output_width() const {
    if (!fitted_) {
        throw std::logic_error("Reducer::output_width called before fit");
    }
    return spec_.output_width(input_len_);
}

const PcaModel* Reducer::pca_model() const {
    if (fitted_ && (spec_.kind == "pca" || spec_.kind == "pca_rand")) return &pca_;
    return nullptr;
}

void Reducer::save(const std::string& path) const {
    if (!fitted_) {
        throw std::logic_error("Reducer::save called before fit");
    }
    const std::string& kind = spec_.kind;
    if (kind == "pca" || kind == "pca_rand") {
        pca::save_model(pca_, path);
        return;
    }
    if (kind == "patch_pca") {
        pca::save_patch_model(patch_, path);
        return;
    }
    if (kind == "fft" || kind == "dwt") {
        baselines::save_spectral(spectral_, path);
        return;
    }
    nlohmann::json j;
    j["schema_version"] = 1;
    j["kind"] = kind;
    j["L"] = input_len_;
    if (kind == "truncate") j["k"] = spec_.k;
    if (kind == "downsample") j["stride"] = spec_.stride;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump() << "\n";
    if (!out) throw IoError("write failed: " + path);
}

Reducer Reducer::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    const std::string kind = j.value("kind", std::string("pca"));
    Reducer r;
    r.spec_.kind = kind;
    try {
        if (kind == "pca" || kind == "pca_rand") {
            r.pca_ = pca::load_model(path);
            r.spec_.kind = "pca";  // a loaded randomized model behaves as plain pca
            r.spec_.k = r.pca_.k;
            r.input_len_ = r.pca_.window_len();
        } else if (kind == "patch_pca") {
            r.patch_ = pca::load_patch_model(path);
            r.spec_.k = r.patch_.k_per_patch;
            r.spec_.patch_len = r.patch_.patch_len;
            r.spec_.per_position = !r.patch_.shared;
            r.input_len_ = r.patch_.window_len();
        } else if (kind == "fft" || kind == "dwt") {
            r.spectral_ = baselines::load_spectral(path);
            r.spec_.k = r.spectral_.k;
            r.spec_.fft_mode = r.spectral_.mode;
            r.input_len_ = r.spectral_.input_len;
        } else if (kind == "truncate" || kind == "downsample" || kind == "none") {
            r.input_len_ = j.at("L").get<std::size_t>();
            r.spec_.k = j.value("k", std::size_t{0});
            r.spec_.stride = j.value("stride", std::size_t{1});
        } else {
            throw ParseError(path + ": unknown reducer kind \"" + kind + "\"");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    r.fitted_ = true;
    return r;
}

}  // namespace tsr
