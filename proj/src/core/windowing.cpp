#include "windowing.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace tsr {

const char* task_name(Task t) {
    switch (t) {
        case Task::TSC: return "tsc";
        case Task::TSF: return "tsf";
        case Task::TSER: return "tser";
    }
    return "?";
}

Task task_from_name(const std::string& name) {
    if (name == "tsc") return Task::TSC;
    if (name == "tsf") return Task::TSF;
    if (name == "tser") return Task::TSER;
    throw std::invalid_argument("unknown task \"" + name + "\" (expected tsc, tsf or tser)");
}

ForecastWindows make_forecast_windows(const std::vector<double>& series, std::size_t window_len,
                                      std::size_t horizon, std::size_t stride) {
    if (window_len < 1 || horizon < 1 || stride < 1) {
        throw std::invalid_argument("make_forecast_windows: L, T and stride must be >= 1");
    }
    const std::size_t need = window_len + horizon;
    if (series.size() < need) {
        throw std::invalid_argument("make_forecast_windows: series length " +
                                    std::to_string(series.size()) + " below required minimum " +
                                    std::to_string(need) + " (L + T)");
    }
    const std::size_t count = (series.size() - need) / stride + 1;
    ForecastWindows out;
    out.inputs.x = Matrix(count, window_len);
    out.targets = Matrix(count, horizon);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t t = i * stride;
        std::memcpy(out.inputs.x.row_ptr(i), series.data() + t, window_len * sizeof(double));
        std::memcpy(out.targets.row_ptr(i), series.data() + t + window_len,
                    horizon * sizeof(double));
    }
    return out;
}

WindowMatrix make_windows(const std::vector<double>& series, std::size_t window_len,
                          std::size_t stride) {
    if (window_len < 1 || stride < 1) {
        throw std::invalid_argument("make_windows: L and stride must be >= 1");
    }
    if (series.size() < window_len) {
        throw std::invalid_argument("make_windows: series length " + std::to_string(series.size()) +
                                    " below window length " + std::to_string(window_len));
    }
    const std::size_t count = (series.size() - window_len) / stride + 1;
    WindowMatrix out;
    out.x = Matrix(count, window_len);
    for (std::size_t i = 0; i < count; ++i) {
        std::memcpy(out.x.row_ptr(i), series.data() + i * stride, window_len * sizeof(double));
    }
    return out;
}

namespace {

Matrix stack_samples(const std::vector<std::vector<double>>& samples) {
    if (samples.empty()) {
        throw std::invalid_argument("make_sample_matrix: no samples");
    }
    const std::size_t len = samples.front().size();
    if (len == 0) {
        throw std::invalid_argument("make_sample_matrix: zero-length samples");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].size() != len) {
            throw std::invalid_argument("make_sample_matrix: ragged sample length at index " +
                                        std::to_string(i) + " (" + std::to_string(samples[i].size()) +
                                        " vs " + std::to_string(len) + ")");
        }
    }
    Matrix x(samples.size(), len);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::memcpy(x.row_ptr(i), samples[i].data(), len * sizeof(double));
    }
    return x;
}

}  // namespace

TaskDataset make_label_dataset(const std::vector<std::vector<double>>& samples,
                               const std::vector<int>& labels) {
    if (samples.size() != labels.size()) {
        throw std::invalid_argument("make_sample_matrix: " + std::to_string(samples.size()) +
                                    " samples vs " + std::to_string(labels.size()) + " labels");
    }
    TaskDataset out;
    out.task = Task::TSC;
    out.features.x = stack_samples(samples);
    out.labels = labels;
    for (int l : labels) {
        if (l < 0) throw std::invalid_argument("make_sample_matrix: negative class label");
    }
    return out;
}

TaskDataset make_scalar_dataset(const std::vector<std::vector<double>>& samples,
                                const std::vector<double>& targets) {
    if (samples.size() != targets.size()) {
        throw std::invalid_argument("make_sample_matrix: " + std::to_string(samples.size()) +
                                    " samples vs " + std::to_string(targets.size()) + " targets");
    }
    TaskDataset out;
    out.task = Task::TSER;
    out.features.x = stack_samples(samples);
    out.targets = Matrix(targets.size(), 1, std::vector<double>(targets));
    return out;
}

}  // namespace tsr
