#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace tsr {

// n x L matrix of historical windows: rows are samples, columns time steps.
struct WindowMatrix {
    Matrix x;
    std::size_t window_len() const { return x.cols(); }
    std::size_t count() const { return x.rows(); }
};

enum class Task { TSC, TSF, TSER };

const char* task_name(Task t);
Task task_from_name(const std::string& name);

// Features paired with targets for one split. `targets` is n x T future
// windows for TSF, an n x 1 scalar column for TSER; `labels` is used for TSC.
struct TaskDataset {
    Task task = Task::TSF;
    WindowMatrix features;
    Matrix targets;                 // TSF / TSER
    std::vector<int> labels;        // TSC
    std::string split_tag;
};

struct ForecastWindows {
    WindowMatrix inputs;   // n x L
    Matrix targets;        // n x T
};

// Sliding windows starting at 0, stride, 2*stride, ...; row i holds
// series[t : t+L] with target series[t+L : t+L+T].
ForecastWindows make_forecast_windows(const std::vector<double>& series, std::size_t window_len,
                                      std::size_t horizon, std::size_t stride);

// Sliding windows without targets (reducer fitting on a bare series).
WindowMatrix make_windows(const std::vector<double>& series, std::size_t window_len,
                          std::size_t stride);

// Stacks equal-length per-sample series for TSC; targets are dense labels.
TaskDataset make_label_dataset(const std::vector<std::vector<double>>& samples,
                               const std::vector<int>& labels);

// Stacks equal-length per-sample series for TSER with scalar targets.
TaskDataset make_scalar_dataset(const std::vector<std::vector<double>>& samples,
                                const std::vector<double>& targets);

}  // namespace tsr
