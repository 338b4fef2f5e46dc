#pragma once

#include <optional>
#include <vector>

#include "matrix.hpp"

namespace tsr {

// Metrics for one evaluation; regression/forecast rows fill mse/mae/rmse,
// classification rows fill accuracy.
struct MetricReport {
    std::optional<double> mse;
    std::optional<double> mae;
    std::optional<double> rmse;
    std::optional<double> accuracy;
    std::size_t n = 0;
};

namespace metrics {

double mse(const Matrix& pred, const Matrix& truth);
double mae(const Matrix& pred, const Matrix& truth);
double rmse(const Matrix& pred, const Matrix& truth);
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace metrics

}  // namespace tsr
