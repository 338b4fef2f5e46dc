#include "metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tsr {
namespace metrics {

namespace {

void check_shapes(const Matrix& pred, const Matrix& truth, const char* op) {
    if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                    std::to_string(pred.rows()) + "x" + std::to_string(pred.cols()) +
                                    " vs " + std::to_string(truth.rows()) + "x" +
                                    std::to_string(truth.cols()));
    }
    if (pred.empty()) {
        throw std::invalid_argument(std::string(op) + ": empty input");
    }
}

}  // namespace

double mse(const Matrix& pred, const Matrix& truth) {
    check_shapes(pred, truth, "mse");
    double acc = 0.0;
    const auto& p = pred.data();
    const auto& t = truth.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - t[i];
        acc += d * d;
    }
    return acc / static_cast<double>(p.size());
}

double mae(const Matrix& pred, const Matrix& truth) {
    check_shapes(pred, truth, "mae");
    double acc = 0.0;
    const auto& p = pred.data();
    const auto& t = truth.data();
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::fabs(p[i] - t[i]);
    return acc / static_cast<double>(p.size());
}

double rmse(const Matrix& pred, const Matrix& truth) { return std::sqrt(mse(pred, truth)); }

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("accuracy: " + std::to_string(pred.size()) + " predictions vs " +
                                    std::to_string(truth.size()) + " labels");
    }
    if (pred.empty()) {
        throw std::invalid_argument("accuracy: empty input");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == truth[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

}  // namespace metrics
}  // namespace tsr
