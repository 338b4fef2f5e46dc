#pragma once

#include <string>
#include <vector>

#include "matrix.hpp"

namespace tsr {

// Closed-form ridge regressor, multi-output. Solved on mean-centered data;
// the bias restores the means.
struct RidgeModel {
    Matrix weights;            // d_in x d_out
    std::vector<double> bias;  // d_out
    double lambda = 0.0;
};

enum class ClassifierKind { NearestCentroid, Logistic };

struct ClassifierModel {
    ClassifierKind kind = ClassifierKind::NearestCentroid;
    std::size_t num_classes = 0;
    Matrix centroids;          // NearestCentroid: num_classes x d_in
    Matrix weights;            // Logistic: d_in x num_classes
    std::vector<double> bias;  // Logistic: num_classes
};

namespace models {

// Solves (X^T X + lambda I) W = X^T Y on centered data via the symmetric
// eigendecomposition. lambda = 0 on a singular system is an error.
RidgeModel ridge_fit(const Matrix& x, const Matrix& y, double lambda);
Matrix ridge_predict(const RidgeModel& model, const Matrix& x);

constexpr double kDefaultRidgeLambda = 1e-3;

// NearestCentroid: per-class means, ties to the lowest class id. Logistic:
// multinomial, full-batch gradient descent, 500 iterations, step 0.1,
// L2 1e-4, zero init.
ClassifierModel classify_fit(const Matrix& x, const std::vector<int>& labels, ClassifierKind kind);
std::vector<int> classify_predict(const ClassifierModel& model, const Matrix& x);

// Mean cross-entropy plus the L2 term; exposed for the convergence property.
double logistic_loss(const Matrix& x, const std::vector<int>& labels, const Matrix& weights,
                     const std::vector<double>& bias, std::size_t num_classes, double l2);

void save_ridge(const RidgeModel& model, const std::string& path);
RidgeModel load_ridge(const std::string& path);
void save_classifier(const ClassifierModel& model, const std::string& path);
ClassifierModel load_classifier(const std::string& path);

}  // namespace models

}  // namespace tsr
