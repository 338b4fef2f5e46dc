#include "models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "errors.hpp"

namespace tsr {
namespace models {

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

}  // namespace

RidgeModel ridge_fit(const Matrix& x, const Matrix& y, double lambda) {
    if (x.rows() == 0 || x.cols() == 0) {
        throw std::invalid_argument("ridge_fit: empty design matrix");
    }
    if (x.rows() != y.rows()) {
        throw std::invalid_argument("ridge_fit: " + std::to_string(x.rows()) + " feature rows vs " +
                                    std::to_string(y.rows()) + " target rows");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("ridge_fit: lambda must be >= 0");
    }
    const std::vector<double> mx = column_means(x);
    const std::vector<double> my = column_means(y);
    const Matrix xc = center(x, mx);
    const Matrix yc = center(y, my);

    Matrix g = gram(xc, 1.0);  // X^T X
    const SymEigResult eig = sym_eig(g);
    const double top = eig.eigenvalues.empty() ? 0.0 : std::max(eig.eigenvalues.front(), 0.0);
    if (lambda == 0.0) {
        const double floor = 1e-12 * (top + 1.0);
        const double smallest = eig.eigenvalues.back();
        if (smallest <= floor) {
            throw NumericError(
                "ridge_fit: X^T X is singular with lambda = 0; pass lambda > 0 to regularize");
        }
    }

    // W = V diag(1/(s_i + lambda)) V^T X^T Y, assembled right to left.
    const Matrix xty = matmul(transpose(xc), yc);
    const Matrix vt_xty = matmul(transpose(eig.eigenvectors), xty);
    Matrix scaled = vt_xty;
    for (std::size_t i = 0; i < scaled.rows(); ++i) {
        const double denom = std::max(eig.eigenvalues[i], 0.0) + lambda;
        double* row = scaled.row_ptr(i);
        const double inv = denom > 0.0 ? 1.0 / denom : 0.0;
        for (std::size_t j = 0; j < scaled.cols(); ++j) row[j] *= inv;
    }
    RidgeModel model;
    model.lambda = lambda;
    model.weights = matmul(eig.eigenvectors, scaled);
    model.bias.resize(y.cols());
    for (std::size_t j = 0; j < y.cols(); ++j) {
        double acc = my[j];
        for (std::size_t t = 0; t < x.cols(); ++t) acc -= mx[t] * model.weights(t, j);
        model.bias[j] = acc;
    }
    return model;
}

Matrix ridge_predict(const RidgeModel& model, const Matrix& x) {
    if (x.cols() != model.weights.rows()) {
        throw std::invalid_argument("ridge_predict: feature width " + std::to_string(x.cols()) +
                                    " does not match model d_in = " +
                                    std::to_string(model.weights.rows()));
    }
    Matrix out = matmul(x, model.weights);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double* row = out.row_ptr(i);
        for (std::size_t j = 0; j < out.cols(); ++j) row[j] += model.bias[j];
    }
    return out;
}

namespace {

std::size_t count_classes(const std::vector<int>& labels) {
    std::set<int> uniq(labels.begin(), labels.end());
    if (uniq.empty()) {
        throw std::invalid_argument("classify_fit: empty label set");
    }
    if (*uniq.begin() < 0) {
        throw std::invalid_argument("classify_fit: negative class label");
    }
    if (uniq.size() < 2) {
        throw std::invalid_argument("classify_fit: need at least 2 classes, got 1");
    }
    return static_cast<std::size_t>(*uniq.rbegin()) + 1;
}

constexpr int kLogisticIters = 500;
constexpr double kLogisticStep = 0.1;
constexpr double kLogisticL2 = 1e-4;

void softmax_row(const double* z, std::size_t n, double* out) {
    double mx = z[0];
    for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, z[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = std::exp(z[j] - mx);
        sum += out[j];
    }
    for (std::size_t j = 0; j < n; ++j) out[j] /= sum;
}

}  // namespace

double logistic_loss(const Matrix& x, const std::vector<int>& labels, const Matrix& weights,
                     const std::vector<double>& bias, std::size_t num_classes, double l2) {
    const std::size_t n = x.rows();
    std::vector<double> probs(num_classes);
    std::vector<double> z(num_classes);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = x.row_ptr(i);
        for (std::size_t c = 0; c < num_classes; ++c) {
            double acc = bias[c];
            for (std::size_t t = 0; t < x.cols(); ++t) acc += row[t] * weights(t, c);
            z[c] = acc;
        }
        softmax_row(z.data(), num_classes, probs.data());
        loss -= std::log(std::max(probs[static_cast<std::size_t>(labels[i])], 1e-300));
    }
    loss /= static_cast<double>(n);
    double reg = 0.0;
    for (double w : weights.data()) reg += w * w;
    return loss + 0.5 * l2 * reg;
}

ClassifierModel classify_fit(const Matrix& x, const std::vector<int>& labels, ClassifierKind kind) {
    if (x.rows() != labels.size()) {
        throw std::invalid_argument("classify_fit: " + std::to_string(x.rows()) + " rows vs " +
                                    std::to_string(labels.size()) + " labels");
    }
    ClassifierModel model;
    model.kind = kind;
    model.num_classes = count_classes(labels);
    const std::size_t d = x.cols();

    if (kind == ClassifierKind::NearestCentroid) {
        model.centroids = Matrix(model.num_classes, d);
        std::vector<std::size_t> counts(model.num_classes, 0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const std::size_t c = static_cast<std::size_t>(labels[i]);
            ++counts[c];
            const double* row = x.row_ptr(i);
            double* crow = model.centroids.row_ptr(c);
            for (std::size_t j = 0; j < d; ++j) crow[j] += row[j];
        }
        for (std::size_t c = 0; c < model.num_classes; ++c) {
            if (counts[c] == 0) continue;  // absent id inside the range; centroid stays at origin
            double* crow = model.centroids.row_ptr(c);
            for (std::size_t j = 0; j < d; ++j) crow[j] /= static_cast<double>(counts[c]);
        }
        return model;
    }

    // Multinomial logistic regression, deterministic full-batch descent.
    const std::size_t n = x.rows();
    const std::size_t nc = model.num_classes;
    model.weights = Matrix(d, nc);
    model.bias.assign(nc, 0.0);
    std::vector<double> z(nc), probs(nc);
    Matrix grad_w(d, nc);
    std::vector<double> grad_b(nc);
    for (int it = 0; it < kLogisticIters; ++it) {
        std::fill(grad_w.data().begin(), grad_w.data().end(), 0.0);
        std::fill(grad_b.begin(), grad_b.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = x.row_ptr(i);
            for (std::size_t c = 0; c < nc; ++c) {
                double acc = model.bias[c];
                for (std::size_t t = 0; t < d; ++t) acc += row[t] * model.weights(t, c);
                z[c] = acc;
            }
            softmax_row(z.data(), nc, probs.data());
            probs[static_cast<std::size_t>(labels[i])] -= 1.0;
            for (std::size_t t = 0; t < d; ++t) {
                const double xv = row[t];
                if (xv == 0.0) continue;
                double* grow = grad_w.row_ptr(t);
                for (std::size_t c = 0; c < nc; ++c) grow[c] += xv * probs[c];
            }
            for (std::size_t c = 0; c < nc; ++c) grad_b[c] += probs[c];
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t t = 0; t < d; ++t) {
            double* wrow = model.weights.row_ptr(t);
            const double* grow = grad_w.row_ptr(t);
            for (std::size_t c = 0; c < nc; ++c) {
                wrow[c] -= kLogisticStep * (grow[c] * inv_n + kLogisticL2 * wrow[c]);
            }
        }
        for (std::size_t c = 0; c < nc; ++c) model.bias[c] -= kLogisticStep * grad_b[c] * inv_n;
    }
    return model;
}

std::vector<int> classify_predict(const ClassifierModel& model, const Matrix& x) {
    const std::size_t d =
        model.kind == ClassifierKind::NearestCentroid ? model.centroids.cols() : model.weights.rows();
    if (x.cols() != d) {
        throw std::invalid_argument("classify_predict: feature width " + std::to_string(x.cols()) +
                                    " does not match model d_in = " + std::to_string(d));
    }
    std::vector<int> out(x.rows());
    if (model.kind == ClassifierKind::NearestCentroid) {
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double* row = x.row_ptr(i);
            double best = 0.0;
            int arg = 0;
            for (std::size_t c = 0; c < model.num_classes; ++c) {
                const double* crow = model.centroids.row_ptr(c);
                double dist = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double diff = row[j] - crow[j];
                    dist += diff * diff;
                }
                if (c == 0 || dist < best) {  // ties keep the lowest class id
                    best = dist;
                    arg = static_cast<int>(c);
                }
            }
            out[i] = arg;
        }
        return out;
    }
    std::vector<double> z(model.num_classes);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double* row = x.row_ptr(i);
        for (std::size_t c = 0; c < model.num_classes; ++c) {
            double acc = model.bias[c];
            for (std::size_t t = 0; t < d; ++t) acc += row[t] * model.weights(t, c);
            z[c] = acc;
        }
        int arg = 0;
        for (std::size_t c = 1; c < model.num_classes; ++c) {
            if (z[c] > z[arg]) arg = static_cast<int>(c);
        }
        out[i] = arg;
    }
    return out;
}

namespace {
constexpr int kSchemaVersion = 1;
}

void save_ridge(const RidgeModel& model, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "ridge";
    j["d_in"] = model.weights.rows();
    j["d_out"] = model.weights.cols();
    j["lambda"] = model.lambda;
    j["weights"] = model.weights.data();
    j["bias"] = model.bias;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump() << "\n";
    if (!out) throw IoError("write failed: " + path);
}

RidgeModel load_ridge(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("schema_version").get<int>() != kSchemaVersion || j.at("kind") != "ridge") {
            throw ParseError(path + ": not a ridge model file");
        }
        RidgeModel model;
        const std::size_t d_in = j.at("d_in").get<std::size_t>();
        const std::size_t d_out = j.at("d_out").get<std::size_t>();
        model.lambda = j.at("lambda").get<double>();
        model.weights = Matrix::from_values(d_in, d_out, j.at("weights").get<std::vector<double>>());
        model.bias = j.at("bias").get<std::vector<double>>();
        if (model.bias.size() != d_out) {
            throw ParseError(path + ": bias length does not match d_out");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_classifier(const ClassifierModel& model, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = model.kind == ClassifierKind::NearestCentroid ? "nearest_centroid" : "logistic";
    j["num_classes"] = model.num_classes;
    if (model.kind == ClassifierKind::NearestCentroid) {
        j["d_in"] = model.centroids.cols();
        j["centroids"] = model.centroids.data();
    } else {
        j["d_in"] = model.weights.rows();
        j["weights"] = model.weights.data();
        j["bias"] = model.bias;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump() << "\n";
    if (!out) throw IoError("write failed: " + path);
}

ClassifierModel load_classifier(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("schema_version").get<int>() != kSchemaVersion) {
            throw ParseError(path + ": unsupported schema_version");
        }
        ClassifierModel model;
        const std::string kind = j.at("kind").get<std::string>();
        model.num_classes = j.at("num_classes").get<std::size_t>();
        const std::size_t d_in = j.at("d_in").get<std::size_t>();
        if (kind == "nearest_centroid") {
            model.kind = ClassifierKind::NearestCentroid;
            model.centroids = Matrix::from_values(model.num_classes, d_in,
                                                  j.at("centroids").get<std::vector<double>>());
        } else if (kind == "logistic") {
            model.kind = ClassifierKind::Logistic;
            model.weights = Matrix::from_values(d_in, model.num_classes,
                                                j.at("weights").get<std::vector<double>>());
            model.bias = j.at("bias").get<std::vector<double>>();
            if (model.bias.size() != model.num_classes) {
                throw ParseError(path + ": bias length does not match num_classes");
            }
        } else {
            throw ParseError(path + ": unknown classifier kind \"" + kind + "\"");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace models
}  // namespace tsr
