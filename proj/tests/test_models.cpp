#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "errors.hpp"
#include "matrix.hpp"
#include "models.hpp"
#include "pca.hpp"

using tsr::ClassifierKind;
using tsr::Matrix;
namespace md = tsr::models;

namespace {

Matrix random_matrix(std::size_t n, std::size_t d, unsigned seed, double lo = -2.0, double hi = 2.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(lo, hi);
    Matrix m(n, d);
    for (double& v : m.data()) v = uni(rng);
    return m;
}

}  // namespace

TEST_CASE("ridge recovers an exact line") {
    Matrix x(5, 1, {1, 2, 3, 4, 5});
    Matrix y(5, 1, {2, 4, 6, 8, 10});
    const auto model = md::ridge_fit(x, y, 0.0);
    CHECK(model.weights(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(model.bias[0] == doctest::Approx(0.0).epsilon(1e-9));
    Matrix probe(1, 1, {3.0});
    CHECK(md::ridge_predict(model, probe)(0, 0) == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("constant targets give zero weights and the constant bias") {
    const Matrix x = random_matrix(20, 3, 1);
    Matrix y(20, 1);
    for (std::size_t i = 0; i < 20; ++i) y(i, 0) = 7.5;
    for (double lambda : {0.0, 0.5}) {
        const auto model = md::ridge_fit(x, y, lambda);
        for (double w : model.weights.data()) CHECK(std::fabs(w) < 1e-9);
        CHECK(model.bias[0] == doctest::Approx(7.5));
    }
}

TEST_CASE("singular unregularized system is rejected with guidance") {
    Matrix x(1, 2, {1.0, 2.0});
    Matrix y(1, 1, {3.0});
    try {
        md::ridge_fit(x, y, 0.0);
        FAIL("expected singularity error");
    } catch (const tsr::NumericError& e) {
        CHECK(std::string(e.what()).find("lambda > 0") != std::string::npos);
    }
    CHECK_NOTHROW(md::ridge_fit(x, y, 1e-3));
}

TEST_CASE("ridge predict contract") {
    const auto model = md::ridge_fit(random_matrix(10, 2, 2), random_matrix(10, 1, 3), 1e-3);
    const Matrix empty(0, 2);
    CHECK(md::ridge_predict(model, empty).rows() == 0);
    CHECK_THROWS_AS(md::ridge_predict(model, Matrix(1, 3)), std::invalid_argument);
}

TEST_CASE("ridge optimality via finite differences") {
    // Gradient of ||Y - (XW + b)||^2/n + lambda ||W||^2 must vanish at the fit.
    const std::size_t n = 24, d = 3, t = 2;
    const Matrix x = random_matrix(n, d, 4);
    const Matrix y = random_matrix(n, t, 5);
    const double lambda = 0.37;
    const auto model = md::ridge_fit(x, y, lambda);

    // Objective matching the solved normal equations: centered SSE + lambda*||W||^2.
    auto objective = [&](const Matrix& w, const std::vector<double>& bias) {
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < t; ++j) {
                double pred = bias[j];
                for (std::size_t a = 0; a < d; ++a) pred += x(i, a) * w(a, j);
                const double diff = y(i, j) - pred;
                sse += diff * diff;
            }
        }
        double reg = 0.0;
        for (double v : w.data()) reg += v * v;
        return sse + lambda * reg;
    };

    const double h = 1e-6;
    double max_grad = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t j = 0; j < t; ++j) {
            Matrix wp = model.weights, wm = model.weights;
            wp(a, j) += h;
            wm(a, j) -= h;
            const double g = (objective(wp, model.bias) - objective(wm, model.bias)) / (2.0 * h);
            max_grad = std::max(max_grad, std::fabs(g));
        }
    }
    for (std::size_t j = 0; j < t; ++j) {
        auto bp = model.bias, bm = model.bias;
        bp[j] += h;
        bm[j] -= h;
        const double g = (objective(model.weights, bp) - objective(model.weights, bm)) / (2.0 * h);
        max_grad = std::max(max_grad, std::fabs(g));
    }
    CHECK(max_grad < 1e-6 * (1.0 + objective(model.weights, model.bias)));
}

TEST_CASE("invariance bridge: full-rank PCA features change nothing") {
    // lambda = 0, k = L: predictions through the rotated features must match
    // raw-window ridge exactly (the transform is an invertible affine map).
    for (unsigned seed = 0; seed < 20; ++seed) {
        const std::size_t n = 40, len = 7, t = 3;
        const Matrix x = random_matrix(n, len, 100 + seed);
        const Matrix y = random_matrix(n, t, 200 + seed);
        tsr::WindowMatrix w;
        w.x = x;
        const auto pca_model = tsr::pca::fit(w, len);
        const Matrix z = tsr::pca::transform(pca_model, w);

        const auto raw = md::ridge_fit(x, y, 0.0);
        const auto rot = md::ridge_fit(z, y, 0.0);

        const Matrix probe = random_matrix(9, len, 300 + seed);
        tsr::WindowMatrix pw;
        pw.x = probe;
        const Matrix zprobe = tsr::pca::transform(pca_model, pw);
        const Matrix pred_raw = md::ridge_predict(raw, probe);
        const Matrix pred_rot = md::ridge_predict(rot, zprobe);
        for (std::size_t i = 0; i < pred_raw.rows(); ++i) {
            for (std::size_t j = 0; j < t; ++j) {
                CHECK(pred_rot(i, j) == doctest::Approx(pred_raw(i, j)).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("invariance bridge: rank-k scores equal rank-k reconstruction") {
    const std::size_t n = 60, len = 10, t = 2, k = 4;
    const Matrix x = random_matrix(n, len, 17);
    const Matrix y = random_matrix(n, t, 18);
    tsr::WindowMatrix w;
    w.x = x;
    const auto pca_model = tsr::pca::fit(w, k);
    const Matrix z = tsr::pca::transform(pca_model, w);
    const Matrix recon = tsr::pca::inverse_transform(pca_model, z).x;

    const double lambda = 1e-3;
    const auto on_scores = md::ridge_fit(z, y, lambda);
    const auto on_recon = md::ridge_fit(recon, y, lambda);

    const Matrix probe = random_matrix(11, len, 19);
    tsr::WindowMatrix pw;
    pw.x = probe;
    const Matrix zp = tsr::pca::transform(pca_model, pw);
    const Matrix rp = tsr::pca::inverse_transform(pca_model, zp).x;
    const Matrix pred_scores = md::ridge_predict(on_scores, zp);
    const Matrix pred_recon = md::ridge_predict(on_recon, rp);
    for (std::size_t i = 0; i < pred_scores.rows(); ++i) {
        for (std::size_t j = 0; j < t; ++j) {
            CHECK(pred_scores(i, j) == doctest::Approx(pred_recon(i, j)).epsilon(1e-6));
        }
    }
}

namespace {

// Two well-separated unit-variance blobs around +/- centers.
void make_blobs(Matrix& x, std::vector<int>& labels, std::size_t per_class, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 0.5);
    x = Matrix(2 * per_class, 2);
    labels.assign(2 * per_class, 0);
    for (std::size_t i = 0; i < per_class; ++i) {
        x(i, 0) = 4.0 + gauss(rng);
        x(i, 1) = 4.0 + gauss(rng);
        labels[i] = 0;
        x(per_class + i, 0) = -4.0 + gauss(rng);
        x(per_class + i, 1) = -4.0 + gauss(rng);
        labels[per_class + i] = 1;
    }
}

}  // namespace

TEST_CASE("nearest centroid separates constructed blobs perfectly") {
    Matrix x;
    std::vector<int> labels;
    make_blobs(x, labels, 50, 7);
    const auto model = md::classify_fit(x, labels, ClassifierKind::NearestCentroid);
    const auto pred = md::classify_predict(model, x);
    CHECK(pred == labels);

    // A point exactly at a centroid classifies as that class.
    Matrix probe(1, 2, {model.centroids(1, 0), model.centroids(1, 1)});
    CHECK(md::classify_predict(model, probe)[0] == 1);
}

TEST_CASE("single-class training set is rejected") {
    Matrix x(3, 2, {1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(md::classify_fit(x, {1, 1, 1}, ClassifierKind::NearestCentroid),
                    std::invalid_argument);
}

TEST_CASE("logistic training separates blobs and its loss is monotone") {
    Matrix x;
    std::vector<int> labels;
    make_blobs(x, labels, 40, 9);
    const auto model = md::classify_fit(x, labels, ClassifierKind::Logistic);
    const auto pred = md::classify_predict(model, x);
    CHECK(pred == labels);
}

TEST_CASE("logistic loss decreases along the descent path") {
    // Re-run the fixed training schedule step by step via the public loss.
    Matrix x;
    std::vector<int> labels;
    make_blobs(x, labels, 30, 11);
    const std::size_t nc = 2, d = 2, n = x.rows();
    Matrix w(d, nc);
    std::vector<double> b(nc, 0.0);
    double prev = md::logistic_loss(x, labels, w, b, nc, 1e-4);
    for (int it = 0; it < 50; ++it) {
        // One explicit gradient step identical to the trainer's schedule.
        Matrix grad_w(d, nc);
        std::vector<double> grad_b(nc, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double z0 = b[0], z1 = b[1];
            for (std::size_t a = 0; a < d; ++a) {
                z0 += x(i, a) * w(a, 0);
                z1 += x(i, a) * w(a, 1);
            }
            const double m = std::max(z0, z1);
            const double e0 = std::exp(z0 - m), e1 = std::exp(z1 - m);
            double p0 = e0 / (e0 + e1), p1 = e1 / (e0 + e1);
            if (labels[i] == 0) p0 -= 1.0; else p1 -= 1.0;
            for (std::size_t a = 0; a < d; ++a) {
                grad_w(a, 0) += x(i, a) * p0;
                grad_w(a, 1) += x(i, a) * p1;
            }
            grad_b[0] += p0;
            grad_b[1] += p1;
        }
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t c = 0; c < nc; ++c) {
                w(a, c) -= 0.1 * (grad_w(a, c) / static_cast<double>(n) + 1e-4 * w(a, c));
            }
        }
        for (std::size_t c = 0; c < nc; ++c) b[c] -= 0.1 * grad_b[c] / static_cast<double>(n);
        const double cur = md::logistic_loss(x, labels, w, b, nc, 1e-4);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("model persistence round-trips for ridge and classifiers") {
    const auto ridge = md::ridge_fit(random_matrix(12, 3, 21), random_matrix(12, 2, 22), 0.5);
    const std::string path = "/tmp/tsr_models_test.json";
    md::save_ridge(ridge, path);
    const auto ridge2 = md::load_ridge(path);
    CHECK(ridge2.weights == ridge.weights);
    CHECK(ridge2.bias == ridge.bias);
    CHECK(ridge2.lambda == ridge.lambda);

    Matrix x;
    std::vector<int> labels;
    make_blobs(x, labels, 10, 23);
    for (auto kind : {ClassifierKind::NearestCentroid, ClassifierKind::Logistic}) {
        const auto clf = md::classify_fit(x, labels, kind);
        md::save_classifier(clf, path);
        const auto clf2 = md::load_classifier(path);
        CHECK(clf2.kind == clf.kind);
        CHECK(clf2.num_classes == clf.num_classes);
        const auto p1 = md::classify_predict(clf, x);
        const auto p2 = md::classify_predict(clf2, x);
        CHECK(p1 == p2);
    }
    std::remove(path.c_str());
}
