#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "tsreduce.h"

namespace {

struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& content)
        : path("/tmp/tsr_capi_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::string sine_csv(std::size_t n) {
    std::string text = "OT\n";
    for (std::size_t t = 0; t < n; ++t) {
        text += std::to_string(std::sin(0.26 * static_cast<double>(t)) +
                               0.001 * static_cast<double>(t));
        text += "\n";
    }
    return text;
}

}  // namespace

TEST_CASE("version and clean error state") {
    CHECK(std::strlen(tsr_version()) > 0);
    CHECK(std::string(tsr_last_error()).empty());
}

TEST_CASE("null arguments are rejected with a message") {
    CHECK(tsr_series_load_csv(nullptr, "OT", 1, nullptr) == TSR_ERR_INVALID);
    CHECK(std::strlen(tsr_last_error()) > 0);
    tsr_matrix* out = nullptr;
    CHECK(tsr_matrix_create(2, 2, nullptr, &out) == TSR_ERR_INVALID);
}

TEST_CASE("series from values rejects non-finite input") {
    const double bad[3] = {1.0, std::nan(""), 2.0};
    tsr_series* s = nullptr;
    CHECK(tsr_series_from_values(bad, 3, &s) == TSR_ERR_INVALID);
    const double good[3] = {1.0, 2.0, 3.0};
    REQUIRE(tsr_series_from_values(good, 3, &s) == TSR_OK);
    CHECK(tsr_series_length(s) == 3);
    CHECK(tsr_series_values(s)[2] == 3.0);
    tsr_series_free(s);
}

TEST_CASE("csv loading and windowing through the C surface") {
    TempFile f("series.csv", sine_csv(200));
    tsr_series* s = nullptr;
    REQUIRE(tsr_series_load_csv(f.path.c_str(), "OT", 1, &s) == TSR_OK);
    CHECK(tsr_series_length(s) == 200);

    tsr_matrix* w = nullptr;
    REQUIRE(tsr_make_windows(s, 32, 1, &w) == TSR_OK);
    CHECK(tsr_matrix_rows(w) == 169);
    CHECK(tsr_matrix_cols(w) == 32);

    tsr_matrix* x = nullptr;
    tsr_matrix* y = nullptr;
    REQUIRE(tsr_make_forecast_windows(s, 32, 8, 1, &x, &y) == TSR_OK);
    CHECK(tsr_matrix_rows(x) == 161);
    CHECK(tsr_matrix_cols(y) == 8);

    tsr_matrix_free(x);
    tsr_matrix_free(y);
    tsr_matrix_free(w);
    tsr_series_free(s);

    CHECK(tsr_series_load_csv("/tmp/absent_tsr.csv", "OT", 1, &s) == TSR_ERR_IO);
    TempFile bad("bad.csv", "OT\n1.0\nxyz\n");
    CHECK(tsr_series_load_csv(bad.path.c_str(), "OT", 1, &s) == TSR_ERR_PARSE);
}

TEST_CASE("reducer lifecycle: create, fit, transform, inverse, evr, persist") {
    TempFile f("series2.csv", sine_csv(400));
    tsr_series* s = nullptr;
    REQUIRE(tsr_series_load_csv(f.path.c_str(), "OT", 1, &s) == TSR_OK);
    tsr_matrix* w = nullptr;
    REQUIRE(tsr_make_windows(s, 48, 1, &w) == TSR_OK);

    tsr_reducer* r = nullptr;
    REQUIRE(tsr_reducer_create("{\"kind\":\"pca\",\"k\":6}", &r) == TSR_OK);
    CHECK(std::string(tsr_reducer_kind(r)) == "pca");
    REQUIRE(tsr_reducer_fit(r, w) == TSR_OK);

    size_t len = 0, width = 0;
    CHECK(tsr_reducer_input_len(r, &len) == TSR_OK);
    CHECK(len == 48);
    CHECK(tsr_reducer_output_width(r, &width) == TSR_OK);
    CHECK(width == 6);

    tsr_matrix* scores = nullptr;
    REQUIRE(tsr_reducer_transform(r, w, &scores) == TSR_OK);
    CHECK(tsr_matrix_cols(scores) == 6);

    tsr_matrix* recon = nullptr;
    REQUIRE(tsr_reducer_inverse(r, scores, &recon) == TSR_OK);
    CHECK(tsr_matrix_cols(recon) == 48);

    double evr = 0.0;
    REQUIRE(tsr_reducer_evr(r, 6, &evr) == TSR_OK);
    CHECK(evr > 0.9);  // smooth sinusoid: six components carry nearly everything
    CHECK(tsr_reducer_evr(r, 0, &evr) == TSR_ERR_INVALID);

    const char* model_path = "/tmp/tsr_capi_model.json";
    REQUIRE(tsr_reducer_save(r, model_path) == TSR_OK);
    tsr_reducer* r2 = nullptr;
    REQUIRE(tsr_reducer_load(model_path, &r2) == TSR_OK);
    tsr_matrix* scores2 = nullptr;
    REQUIRE(tsr_reducer_transform(r2, w, &scores2) == TSR_OK);
    const double* a = tsr_matrix_data(scores);
    const double* b = tsr_matrix_data(scores2);
    for (size_t i = 0; i < 6 * tsr_matrix_rows(scores); ++i) CHECK(a[i] == b[i]);

    std::remove(model_path);
    tsr_matrix_free(scores2);
    tsr_matrix_free(recon);
    tsr_matrix_free(scores);
    tsr_reducer_free(r2);
    tsr_reducer_free(r);
    tsr_matrix_free(w);
    tsr_series_free(s);
}

TEST_CASE("reducer misuse surfaces as status codes") {
    tsr_reducer* r = nullptr;
    CHECK(tsr_reducer_create("{\"kind\":\"warp\"}", &r) == TSR_ERR_CONFIG);
    CHECK(tsr_reducer_create("not json", &r) == TSR_ERR_PARSE);
    REQUIRE(tsr_reducer_create("{\"kind\":\"truncate\",\"k\":100}", &r) == TSR_OK);
    tsr_matrix* w = nullptr;
    std::vector<double> flat(5 * 10, 1.0);
    REQUIRE(tsr_matrix_create(5, 10, flat.data(), &w) == TSR_OK);
    CHECK(tsr_reducer_fit(r, w) == TSR_ERR_INVALID);  // k = 100 > L = 10
    CHECK(std::string(tsr_last_error()).find("truncate") != std::string::npos);
    tsr_matrix_free(w);
    tsr_reducer_free(r);
    CHECK(tsr_reducer_load("/tmp/absent_model_tsr.json", &r) == TSR_ERR_IO);
}

TEST_CASE("matrix csv writing is parseable") {
    const double vals[4] = {1.5, -2.25, 3.0, 0.125};
    tsr_matrix* m = nullptr;
    REQUIRE(tsr_matrix_create(2, 2, vals, &m) == TSR_OK);
    const char* path = "/tmp/tsr_capi_matrix.csv";
    REQUIRE(tsr_matrix_save_csv(m, path) == TSR_OK);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "1.5,-2.25");
    std::getline(in, line);
    CHECK(line == "3,0.125");
    std::remove(path);
    tsr_matrix_free(m);
}

TEST_CASE("bench run from a config file writes both report formats") {
    TempFile config("bench_config.json", R"({
        "task": "tsf",
        "data": {"kind": "synthetic", "length": 1500, "noise_std": 0.3, "seed": 42,
                 "components": [{"period": 24, "amplitude": 1.0}]},
        "window": 32,
        "horizons": [8],
        "reducers": [{"kind": "none"}, {"kind": "pca", "k": 8}],
        "repeat": 1,
        "seed": 42
    })");
    const char* csv_path = "/tmp/tsr_capi_report.csv";
    const char* json_path = "/tmp/tsr_capi_report.json";
    REQUIRE(tsr_bench_run(config.path.c_str(), csv_path, json_path) == TSR_OK);
    std::ifstream csv(csv_path);
    std::string header;
    std::getline(csv, header);
    CHECK(header.find("task,horizon,reducer") == 0);
    int rows = 0;
    std::string line;
    while (std::getline(csv, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 2);
    std::remove(csv_path);
    std::remove(json_path);

    CHECK(tsr_bench_run("/tmp/absent_config_tsr.json", csv_path, nullptr) == TSR_ERR_CONFIG);

    REQUIRE(tsr_bench_run_split(config.path.c_str(), csv_path, nullptr, "ett") == TSR_OK);
    std::remove(csv_path);
    CHECK(tsr_bench_run_split(config.path.c_str(), csv_path, nullptr, "weekly") == TSR_ERR_CONFIG);
}
