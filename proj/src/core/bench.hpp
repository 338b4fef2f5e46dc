#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metrics.hpp"
#include "reducer.hpp"
#include "series.hpp"
#include "windowing.hpp"

namespace tsr {

struct SyntheticComponent {
    double period = 0.0;
    double amplitude = 0.0;
};

// sum_i amplitude_i * sin(2*pi*t/period_i) + trend_slope*t + N(0, noise_std^2),
// reproducible per seed.
struct SyntheticSpec {
    std::size_t length = 0;
    std::vector<SyntheticComponent> components;
    double trend_slope = 0.0;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
};

TimeSeries generate_synthetic(const SyntheticSpec& spec);

struct DataSpec {
    enum class Kind { Csv, Synthetic, CsvSamples };
    Kind kind = Kind::Synthetic;
    std::string path;
    std::string column;
    bool has_header = true;
    SyntheticSpec synthetic;
};

struct ModelSpec {
    std::string kind = "ridge";  // ridge | nearest_centroid | logistic
    double lambda = 1e-3;
};

struct ExperimentConfig {
    Task task = Task::TSF;
    DataSpec data;
    std::size_t window_len = 336;
    std::vector<std::size_t> horizons = {96};
    std::size_t stride = 1;
    std::vector<ReducerSpec> reducers;
    ModelSpec model;
    SplitSpec split;
    bool zscore = true;
    std::uint64_t seed = 0;
    std::size_t repeat = 3;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::string& path);
    nlohmann::json to_json() const;
    void validate() const;  // throws ConfigError
};

// One grid cell: metrics plus median-of-repeats stage wall times (seconds).
struct BenchRow {
    std::string task;
    std::size_t horizon = 0;
    std::string reducer;
    std::size_t k = 0;
    MetricReport metrics;
    double reduce_fit_s = 0.0;
    double reduce_apply_s = 0.0;
    double train_s = 0.0;
    double infer_s = 0.0;
    std::size_t width = 0;
    std::uint64_t seed = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::string metric_space;  // "zscore" or "raw"
    std::string timestamp;     // ISO-8601 UTC
    nlohmann::json config_echo;
};

BenchReport run_experiment(const ExperimentConfig& config);

enum class ReportFormat { Csv, Json };

// CSV columns, fixed: task,horizon,reducer,k,metric_mse,metric_mae,
// metric_rmse,accuracy,reduce_fit_s,reduce_apply_s,train_s,infer_s,width,seed.
// Absent metrics serialize as empty fields (null in JSON).
std::string report_to_csv(const BenchReport& report);
void write_report(const BenchReport& report, const std::string& path, ReportFormat format);
BenchReport read_report_json(const std::string& path);
std::vector<BenchRow> read_report_csv(const std::string& path);

}  // namespace tsr
