#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"
#include "models.hpp"
#include "rng.hpp"

namespace tsr {

TimeSeries generate_synthetic(const SyntheticSpec& spec) {
    if (spec.length < 1) {
        throw std::invalid_argument("generate_synthetic: length must be >= 1");
    }
    for (const auto& c : spec.components) {
        if (!(c.period > 0.0)) {
            throw std::invalid_argument("generate_synthetic: component period must be > 0");
        }
        if (!std::isfinite(c.amplitude)) {
            throw std::invalid_argument("generate_synthetic: non-finite amplitude");
        }
    }
    if (spec.noise_std < 0.0) {
        throw std::invalid_argument("generate_synthetic: noise std must be >= 0");
    }
    TimeSeries out;
    out.name = "synthetic";
    out.values.resize(spec.length);
    NormalSampler noise(spec.seed);
    constexpr double two_pi = 2.0 * 3.14159265358979323846;
    for (std::size_t t = 0; t < spec.length; ++t) {
        double v = spec.trend_slope * static_cast<double>(t);
        for (const auto& c : spec.components) {
            v += c.amplitude * std::sin(two_pi * static_cast<double>(t) / c.period);
        }
        if (spec.noise_std > 0.0) v += spec.noise_std * noise.next();
        out.values[t] = v;
    }
    return out;
}

namespace {

SyntheticSpec synthetic_from_json(const nlohmann::json& j) {
    SyntheticSpec spec;
    spec.length = j.value("length", std::size_t{0});
    spec.trend_slope = j.value("trend_slope", 0.0);
    spec.noise_std = j.value("noise_std", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("components")) {
        for (const auto& c : j.at("components")) {
            spec.components.push_back({c.value("period", 0.0), c.value("amplitude", 0.0)});
        }
    }
    return spec;
}

nlohmann::json synthetic_to_json(const SyntheticSpec& spec) {
    nlohmann::json j;
    j["length"] = spec.length;
    j["trend_slope"] = spec.trend_slope;
    j["noise_std"] = spec.noise_std;
    j["seed"] = spec.seed;
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : spec.components) {
        comps.push_back({{"period", c.period}, {"amplitude", c.amplitude}});
    }
    j["components"] = std::move(comps);
    return j;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    try {
        cfg.task = task_from_name(j.value("task", std::string("tsf")));

        const auto& d = j.at("data");
        const std::string dkind = d.value("kind", std::string("csv"));
        if (dkind == "csv") {
            cfg.data.kind = DataSpec::Kind::Csv;
            cfg.data.path = d.at("path").get<std::string>();
            cfg.data.column = d.value("column", std::string("0"));
            cfg.data.has_header = d.value("has_header", true);
        } else if (dkind == "synthetic") {
            cfg.data.kind = DataSpec::Kind::Synthetic;
            cfg.data.synthetic = synthetic_from_json(d);
        } else if (dkind == "csv_samples") {
            cfg.data.kind = DataSpec::Kind::CsvSamples;
            cfg.data.path = d.at("path").get<std::string>();
            cfg.data.has_header = d.value("has_header", false);
        } else {
            throw ConfigError("unknown data kind \"" + dkind + "\"");
        }

        cfg.window_len = j.value("window", std::size_t{336});
        if (j.contains("horizons")) {
            cfg.horizons = j.at("horizons").get<std::vector<std::size_t>>();
        } else if (j.contains("horizon")) {
            cfg.horizons = {j.at("horizon").get<std::size_t>()};
        }
        cfg.stride = j.value("stride", std::size_t{1});

        if (j.contains("reducers")) {
            for (const auto& r : j.at("reducers")) cfg.reducers.push_back(ReducerSpec::from_json(r));
        }
        if (cfg.reducers.empty()) cfg.reducers.push_back(ReducerSpec{});

        if (j.contains("model")) {
            const auto& m = j.at("model");
            cfg.model.kind = m.value("kind", std::string("ridge"));
            cfg.model.lambda = m.value("lambda", models::kDefaultRidgeLambda);
        }

        if (j.contains("split")) {
            const auto& s = j.at("split");
            if (s.is_string()) {
                if (s.get<std::string>() == "ett") {
                    cfg.split = ett_split();
                } else {
                    throw ConfigError("unknown split preset \"" + s.get<std::string>() + "\"");
                }
            } else {
                cfg.split.train_frac = s.value("train", 0.7);
                cfg.split.val_frac = s.value("val", 0.1);
                cfg.split.test_frac = s.value("test", 0.2);
            }
        }
        cfg.zscore = j.value("zscore", true);
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.repeat = j.value("repeat", std::size_t{3});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["task"] = task_name(task);
    nlohmann::json d;
    switch (data.kind) {
        case DataSpec::Kind::Csv:
            d["kind"] = "csv";
            d["path"] = data.path;
            d["column"] = data.column;
            d["has_header"] = data.has_header;
            break;
        case DataSpec::Kind::Synthetic:
            d = synthetic_to_json(data.synthetic);
            d["kind"] = "synthetic";
            break;
        case DataSpec::Kind::CsvSamples:
            d["kind"] = "csv_samples";
            d["path"] = data.path;
            d["has_header"] = data.has_header;
            break;
    }
    j["data"] = std::move(d);
    j["window"] = window_len;
    j["horizons"] = horizons;
    j["stride"] = stride;
    nlohmann::json reds = nlohmann::json::array();
    for (const auto& r : reducers) reds.push_back(r.to_json());
    j["reducers"] = std::move(reds);
    j["model"] = {{"kind", model.kind}, {"lambda", model.lambda}};
    j["split"] = {{"train", split.train_frac}, {"val", split.val_frac}, {"test", split.test_frac}};
    j["zscore"] = zscore;
    j["seed"] = seed;
    j["repeat"] = repeat;
    return j;
}

void ExperimentConfig::validate() const {
    if (window_len < 1) throw ConfigError("config: window must be >= 1");
    if (stride < 1) throw ConfigError("config: stride must be >= 1");
    if (repeat < 1) throw ConfigError("config: repeat must be >= 1");
    if (task == Task::TSF) {
        if (horizons.empty()) throw ConfigError("config: at least one horizon is required");
        for (std::size_t h : horizons) {
            if (h < 1) throw ConfigError("config: horizons must be >= 1");
        }
        if (data.kind == DataSpec::Kind::CsvSamples) {
            throw ConfigError("config: csv_samples data requires task tsc or tser");
        }
    } else {
        if (data.kind != DataSpec::Kind::CsvSamples) {
            throw ConfigError("config: task " + std::string(task_name(task)) +
                              " requires csv_samples data");
        }
    }
    if (model.kind != "ridge" && model.kind != "nearest_centroid" && model.kind != "logistic") {
        throw ConfigError("config: unknown model kind \"" + model.kind + "\"");
    }
    if (task == Task::TSC && model.kind == "ridge") {
        throw ConfigError("config: task tsc needs a classifier model");
    }
    if (task != Task::TSC && model.kind != "ridge") {
        throw ConfigError("config: classifier models require task tsc");
    }
    if (model.lambda < 0.0) throw ConfigError("config: lambda must be >= 0");
    for (const auto& r : reducers) {
        r.validate(window_len);
        if (r.output_width(window_len) > window_len) {
            throw ConfigError("config: reducer " + r.label() + " output width exceeds window");
        }
    }
    if (data.kind == DataSpec::Kind::Synthetic) {
        if (data.synthetic.length < 1) throw ConfigError("config: synthetic length must be >= 1");
        for (const auto& c : data.synthetic.components) {
            if (!(c.period > 0.0)) throw ConfigError("config: synthetic period must be > 0");
        }
        if (data.synthetic.noise_std < 0.0) throw ConfigError("config: noise std must be >= 0");
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs fn `repeat` times and reports the median wall time. fn must be
// idempotent; results are taken from the last run.
template <typename F>
double median_time(std::size_t repeat, F&& fn) {
    std::vector<double> times;
    times.reserve(repeat);
    for (std::size_t r = 0; r < repeat; ++r) {
        const auto start = Clock::now();
        fn();
        times.push_back(seconds_since(start));
    }
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    if (times.size() % 2 == 1) return times[mid];
    return 0.5 * (times[mid - 1] + times[mid]);
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

struct SampleData {
    Matrix features;
    Matrix scalar_targets;  // TSER
    std::vector<int> labels;  // TSC
};

// csv_samples format: one sample per row, features first, target in the last
// column.
SampleData load_samples(const std::string& path, bool has_header, Task task) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<std::vector<double>> samples;
    std::vector<double> targets;
    std::string line;
    std::size_t line_no = 0;
    bool skip_header = has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_header) {
            skip_header = false;
            continue;
        }
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t");
            const std::string t = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
            char* end = nullptr;
            const double v = std::strtod(t.c_str(), &end);
            if (t.empty() || *end != '\0' || !std::isfinite(v)) {
                throw ParseError(path + ": cannot parse cell \"" + cell + "\" at row " +
                                 std::to_string(line_no));
            }
            row.push_back(v);
        }
        if (row.size() < 2) {
            throw ParseError(path + ": row " + std::to_string(line_no) +
                             " needs at least one feature and a target");
        }
        targets.push_back(row.back());
        row.pop_back();
        samples.push_back(std::move(row));
    }
    if (samples.empty()) throw ParseError(path + ": no data rows");

    SampleData out;
    if (task == Task::TSC) {
        std::vector<int> labels;
        labels.reserve(targets.size());
        for (double t : targets) {
            const int l = static_cast<int>(std::llround(t));
            if (std::fabs(t - l) > 1e-9 || l < 0) {
                throw ParseError(path + ": class labels must be non-negative integers");
            }
            labels.push_back(l);
        }
        TaskDataset ds = make_label_dataset(samples, labels);
        out.features = std::move(ds.features.x);
        out.labels = std::move(ds.labels);
    } else {
        TaskDataset ds = make_scalar_dataset(samples, targets);
        out.features = std::move(ds.features.x);
        out.scalar_targets = std::move(ds.targets);
    }
    out.features.require_finite("samples");
    return out;
}

Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t end) {
    Matrix out(end - begin, m.cols());
    std::copy(m.data().begin() + begin * m.cols(), m.data().begin() + end * m.cols(),
              out.data().begin());
    return out;
}

struct SplitWindows {
    WindowMatrix train_x, val_x, test_x;
    Matrix train_y, test_y;
    std::vector<int> train_labels, test_labels;
};

BenchRow run_cell(const ExperimentConfig& config, const ReducerSpec& rspec,
                  const SplitWindows& data, std::size_t horizon) {
    BenchRow row;
    row.task = task_name(config.task);
    row.horizon = horizon;
    row.reducer = rspec.label();
    row.k = rspec.kind == "downsample" ? rspec.stride : rspec.k;
    row.seed = config.seed;

    Reducer reducer(rspec);
    row.reduce_fit_s = median_time(config.repeat, [&] { reducer.fit(data.train_x); });

    Matrix train_f, val_f, test_f;
    row.reduce_apply_s = median_time(config.repeat, [&] {
        train_f = reducer.transform(data.train_x);
        val_f = reducer.transform(data.val_x);
        test_f = reducer.transform(data.test_x);
    });
    row.width = train_f.cols();

    if (config.task == Task::TSC) {
        const ClassifierKind kind = config.model.kind == "logistic" ? ClassifierKind::Logistic
                                                                    : ClassifierKind::NearestCentroid;
        ClassifierModel model;
        row.train_s =
            median_time(config.repeat, [&] { model = models::classify_fit(train_f, data.train_labels, kind); });
        std::vector<int> pred;
        row.infer_s = median_time(config.repeat, [&] { pred = models::classify_predict(model, test_f); });
        row.metrics.accuracy = metrics::accuracy(pred, data.test_labels);
        row.metrics.n = pred.size();
        return row;
    }

    RidgeModel model;
    row.train_s = median_time(
        config.repeat, [&] { model = models::ridge_fit(train_f, data.train_y, config.model.lambda); });
    Matrix pred;
    row.infer_s = median_time(config.repeat, [&] { pred = models::ridge_predict(model, test_f); });
    row.metrics.mse = metrics::mse(pred, data.test_y);
    row.metrics.mae = metrics::mae(pred, data.test_y);
    row.metrics.rmse = std::sqrt(*row.metrics.mse);
    row.metrics.n = pred.rows();
    return row;
}

}  // namespace

BenchReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    BenchReport report;
    report.metric_space = (config.task == Task::TSF && config.zscore) ? "zscore" : "raw";
    report.timestamp = utc_timestamp();
    report.config_echo = config.to_json();

    if (config.task == Task::TSF) {
        TimeSeries series;
        if (config.data.kind == DataSpec::Kind::Synthetic) {
            series = generate_synthetic(config.data.synthetic);
        } else {
            series = load_csv(config.data.path, config.data.column, config.data.has_header);
        }
        SeriesSplit split = chrono_split(series, config.split);
        if (config.zscore) {
            const ZScoreParams z = zscore_fit(split.train.values);
            split.train.values = zscore_apply(z, split.train.values);
            split.val.values = zscore_apply(z, split.val.values);
            split.test.values = zscore_apply(z, split.test.values);
        }
        for (std::size_t horizon : config.horizons) {
            SplitWindows data;
            try {
                auto tr = make_forecast_windows(split.train.values, config.window_len, horizon,
                                                config.stride);
                auto va =
                    make_forecast_windows(split.val.values, config.window_len, horizon, config.stride);
                auto te = make_forecast_windows(split.test.values, config.window_len, horizon,
                                                config.stride);
                data.train_x = std::move(tr.inputs);
                data.train_y = std::move(tr.targets);
                data.val_x = std::move(va.inputs);
                data.test_x = std::move(te.inputs);
                data.test_y = std::move(te.targets);
            } catch (const std::exception& e) {
                throw std::runtime_error("horizon " + std::to_string(horizon) + ": " + e.what());
            }
            for (const auto& rspec : config.reducers) {
                try {
                    report.rows.push_back(run_cell(config, rspec, data, horizon));
                } catch (const std::exception& e) {
                    throw std::runtime_error("horizon " + std::to_string(horizon) + ", reducer " +
                                             rspec.label() + ": " + e.what());
                }
            }
        }
        return report;
    }

    // TSC / TSER: whole archive samples, split chronologically by row order.
    const SampleData all = load_samples(config.data.path, config.data.has_header, config.task);
    const std::size_t n = all.features.rows();
    TimeSeries row_index;  // reuses the split boundary arithmetic
    row_index.values.assign(n, 0.0);
    const SeriesSplit marks = chrono_split(row_index, config.split);
    const std::size_t b1 = marks.train.values.size();
    const std::size_t b2 = b1 + marks.val.values.size();

    SplitWindows data;
    data.train_x.x = slice_rows(all.features, 0, b1);
    data.val_x.x = slice_rows(all.features, b1, b2);
    data.test_x.x = slice_rows(all.features, b2, n);
    if (config.task == Task::TSC) {
        data.train_labels.assign(all.labels.begin(), all.labels.begin() + b1);
        data.test_labels.assign(all.labels.begin() + b2, all.labels.end());
    } else {
        data.train_y = slice_rows(all.scalar_targets, 0, b1);
        data.test_y = slice_rows(all.scalar_targets, b2, n);
    }
    if (data.train_x.window_len() != config.window_len) {
        throw std::runtime_error("sample length " + std::to_string(data.train_x.window_len()) +
                                 " does not match configured window " +
                                 std::to_string(config.window_len));
    }
    for (const auto& rspec : config.reducers) {
        try {
            report.rows.push_back(run_cell(config, rspec, data, 0));
        } catch (const std::exception& e) {
            throw std::runtime_error("reducer " + rspec.label() + ": " + e.what());
        }
    }
    return report;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_optional(const std::optional<double>& v) {
    return v.has_value() ? fmt_double(*v) : std::string();
}

constexpr const char* kCsvHeader =
    "task,horizon,reducer,k,metric_mse,metric_mae,metric_rmse,accuracy,"
    "reduce_fit_s,reduce_apply_s,train_s,infer_s,width,seed";

nlohmann::json row_to_json(const BenchRow& r) {
    nlohmann::json j;
    j["task"] = r.task;
    j["horizon"] = r.horizon;
    j["reducer"] = r.reducer;
    j["k"] = r.k;
    j["metric_mse"] = r.metrics.mse.has_value() ? nlohmann::json(*r.metrics.mse) : nlohmann::json();
    j["metric_mae"] = r.metrics.mae.has_value() ? nlohmann::json(*r.metrics.mae) : nlohmann::json();
    j["metric_rmse"] =
        r.metrics.rmse.has_value() ? nlohmann::json(*r.metrics.rmse) : nlohmann::json();
    j["accuracy"] =
        r.metrics.accuracy.has_value() ? nlohmann::json(*r.metrics.accuracy) : nlohmann::json();
    j["n"] = r.metrics.n;
    j["reduce_fit_s"] = r.reduce_fit_s;
    j["reduce_apply_s"] = r.reduce_apply_s;
    j["train_s"] = r.train_s;
    j["infer_s"] = r.infer_s;
    j["width"] = r.width;
    j["seed"] = r.seed;
    return j;
}

BenchRow row_from_json(const nlohmann::json& j) {
    BenchRow r;
    r.task = j.at("task").get<std::string>();
    r.horizon = j.at("horizon").get<std::size_t>();
    r.reducer = j.at("reducer").get<std::string>();
    r.k = j.at("k").get<std::size_t>();
    if (!j.at("metric_mse").is_null()) r.metrics.mse = j.at("metric_mse").get<double>();
    if (!j.at("metric_mae").is_null()) r.metrics.mae = j.at("metric_mae").get<double>();
    if (!j.at("metric_rmse").is_null()) r.metrics.rmse = j.at("metric_rmse").get<double>();
    if (!j.at("accuracy").is_null()) r.metrics.accuracy = j.at("accuracy").get<double>();
    r.metrics.n = j.value("n", std::size_t{0});
    r.reduce_fit_s = j.at("reduce_fit_s").get<double>();
    r.reduce_apply_s = j.at("reduce_apply_s").get<double>();
    r.train_s = j.at("train_s").get<double>();
    r.infer_s = j.at("infer_s").get<double>();
    r.width = j.at("width").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
}

}  // namespace

std::string report_to_csv(const BenchReport& report) {
    std::string out = kCsvHeader;
    out += "\n";
    for (const auto& r : report.rows) {
        out += r.task;
        out += ",";
        out += std::to_string(r.horizon);
        out += ",";
        out += r.reducer;
        out += ",";
        out += std::to_string(r.k);
        out += ",";
        out += fmt_optional(r.metrics.mse);
        out += ",";
        out += fmt_optional(r.metrics.mae);
        out += ",";
        out += fmt_optional(r.metrics.rmse);
        out += ",";
        out += fmt_optional(r.metrics.accuracy);
        out += ",";
        out += fmt_double(r.reduce_fit_s);
        out += ",";
        out += fmt_double(r.reduce_apply_s);
        out += ",";
        out += fmt_double(r.train_s);
        out += ",";
        out += fmt_double(r.infer_s);
        out += ",";
        out += std::to_string(r.width);
        out += ",";
        out += std::to_string(r.seed);
        out += "\n";
    }
    return out;
}

void write_report(const BenchReport& report, const std::string& path, ReportFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    if (format == ReportFormat::Csv) {
        out << report_to_csv(report);
    } else {
        nlohmann::json j;
        j["schema_version"] = 1;
        j["metric_space"] = report.metric_space;
        j["timestamp"] = report.timestamp;
        j["config"] = report.config_echo;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : report.rows) rows.push_back(row_to_json(r));
        j["rows"] = std::move(rows);
        out << j.dump(2) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

BenchReport read_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
        BenchReport report;
        report.metric_space = j.at("metric_space").get<std::string>();
        report.timestamp = j.at("timestamp").get<std::string>();
        report.config_echo = j.at("config");
        for (const auto& r : j.at("rows")) report.rows.push_back(row_from_json(r));
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::vector<BenchRow> read_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ParseError(path + ": missing or unexpected report header");
    }
    std::vector<BenchRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (line.back() == ',') f.push_back("");
        if (f.size() != 14) {
            throw ParseError(path + ": row " + std::to_string(line_no) + " has " +
                             std::to_string(f.size()) + " fields, expected 14");
        }
        BenchRow r;
        r.task = f[0];
        r.horizon = std::stoul(f[1]);
        r.reducer = f[2];
        r.k = std::stoul(f[3]);
        if (!f[4].empty()) r.metrics.mse = std::stod(f[4]);
        if (!f[5].empty()) r.metrics.mae = std::stod(f[5]);
        if (!f[6].empty()) r.metrics.rmse = std::stod(f[6]);
        if (!f[7].empty()) r.metrics.accuracy = std::stod(f[7]);
        r.reduce_fit_s = std::stod(f[8]);
        r.reduce_apply_s = std::stod(f[9]);
        r.train_s = std::stod(f[10]);
        r.infer_s = std::stod(f[11]);
        r.width = std::stoul(f[12]);
        r.seed = std::stoull(f[13]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace tsr
