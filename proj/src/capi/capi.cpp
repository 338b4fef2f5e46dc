#include "tsreduce.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "../core/bench.hpp"
#include "../core/errors.hpp"
#include "../core/matrix.hpp"
#include "../core/reducer.hpp"
#include "../core/series.hpp"
#include "../core/windowing.hpp"

struct tsr_series {
    tsr::TimeSeries impl;
};

struct tsr_matrix {
    tsr::Matrix impl;
};

struct tsr_reducer {
    tsr::Reducer impl;
    std::string kind;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Runs fn, translating C++ failures into status codes and the thread-local
// message.
template <typename F>
tsr_status guarded(F&& fn) {
    try {
        fn();
        g_last_error.clear();
        return TSR_OK;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return TSR_ERR_INVALID;
    } catch (const tsr::ParseError& e) {
        set_error(e.what());
        return TSR_ERR_PARSE;
    } catch (const tsr::IoError& e) {
        set_error(e.what());
        return TSR_ERR_IO;
    } catch (const tsr::NumericError& e) {
        set_error(e.what());
        return TSR_ERR_NUMERIC;
    } catch (const tsr::ConfigError& e) {
        set_error(e.what());
        return TSR_ERR_CONFIG;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return TSR_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return TSR_ERR_INTERNAL;
    }
}

tsr_status invalid(const char* msg) {
    set_error(msg);
    return TSR_ERR_INVALID;
}

}  // namespace

extern "C" {

const char* tsr_version(void) { return "0.1.0"; }

const char* tsr_last_error(void) { return g_last_error.c_str(); }

tsr_status tsr_series_load_csv(const char* path, const char* column, int has_header,
                               tsr_series** out) {
    if (!path || !column || !out) return invalid("tsr_series_load_csv: NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<tsr_series>();
        handle->impl = tsr::load_csv(path, column, has_header != 0);
        *out = handle.release();
    });
}

tsr_status tsr_series_from_values(const double* values, size_t count, tsr_series** out) {
    if (!values || !out) return invalid("tsr_series_from_values: NULL argument");
    if (count == 0) return invalid("tsr_series_from_values: count must be >= 1");
    return guarded([&] {
        // Finiteness check via the validating matrix constructor.
        tsr::Matrix::from_values(1, count, std::vector<double>(values, values + count));
        auto handle = std::make_unique<tsr_series>();
        handle->impl.name = "values";
        handle->impl.values.assign(values, values + count);
        *out = handle.release();
    });
}

size_t tsr_series_length(const tsr_series* series) { return series ? series->impl.values.size() : 0; }

const double* tsr_series_values(const tsr_series* series) {
    return series ? series->impl.values.data() : nullptr;
}

void tsr_series_free(tsr_series* series) { delete series; }

tsr_status tsr_matrix_create(size_t rows, size_t cols, const double* row_major, tsr_matrix** out) {
    if (!row_major || !out) return invalid("tsr_matrix_create: NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<tsr_matrix>();
        handle->impl = tsr::Matrix::from_values(
            rows, cols, std::vector<double>(row_major, row_major + rows * cols));
        *out = handle.release();
    });
}

size_t tsr_matrix_rows(const tsr_matrix* m) { return m ? m->impl.rows() : 0; }

size_t tsr_matrix_cols(const tsr_matrix* m) { return m ? m->impl.cols() : 0; }

const double* tsr_matrix_data(const tsr_matrix* m) { return m ? m->impl.data().data() : nullptr; }

tsr_status tsr_matrix_save_csv(const tsr_matrix* m, const char* path) {
    if (!m || !path) return invalid("tsr_matrix_save_csv: NULL argument");
    return guarded([&] {
        std::ofstream out(path);
        if (!out) throw tsr::IoError(std::string("cannot open for writing: ") + path);
        char buf[40];
        for (size_t i = 0; i < m->impl.rows(); ++i) {
            const double* row = m->impl.row_ptr(i);
            for (size_t j = 0; j < m->impl.cols(); ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
                out << buf;
                if (j + 1 < m->impl.cols()) out << ',';
            }
            out << '\n';
        }
        if (!out) throw tsr::IoError(std::string("write failed: ") + path);
    });
}

void tsr_matrix_free(tsr_matrix* m) { delete m; }

tsr_status tsr_make_windows(const tsr_series* series, size_t window, size_t stride,
                            tsr_matrix** out) {
    if (!series || !out) return invalid("tsr_make_windows: NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<tsr_matrix>();
        handle->impl = tsr::make_windows(series->impl.values, window, stride).x;
        *out = handle.release();
    });
}

tsr_status tsr_make_forecast_windows(const tsr_series* series, size_t window, size_t horizon,
                                     size_t stride, tsr_matrix** x_out, tsr_matrix** y_out) {
    if (!series || !x_out || !y_out) return invalid("tsr_make_forecast_windows: NULL argument");
    return guarded([&] {
        auto fw = tsr::make_forecast_windows(series->impl.values, window, horizon, stride);
        auto x = std::make_unique<tsr_matrix>();
        auto y = std::make_unique<tsr_matrix>();
        x->impl = std::move(fw.inputs.x);
        y->impl = std::move(fw.targets);
        *x_out = x.release();
        *y_out = y.release();
    });
}

tsr_status tsr_reducer_create(const char* spec_json, tsr_reducer** out) {
    if (!spec_json || !out) return invalid("tsr_reducer_create: NULL argument");
    return guarded([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(spec_json);
        } catch (const nlohmann::json::exception& e) {
            throw tsr::ParseError(std::string("reducer spec: ") + e.what());
        }
        auto spec = tsr::ReducerSpec::from_json(j);
        auto handle = std::make_unique<tsr_reducer>();
        handle->impl = tsr::Reducer(spec);
        handle->kind = spec.kind;
        *out = handle.release();
    });
}

tsr_status tsr_reducer_fit(tsr_reducer* reducer, const tsr_matrix* train_windows) {
    if (!reducer || !train_windows) return invalid("tsr_reducer_fit: NULL argument");
    return guarded([&] {
        tsr::WindowMatrix w;
        w.x = train_windows->impl;
        reducer->impl.fit(w);
    });
}

tsr_status tsr_reducer_transform(const tsr_reducer* reducer, const tsr_matrix* windows,
                                 tsr_matrix** out) {
    if (!reducer || !windows || !out) return invalid("tsr_reducer_transform: NULL argument");
    return guarded([&] {
        tsr::WindowMatrix w;
        w.x = windows->impl;
        auto handle = std::make_unique<tsr_matrix>();
        handle->impl = reducer->impl.transform(w);
        *out = handle.release();
    });
}

tsr_status tsr_reducer_inverse(const tsr_reducer* reducer, const tsr_matrix* features,
                               tsr_matrix** out) {
    if (!reducer || !features || !out) return invalid("tsr_reducer_inverse: NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<tsr_matrix>();
        handle->impl = reducer->impl.inverse(features->impl).x;
        *out = handle.release();
    });
}

tsr_status tsr_reducer_input_len(const tsr_reducer* reducer, size_t* out) {
    if (!reducer || !out) return invalid("tsr_reducer_input_len: NULL argument");
    return guarded([&] { *out = reducer->impl.input_len(); });
}

tsr_status tsr_reducer_output_width(const tsr_reducer* reducer, size_t* out) {
    if (!reducer || !out) return invalid("tsr_reducer_output_width: NULL argument");
    return guarded([&] { *out = reducer->impl.output_width(); });
}

tsr_status tsr_reducer_evr(const tsr_reducer* reducer, size_t upto, double* out) {
    if (!reducer || !out) return invalid("tsr_reducer_evr: NULL argument");
    return guarded([&] {
        const tsr::PcaModel* model = reducer->impl.pca_model();
        if (!model) {
            throw std::invalid_argument("explained variance is defined for pca reducers only");
        }
        *out = tsr::pca::explained_variance_ratio(*model, upto);
    });
}

const char* tsr_reducer_kind(const tsr_reducer* reducer) {
    return reducer ? reducer->kind.c_str() : "";
}

tsr_status tsr_reducer_save(const tsr_reducer* reducer, const char* path) {
    if (!reducer || !path) return invalid("tsr_reducer_save: NULL argument");
    return guarded([&] { reducer->impl.save(path); });
}

tsr_status tsr_reducer_load(const char* path, tsr_reducer** out) {
    if (!path || !out) return invalid("tsr_reducer_load: NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<tsr_reducer>();
        handle->impl = tsr::Reducer::load(path);
        handle->kind = handle->impl.spec().kind;
        *out = handle.release();
    });
}

void tsr_reducer_free(tsr_reducer* reducer) { delete reducer; }

tsr_status tsr_bench_run(const char* config_path, const char* csv_out, const char* json_out) {
    return tsr_bench_run_split(config_path, csv_out, json_out, nullptr);
}

tsr_status tsr_bench_run_split(const char* config_path, const char* csv_out, const char* json_out,
                               const char* split_preset) {
    if (!config_path) return invalid("tsr_bench_run: NULL config path");
    return guarded([&] {
        auto config = tsr::ExperimentConfig::from_file(config_path);
        if (split_preset) {
            const std::string preset = split_preset;
            if (preset == "ett") {
                config.split = tsr::ett_split();
            } else if (preset == "default") {
                config.split = tsr::SplitSpec{};
            } else {
                throw tsr::ConfigError("unknown split preset \"" + preset + "\"");
            }
        }
        const auto report = tsr::run_experiment(config);
        if (csv_out) tsr::write_report(report, csv_out, tsr::ReportFormat::Csv);
        if (json_out) tsr::write_report(report, json_out, tsr::ReportFormat::Json);
    });
}

}  // extern "C"
