// tsreduce command-line driver. Talks to the shared library exclusively
// through the C API in tsreduce.h.
//
// Subcommands:
//   bench      run an experiment grid from a JSON config, write CSV/JSON reports
//   fit        fit a reducer on sliding windows of a CSV column, save it
//   transform  apply a saved reducer to windows of a CSV column
//   evr        print the explained-variance ratio of a saved PCA reducer
//   dump-recon write original vs reconstructed windows for plotting
//
// Exit codes: 0 success, 1 configuration/usage error, 2 runtime error.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsreduce.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int exit_code_for(tsr_status status) {
    switch (status) {
        case TSR_OK:
            return kExitOk;
        case TSR_ERR_INVALID:
        case TSR_ERR_CONFIG:
            return kExitConfig;
        default:
            return kExitRuntime;
    }
}

int fail(tsr_status status) {
    std::fprintf(stderr, "error: %s\n", tsr_last_error());
    return exit_code_for(status);
}

struct SeriesDeleter {
    void operator()(tsr_series* s) const { tsr_series_free(s); }
};
struct MatrixDeleter {
    void operator()(tsr_matrix* m) const { tsr_matrix_free(m); }
};
struct ReducerDeleter {
    void operator()(tsr_reducer* r) const { tsr_reducer_free(r); }
};

using SeriesPtr = std::unique_ptr<tsr_series, SeriesDeleter>;
using MatrixPtr = std::unique_ptr<tsr_matrix, MatrixDeleter>;
using ReducerPtr = std::unique_ptr<tsr_reducer, ReducerDeleter>;

bool require_file(const std::string& path, const char* what) {
    if (std::filesystem::exists(path)) return true;
    std::fprintf(stderr, "error: %s not found: %s\n", what, path.c_str());
    return false;
}

struct ReducerFlags {
    std::string kind = "pca";
    std::size_t k = 48;
    std::size_t stride = 7;
    std::size_t patch_len = 16;
    std::uint64_t seed = 0;
    std::size_t oversample = 8;
    std::size_t power_iters = 2;
    std::string fft_mode = "pairs";
    bool per_position = false;

    std::string to_json() const {
        std::string j = "{\"kind\":\"" + kind + "\"";
        j += ",\"k\":" + std::to_string(k);
        j += ",\"stride\":" + std::to_string(stride);
        j += ",\"patch_len\":" + std::to_string(patch_len);
        j += ",\"seed\":" + std::to_string(seed);
        j += ",\"oversample\":" + std::to_string(oversample);
        j += ",\"power_iters\":" + std::to_string(power_iters);
        j += ",\"mode\":\"" + fft_mode + "\"";
        j += std::string(",\"per_position\":") + (per_position ? "true" : "false");
        j += "}";
        return j;
    }
};

int run_fit(const std::string& input, const std::string& column, bool no_header,
            std::size_t window, std::size_t stride, const ReducerFlags& flags,
            const std::string& out_path) {
    if (!require_file(input, "input file")) return kExitConfig;
    if (flags.kind != "downsample" && flags.kind != "none" && flags.kind != "patch_pca" &&
        flags.k > window) {
        std::fprintf(stderr, "error: k exceeds window length (%zu > %zu)\n", flags.k, window);
        return kExitConfig;
    }

    SeriesPtr series;
    tsr_series* raw_series = nullptr;
    tsr_status st = tsr_series_load_csv(input.c_str(), column.c_str(), no_header ? 0 : 1, &raw_series);
    if (st != TSR_OK) return fail(st);
    series.reset(raw_series);

    tsr_matrix* raw_windows = nullptr;
    st = tsr_make_windows(series.get(), window, stride, &raw_windows);
    if (st != TSR_OK) return fail(st);
    MatrixPtr windows(raw_windows);

    tsr_reducer* raw_reducer = nullptr;
    st = tsr_reducer_create(flags.to_json().c_str(), &raw_reducer);
    if (st != TSR_OK) return fail(st);
    ReducerPtr reducer(raw_reducer);

    st = tsr_reducer_fit(reducer.get(), windows.get());
    if (st != TSR_OK) return fail(st);
    st = tsr_reducer_save(reducer.get(), out_path.c_str());
    if (st != TSR_OK) return fail(st);

    std::size_t width = 0;
    tsr_reducer_output_width(reducer.get(), &width);
    std::printf("fitted %s on %zu windows of length %zu (output width %zu), saved to %s\n",
                flags.kind.c_str(), tsr_matrix_rows(windows.get()), window, width, out_path.c_str());
    return kExitOk;
}

int run_transform(const std::string& model_path, const std::string& input,
                  const std::string& column, bool no_header, std::size_t stride,
                  const std::string& out_path) {
    if (!require_file(model_path, "model file")) return kExitConfig;
    if (!require_file(input, "input file")) return kExitConfig;

    tsr_reducer* raw_reducer = nullptr;
    tsr_status st = tsr_reducer_load(model_path.c_str(), &raw_reducer);
    if (st != TSR_OK) return fail(st);
    ReducerPtr reducer(raw_reducer);

    std::size_t window = 0;
    st = tsr_reducer_input_len(reducer.get(), &window);
    if (st != TSR_OK) return fail(st);

    tsr_series* raw_series = nullptr;
    st = tsr_series_load_csv(input.c_str(), column.c_str(), no_header ? 0 : 1, &raw_series);
    if (st != TSR_OK) return fail(st);
    SeriesPtr series(raw_series);

    tsr_matrix* raw_windows = nullptr;
    st = tsr_make_windows(series.get(), window, stride, &raw_windows);
    if (st != TSR_OK) return fail(st);
    MatrixPtr windows(raw_windows);

    tsr_matrix* raw_scores = nullptr;
    st = tsr_reducer_transform(reducer.get(), windows.get(), &raw_scores);
    if (st != TSR_OK) return fail(st);
    MatrixPtr scores(raw_scores);

    st = tsr_matrix_save_csv(scores.get(), out_path.c_str());
    if (st != TSR_OK) return fail(st);
    std::printf("wrote %zu x %zu feature matrix to %s\n", tsr_matrix_rows(scores.get()),
                tsr_matrix_cols(scores.get()), out_path.c_str());
    return kExitOk;
}

int run_evr(const std::string& model_path, std::size_t upto) {
    if (!require_file(model_path, "model file")) return kExitConfig;
    tsr_reducer* raw_reducer = nullptr;
    tsr_status st = tsr_reducer_load(model_path.c_str(), &raw_reducer);
    if (st != TSR_OK) return fail(st);
    ReducerPtr reducer(raw_reducer);

    double ratio = 0.0;
    st = tsr_reducer_evr(reducer.get(), upto, &ratio);
    if (st != TSR_OK) return fail(st);
    std::printf("%.17g\n", ratio);
    return kExitOk;
}

int run_dump_recon(const std::string& model_path, const std::string& input,
                   const std::string& column, bool no_header, std::size_t stride,
                   const std::string& out_path) {
    if (!require_file(model_path, "model file")) return kExitConfig;
    if (!require_file(input, "input file")) return kExitConfig;

    tsr_reducer* raw_reducer = nullptr;
    tsr_status st = tsr_reducer_load(model_path.c_str(), &raw_reducer);
    if (st != TSR_OK) return fail(st);
    ReducerPtr reducer(raw_reducer);

    std::size_t window = 0;
    st = tsr_reducer_input_len(reducer.get(), &window);
    if (st != TSR_OK) return fail(st);

    tsr_series* raw_series = nullptr;
    st = tsr_series_load_csv(input.c_str(), column.c_str(), no_header ? 0 : 1, &raw_series);
    if (st != TSR_OK) return fail(st);
    SeriesPtr series(raw_series);

    tsr_matrix* raw_windows = nullptr;
    st = tsr_make_windows(series.get(), window, stride, &raw_windows);
    if (st != TSR_OK) return fail(st);
    MatrixPtr windows(raw_windows);

    tsr_matrix* raw_scores = nullptr;
    st = tsr_reducer_transform(reducer.get(), windows.get(), &raw_scores);
    if (st != TSR_OK) return fail(st);
    MatrixPtr scores(raw_scores);

    tsr_matrix* raw_recon = nullptr;
    st = tsr_reducer_inverse(reducer.get(), scores.get(), &raw_recon);
    if (st != TSR_OK) return fail(st);
    MatrixPtr recon(raw_recon);

    std::FILE* out = std::fopen(out_path.c_str(), "w");
    if (!out) {
        std::fprintf(stderr, "error: cannot open for writing: %s\n", out_path.c_str());
        return kExitRuntime;
    }
    std::fprintf(out, "window,step,original,reconstructed\n");
    const double* orig = tsr_matrix_data(windows.get());
    const double* rec = tsr_matrix_data(recon.get());
    const std::size_t rows = tsr_matrix_rows(windows.get());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < window; ++j) {
            std::fprintf(out, "%zu,%zu,%.17g,%.17g\n", i, j, orig[i * window + j],
                         rec[i * window + j]);
        }
    }
    std::fclose(out);
    std::printf("wrote %zu windows x %zu steps to %s\n", rows, window, out_path.c_str());
    return kExitOk;
}

int run_bench(const std::string& config_path, std::string csv_out, const std::string& json_out,
              bool ett_split) {
    if (!require_file(config_path, "config file")) return kExitConfig;
    if (csv_out.empty() && json_out.empty()) csv_out = "bench_report.csv";
    const tsr_status st =
        tsr_bench_run_split(config_path.c_str(), csv_out.empty() ? nullptr : csv_out.c_str(),
                            json_out.empty() ? nullptr : json_out.c_str(),
                            ett_split ? "ett" : nullptr);
    if (st != TSR_OK) return fail(st);
    if (!csv_out.empty()) std::printf("wrote %s\n", csv_out.c_str());
    if (!json_out.empty()) std::printf("wrote %s\n", json_out.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tsreduce: temporal dimension reduction toolkit"};
    app.set_version_flag("--version", std::string(tsr_version()));
    app.require_subcommand(1);

    // bench
    std::string bench_config, bench_csv, bench_json;
    bool bench_ett_split = false;
    auto* bench = app.add_subcommand("bench", "run an experiment grid from a JSON config");
    bench->add_option("--config", bench_config, "experiment config (JSON)")->required();
    bench->add_option("--out-csv", bench_csv, "report CSV path (default bench_report.csv)");
    bench->add_option("--out-json", bench_json, "report JSON path");
    bench->add_flag("--ett-split", bench_ett_split, "use the 0.6/0.2/0.2 ETT split convention");

    // shared data flags
    std::string input, column = "0", model_path, out_path;
    bool no_header = false;
    std::size_t window = 336, stride = 1, upto = 1;
    ReducerFlags flags;

    auto* fit = app.add_subcommand("fit", "fit a reducer on sliding windows of a CSV column");
    fit->add_option("--input", input, "input CSV")->required();
    fit->add_option("--column", column, "column name or zero-based index");
    fit->add_flag("--no-header", no_header, "input has no header row");
    fit->add_option("--window", window, "window length L")->required();
    fit->add_option("--stride", stride, "window stride");
    fit->add_option("--reducer", flags.kind,
                    "reducer kind: pca, pca_rand, patch_pca, truncate, downsample, fft, dwt");
    fit->add_option("-k,--components", flags.k, "components / kept coefficients");
    fit->add_option("--ds-stride", flags.stride, "downsample stride");
    fit->add_option("--patch-len", flags.patch_len, "patch length (patch_pca)");
    fit->add_flag("--per-position", flags.per_position, "per-position patch bases");
    fit->add_option("--seed", flags.seed, "seed (pca_rand)");
    fit->add_option("--oversample", flags.oversample, "oversampling columns (pca_rand)");
    fit->add_option("--power-iters", flags.power_iters, "power iterations (pca_rand)");
    fit->add_option("--fft-mode", flags.fft_mode, "fft feature mode: pairs or magnitude");
    fit->add_option("--out", out_path, "output model path")->required();

    auto* transform = app.add_subcommand("transform", "apply a saved reducer to CSV windows");
    transform->add_option("--model", model_path, "model JSON")->required();
    transform->add_option("--input", input, "input CSV")->required();
    transform->add_option("--column", column, "column name or zero-based index");
    transform->add_flag("--no-header", no_header, "input has no header row");
    transform->add_option("--stride", stride, "window stride");
    transform->add_option("--out", out_path, "output CSV of features")->required();

    auto* evr = app.add_subcommand("evr", "explained-variance ratio of a saved PCA model");
    evr->add_option("--model", model_path, "model JSON")->required();
    evr->add_option("--upto", upto, "number of leading components")->required();

    auto* dump = app.add_subcommand("dump-recon", "write original vs reconstructed windows");
    dump->add_option("--model", model_path, "model JSON")->required();
    dump->add_option("--input", input, "input CSV")->required();
    dump->add_option("--column", column, "column name or zero-based index");
    dump->add_flag("--no-header", no_header, "input has no header row");
    dump->add_option("--stride", stride, "window stride");
    dump->add_option("--out", out_path, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    if (bench->parsed()) return run_bench(bench_config, bench_csv, bench_json, bench_ett_split);
    if (fit->parsed()) return run_fit(input, column, no_header, window, stride, flags, out_path);
    if (transform->parsed())
        return run_transform(model_path, input, column, no_header, stride, out_path);
    if (evr->parsed()) return run_evr(model_path, upto);
    if (dump->parsed()) return run_dump_recon(model_path, input, column, no_header, stride, out_path);
    return kExitConfig;
}
