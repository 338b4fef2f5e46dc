/* tsreduce — temporal dimension reduction for time series.
 *
 * C API over the C++ core: opaque handles, integer status codes, and a
 * per-thread error message. Every function that can fail returns tsr_status;
 * out-parameters are written only on TSR_OK. Handles are freed with the
 * matching *_free function (safe on NULL).
 */
#ifndef TSREDUCE_H
#define TSREDUCE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsr_status {
    TSR_OK = 0,
    TSR_ERR_INVALID = 1, /* contract violation: bad shape, range, argument */
    TSR_ERR_PARSE = 2,   /* malformed CSV/JSON input */
    TSR_ERR_IO = 3,      /* file open/read/write failure */
    TSR_ERR_NUMERIC = 4, /* non-convergence, singular system */
    TSR_ERR_CONFIG = 5,  /* invalid experiment configuration */
    TSR_ERR_INTERNAL = 6
} tsr_status;

/* Library version string, e.g. "0.1.0". */
const char* tsr_version(void);

/* Message for the most recent failure on the calling thread ("" if none). */
const char* tsr_last_error(void);

typedef struct tsr_series tsr_series;
typedef struct tsr_matrix tsr_matrix;
typedef struct tsr_reducer tsr_reducer;

/* ---- series ---------------------------------------------------------- */

/* Loads one column of a comma-separated file. `column` is a header name or a
 * zero-based index written in decimal. */
tsr_status tsr_series_load_csv(const char* path, const char* column, int has_header,
                               tsr_series** out);
tsr_status tsr_series_from_values(const double* values, size_t count, tsr_series** out);
size_t tsr_series_length(const tsr_series* series);
const double* tsr_series_values(const tsr_series* series);
void tsr_series_free(tsr_series* series);

/* ---- matrices (row-major doubles) ------------------------------------ */

tsr_status tsr_matrix_create(size_t rows, size_t cols, const double* row_major, tsr_matrix** out);
size_t tsr_matrix_rows(const tsr_matrix* m);
size_t tsr_matrix_cols(const tsr_matrix* m);
const double* tsr_matrix_data(const tsr_matrix* m);
/* Plain numeric CSV, one row per line, 17 significant digits. */
tsr_status tsr_matrix_save_csv(const tsr_matrix* m, const char* path);
void tsr_matrix_free(tsr_matrix* m);

/* ---- windowing -------------------------------------------------------- */

/* Sliding windows of length `window` taken every `stride` steps. */
tsr_status tsr_make_windows(const tsr_series* series, size_t window, size_t stride,
                            tsr_matrix** out);

/* Windows plus the following `horizon` values as forecast targets. */
tsr_status tsr_make_forecast_windows(const tsr_series* series, size_t window, size_t horizon,
                                     size_t stride, tsr_matrix** x_out, tsr_matrix** y_out);

/* ---- reducers --------------------------------------------------------- */

/* spec_json example: {"kind":"pca","k":48}. Kinds: none, pca, pca_rand,
 * patch_pca, truncate, downsample, fft, dwt. */
tsr_status tsr_reducer_create(const char* spec_json, tsr_reducer** out);
tsr_status tsr_reducer_fit(tsr_reducer* reducer, const tsr_matrix* train_windows);
tsr_status tsr_reducer_transform(const tsr_reducer* reducer, const tsr_matrix* windows,
                                 tsr_matrix** out);
/* Reconstruction back to window space (pca, fft pairs, dwt). */
tsr_status tsr_reducer_inverse(const tsr_reducer* reducer, const tsr_matrix* features,
                               tsr_matrix** out);
tsr_status tsr_reducer_input_len(const tsr_reducer* reducer, size_t* out);
tsr_status tsr_reducer_output_width(const tsr_reducer* reducer, size_t* out);
/* Cumulative explained-variance ratio of the first `upto` components; PCA
 * reducers only. */
tsr_status tsr_reducer_evr(const tsr_reducer* reducer, size_t upto, double* out);
const char* tsr_reducer_kind(const tsr_reducer* reducer);
tsr_status tsr_reducer_save(const tsr_reducer* reducer, const char* path);
tsr_status tsr_reducer_load(const char* path, tsr_reducer** out);
void tsr_reducer_free(tsr_reducer* reducer);

/* ---- benchmark harness ------------------------------------------------ */

/* Runs the experiment grid described by a config file and writes the report
 * to the given paths (either may be NULL to skip that format). */
tsr_status tsr_bench_run(const char* config_path, const char* csv_out, const char* json_out);

/* As tsr_bench_run, with the config's split overridden by a preset:
 * "default" (0.7/0.1/0.2) or "ett" (0.6/0.2/0.2). NULL keeps the config. */
tsr_status tsr_bench_run_split(const char* config_path, const char* csv_out, const char* json_out,
                               const char* split_preset);

#ifdef __cplusplus
}
#endif

#endif /* TSREDUCE_H */
