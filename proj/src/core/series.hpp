#pragma once

#include <string>
#include <vector>

namespace tsr {

// One univariate series. Multivariate files contribute a single selected
// column. All values are finite; loaders reject anything else.
struct TimeSeries {
    std::string name;
    std::vector<double> values;
};

struct ZScoreParams {
    double mean = 0.0;
    double std = 1.0;
};

// Fractions of a chronological train/val/test split; each in (0,1), summing
// to 1 within 1e-9.
struct SplitSpec {
    double train_frac = 0.7;
    double val_frac = 0.1;
    double test_frac = 0.2;
};

// ETT convention used by the common forecasting codebases.
inline SplitSpec ett_split() { return {0.6, 0.2, 0.2}; }

struct SeriesSplit {
    TimeSeries train;
    TimeSeries val;
    TimeSeries test;
};

// Loads one column of a comma-separated file. `column` is a header name or,
// when it parses as a non-negative integer (or the file has no header), a
// zero-based column index. Parse errors report the 1-based file line.
TimeSeries load_csv(const std::string& path, const std::string& column, bool has_header);

// Population standard deviation, clamped to 1e-8 for constant input.
ZScoreParams zscore_fit(const std::vector<double>& train_values);
std::vector<double> zscore_apply(const ZScoreParams& params, const std::vector<double>& values);

// Contiguous chronological segments with boundaries at floor(N*train) and
// floor(N*(train+val)). Every segment must end up non-empty.
SeriesSplit chrono_split(const TimeSeries& series, const SplitSpec& spec);

}  // namespace tsr
