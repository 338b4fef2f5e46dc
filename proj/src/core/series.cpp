#include "series.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace tsr {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_index(const std::string& s, std::size_t& out) {
    if (s.empty()) return false;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return false;
    }
    errno = 0;
    char* end = nullptr;
    unsigned long v = std::strtoul(s.c_str(), &end, 10);
    if (errno != 0 || end == nullptr || *end != '\0') return false;
    out = static_cast<std::size_t>(v);
    return true;
}

double parse_cell(const std::string& cell, std::size_t line_no, const std::string& path) {
    const std::string t = trim(cell);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end == nullptr || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError(path + ": cannot parse cell \"" + cell + "\" as a number at row " +
                         std::to_string(line_no));
    }
    return v;
}

}  // namespace

TimeSeries load_csv(const std::string& path, const std::string& column, bool has_header) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }

    std::string line;
    std::size_t line_no = 0;
    std::size_t col_index = 0;
    std::string col_name = column;

    if (has_header) {
        if (!std::getline(in, line)) {
            throw ParseError(path + ": empty file, expected a header row");
        }
        ++line_no;
        const auto headers = split_fields(line);
        auto it = std::find_if(headers.begin(), headers.end(),
                               [&](const std::string& h) { return trim(h) == column; });
        if (it != headers.end()) {
            col_index = static_cast<std::size_t>(it - headers.begin());
        } else if (parse_index(column, col_index)) {
            if (col_index >= headers.size()) {
                throw ParseError(path + ": column index " + column + " out of range (file has " +
                                 std::to_string(headers.size()) + " columns)");
            }
            col_name = trim(headers[col_index]);
        } else {
            throw ParseError(path + ": column \"" + column + "\" not found in header");
        }
    } else {
        if (!parse_index(column, col_index)) {
            throw ParseError(path + ": file has no header, column must be a zero-based index (got \"" +
                             column + "\")");
        }
    }

    TimeSeries series;
    series.name = col_name;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (col_index >= fields.size()) {
            throw ParseError(path + ": row " + std::to_string(line_no) + " has only " +
                             std::to_string(fields.size()) + " columns, need index " +
                             std::to_string(col_index));
        }
        series.values.push_back(parse_cell(fields[col_index], line_no, path));
    }
    if (series.values.empty()) {
        throw ParseError(path + ": no data rows");
    }
    return series;
}

ZScoreParams zscore_fit(const std::vector<double>& train_values) {
    if (train_values.empty()) {
        throw std::invalid_argument("zscore_fit: empty input");
    }
    const double n = static_cast<double>(train_values.size());
    double mean = 0.0;
    for (double v : train_values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : train_values) var += (v - mean) * (v - mean);
    var /= n;
    double std = std::sqrt(var);
    if (std < 1e-8) std = 1e-8;
    return {mean, std};
}

std::vector<double> zscore_apply(const ZScoreParams& params, const std::vector<double>& values) {
    if (values.empty()) {
        throw std::invalid_argument("zscore_apply: empty input");
    }
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - params.mean) / params.std;
    return out;
}

namespace {

// floor with a round-to-nearest guard: 0.7 + 0.1 accumulates to just under
// 0.8 in binary, which must still land on the 0.8*N boundary.
std::size_t split_boundary(std::size_t n, double frac) {
    const double v = static_cast<double>(n) * frac;
    const double nearest = std::round(v);
    if (std::fabs(v - nearest) < 1e-6) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::floor(v));
}

}  // namespace

SeriesSplit chrono_split(const TimeSeries& series, const SplitSpec& spec) {
    const double fracs[3] = {spec.train_frac, spec.val_frac, spec.test_frac};
    for (double f : fracs) {
        if (!(f > 0.0 && f < 1.0)) {
            throw std::invalid_argument("chrono_split: each fraction must lie in (0,1)");
        }
    }
    if (std::fabs(spec.train_frac + spec.val_frac + spec.test_frac - 1.0) > 1e-9) {
        throw std::invalid_argument("chrono_split: fractions must sum to 1");
    }
    const std::size_t n = series.values.size();
    const std::size_t b1 = split_boundary(n, spec.train_frac);
    const std::size_t b2 = split_boundary(n, spec.train_frac + spec.val_frac);
    if (b1 == 0 || b2 <= b1 || b2 >= n) {
        throw std::invalid_argument("chrono_split: series of length " + std::to_string(n) +
                                    " leaves an empty segment under the given fractions");
    }
    SeriesSplit out;
    out.train.name = series.name;
    out.val.name = series.name;
    out.test.name = series.name;
    out.train.values.assign(series.values.begin(), series.values.begin() + b1);
    out.val.values.assign(series.values.begin() + b1, series.values.begin() + b2);
    out.test.values.assign(series.values.begin() + b2, series.values.end());
    return out;
}

}  // namespace tsr
