#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace driftbench {

/// One year of the yield / return series.
struct SeriesRow {
    long year = 0;
    double yield = 0.0;
    double ret = 0.0;
};

/// Input CSV, header `year,yield,return`, years strictly increasing.
struct SeriesFrame {
    std::vector<SeriesRow> rows;
};

/// Throws DataError naming the offending line for malformed rows,
/// non-increasing years, or a file without data rows.
SeriesFrame load_series(const std::filesystem::path& path);

void write_series(const SeriesFrame& frame, const std::filesystem::path& path);

struct ResultRow {
    std::size_t step = 0;
    std::string filter;
    double obs_yield = 0.0;
    double obs_return = 0.0;
    double est_yield = 0.0;
    double est_return = 0.0;
    std::optional<double> true_yield;
    std::optional<double> true_return;

    bool operator==(const ResultRow&) const = default;
};

struct ResultFrame {
    std::vector<ResultRow> rows;
};

/// Header `step,filter,obs_yield,obs_return,est_yield,est_return,true_yield,true_return`;
/// absent truth is an empty cell. Numbers use shortest round-trip formatting.
void write_results(const ResultFrame& frame, const std::filesystem::path& path);

ResultFrame load_results(const std::filesystem::path& path);

/// Shortest decimal that parses back to exactly `value`.
std::string format_number(double value);

/// Splits one CSV line on commas (no quoting), trimming spaces and a trailing CR.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace driftbench
