#include "driftbench/data.hpp"

#include "driftbench/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace driftbench {

namespace {

constexpr const char* kSeriesHeader = "year,yield,return";
constexpr const char* kResultHeader =
    "step,filter,obs_yield,obs_return,est_yield,est_return,true_yield,true_return";

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string where(const std::filesystem::path& path, std::size_t line)
{
    return path.string() + ":" + std::to_string(line) + ": ";
}

template <typename T>
T parse(const std::string& cell, const std::filesystem::path& path, std::size_t line,
        const char* column)
{
    T value{};
    const char* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (cell.empty() || ec != std::errc() || ptr != end) {
        throw DataError(where(path, line) + "column '" + column + "' is not numeric: '" + cell +
                        "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            throw DataError(where(path, line) + "column '" + column + "' is not finite");
        }
    }
    return value;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) {
        throw DataError("write to '" + path.string() + "' failed");
    }
}

// Reads the header line, returning false for an empty file.
bool read_header(std::istream& in, const std::filesystem::path& path, const char* expected)
{
    std::string line;
    if (!std::getline(in, line)) {
        return false;
    }
    if (trim(line) != expected) {
        throw DataError(where(path, 1) + "expected header '" + expected + "', got '" + trim(line) +
                        "'");
    }
    return true;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

std::string format_number(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) {
        throw DataError("cannot format number");
    }
    return std::string(buf, ptr);
}

SeriesFrame load_series(const std::filesystem::path& path)
{
    std::ifstream in = open_input(path);
    SeriesFrame frame;
    if (!read_header(in, path, kSeriesHeader)) {
        throw DataError(path.string() + ": no data rows");
    }
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != 3) {
            throw DataError(where(path, lineno) + "expected 3 columns, found " +
                            std::to_string(cells.size()));
        }
        SeriesRow row{parse<long>(cells[0], path, lineno, "year"),
                      parse<double>(cells[1], path, lineno, "yield"),
                      parse<double>(cells[2], path, lineno, "return")};
        if (!frame.rows.empty() && row.year <= frame.rows.back().year) {
            throw DataError(where(path, lineno) + "year " + std::to_string(row.year) +
                            " does not increase on the previous row");
        }
        frame.rows.push_back(row);
    }
    if (frame.rows.empty()) {
        throw DataError(path.string() + ": no data rows");
    }
    return frame;
}

void write_series(const SeriesFrame& frame, const std::filesystem::path& path)
{
    std::ofstream out = open_output(path);
    out << kSeriesHeader << '\n';
    for (const auto& r : frame.rows) {
        out << r.year << ',' << format_number(r.yield) << ',' << format_number(r.ret) << '\n';
    }
    finish(out, path);
}

void write_results(const ResultFrame& frame, const std::filesystem::path& path)
{
    std::ofstream out = open_output(path);
    out << kResultHeader << '\n';
    for (const auto& r : frame.rows) {
        out << r.step << ',' << r.filter << ',' << format_number(r.obs_yield) << ','
            << format_number(r.obs_return) << ',' << format_number(r.est_yield) << ','
            << format_number(r.est_return) << ','
            << (r.true_yield ? format_number(*r.true_yield) : "") << ','
            << (r.true_return ? format_number(*r.true_return) : "") << '\n';
    }
    finish(out, path);
}

ResultFrame load_results(const std::filesystem::path& path)
{
    std::ifstream in = open_input(path);
    ResultFrame frame;
    if (!read_header(in, path, kResultHeader)) {
        throw DataError(path.string() + ": missing header");
    }
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        const auto c = split_csv_line(line);
        if (c.size() != 8) {
            throw DataError(where(path, lineno) + "expected 8 columns, found " +
                            std::to_string(c.size()));
        }
        ResultRow r;
        r.step = parse<std::size_t>(c[0], path, lineno, "step");
        r.filter = c[1];
        r.obs_yield = parse<double>(c[2], path, lineno, "obs_yield");
        r.obs_return = parse<double>(c[3], path, lineno, "obs_return");
        r.est_yield = parse<double>(c[4], path, lineno, "est_yield");
        r.est_return = parse<double>(c[5], path, lineno, "est_return");
        if (!c[6].empty()) r.true_yield = parse<double>(c[6], path, lineno, "true_yield");
        if (!c[7].empty()) r.true_return = parse<double>(c[7], path, lineno, "true_return");
        frame.rows.push_back(std::move(r));
    }
    return frame;
}

}  // namespace driftbench
