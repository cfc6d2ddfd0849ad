#include "resofit/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "decimal.hpp"
#include "resofit/errors.hpp"
#include "resofit/log.hpp"

namespace resofit {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

// Maps required column names to their indices; throws if one is missing.
std::map<std::string, std::size_t> header_index(const std::string& header_line,
                                                const std::vector<std::string>& required) {
    const auto cells = split_csv_line(header_line);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < cells.size(); ++i) index[to_lower(cells[i])] = i;
    for (const auto& name : required)
        if (index.find(name) == index.end())
            throw Error(ErrorCode::parse, "trace-io", "csv: missing column '" + name + "'");
    return index;
}

double numeric_cell(const std::vector<std::string>& cells, std::size_t col,
                    std::size_t line_no, const std::string& name) {
    if (col >= cells.size())
        throw Error(ErrorCode::parse, "trace-io",
                    "csv line " + std::to_string(line_no) + ": missing cell '" + name + "'");
    const auto v = detail::parse_number(cells[col]);
    if (!v || !std::isfinite(*v))
        throw Error(ErrorCode::parse, "trace-io",
                    "csv line " + std::to_string(line_no) + ": non-numeric cell '" +
                        cells[col] + "' in column '" + name + "'");
    return *v;
}

} // namespace

CsvTrace parse_csv(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(stream, line))
        throw Error(ErrorCode::parse, "trace-io", "csv: empty document");
    ++line_no;
    const auto index = header_index(line, {"freq_hz", "re", "im"});

    struct Row {
        double freq, re, im;
    };
    std::vector<Row> rows;
    while (std::getline(stream, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        rows.push_back({numeric_cell(cells, index.at("freq_hz"), line_no, "freq_hz"),
                        numeric_cell(cells, index.at("re"), line_no, "re"),
                        numeric_cell(cells, index.at("im"), line_no, "im")});
    }

    bool reordered = false;
    if (!std::is_sorted(rows.begin(), rows.end(),
                        [](const Row& a, const Row& b) { return a.freq < b.freq; })) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.freq < b.freq; });
        reordered = true;
        log::warn("csv: rows were not in frequency order; sorted");
    }
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].freq == rows[i - 1].freq)
            throw Error(ErrorCode::parse, "trace-io",
                        "csv: duplicate frequency " + detail::format_double(rows[i].freq));

    CsvTrace out;
    out.reordered = reordered;
    out.trace.frequencies_hz.reserve(rows.size());
    out.trace.samples.reserve(rows.size());
    for (const Row& row : rows) {
        out.trace.frequencies_hz.push_back(row.freq);
        out.trace.samples.emplace_back(row.re, row.im);
    }
    out.trace.validate("csv");
    return out;
}

std::vector<TempSweepPoint> parse_temperature_csv(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(stream, line))
        throw Error(ErrorCode::parse, "trace-io", "csv: empty document");
    ++line_no;
    const auto index = header_index(line, {"temperature_k", "delta_f_hz", "q_i"});

    std::vector<TempSweepPoint> points;
    while (std::getline(stream, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        TempSweepPoint p;
        p.temperature_k = numeric_cell(cells, index.at("temperature_k"), line_no, "temperature_k");
        p.delta_f_hz = numeric_cell(cells, index.at("delta_f_hz"), line_no, "delta_f_hz");
        p.q_i = numeric_cell(cells, index.at("q_i"), line_no, "q_i");
        if (!(p.temperature_k > 0))
            throw Error(ErrorCode::parse, "trace-io",
                        "csv line " + std::to_string(line_no) + ": temperature must be positive");
        if (!(p.q_i > 0))
            throw Error(ErrorCode::parse, "trace-io",
                        "csv line " + std::to_string(line_no) + ": q_i must be positive");
        points.push_back(p);
    }
    return points;
}

} // namespace resofit
