#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/series.hpp"

namespace flowcast {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline bool is_missing_marker(const std::string& cell) {
    if (cell.empty()) return true;
    if (cell.size() == 2 && (cell[0] == 'N' || cell[0] == 'n') && (cell[1] == 'A' || cell[1] == 'a'))
        return true;
    return false;
}

/// Full-precision parse; "." decimal point only, no locale involvement.
inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    const char* begin = cell.c_str();
    const char* end = begin + cell.size();
    if (begin != end && *begin == '+') ++begin;  // from_chars rejects a leading plus
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw DataError("csv: non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                        ", column " + std::to_string(col));
    return v;
}

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Reads a comma-separated table into a Dataset (column 0 = target). Empty
/// cells and "NA" (case-insensitive) become missing markers; anything else
/// must parse as a number. Rows must all have the same arity.
inline Dataset load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw DataError("csv: cannot open '" + path + "'");

    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    std::size_t ncols = 0;
    std::size_t data_rows = 0;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> cells = detail::split_row(line);

        if (lineno == 1 && has_header) {
            names = cells;
            ncols = cells.size();
            columns.resize(ncols);
            continue;
        }
        if (ncols == 0) {
            ncols = cells.size();
            columns.resize(ncols);
        }
        if (cells.size() != ncols)
            throw DataError("csv: ragged rows in '" + path + "': row " + std::to_string(lineno) +
                            " has " + std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(ncols));
        for (std::size_t c = 0; c < ncols; ++c) {
            if (detail::is_missing_marker(cells[c]))
                columns[c].push_back(missing_value());
            else
                columns[c].push_back(detail::parse_cell(cells[c], lineno, c));
        }
        ++data_rows;
    }
    if (data_rows == 0) throw DataError("csv: '" + path + "' contains no data rows");

    Dataset out;
    for (std::size_t c = 0; c < ncols; ++c) {
        std::string name = (c < names.size() && !names[c].empty()) ? names[c] : "col" + std::to_string(c);
        out.features.emplace_back(std::move(name), std::move(columns[c]));
    }
    out.validate();
    return out;
}

/// Writes the dataset back out with %.17g cells, so load(save(x)) is exact.
/// Missing samples serialize as empty cells.
inline void save_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("csv: cannot write '" + path + "'");
    for (std::size_t c = 0; c < dataset.m(); ++c) {
        if (c) out << ',';
        out << dataset.features[c].name;
    }
    out << '\n';
    for (std::size_t r = 0; r < dataset.n(); ++r) {
        for (std::size_t c = 0; c < dataset.m(); ++c) {
            if (c) out << ',';
            const double v = dataset.features[c].values[r];
            if (!is_missing(v)) out << detail::format_value(v);
        }
        out << '\n';
    }
    if (!out) throw DataError("csv: write failed for '" + path + "'");
}

}  // namespace flowcast
