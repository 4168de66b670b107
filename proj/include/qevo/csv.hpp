#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qevo {

using CsvCell = std::variant<long long, double, std::string>;
using CsvRow = std::vector<CsvCell>;

// Reals carry 9 significant digits; non-finite values spell NaN / Inf.
inline std::string format_real(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string format_cell(const CsvCell& cell) {
    if (std::holds_alternative<long long>(cell)) return std::to_string(std::get<long long>(cell));
    if (std::holds_alternative<double>(cell)) return format_real(std::get<double>(cell));
    return std::get<std::string>(cell);
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<CsvRow>& rows) {
    std::ofstream os(path, std::ios::binary);  // binary keeps line endings byte-stable
    if (!os) throw std::runtime_error("write_csv: cannot open '" + path + "'");
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width differs from header");
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
        os << '\n';
    }
    if (!os) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

}  // namespace qevo
