#pragma once

// Minimal CSV machinery for the fixed artifact schemas. Fields in those
// schemas never contain commas or quotes, so plain splitting is enough.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "frm/dates.hpp"
#include "frm/errors.hpp"

namespace frm::csv {

inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // row numbers reported 1-based incl. header
    std::vector<std::string> comments;           // leading '#' lines
};

inline Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    Table table;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.comments.push_back(line);
            continue;
        }
        if (!have_header) {
            table.header = split(line);
            have_header = true;
            continue;
        }
        auto fields = split(line);
        if (fields.size() != table.header.size()) {
            throw InputError("'" + path + "' line " + std::to_string(lineno) + ": expected " +
                             std::to_string(table.header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (!have_header) throw InputError("'" + path + "' is empty");
    return table;
}

inline double parse_double(const std::string& text, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw InputError(context + ": cannot parse number '" + text + "'");
    }
}

/// 12 significant digits; artifact precision for emitted tables.
inline std::string format_value(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

/// Full precision; round-trips doubles exactly.
inline std::string format_exact(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

/// Date-indexed single-value series (date,value header expected).
inline std::vector<std::pair<Date, double>> read_series(const std::string& path) {
    const Table table = read_table(path);
    if (table.header.size() != 2) {
        throw InputError("'" + path + "': expected two columns (date,value)");
    }
    std::vector<std::pair<Date, double>> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        out.emplace_back(Date::parse(row[0]), parse_double(row[1], path));
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (!(out[i - 1].first < out[i].first)) {
            throw InputError("'" + path + "': dates must be strictly increasing");
        }
    }
    return out;
}

inline void write_series(const std::string& path, const std::string& value_name,
                         const std::vector<std::pair<Date, double>>& series) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << "date," << value_name << "\n";
    for (const auto& [date, value] : series) {
        out << date.to_string() << ',' << format_value(value) << "\n";
    }
}

} // namespace frm::csv
