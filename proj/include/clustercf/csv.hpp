#ifndef CLUSTERCF_CSV_HPP
#define CLUSTERCF_CSV_HPP

#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clustercf/schema.hpp"

namespace clustercf {

struct CsvOptions {
    bool has_header = true;
    std::set<std::string> categorical_hints;
};

namespace detail {

inline bool parse_real(const std::string& token, double& out) {
    if (token.empty()) return false;
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + token.size();
}

inline std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace detail

/// Loads a rectangular comma-separated table. Columns where every value
/// parses as a real number become numeric (unless hinted categorical);
/// everything else is categorical. Ranges and domains are computed from
/// the data. Ragged rows, empty files, and missing cells are format
/// errors; there is no imputation.
inline Dataset load_csv(const std::string& path, const CsvOptions& options = {}) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open CSV file: " + path);

    std::vector<std::vector<std::string>> table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        table.push_back(detail::split_csv_line(line));
    }
    if (table.empty()) throw FormatError("empty CSV file: " + path);

    std::vector<std::string> names;
    std::size_t first_row = 0;
    const std::size_t width = table[0].size();
    if (options.has_header) {
        names = table[0];
        first_row = 1;
        if (table.size() == 1) throw FormatError("CSV has a header but no data rows: " + path);
    } else {
        names.reserve(width);
        for (std::size_t c = 0; c < width; ++c) names.push_back("col_" + std::to_string(c));
    }

    for (std::size_t r = first_row; r < table.size(); ++r) {
        if (table[r].size() != width)
            throw FormatError("ragged row " + std::to_string(r + 1) + " in " + path);
        for (const auto& cell : table[r])
            if (cell.empty())
                throw FormatError("missing cell in row " + std::to_string(r + 1) + " of " + path);
    }

    const std::size_t n = table.size() - first_row;
    std::vector<FeatureSpec> specs;
    specs.reserve(width);
    for (std::size_t c = 0; c < width; ++c) {
        bool numeric = options.categorical_hints.count(names[c]) == 0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t r = first_row; numeric && r < table.size(); ++r) {
            double v;
            if (!detail::parse_real(table[r][c], v)) {
                numeric = false;
                break;
            }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (numeric) {
            specs.push_back(FeatureSpec::numeric(names[c], lo, hi));
        } else {
            std::vector<std::string> domain;
            domain.reserve(n);
            for (std::size_t r = first_row; r < table.size(); ++r) domain.push_back(table[r][c]);
            specs.push_back(FeatureSpec::categorical(names[c], std::move(domain)));
        }
    }

    Dataset ds;
    ds.schema = FeatureSchema(std::move(specs));
    ds.id = path;
    ds.rows.reserve(n);
    for (std::size_t r = first_row; r < table.size(); ++r) {
        Instance row;
        row.values.reserve(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (ds.schema.at(c).kind == FeatureKind::Numeric) {
                double v;
                detail::parse_real(table[r][c], v);
                row.values.emplace_back(v);
            } else {
                row.values.emplace_back(table[r][c]);
            }
        }
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

} // namespace clustercf

#endif
