#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "primefreq/errors.hpp"

namespace primefreq {

/// Shortest-round-trip style formatting at 17 significant digits.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m,
                             const std::vector<std::string>* header = nullptr) {
    if (header) {
        for (std::size_t j = 0; j < header->size(); ++j) {
            if (j) out << ',';
            out << (*header)[j];
        }
        out << '\n';
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

/// Parse a rectangular CSV of doubles. Ragged rows raise
/// dimension_mismatch_error; anything unparsable raises io_error.
inline Eigen::MatrixXd read_matrix_csv(std::istream& in, bool skip_header = false) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            std::string_view field(line.data() + pos, comma - pos);
            // trim blanks
            while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
                field.remove_prefix(1);
            while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
                field.remove_suffix(1);
            double value = 0.0;
            const auto [ptr, ec] =
                std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc{} || ptr != field.data() + field.size()) {
                throw io_error("unparsable CSV field: '" + std::string(field) + "'");
            }
            row.push_back(value);
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw dimension_mismatch_error(
                "ragged CSV: row " + std::to_string(rows.size() + 1) + " has " +
                std::to_string(row.size()) + " fields, expected " +
                std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw empty_input_error("CSV contains no data rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

} // namespace primefreq
