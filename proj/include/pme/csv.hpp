#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pme/errors.hpp"
#include "pme/penalty.hpp"

namespace pme {

/// Parsed numeric table with its header row.
struct CsvTable {
    std::vector<std::string> header;
    Matrix values;
};

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_cell(std::string_view cell, std::size_t line, std::size_t column) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw ParseError("cannot parse '" + std::string(cell) + "' as a number", line, column);
    return v;
}

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

/// Reads a comma-separated numeric table with one header row. Line numbers in
/// errors are 1-based with the header on line 1; columns are 1-based.
inline CsvTable load_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "': missing header row", 1, 1);
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    for (auto h : detail::split_commas(line)) t.header.emplace_back(detail::trim(h));
    const std::size_t cols = t.header.size();

    std::vector<double> flat;
    std::size_t lineno = 1;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_commas(line);
        if (cells.size() != cols) throw RaggedRowError(lineno, cells.size(), cols);
        for (std::size_t j = 0; j < cells.size(); ++j)
            flat.push_back(detail::parse_cell(cells[j], lineno, j + 1));
        ++rows;
    }
    t.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = flat[i * cols + j];
    return t;
}

inline Matrix load_matrix_csv(const std::string& path) { return load_table_csv(path).values; }

/// Single-column file, or a one-row file, read as a vector.
inline Vector load_vector_csv(const std::string& path) {
    const Matrix m = load_matrix_csv(path);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    throw ShapeError("'" + path + "' holds a " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " table, expected a single column");
}

/// Splits a table into the feature matrix (every other column, in order) and
/// the named response column.
inline std::pair<Matrix, Vector> load_design_table(const std::string& path, const std::string& response) {
    const CsvTable t = load_table_csv(path);
    Eigen::Index resp = -1;
    for (std::size_t j = 0; j < t.header.size(); ++j)
        if (t.header[j] == response) resp = static_cast<Eigen::Index>(j);
    if (resp < 0) throw IoError("'" + path + "' has no column named '" + response + "'");
    Matrix X(t.values.rows(), t.values.cols() - 1);
    for (Eigen::Index j = 0, k = 0; j < t.values.cols(); ++j)
        if (j != resp) X.col(k++) = t.values.col(j);
    return {std::move(X), t.values.col(resp)};
}

inline void write_matrix_csv(std::ostream& os, const Matrix& m, const std::vector<std::string>& header) {
    if (static_cast<Eigen::Index>(header.size()) != m.cols()) throw ShapeError("header length differs from column count");
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
    os << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << detail::format_double(m(i, j));
        os << '\n';
    }
}

/// Writes with shortest round-trip formatting; header defaults to x1..xp.
inline void save_matrix_csv(const std::string& path, const Matrix& m, std::vector<std::string> header = {}) {
    if (header.empty())
        for (Eigen::Index j = 0; j < m.cols(); ++j) header.push_back("x" + std::to_string(j + 1));
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_matrix_csv(out, m, header);
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline void save_vector_csv(const std::string& path, const Vector& v, const std::string& name = "value") {
    save_matrix_csv(path, Matrix(v), {name});
}

}  // namespace pme
