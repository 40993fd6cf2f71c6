// Copyright 2026 The geninv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "matrix.hpp"

namespace geninv {

enum class MatrixFormat { matrix_market, csv };

inline std::string_view to_string(MatrixFormat f) { return f == MatrixFormat::csv ? "csv" : "mm"; }

inline std::optional<MatrixFormat> matrix_format_from_string(std::string_view s) {
    if (s == "mm" || s == "mtx" || s == "matrix_market") {
        return MatrixFormat::matrix_market;
    }
    if (s == "csv") {
        return MatrixFormat::csv;
    }
    return std::nullopt;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t k = 0;
    while (k < s.size()) {
        while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) {
            ++k;
        }
        const std::size_t start = k;
        while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k]))) {
            ++k;
        }
        if (k > start) {
            out.push_back(s.substr(start, k - start));
        }
    }
    return out;
}

inline double parse_double(std::string_view tok, std::size_t line) {
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '+') {
        tok.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("not a number: '" + std::string(tok) + "'", line);
    }
    if (!std::isfinite(v)) {
        throw ParseError("non-finite value '" + std::string(tok) + "'", line);
    }
    return v;
}

inline std::size_t parse_count(std::string_view tok, std::size_t line) {
    tok = trim(tok);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("not a nonnegative integer: '" + std::string(tok) + "'", line);
    }
    return v;
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        if (!l.empty() && l.back() == '\r') {
            l.pop_back();
        }
        lines.push_back(std::move(l));
    }
    return lines;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Matrix Market (array, real, general) and CSV
// ---------------------------------------------------------------------------

inline DenseMatrix parse_matrix_market(const std::string& text) {
    const auto lines = detail::split_lines(text);
    if (lines.empty()) {
        throw ParseError("empty file", 1);
    }
    const std::string header = detail::lower(lines[0]);
    const auto head = detail::split_ws(header);
    if (head.size() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix" || head[2] != "array" ||
        head[3] != "real" || head[4] != "general") {
        throw ParseError("expected header '%%MatrixMarket matrix array real general'", 1);
    }
    std::size_t k = 1;
    auto next_content = [&]() {
        while (k < lines.size()) {
            const std::string_view t = detail::trim(lines[k]);
            if (!t.empty() && t.front() != '%') {
                return true;
            }
            ++k;
        }
        return false;
    };
    if (!next_content()) {
        throw ParseError("missing dimensions line", lines.size() + 1);
    }
    const auto dims = detail::split_ws(lines[k]);
    if (dims.size() != 2) {
        throw ParseError("dimensions line must hold 'rows cols'", k + 1);
    }
    const std::size_t m = detail::parse_count(dims[0], k + 1);
    const std::size_t n = detail::parse_count(dims[1], k + 1);
    ++k;
    std::vector<double> colmajor;
    colmajor.reserve(m * n);
    while (next_content()) {
        for (std::string_view tok : detail::split_ws(lines[k])) {
            if (colmajor.size() == m * n) {
                throw ParseError("more than " + std::to_string(m * n) + " values", k + 1);
            }
            colmajor.push_back(detail::parse_double(tok, k + 1));
        }
        ++k;
    }
    if (colmajor.size() != m * n) {
        throw ParseError("expected " + std::to_string(m * n) + " values, found " + std::to_string(colmajor.size()),
                         lines.size() + 1);
    }
    DenseMatrix A(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            A(i, j) = colmajor[j * m + i];
        }
    }
    return A;
}

inline DenseMatrix parse_csv(const std::string& text) {
    const auto lines = detail::split_lines(text);
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const std::string_view t = detail::trim(lines[k]);
        if (t.empty()) {
            continue;
        }
        std::size_t count = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = t.find(',', start);
            const std::string_view cell = t.substr(start, comma == std::string_view::npos ? t.npos : comma - start);
            values.push_back(detail::parse_double(cell, k + 1));
            ++count;
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            throw ParseError("row has " + std::to_string(count) + " values, expected " + std::to_string(cols), k + 1);
        }
        ++rows;
    }
    return DenseMatrix(rows, cols, std::move(values));
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string to_matrix_market(const DenseMatrix& A) {
    std::string s = "%%MatrixMarket matrix array real general\n";
    s += std::to_string(A.rows()) + " " + std::to_string(A.cols()) + "\n";
    for (std::size_t j = 0; j < A.cols(); ++j) {
        for (std::size_t i = 0; i < A.rows(); ++i) {
            s += format_double(A(i, j)) + "\n";
        }
    }
    return s;
}

inline std::string to_csv(const DenseMatrix& A) {
    std::string s;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) {
            s += (j ? "," : "") + format_double(A(i, j));
        }
        s += "\n";
    }
    return s;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw IoError("cannot write '" + path.string() + "'");
    }
}

/// Format from the extension (.mtx/.mm or .csv), otherwise sniffed from the
/// first bytes.
inline MatrixFormat guess_format(const std::filesystem::path& path, std::string_view text) {
    const std::string ext = detail::lower(path.extension().string());
    if (ext == ".mtx" || ext == ".mm") {
        return MatrixFormat::matrix_market;
    }
    if (ext == ".csv") {
        return MatrixFormat::csv;
    }
    return text.substr(0, 2) == "%%" ? MatrixFormat::matrix_market : MatrixFormat::csv;
}

inline DenseMatrix parse_matrix(const std::string& text, MatrixFormat f) {
    return f == MatrixFormat::csv ? parse_csv(text) : parse_matrix_market(text);
}

inline DenseMatrix read_matrix(const std::filesystem::path& path, std::optional<MatrixFormat> f = std::nullopt) {
    const std::string text = read_file(path);
    try {
        return parse_matrix(text, f.value_or(guess_format(path, text)));
    } catch (const ParseError& e) {
        throw ParseError(e.detail(), e.line(), path.string());
    }
}

inline void write_matrix(const std::filesystem::path& path, const DenseMatrix& A, MatrixFormat f) {
    write_file(path, f == MatrixFormat::csv ? to_csv(A) : to_matrix_market(A));
}

/// A matrix with a single row or column read as a vector.
inline Vector as_vector(const DenseMatrix& A) {
    if (A.rows() != 1 && A.cols() != 1) {
        throw ShapeError("expected a vector, got a " + A.shape_string() + " matrix");
    }
    return Vector(A.data().begin(), A.data().end());
}

// ---------------------------------------------------------------------------
// Edge lists
// ---------------------------------------------------------------------------

/// One `i j w` triple per line; `#` starts a comment. Node count is one past
/// the largest index unless `node_count` is larger.
inline WeightedGraph parse_edge_list(const std::string& text, bool one_based = false, std::size_t node_count = 0) {
    const auto lines = detail::split_lines(text);
    std::vector<Edge> edges;
    std::size_t n = node_count;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        std::string_view t = lines[k];
        if (const auto hash = t.find('#'); hash != t.npos) {
            t = t.substr(0, hash);
        }
        const auto tok = detail::split_ws(t);
        if (tok.empty()) {
            continue;
        }
        if (tok.size() != 3) {
            throw ParseError("expected 'i j w', found " + std::to_string(tok.size()) + " fields", k + 1);
        }
        std::size_t i = detail::parse_count(tok[0], k + 1);
        std::size_t j = detail::parse_count(tok[1], k + 1);
        const double w = detail::parse_double(tok[2], k + 1);
        if (one_based) {
            if (i == 0 || j == 0) {
                throw ParseError("node index 0 in a one-based edge list", k + 1);
            }
            --i;
            --j;
        }
        if (i == j) {
            throw ParseError("self-loop on node " + std::string(tok[0]), k + 1);
        }
        if (!(w > 0.0)) {
            throw ParseError("conductance must be positive", k + 1);
        }
        n = std::max({n, i + 1, j + 1});
        edges.push_back({i, j, w});
    }
    return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph read_edge_list(const std::filesystem::path& path, bool one_based = false,
                                    std::size_t node_count = 0) {
    const std::string text = read_file(path);
    try {
        return parse_edge_list(text, one_based, node_count);
    } catch (const ParseError& e) {
        throw ParseError(e.detail(), e.line(), path.string());
    }
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace geninv
