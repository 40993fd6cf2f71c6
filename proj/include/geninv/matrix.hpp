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
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace geninv {

using Vector = std::vector<double>;
using IndexList = std::vector<std::size_t>;

inline constexpr double machine_epsilon = std::numeric_limits<double>::epsilon();

/// Real rectangular matrix in row-major storage.
///
/// Constructors that take entries reject NaN and infinities. Element access
/// through `operator()` is unchecked, so callers writing entries directly are
/// responsible for keeping them finite. Zero-sized shapes (0 x n, m x 0) are
/// legal.
class DenseMatrix {
  public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        check_finite();
    }

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw ShapeError("DenseMatrix: " + std::to_string(data_.size()) + " entries for a " + std::to_string(rows_) +
                             "x" + std::to_string(cols_) + " matrix");
        }
        check_finite();
    }

    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) : rows_(rows.size()) {
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) {
                throw ShapeError("DenseMatrix: ragged initializer list");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
        check_finite();
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix I(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            I(i, i) = 1.0;
        }
        return I;
    }

    static DenseMatrix diagonal(std::span<const double> d) {
        DenseMatrix D(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            D(i, i) = d[i];
        }
        return D;
    }

    static DenseMatrix column(std::span<const double> v) { return {v.size(), 1, Vector(v.begin(), v.end())}; }
    static DenseMatrix row(std::span<const double> v) { return {1, v.size(), Vector(v.begin(), v.end())}; }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> row_span(std::size_t i) const noexcept {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }

    [[nodiscard]] Vector column_vector(std::size_t j) const {
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            c[i] = (*this)(i, j);
        }
        return c;
    }

    [[nodiscard]] DenseMatrix transpose() const {
        DenseMatrix T(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                T(j, i) = (*this)(i, j);
            }
        }
        return T;
    }

    /// Contiguous sub-block starting at (r0, c0).
    [[nodiscard]] DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) {
            throw ShapeError("block: out of range");
        }
        DenseMatrix B(nr, nc);
        for (std::size_t i = 0; i < nr; ++i) {
            for (std::size_t j = 0; j < nc; ++j) {
                B(i, j) = (*this)(r0 + i, c0 + j);
            }
        }
        return B;
    }

    [[nodiscard]] DenseMatrix select_rows(std::span<const std::size_t> idx) const {
        DenseMatrix B(idx.size(), cols_);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] >= rows_) {
                throw ShapeError("select_rows: index " + std::to_string(idx[k]) + " out of range");
            }
            std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(idx[k] * cols_), cols_,
                        B.data_.begin() + static_cast<std::ptrdiff_t>(k * cols_));
        }
        return B;
    }

    [[nodiscard]] DenseMatrix select_cols(std::span<const std::size_t> idx) const {
        DenseMatrix B(rows_, idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] >= cols_) {
                throw ShapeError("select_cols: index " + std::to_string(idx[k]) + " out of range");
            }
            for (std::size_t i = 0; i < rows_; ++i) {
                B(i, k) = (*this)(i, idx[k]);
            }
        }
        return B;
    }

    DenseMatrix& operator+=(const DenseMatrix& o) {
        require_same_shape(o, "+");
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] += o.data_[k];
        }
        return *this;
    }

    DenseMatrix& operator-=(const DenseMatrix& o) {
        require_same_shape(o, "-");
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] -= o.data_[k];
        }
        return *this;
    }

    DenseMatrix& operator*=(double s) noexcept {
        for (auto& x : data_) {
            x *= s;
        }
        return *this;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

    [[nodiscard]] std::string shape_string() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  private:
    void check_finite() const {
        for (double x : data_) {
            if (!std::isfinite(x)) {
                throw Error("DenseMatrix: non-finite entry");
            }
        }
    }

    void require_same_shape(const DenseMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw ShapeError(std::string("operator") + op + ": " + shape_string() + " vs " + o.shape_string());
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
inline DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
inline DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }
inline DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
inline DenseMatrix operator-(DenseMatrix a) { return a *= -1.0; }

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: " + a.shape_string() + " * " + b.shape_string());
    }
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

inline Vector operator*(const DenseMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw ShapeError("matvec: " + a.shape_string() + " * vector of length " + std::to_string(x.size()));
    }
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += a(i, j) * x[j];
        }
        y[i] = s;
    }
    return y;
}

inline Vector operator*(const DenseMatrix& a, const Vector& x) { return a * std::span<const double>(x); }

inline DenseMatrix transpose(const DenseMatrix& a) { return a.transpose(); }

inline double frobenius_norm(const DenseMatrix& a) {
    // scaled accumulation keeps huge/tiny entries from overflowing
    double scale = 0.0;
    for (double x : a.data()) {
        scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0) {
        return 0.0;
    }
    double s = 0.0;
    for (double x : a.data()) {
        const double y = x / scale;
        s += y * y;
    }
    return scale * std::sqrt(s);
}

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ShapeError("dot: length mismatch");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a[k] * b[k];
    }
    return s;
}

inline Vector operator-(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw ShapeError("vector subtraction: length mismatch");
    }
    Vector c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        c[k] = a[k] - b[k];
    }
    return c;
}

inline Vector operator+(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw ShapeError("vector addition: length mismatch");
    }
    Vector c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        c[k] = a[k] + b[k];
    }
    return c;
}

inline double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double x : a.data()) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

/// ||a - b||_F, throwing on shape mismatch.
inline double distance(const DenseMatrix& a, const DenseMatrix& b) { return frobenius_norm(a - b); }

/// Symmetry defect ||A^T - A||_F of a square matrix.
inline double asymmetry(const DenseMatrix& a) {
    if (!a.is_square()) {
        throw ShapeError("asymmetry: matrix is " + a.shape_string());
    }
    return frobenius_norm(a.transpose() - a);
}

inline DenseMatrix hstack(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("hstack: " + a.shape_string() + " | " + b.shape_string());
    }
    DenseMatrix c(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c(i, j) = a(i, j);
        }
        for (std::size_t j = 0; j < b.cols(); ++j) {
            c(i, a.cols() + j) = b(i, j);
        }
    }
    return c;
}

inline DenseMatrix vstack(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("vstack: " + a.shape_string() + " / " + b.shape_string());
    }
    DenseMatrix c(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c(i, j) = a(i, j);
        }
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            c(a.rows() + i, j) = b(i, j);
        }
    }
    return c;
}

/// Columns `idx` of the n x n identity, i.e. the selection matrix I_n(:, idx).
inline DenseMatrix selection_matrix(std::size_t n, std::span<const std::size_t> idx) {
    DenseMatrix S(n, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= n) {
            throw ShapeError("selection_matrix: index " + std::to_string(idx[k]) + " >= " + std::to_string(n));
        }
        S(idx[k], k) = 1.0;
    }
    return S;
}

/// Permutation matrix with ones at (k, perm[k]); multiplies rows: (P*A)(k,:) = A(perm[k],:).
inline DenseMatrix row_permutation_matrix(std::span<const std::size_t> perm) {
    DenseMatrix P(perm.size(), perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
        P(k, perm[k]) = 1.0;
    }
    return P;
}

/// Permutation matrix with ones at (perm[k], k); multiplies columns: (A*P)(:,k) = A(:,perm[k]).
inline DenseMatrix column_permutation_matrix(std::span<const std::size_t> perm) {
    return row_permutation_matrix(perm).transpose();
}

} // namespace geninv
