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

#include <cstddef>
#include <utility>

#include "decompositions.hpp"
#include "matrix.hpp"

namespace geninv {

/// Full-rank factorization A = C * R: C (m x r) holds the first r independent
/// columns of A, R (r x n) the nonzero rows of rref(A).
struct CRFactorization {
    DenseMatrix C;
    DenseMatrix R;
    std::size_t rank = 0;
    IndexList pivot_cols;

    [[nodiscard]] DenseMatrix product() const { return C * R; }
};

/// Factorization by elimination. A zero matrix yields rank 0 with C of shape
/// m x 0 and R of shape 0 x n.
inline CRFactorization cr_factorize(const DenseMatrix& A, Tolerance tol = {}) {
    RowEchelon e = rref(A, tol);
    CRFactorization f;
    f.rank = e.rank();
    f.C = A.select_cols(e.pivot_cols);
    f.R = e.nonzero_rows();
    f.pivot_cols = std::move(e.pivot_cols);
    return f;
}

/// Vacuously true for a matrix with no columns (resp. rows).
inline bool is_full_column_rank(const DenseMatrix& M, Tolerance tol = {}) {
    return numeric_rank(M, tol) == M.cols();
}

inline bool is_full_row_rank(const DenseMatrix& M, Tolerance tol = {}) {
    return numeric_rank(M, tol) == M.rows();
}

} // namespace geninv
