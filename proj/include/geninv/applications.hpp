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
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "decompositions.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "random.hpp"
#include "randomized.hpp"

namespace geninv {

// ---------------------------------------------------------------------------
// Randomized SVD pattern and CUR
// ---------------------------------------------------------------------------

/// Range finder: orthonormal basis of C(A Q) for a Gaussian n x q draw.
inline DenseMatrix randomized_range(const DenseMatrix& A, std::size_t q, std::uint64_t seed, Tolerance tol = {}) {
    if (q < 1 || q > A.cols()) {
        throw PreconditionError("randomized range: need 1 <= q <= n (q=" + std::to_string(q) +
                                ", n=" + std::to_string(A.cols()) + ")");
    }
    Rng rng(seed);
    const DenseMatrix Q = gaussian_matrix(A.cols(), q, rng);
    return orthonormal_range(A * Q, tol);
}

/// (Qbar^T A)^+ Qbar^T with Qbar from randomized_range.
inline DenseMatrix randomized_svd_pinv(const DenseMatrix& A, std::size_t q, std::uint64_t seed, Tolerance tol = {}) {
    const DenseMatrix Qbar = randomized_range(A, q, seed, tol);
    const DenseMatrix Qt = Qbar.transpose();
    return pinv_oracle(Qt * A, tol) * Qt;
}

/// A(I,:)^+ A(I,J) A(:,J)^+.
inline DenseMatrix cur_pinv(const DenseMatrix& A, const IndexList& I, const IndexList& J, Tolerance tol = {}) {
    if (I.empty() || J.empty()) {
        throw PreconditionError("cur_pinv: row and column sets must be nonempty");
    }
    // validates distinctness and bounds
    (void)make_column_select_sketch(A.rows(), A.cols(), I, J);
    const DenseMatrix rows = A.select_rows(I);
    const DenseMatrix cols = A.select_cols(J);
    return pinv_oracle(rows, tol) * rows.select_cols(J) * pinv_oracle(cols, tol);
}

// ---------------------------------------------------------------------------
// Generalized Nystrom
// ---------------------------------------------------------------------------

struct ReconstructionReport {
    double approximation_error = 0.0; ///< ||A - A A_p A||_F
    double pinv_error = 0.0;          ///< ||A_p - A^+||_F
    std::size_t rank_used = 0;        ///< rank of the sketched core P^T A Q
};

struct NystromResult {
    DenseMatrix A_hat;
    DenseMatrix A_pinv; ///< A_p = Q (P^T A Q)^g P^T
    ReconstructionReport report;
};

/// A_hat = A Q (P^T A Q)^g P^T A, the core inverted through a rank-truncated
/// pivoted QR.
inline NystromResult generalized_nystrom(const DenseMatrix& A, const SketchPair& s, Tolerance tol = {}) {
    require_conformal(A, s, "generalized_nystrom");
    const DenseMatrix Pt = s.P.transpose();
    const DenseMatrix core = Pt * A * s.Q;
    NystromResult out;
    out.A_pinv = s.Q * one_inverse_qr(core, tol) * Pt;
    out.A_hat = A * out.A_pinv * A;
    out.report.approximation_error = distance(A, out.A_hat);
    out.report.pinv_error = distance(out.A_pinv, pinv_oracle(A, tol));
    out.report.rank_used = numeric_rank(core, tol);
    return out;
}

// ---------------------------------------------------------------------------
// Sensor placement
// ---------------------------------------------------------------------------

enum class PlacementMethod { qr_pivot, lu_pivot };

inline std::string_view to_string(PlacementMethod m) { return m == PlacementMethod::qr_pivot ? "qr_pivot" : "lu_pivot"; }

struct SensorPlacement {
    IndexList row_indices;
    PlacementMethod method = PlacementMethod::qr_pivot;
    std::optional<IndexList> col_indices;
};

/// First p pivots of the column-pivoted QR of A^T.
inline SensorPlacement sensor_place_qr(const DenseMatrix& A, std::size_t p) {
    if (p < 1 || p > A.rows()) {
        throw PreconditionError("sensor_place_qr: need 1 <= p <= m (p=" + std::to_string(p) +
                                ", m=" + std::to_string(A.rows()) + ")");
    }
    const PivotedQr f = qr_column_pivoted(A.transpose());
    return {IndexList(f.perm.begin(), f.perm.begin() + static_cast<std::ptrdiff_t>(p)), PlacementMethod::qr_pivot,
            std::nullopt};
}

/// First p row pivots and q column pivots of the complete-pivoted LU of A.
inline SensorPlacement sensor_place_lu(const DenseMatrix& A, std::size_t p, std::optional<std::size_t> q = std::nullopt) {
    const std::size_t qq = q.value_or(p);
    if (p < 1 || p > A.rows()) {
        throw PreconditionError("sensor_place_lu: need 1 <= p <= m (p=" + std::to_string(p) +
                                ", m=" + std::to_string(A.rows()) + ")");
    }
    if (qq < 1 || qq > A.cols()) {
        throw PreconditionError("sensor_place_lu: need 1 <= q <= n (q=" + std::to_string(qq) +
                                ", n=" + std::to_string(A.cols()) + ")");
    }
    const LuCompletePivot f = lu_complete_pivoted(A);
    return {IndexList(f.row_perm.begin(), f.row_perm.begin() + static_cast<std::ptrdiff_t>(p)),
            PlacementMethod::lu_pivot,
            IndexList(f.col_perm.begin(), f.col_perm.begin() + static_cast<std::ptrdiff_t>(qq))};
}

inline void validate_placement(const DenseMatrix& A, const SensorPlacement& s) {
    auto check = [](const IndexList& idx, std::size_t bound, const char* what) {
        if (idx.empty() || idx.size() > bound) {
            throw PreconditionError(std::string("sensor placement: bad number of ") + what + " indices");
        }
        if (std::set<std::size_t>(idx.begin(), idx.end()).size() != idx.size()) {
            throw PreconditionError(std::string("sensor placement: duplicate ") + what + " index");
        }
        for (std::size_t i : idx) {
            if (i >= bound) {
                throw PreconditionError(std::string("sensor placement: ") + what + " index out of range");
            }
        }
    };
    check(s.row_indices, A.rows(), "row");
    if (s.method == PlacementMethod::lu_pivot) {
        if (!s.col_indices) {
            throw PreconditionError("sensor placement: lu_pivot needs column indices");
        }
        check(*s.col_indices, A.cols(), "column");
    }
}

/// (P_p^T A)^+ P_p^T for qr_pivot, D_q (B_p A D_q)^+ B_p for lu_pivot. n x m.
inline DenseMatrix sensor_estimator(const DenseMatrix& A, const SensorPlacement& s, Tolerance tol = {}) {
    validate_placement(A, s);
    const DenseMatrix Bp = selection_matrix(A.rows(), s.row_indices).transpose();
    if (s.method == PlacementMethod::qr_pivot) {
        return pinv_oracle(A.select_rows(s.row_indices), tol) * Bp;
    }
    const DenseMatrix Dq = selection_matrix(A.cols(), *s.col_indices);
    const DenseMatrix core = A.select_rows(s.row_indices).select_cols(*s.col_indices);
    return Dq * pinv_oracle(core, tol) * Bp;
}

/// y_e = A * estimator * y. Not an orthogonal projection of y.
inline Vector reconstruct_signal(const DenseMatrix& A, const SensorPlacement& s, const Vector& y, Tolerance tol = {}) {
    if (y.size() != A.rows()) {
        throw ShapeError("reconstruct_signal: signal has length " + std::to_string(y.size()) + ", expected " +
                         std::to_string(A.rows()));
    }
    return A * (sensor_estimator(A, s, tol) * y);
}

} // namespace geninv
