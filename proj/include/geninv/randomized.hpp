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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "decompositions.hpp"
#include "errors.hpp"
#include "factorization.hpp"
#include "geninverse.hpp"
#include "matrix.hpp"
#include "random.hpp"

namespace geninv {

// ---------------------------------------------------------------------------
// Sketching matrices
// ---------------------------------------------------------------------------

enum class SketchKind { gaussian, orthonormal, column_select, user };

inline std::string_view to_string(SketchKind k) {
    switch (k) {
    case SketchKind::gaussian:
        return "gaussian";
    case SketchKind::orthonormal:
        return "orthonormal";
    case SketchKind::column_select:
        return "column_select";
    case SketchKind::user:
        return "user";
    }
    return "user";
}

inline std::optional<SketchKind> sketch_kind_from_string(std::string_view s) {
    for (auto k : {SketchKind::gaussian, SketchKind::orthonormal, SketchKind::column_select, SketchKind::user}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

/// Row sketch P (m x p) and column sketch Q (n x q); A is compressed to
/// P^T A and A Q.
struct SketchPair {
    DenseMatrix P;
    DenseMatrix Q;
    SketchKind kind = SketchKind::user;
    std::optional<std::uint64_t> seed;
    IndexList row_indices; ///< column_select only: P = I_m(:, row_indices)
    IndexList col_indices; ///< column_select only: Q = I_n(:, col_indices)

    [[nodiscard]] std::size_t m() const noexcept { return P.rows(); }
    [[nodiscard]] std::size_t n() const noexcept { return Q.rows(); }
};

/// Default sketch width for a target rank: target + oversampling.
inline std::size_t oversampled_width(std::size_t rank_target, std::size_t oversampling = 5) {
    return rank_target + oversampling;
}

/// P and Q drawn from one seeded stream, P first.
inline SketchPair make_gaussian_sketch(std::size_t m, std::size_t n, std::size_t p, std::size_t q, std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrix P = gaussian_matrix(m, p, rng);
    DenseMatrix Q = gaussian_matrix(n, q, rng);
    return {std::move(P), std::move(Q), SketchKind::gaussian, seed, {}, {}};
}

/// Orthonormalised Gaussian draw: P^T P = I_p and Q^T Q = I_q.
inline SketchPair make_orthonormal_sketch(std::size_t m, std::size_t n, std::size_t p, std::size_t q,
                                          std::uint64_t seed) {
    if (p > m || q > n) {
        throw PreconditionError("orthonormal sketch needs p <= m and q <= n");
    }
    SketchPair s = make_gaussian_sketch(m, n, p, q, seed);
    s.P = qr_column_pivoted(s.P).Q;
    s.Q = qr_column_pivoted(s.Q).Q;
    s.kind = SketchKind::orthonormal;
    return s;
}

inline SketchPair make_column_select_sketch(std::size_t m, std::size_t n, IndexList rows, IndexList cols) {
    auto check = [](const IndexList& idx, std::size_t bound, const char* what) {
        if (std::set<std::size_t>(idx.begin(), idx.end()).size() != idx.size()) {
            throw PreconditionError(std::string("column_select sketch: duplicate ") + what + " index");
        }
        for (std::size_t i : idx) {
            if (i >= bound) {
                throw PreconditionError(std::string("column_select sketch: ") + what + " index " + std::to_string(i) +
                                        " out of range");
            }
        }
    };
    check(rows, m, "row");
    check(cols, n, "column");
    SketchPair s{selection_matrix(m, rows), selection_matrix(n, cols), SketchKind::column_select, std::nullopt, {}, {}};
    s.row_indices = std::move(rows);
    s.col_indices = std::move(cols);
    return s;
}

/// Random distinct rows and columns.
inline SketchPair make_column_select_sketch(std::size_t m, std::size_t n, std::size_t p, std::size_t q,
                                            std::uint64_t seed) {
    if (p > m || q > n) {
        throw PreconditionError("column_select sketch needs p <= m and q <= n");
    }
    Rng rng(seed);
    IndexList rows = rng.subset(m, p);
    IndexList cols = rng.subset(n, q);
    SketchPair s = make_column_select_sketch(m, n, std::move(rows), std::move(cols));
    s.seed = seed;
    return s;
}

inline SketchPair make_user_sketch(DenseMatrix P, DenseMatrix Q) {
    return {std::move(P), std::move(Q), SketchKind::user, std::nullopt, {}, {}};
}

/// Everything needed to build any kind of sketch; used by front ends.
struct SketchOptions {
    SketchKind kind = SketchKind::gaussian;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t q = 0;
    std::optional<std::uint64_t> seed;
    std::optional<IndexList> rows;
    std::optional<IndexList> cols;
};

inline SketchPair make_sketch(const SketchOptions& o) {
    switch (o.kind) {
    case SketchKind::gaussian:
    case SketchKind::orthonormal:
        if (!o.seed) {
            throw PreconditionError(std::string(to_string(o.kind)) + " sketch requires a seed");
        }
        return o.kind == SketchKind::gaussian ? make_gaussian_sketch(o.m, o.n, o.p, o.q, *o.seed)
                                              : make_orthonormal_sketch(o.m, o.n, o.p, o.q, *o.seed);
    case SketchKind::column_select:
        if (o.rows && o.cols) {
            return make_column_select_sketch(o.m, o.n, *o.rows, *o.cols);
        }
        if (!o.seed) {
            throw PreconditionError("column_select sketch requires explicit indices or a seed");
        }
        return make_column_select_sketch(o.m, o.n, o.p, o.q, *o.seed);
    case SketchKind::user:
        break;
    }
    throw PreconditionError("user sketches are supplied as matrices, not generated");
}

inline void require_conformal(const DenseMatrix& A, const SketchPair& s, const char* who) {
    if (s.P.rows() != A.rows() || s.Q.rows() != A.cols()) {
        throw ShapeError(std::string(who) + ": A is " + A.shape_string() + " but P is " + s.P.shape_string() +
                         " and Q is " + s.Q.shape_string());
    }
}

// ---------------------------------------------------------------------------
// Rank preservation
// ---------------------------------------------------------------------------

struct RankPreservationReport {
    std::size_t rank_A = 0;
    std::size_t rank_PTA = 0;
    std::size_t rank_AQ = 0;
    bool preserved = false;
};

/// rank(P^T A) = rank(A Q) = rank(A), all decided with the same tolerance rule.
inline RankPreservationReport check_rank_preservation(const DenseMatrix& A, const SketchPair& s, Tolerance tol = {}) {
    require_conformal(A, s, "check_rank_preservation");
    RankPreservationReport r;
    r.rank_A = numeric_rank(A, tol);
    r.rank_PTA = numeric_rank(s.P.transpose() * A, tol);
    r.rank_AQ = numeric_rank(A * s.Q, tol);
    r.preserved = r.rank_PTA == r.rank_A && r.rank_AQ == r.rank_A;
    return r;
}

inline void require_rank_preservation(const DenseMatrix& A, const SketchPair& s, Tolerance tol, const char* who) {
    const RankPreservationReport r = check_rank_preservation(A, s, tol);
    if (!r.preserved) {
        throw PreconditionError(std::string(who) + ": sketch does not preserve rank (rank(A)=" +
                                std::to_string(r.rank_A) + ", rank(P^T A)=" + std::to_string(r.rank_PTA) +
                                ", rank(A Q)=" + std::to_string(r.rank_AQ) + ")");
    }
}

// ---------------------------------------------------------------------------
// Sketched inverses
// ---------------------------------------------------------------------------

/// (P^T A)^+ P^T A Q (A Q)^+. Equal to A^+ exactly when the sketch preserves
/// rank; otherwise a lower-rank approximation.
inline DenseMatrix pinv_randomized(const DenseMatrix& A, const SketchPair& s, Tolerance tol = {}) {
    require_conformal(A, s, "pinv_randomized");
    const DenseMatrix PtA = s.P.transpose() * A;
    const DenseMatrix AQ = A * s.Q;
    return pinv_oracle(PtA, tol) * (PtA * s.Q) * pinv_oracle(AQ, tol);
}

/// Generalized {1,2}-inverse of M from a rank-truncated pivoted QR:
/// M Pi = [Q1 Q2] [[R11, R12], [0, R22~0]]  gives  M^g = Pi [R11^{-1} Q1^T; 0].
/// M M^g = Q1 Q1^T is the orthogonal projector onto C(M).
inline DenseMatrix one_inverse_qr(const DenseMatrix& M, Tolerance tol = {}) {
    const std::size_t a = M.rows();
    const std::size_t b = M.cols();
    if (a == 0 || b == 0) {
        return DenseMatrix(b, a);
    }
    const PivotedQr f = qr_column_pivoted(M);
    const std::size_t r = f.rank(tol.resolve(std::abs(f.R(0, 0)), a, b));
    const DenseMatrix R11 = f.R.block(0, 0, r, r);
    const DenseMatrix Q1t = f.Q.block(0, 0, a, r).transpose();
    const DenseMatrix top = solve_upper_triangular(R11, Q1t); // r x a
    DenseMatrix G(b, a);
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t j = 0; j < a; ++j) {
            G(f.perm[k], j) = top(k, j);
        }
    }
    return G;
}

/// {1,2}-inverse of M whose product M^g M is the orthogonal projector onto
/// the row space of M (QR of M^T).
inline DenseMatrix one_inverse_qr_rows(const DenseMatrix& M, Tolerance tol = {}) {
    return one_inverse_qr(M.transpose(), tol).transpose();
}

/// (P^T A)^g P^T A Q (A Q)^g for caller-supplied {1}-inverses of P^T A and A Q.
/// Requires rank preservation.
inline DenseMatrix geninv_randomized(const DenseMatrix& A, const SketchPair& s, const DenseMatrix& PtA_inverse,
                                     const DenseMatrix& AQ_inverse, Tolerance tol = {}) {
    require_conformal(A, s, "geninv_randomized");
    require_rank_preservation(A, s, tol, "geninv_randomized");
    const DenseMatrix PtAQ = s.P.transpose() * A * s.Q;
    if (PtA_inverse.rows() != A.cols() || PtA_inverse.cols() != s.P.cols() || AQ_inverse.rows() != s.Q.cols() ||
        AQ_inverse.cols() != A.rows()) {
        throw ShapeError("geninv_randomized: supplied {1}-inverses have the wrong shape");
    }
    return PtA_inverse * PtAQ * AQ_inverse;
}

/// As above, with QR-based {1}-inverses: the row-space route for P^T A and the
/// column-space route for A Q.
inline DenseMatrix geninv_randomized(const DenseMatrix& A, const SketchPair& s, Tolerance tol = {}) {
    require_conformal(A, s, "geninv_randomized");
    const DenseMatrix PtA = s.P.transpose() * A;
    const DenseMatrix AQ = A * s.Q;
    return geninv_randomized(A, s, one_inverse_qr_rows(PtA, tol), one_inverse_qr(AQ, tol), tol);
}

/// Q (C R)^+ P^T where C R is a full-rank factorization of P^T A Q.
/// Requires rank preservation; the result is a {1,2}-inverse of A.
inline DenseMatrix geninv_compact(const DenseMatrix& A, const SketchPair& s, Tolerance tol = {}) {
    require_conformal(A, s, "geninv_compact");
    const RankPreservationReport r = check_rank_preservation(A, s, tol);
    if (!r.preserved) {
        throw PreconditionError("geninv_compact: sketch does not preserve rank (rank(A)=" + std::to_string(r.rank_A) +
                                ", rank(P^T A)=" + std::to_string(r.rank_PTA) +
                                ", rank(A Q)=" + std::to_string(r.rank_AQ) + ")");
    }
    const CRFactorization F = cr_factorize(s.P.transpose() * A * s.Q, tol);
    if (F.rank != r.rank_A) {
        throw Error("geninv_compact: elimination found rank " + std::to_string(F.rank) + " in the sketched core, expected " +
                    std::to_string(r.rank_A));
    }
    return s.Q * pinv_reverse_order(F, tol) * s.P.transpose();
}

/// Q (P^T A Q)^+ P^T without preconditions: the generalized Nystrom inverse.
inline DenseMatrix sketched_pinv(const DenseMatrix& A, const SketchPair& s, Tolerance tol = {}) {
    require_conformal(A, s, "sketched_pinv");
    return s.Q * pinv_oracle(s.P.transpose() * A * s.Q, tol) * s.P.transpose();
}

inline bool is_orthogonal(const DenseMatrix& M, double tol = 1e-10) {
    return M.is_square() && distance(M.transpose() * M, DenseMatrix::identity(M.rows())) <= tol;
}

/// Q (P^T A Q)^+ P^T for square orthogonal P and Q, which is exactly A^+.
inline DenseMatrix pinv_orthogonal_sketch(const DenseMatrix& A, const SketchPair& s, Tolerance tol = {}) {
    require_conformal(A, s, "pinv_orthogonal_sketch");
    if (!is_orthogonal(s.P)) {
        throw PreconditionError("pinv_orthogonal_sketch: P is not square orthogonal");
    }
    if (!is_orthogonal(s.Q)) {
        throw PreconditionError("pinv_orthogonal_sketch: Q is not square orthogonal");
    }
    return sketched_pinv(A, s, tol);
}

/// G_P = (P^T Cbar)^+ P^T, a {1}-inverse of Cbar when rank(P^T Cbar) = rank(Cbar).
inline DenseMatrix sketched_left_inverse(const DenseMatrix& Cbar, const DenseMatrix& P, Tolerance tol = {}) {
    return pinv_oracle(P.transpose() * Cbar, tol) * P.transpose();
}

/// H_Q = Q (Rbar Q)^+, a {1}-inverse of Rbar when rank(Rbar Q) = rank(Rbar).
inline DenseMatrix sketched_right_inverse(const DenseMatrix& Rbar, const DenseMatrix& Q, Tolerance tol = {}) {
    return Q * pinv_oracle(Rbar * Q, tol);
}

} // namespace geninv
