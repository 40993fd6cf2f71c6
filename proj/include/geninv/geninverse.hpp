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
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "decompositions.hpp"
#include "errors.hpp"
#include "factorization.hpp"
#include "matrix.hpp"

namespace geninv {

/// Default relative tolerance for identities between matrices; compared
/// against `default_identity_tolerance * max(1, ||.||_F)`.
inline constexpr double default_identity_tolerance = 1e-9;

inline double scaled_tolerance(double tol, double norm) { return tol * std::max(1.0, norm); }

// ---------------------------------------------------------------------------
// Penrose identities
// ---------------------------------------------------------------------------

enum class InverseClass { not_an_inverse, one_inverse, one_two_inverse, pseudoinverse };

inline std::string_view to_string(InverseClass c) {
    switch (c) {
    case InverseClass::not_an_inverse:
        return "not_an_inverse";
    case InverseClass::one_inverse:
        return "one_inverse";
    case InverseClass::one_two_inverse:
        return "one_two_inverse";
    case InverseClass::pseudoinverse:
        return "pseudoinverse";
    }
    return "not_an_inverse";
}

inline std::optional<InverseClass> inverse_class_from_string(std::string_view s) {
    for (auto c : {InverseClass::not_an_inverse, InverseClass::one_inverse, InverseClass::one_two_inverse,
                   InverseClass::pseudoinverse}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    return std::nullopt;
}

/// Frobenius residuals of the four Penrose identities for a candidate G:
///   r1 = ||AGA - A||, r2 = ||GAG - G||, r3 = ||(GA)^T - GA||, r4 = ||(AG)^T - AG||.
struct PenroseReport {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double r4 = 0.0;
    double tolerance = 0.0;
    InverseClass classification = InverseClass::not_an_inverse;
};

/// Residuals are compared against the absolute `tol`.
inline PenroseReport verify_penrose(const DenseMatrix& A, const DenseMatrix& G, double tol = default_identity_tolerance) {
    if (G.rows() != A.cols() || G.cols() != A.rows()) {
        throw ShapeError("verify_penrose: candidate is " + G.shape_string() + ", expected " +
                         std::to_string(A.cols()) + "x" + std::to_string(A.rows()));
    }
    const DenseMatrix AG = A * G;
    const DenseMatrix GA = G * A;
    PenroseReport rep;
    rep.r1 = distance(AG * A, A);
    rep.r2 = distance(GA * G, G);
    rep.r3 = asymmetry(GA);
    rep.r4 = asymmetry(AG);
    rep.tolerance = tol;
    if (rep.r1 > tol) {
        rep.classification = InverseClass::not_an_inverse;
    } else if (rep.r2 > tol) {
        rep.classification = InverseClass::one_inverse;
    } else if (rep.r3 > tol || rep.r4 > tol) {
        rep.classification = InverseClass::one_two_inverse;
    } else {
        rep.classification = InverseClass::pseudoinverse;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Product formulas
// ---------------------------------------------------------------------------

/// R^+ C^+ via the one-sided inverses (C^T C)^{-1} C^T and R^T (R R^T)^{-1}.
/// Requires C of full column rank and R of full row rank; throws
/// PreconditionError naming the factor that fails.
inline DenseMatrix pinv_reverse_order(const DenseMatrix& C, const DenseMatrix& R, Tolerance tol = {}) {
    if (C.cols() != R.rows()) {
        throw ShapeError("pinv_reverse_order: C is " + C.shape_string() + ", R is " + R.shape_string());
    }
    if (!is_full_column_rank(C, tol)) {
        throw PreconditionError("reverse order law: C lacks full column rank (rank " +
                                std::to_string(numeric_rank(C, tol)) + " < " + std::to_string(C.cols()) +
                                " columns)");
    }
    if (!is_full_row_rank(R, tol)) {
        throw PreconditionError("reverse order law: R lacks full row rank (rank " +
                                std::to_string(numeric_rank(R, tol)) + " < " + std::to_string(R.rows()) + " rows)");
    }
    const DenseMatrix Ct = C.transpose();
    const DenseMatrix Rt = R.transpose();
    const DenseMatrix C_plus = inverse(Ct * C, tol) * Ct;
    const DenseMatrix R_plus = Rt * inverse(R * Rt, tol);
    return R_plus * C_plus;
}

inline DenseMatrix pinv_reverse_order(const CRFactorization& F, Tolerance tol = {}) {
    return pinv_reverse_order(F.C, F.R, tol);
}

/// R^+ C^+ with both pseudoinverses from the SVD and no rank hypothesis; in
/// general this is not (CR)^+.
inline DenseMatrix reverse_order_product(const DenseMatrix& C, const DenseMatrix& R, Tolerance tol = {}) {
    if (C.cols() != R.rows()) {
        throw ShapeError("reverse_order_product: C is " + C.shape_string() + ", R is " + R.shape_string());
    }
    return pinv_oracle(R, tol) * pinv_oracle(C, tol);
}

/// (C^+ C R)^+ (C R R^+)^+, which equals (CR)^+ for every conformal pair.
inline DenseMatrix pinv_corrected(const DenseMatrix& C, const DenseMatrix& R, Tolerance tol = {}) {
    if (C.cols() != R.rows()) {
        throw ShapeError("pinv_corrected: C is " + C.shape_string() + ", R is " + R.shape_string());
    }
    const DenseMatrix C_plus = pinv_oracle(C, tol);
    const DenseMatrix R_plus = pinv_oracle(R, tol);
    const DenseMatrix CR = C * R;
    return pinv_oracle(C_plus * CR, tol) * pinv_oracle(CR * R_plus, tol);
}

/// R^T (C^T A R^T)^{-1} C^T for a full-rank factorization A = CR.
inline DenseMatrix pinv_macduffee(const CRFactorization& F, Tolerance tol = {}) {
    if (!is_full_column_rank(F.C, tol)) {
        throw PreconditionError("MacDuffee formula: C lacks full column rank");
    }
    if (!is_full_row_rank(F.R, tol)) {
        throw PreconditionError("MacDuffee formula: R lacks full row rank");
    }
    const DenseMatrix A = F.C * F.R;
    const DenseMatrix Ct = F.C.transpose();
    const DenseMatrix Rt = F.R.transpose();
    const DenseMatrix core = Ct * A * Rt;
    DenseMatrix core_inv;
    try {
        core_inv = inverse(core, tol);
    } catch (const PreconditionError&) {
        throw PreconditionError("MacDuffee formula: C^T A R^T is numerically singular");
    }
    return Rt * core_inv * Ct;
}

// ---------------------------------------------------------------------------
// Reverse order law conditions
// ---------------------------------------------------------------------------

/// True when C(sub) is contained in C(space), decided as
/// rank([space | sub]) == rank(space). `sub` is rescaled to the Frobenius
/// norm of `space` first; scaling leaves the column space unchanged.
inline bool column_space_contains(const DenseMatrix& space, const DenseMatrix& sub, Tolerance tol = {}) {
    if (space.rows() != sub.rows()) {
        throw ShapeError("column_space_contains: " + space.shape_string() + " vs " + sub.shape_string());
    }
    const double sub_norm = frobenius_norm(sub);
    if (sub_norm == 0.0) {
        return true;
    }
    const double space_norm = frobenius_norm(space);
    if (space_norm == 0.0) {
        return false;
    }
    const DenseMatrix scaled = (space_norm / sub_norm) * sub;
    return numeric_rank(hstack(space, scaled), tol) == numeric_rank(space, tol);
}

/// The two inclusions C(R R^T C^T) in C(C^T) and C(C^T C R) in C(R); both
/// hold exactly when (CR)^+ = R^+ C^+.
struct GrevilleConditions {
    bool row_inclusion = false;    ///< C(R R^T C^T) is inside C(C^T)
    bool column_inclusion = false; ///< C(C^T C R) is inside C(R)

    [[nodiscard]] bool both() const noexcept { return row_inclusion && column_inclusion; }
};

inline GrevilleConditions greville_conditions(const DenseMatrix& C, const DenseMatrix& R, Tolerance tol = {}) {
    if (C.cols() != R.rows()) {
        throw ShapeError("greville_conditions: C is " + C.shape_string() + ", R is " + R.shape_string());
    }
    const DenseMatrix Ct = C.transpose();
    return {column_space_contains(Ct, R * R.transpose() * Ct, tol), column_space_contains(R, Ct * C * R, tol)};
}

/// ||C^+ C (R R^T C^T C) R R^+ - R R^T C^T C||_F.
inline double two_sided_projection_residual(const DenseMatrix& C, const DenseMatrix& R, Tolerance tol = {}) {
    if (C.cols() != R.rows()) {
        throw ShapeError("two_sided_projection_residual: C is " + C.shape_string() + ", R is " + R.shape_string());
    }
    const DenseMatrix C_plus = pinv_oracle(C, tol);
    const DenseMatrix R_plus = pinv_oracle(R, tol);
    const DenseMatrix M = R * R.transpose() * C.transpose() * C;
    return distance(C_plus * C * M * R * R_plus, M);
}

// ---------------------------------------------------------------------------
// {1}-inverses from completed bases
// ---------------------------------------------------------------------------

/// Free blocks of the generalized-inverse parametrization
///   A^g = [R0; R1]^{-1} [[I_r, Z12], [Z21, Z22]] [C0, C1]^{-1}.
struct OneInverseSpec {
    DenseMatrix Z12; ///< r x (m - r)
    DenseMatrix Z21; ///< (n - r) x r
    DenseMatrix Z22; ///< (n - r) x (m - r)

    static OneInverseSpec zeros(std::size_t rank, std::size_t m, std::size_t n) {
        return {DenseMatrix(rank, m - rank), DenseMatrix(n - rank, rank), DenseMatrix(n - rank, m - rank)};
    }
};

/// The factorization A = [C0, C1] diag(I_r, 0) [R0; R1] with C0 R0 = cr_factorize(A)
/// and C1, R1^T orthonormal bases of the complements of C(C0) and C(R0^T).
struct CompletedFactorization {
    DenseMatrix C0;
    DenseMatrix C1;
    DenseMatrix R0;
    DenseMatrix R1;
    std::size_t rank = 0;

    [[nodiscard]] DenseMatrix column_basis() const { return hstack(C0, C1); }
    [[nodiscard]] DenseMatrix row_basis() const { return vstack(R0, R1); }
};

inline CompletedFactorization complete_factorization(const DenseMatrix& A, Tolerance tol = {}) {
    CRFactorization F = cr_factorize(A, tol);
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    const std::size_t r = F.rank;
    // C0 and R0^T have full column rank, so the complement dimension is known
    // and the QR rank decision only has to agree with it.
    DenseMatrix C1 = m > r ? qr_column_pivoted(F.C, true).Q.block(0, r, m, m - r) : DenseMatrix(m, 0);
    DenseMatrix R1 =
        n > r ? qr_column_pivoted(F.R.transpose(), true).Q.block(0, r, n, n - r).transpose() : DenseMatrix(0, n);
    return {std::move(F.C), std::move(C1), std::move(F.R), std::move(R1), r};
}

/// Assembles the generalized inverse for the given free blocks. The result
/// always satisfies A A^g A = A; it also satisfies A^g A A^g = A^g exactly
/// when Z22 = Z21 Z12. All-zero blocks give A^+.
inline DenseMatrix construct_one_inverse(const DenseMatrix& A, const OneInverseSpec& spec, Tolerance tol = {}) {
    const CompletedFactorization cf = complete_factorization(A, tol);
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    const std::size_t r = cf.rank;
    auto expect = [](const DenseMatrix& Z, std::size_t rows, std::size_t cols, const char* name) {
        if (Z.rows() != rows || Z.cols() != cols) {
            throw ShapeError(std::string("construct_one_inverse: ") + name + " is " + Z.shape_string() + ", expected " +
                             std::to_string(rows) + "x" + std::to_string(cols));
        }
    };
    expect(spec.Z12, r, m - r, "Z12");
    expect(spec.Z21, n - r, r, "Z21");
    expect(spec.Z22, n - r, m - r, "Z22");

    DenseMatrix Z(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i < r && j < r) {
                Z(i, j) = i == j ? 1.0 : 0.0;
            } else if (i < r) {
                Z(i, j) = spec.Z12(i, j - r);
            } else if (j < r) {
                Z(i, j) = spec.Z21(i - r, j);
            } else {
                Z(i, j) = spec.Z22(i - r, j - r);
            }
        }
    }
    // C1 and R1^T are orthonormal and orthogonal to C(C0) and C(R0^T), so
    // [C0, C1]^{-1} = [C0^+; C1^T] and [R0; R1]^{-1} = [R0^+, R1^T].
    const DenseMatrix col_inv = vstack(pinv_oracle(cf.C0, tol), cf.C1.transpose());
    const DenseMatrix row_inv = hstack(pinv_oracle(cf.R0, tol), cf.R1.transpose());
    if (numeric_rank(cf.C0, tol) != r || numeric_rank(cf.R0, tol) != r) {
        throw Error("construct_one_inverse: completed basis is singular");
    }
    return row_inv * Z * col_inv;
}

/// Inverse of `construct_one_inverse`: recovers the free blocks of a given G
/// from [R0; R1] G [C0, C1]. `identity_defect` is the distance of the leading
/// r x r block from I_r (zero when A G A = A).
struct OneInverseParameters {
    OneInverseSpec spec;
    double identity_defect = 0.0;
};

inline OneInverseParameters one_inverse_parameters(const DenseMatrix& A, const DenseMatrix& G, Tolerance tol = {}) {
    if (G.rows() != A.cols() || G.cols() != A.rows()) {
        throw ShapeError("one_inverse_parameters: G is " + G.shape_string() + " for A " + A.shape_string());
    }
    const CompletedFactorization cf = complete_factorization(A, tol);
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    const std::size_t r = cf.rank;
    const DenseMatrix Z = cf.row_basis() * G * cf.column_basis();
    OneInverseParameters p;
    p.spec.Z12 = Z.block(0, r, r, m - r);
    p.spec.Z21 = Z.block(r, 0, n - r, r);
    p.spec.Z22 = Z.block(r, r, n - r, m - r);
    p.identity_defect = distance(Z.block(0, 0, r, r), DenseMatrix::identity(r));
    return p;
}

// ---------------------------------------------------------------------------
// Linear equations
// ---------------------------------------------------------------------------

struct MatrixEquationSolution {
    bool solvable = false;
    std::optional<DenseMatrix> X;
    double consistency_residual = 0.0; ///< ||Cbar G A H Rbar - A||_F
};

/// Solves Cbar X Rbar = A. Solvable iff Cbar G A H Rbar = A for {1}-inverses
/// G of Cbar and H of Rbar (pseudoinverses here); then
/// X = G A H + Z - (G Cbar) Z (Rbar H) for any Z of shape X (zero if omitted).
inline MatrixEquationSolution solve_matrix_equation(const DenseMatrix& Cbar, const DenseMatrix& A, const DenseMatrix& Rbar,
                                                    const std::optional<DenseMatrix>& Z = std::nullopt,
                                                    double tol = default_identity_tolerance, Tolerance rank_tol = {}) {
    if (Cbar.rows() != A.rows() || Rbar.cols() != A.cols()) {
        throw ShapeError("solve_matrix_equation: Cbar " + Cbar.shape_string() + ", A " + A.shape_string() + ", Rbar " +
                         Rbar.shape_string());
    }
    const DenseMatrix G = pinv_oracle(Cbar, rank_tol);
    const DenseMatrix H = pinv_oracle(Rbar, rank_tol);
    MatrixEquationSolution out;
    out.consistency_residual = distance(Cbar * G * A * H * Rbar, A);
    out.solvable = out.consistency_residual <= scaled_tolerance(tol, frobenius_norm(A));
    if (!out.solvable) {
        return out;
    }
    const DenseMatrix free = Z ? *Z : DenseMatrix(Cbar.cols(), Rbar.rows());
    if (free.rows() != Cbar.cols() || free.cols() != Rbar.rows()) {
        throw ShapeError("solve_matrix_equation: Z is " + free.shape_string());
    }
    out.X = G * A * H + free - G * Cbar * free * Rbar * H;
    return out;
}

/// x = G b + (I - G A) z, a solution of A x = b for any z when G is a
/// {1}-inverse of A and b lies in C(A).
inline Vector general_solution_x(const DenseMatrix& A, const DenseMatrix& G, const Vector& b, const Vector& z,
                                 double tol = default_identity_tolerance) {
    if (G.rows() != A.cols() || G.cols() != A.rows() || b.size() != A.rows() || z.size() != A.cols()) {
        throw ShapeError("general_solution_x: shapes do not conform");
    }
    if (distance(A * G * A, A) > scaled_tolerance(tol, frobenius_norm(A))) {
        throw PreconditionError("general_solution_x: G is not a {1}-inverse of A");
    }
    const Vector Gb = G * b;
    if (norm2(A * Gb - b) > scaled_tolerance(tol, norm2(b))) {
        throw PreconditionError("general_solution_x: b is not in the column space of A (inconsistent system)");
    }
    return Gb + (z - G * (A * z));
}

/// b = A x + (I - A A^+) w, the general solution of A^+ b = x for x in the
/// row space of A.
inline Vector general_solution_b(const DenseMatrix& A, const DenseMatrix& A_plus, const Vector& x, const Vector& w) {
    if (A_plus.rows() != A.cols() || A_plus.cols() != A.rows() || x.size() != A.cols() || w.size() != A.rows()) {
        throw ShapeError("general_solution_b: shapes do not conform");
    }
    return A * x + (w - A * (A_plus * w));
}

} // namespace geninv
