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
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace geninv {

/// Threshold for a numerical rank decision: either explicit (absolute),
/// scaled by the matrix size (relative), or the automatic default
/// `scale * max(rows, cols) * eps`, where `scale` is sigma_max for SVD-based
/// decisions.
///
/// A plain `double` converts to an absolute tolerance.
class Tolerance {
  public:
    enum class Kind { automatic, absolute, relative };

    constexpr Tolerance() = default;
    constexpr Tolerance(double absolute_value) : kind_(Kind::absolute), value_(absolute_value) {} // NOLINT(google-explicit-constructor)

    static constexpr Tolerance automatic() { return {}; }
    static constexpr Tolerance absolute(double v) { return Tolerance(v); }
    static constexpr Tolerance relative(double v) {
        Tolerance t;
        t.kind_ = Kind::relative;
        t.value_ = v;
        return t;
    }

    [[nodiscard]] constexpr Kind kind() const noexcept { return kind_; }
    [[nodiscard]] constexpr double value() const noexcept { return value_; }

    [[nodiscard]] double resolve(double scale, std::size_t rows, std::size_t cols) const {
        switch (kind_) {
        case Kind::absolute:
            return value_;
        case Kind::relative:
            return value_ * scale;
        case Kind::automatic:
            break;
        }
        return scale * static_cast<double>(std::max(rows, cols)) * machine_epsilon;
    }

  private:
    Kind kind_ = Kind::automatic;
    double value_ = 0.0;
};

// ---------------------------------------------------------------------------
// Singular value decomposition (one-sided Jacobi)
// ---------------------------------------------------------------------------

/// Thin SVD A = U diag(S) V^T with k = min(m, n): U is m x k, V is n x k,
/// S descending and nonnegative.
struct Svd {
    DenseMatrix U;
    Vector S;
    DenseMatrix V;

    [[nodiscard]] DenseMatrix reconstruct() const { return U * DenseMatrix::diagonal(S) * V.transpose(); }
};

namespace detail {

// Orthonormalise the listed columns of Q against all columns already filled
// in, drawing candidates from the standard basis.
inline void complete_orthonormal_columns(DenseMatrix& Q, const std::vector<bool>& filled) {
    const std::size_t m = Q.rows();
    std::vector<std::size_t> done;
    for (std::size_t j = 0; j < Q.cols(); ++j) {
        if (filled[j]) {
            done.push_back(j);
        }
    }
    std::size_t candidate = 0;
    for (std::size_t j = 0; j < Q.cols(); ++j) {
        if (filled[j]) {
            continue;
        }
        for (; candidate < m; ++candidate) {
            Vector v(m, 0.0);
            v[candidate] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t d : done) {
                    double proj = 0.0;
                    for (std::size_t i = 0; i < m; ++i) {
                        proj += Q(i, d) * v[i];
                    }
                    for (std::size_t i = 0; i < m; ++i) {
                        v[i] -= proj * Q(i, d);
                    }
                }
            }
            const double nv = norm2(v);
            if (nv > 0.5) {
                for (std::size_t i = 0; i < m; ++i) {
                    Q(i, j) = v[i] / nv;
                }
                done.push_back(j);
                ++candidate;
                break;
            }
        }
    }
}

// One-sided Jacobi on the columns of a tall (m >= n) matrix.
inline Svd jacobi_svd_tall(const DenseMatrix& A, std::size_t max_sweeps) {
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    DenseMatrix W = A;
    DenseMatrix V = DenseMatrix::identity(n);
    const double rotation_tol = static_cast<double>(std::max<std::size_t>(m, 1)) * machine_epsilon;
    // columns below this norm are zero for every later use
    const double negligible = machine_epsilon * machine_epsilon * frobenius_norm(A);

    bool converged = n < 2;
    std::size_t sweep = 0;
    for (; sweep < max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                double gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += W(i, p) * W(i, p);
                    beta += W(i, q) * W(i, q);
                    gamma += W(i, p) * W(i, q);
                }
                // m * eps bounds the rounding error of the dot product; a
                // tighter test can cycle on noise-level columns
                const double na = std::sqrt(alpha);
                const double nb = std::sqrt(beta);
                if (gamma == 0.0 || na <= negligible || nb <= negligible ||
                    std::abs(gamma) <= rotation_tol * na * nb) {
                    continue;
                }
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = W(i, p);
                    const double wq = W(i, q);
                    W(i, p) = c * wp - s * wq;
                    W(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = V(i, p);
                    const double vq = V(i, q);
                    V(i, p) = c * vp - s * vq;
                    V(i, q) = s * vp + c * vq;
                }
            }
        }
        converged = !rotated;
    }
    if (!converged) {
        throw ConvergenceError("svd: one-sided Jacobi did not converge", sweep);
    }

    Vector sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            s += W(i, j) * W(i, j);
        }
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    Svd out{DenseMatrix(m, n), Vector(n), DenseMatrix(n, n)};
    std::vector<bool> filled(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.S[k] = sigma[j];
        for (std::size_t i = 0; i < n; ++i) {
            out.V(i, k) = V(i, j);
        }
        if (sigma[j] > negligible && sigma[j] > std::numeric_limits<double>::min()) {
            for (std::size_t i = 0; i < m; ++i) {
                out.U(i, k) = W(i, j) / sigma[j];
            }
            filled[k] = true;
        }
    }
    complete_orthonormal_columns(out.U, filled);
    return out;
}

} // namespace detail

/// Thin SVD by one-sided Jacobi. Throws ConvergenceError after `max_sweeps`.
inline Svd svd(const DenseMatrix& A, std::size_t max_sweeps = 60) {
    if (A.rows() >= A.cols()) {
        return detail::jacobi_svd_tall(A, max_sweeps);
    }
    Svd t = detail::jacobi_svd_tall(A.transpose(), max_sweeps);
    return {std::move(t.V), std::move(t.S), std::move(t.U)};
}

/// Numerical rank together with the evidence used to decide it.
struct RankDecision {
    std::size_t numeric_rank = 0;
    Vector singular_values;
    double tolerance_used = 0.0;
};

inline RankDecision rank_from_singular_values(Vector sigma, std::size_t rows, std::size_t cols, Tolerance tol) {
    const double smax = sigma.empty() ? 0.0 : sigma.front();
    RankDecision d;
    d.tolerance_used = tol.resolve(smax, rows, cols);
    d.numeric_rank = static_cast<std::size_t>(
        std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s > d.tolerance_used; }));
    d.singular_values = std::move(sigma);
    return d;
}

inline RankDecision rank_decision(const DenseMatrix& A, Tolerance tol = {}) {
    return rank_from_singular_values(svd(A).S, A.rows(), A.cols(), tol);
}

inline std::size_t numeric_rank(const DenseMatrix& A, Tolerance tol = {}) { return rank_decision(A, tol).numeric_rank; }

/// Moore-Penrose pseudoinverse from the SVD, dropping singular values at or
/// below the tolerance. Serves as the reference every other route is checked
/// against.
inline DenseMatrix pinv_oracle(const DenseMatrix& A, Tolerance tol = {}) {
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    if (m == 0 || n == 0) {
        return DenseMatrix(n, m);
    }
    const Svd f = svd(A);
    const double cutoff = tol.resolve(f.S.front(), m, n);
    DenseMatrix G(n, m);
    for (std::size_t k = 0; k < f.S.size(); ++k) {
        if (f.S[k] <= cutoff) {
            break;
        }
        const double inv = 1.0 / f.S[k];
        for (std::size_t i = 0; i < n; ++i) {
            const double vik = f.V(i, k) * inv;
            if (vik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < m; ++j) {
                G(i, j) += vik * f.U(j, k);
            }
        }
    }
    return G;
}

// ---------------------------------------------------------------------------
// Householder QR with column pivoting
// ---------------------------------------------------------------------------

/// A * Pi = Q * R with Pi(:, k) = e_{perm[k]}. Thin: Q is m x min(m,n) and R
/// is min(m,n) x n. Full: Q is m x m and R is m x n. R has a nonnegative,
/// nonincreasing diagonal.
struct PivotedQr {
    DenseMatrix Q;
    DenseMatrix R;
    IndexList perm;

    [[nodiscard]] DenseMatrix permutation() const { return column_permutation_matrix(perm); }

    /// Number of diagonal entries of R above `tol`.
    [[nodiscard]] std::size_t rank(double tol) const {
        std::size_t r = 0;
        while (r < std::min(R.rows(), R.cols()) && std::abs(R(r, r)) > tol) {
            ++r;
        }
        return r;
    }
};

/// Column-pivoted Householder QR. At each step the remaining column of largest
/// 2-norm becomes the pivot; ties go to the smallest column index.
inline PivotedQr qr_column_pivoted(const DenseMatrix& A, bool full = false) {
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    const std::size_t steps = std::min(m, n);
    DenseMatrix W = A;
    IndexList perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    std::vector<Vector> reflectors;
    std::vector<double> betas;
    reflectors.reserve(steps);

    for (std::size_t k = 0; k < steps; ++k) {
        std::size_t best = k;
        double best_norm = -1.0;
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) {
                s += W(i, j) * W(i, j);
            }
            if (s > best_norm) {
                best_norm = s;
                best = j;
            }
        }
        if (best != k) {
            for (std::size_t i = 0; i < m; ++i) {
                std::swap(W(i, k), W(i, best));
            }
            std::swap(perm[k], perm[best]);
        }

        Vector v(m - k);
        double tail = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            v[i - k] = W(i, k);
            if (i > k) {
                tail += W(i, k) * W(i, k);
            }
        }
        double beta = 0.0;
        if (tail > 0.0 || v[0] < 0.0) {
            const double norm_x = std::sqrt(v[0] * v[0] + tail);
            const double alpha = v[0] > 0.0 ? -norm_x : norm_x;
            v[0] -= alpha;
            const double vtv = v[0] * v[0] + tail;
            beta = vtv > 0.0 ? 2.0 / vtv : 0.0;
            for (std::size_t j = k; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = k; i < m; ++i) {
                    s += v[i - k] * W(i, j);
                }
                s *= beta;
                for (std::size_t i = k; i < m; ++i) {
                    W(i, j) -= s * v[i - k];
                }
            }
            for (std::size_t i = k + 1; i < m; ++i) {
                W(i, k) = 0.0;
            }
        }
        reflectors.push_back(std::move(v));
        betas.push_back(beta);
    }

    const std::size_t qcols = full ? m : steps;
    DenseMatrix Q(m, qcols);
    for (std::size_t j = 0; j < qcols; ++j) {
        Q(j, j) = 1.0;
    }
    for (std::size_t kk = steps; kk-- > 0;) {
        if (betas[kk] == 0.0) {
            continue;
        }
        const Vector& v = reflectors[kk];
        for (std::size_t j = 0; j < qcols; ++j) {
            double s = 0.0;
            for (std::size_t i = kk; i < m; ++i) {
                s += v[i - kk] * Q(i, j);
            }
            s *= betas[kk];
            for (std::size_t i = kk; i < m; ++i) {
                Q(i, j) -= s * v[i - kk];
            }
        }
    }

    const std::size_t rrows = full ? m : steps;
    DenseMatrix R(rrows, n);
    for (std::size_t i = 0; i < std::min(rrows, m); ++i) {
        for (std::size_t j = i; j < n; ++j) {
            R(i, j) = W(i, j);
        }
    }
    // flip signs so that diag(R) >= 0
    for (std::size_t k = 0; k < steps; ++k) {
        if (R(k, k) < 0.0) {
            for (std::size_t j = 0; j < n; ++j) {
                R(k, j) = -R(k, j);
            }
            for (std::size_t i = 0; i < m; ++i) {
                Q(i, k) = -Q(i, k);
            }
        }
    }
    return {std::move(Q), std::move(R), std::move(perm)};
}

/// Orthonormal basis (as columns) of C(M), the numerical column space.
inline DenseMatrix orthonormal_range(const DenseMatrix& M, Tolerance tol = {}) {
    const PivotedQr f = qr_column_pivoted(M);
    const double r00 = f.R.rows() > 0 && f.R.cols() > 0 ? std::abs(f.R(0, 0)) : 0.0;
    const std::size_t r = f.rank(tol.resolve(r00, M.rows(), M.cols()));
    return f.Q.block(0, 0, M.rows(), r);
}

/// Orthonormal basis of the orthogonal complement of C(M), i.e. of N(M^T).
inline DenseMatrix orthogonal_complement(const DenseMatrix& M, Tolerance tol = {}) {
    const PivotedQr f = qr_column_pivoted(M, true);
    const double r00 = f.R.rows() > 0 && f.R.cols() > 0 ? std::abs(f.R(0, 0)) : 0.0;
    const std::size_t r = f.rank(tol.resolve(r00, M.rows(), M.cols()));
    return f.Q.block(0, r, M.rows(), M.rows() - r);
}

// ---------------------------------------------------------------------------
// LU with complete pivoting
// ---------------------------------------------------------------------------

/// B * A * D = L * U where B = row_permutation_matrix(row_perm) and
/// D = column_permutation_matrix(col_perm). L is m x k unit lower triangular
/// with |entries| <= 1, U is k x n upper triangular, k = min(m, n).
struct LuCompletePivot {
    DenseMatrix L;
    DenseMatrix U;
    IndexList row_perm;
    IndexList col_perm;
    std::size_t nonzero_pivots = 0;

    [[nodiscard]] DenseMatrix row_permutation() const { return row_permutation_matrix(row_perm); }
    [[nodiscard]] DenseMatrix column_permutation() const { return column_permutation_matrix(col_perm); }
};

inline LuCompletePivot lu_complete_pivoted(const DenseMatrix& A) {
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    const std::size_t steps = std::min(m, n);
    DenseMatrix W = A;
    IndexList rp(m);
    IndexList cp(n);
    std::iota(rp.begin(), rp.end(), std::size_t{0});
    std::iota(cp.begin(), cp.end(), std::size_t{0});

    std::size_t pivots = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        std::size_t pi = k;
        std::size_t pj = k;
        double best = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            for (std::size_t j = k; j < n; ++j) {
                if (std::abs(W(i, j)) > best) {
                    best = std::abs(W(i, j));
                    pi = i;
                    pj = j;
                }
            }
        }
        if (best == 0.0) {
            break;
        }
        ++pivots;
        if (pi != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(W(k, j), W(pi, j));
            }
            std::swap(rp[k], rp[pi]);
        }
        if (pj != k) {
            for (std::size_t i = 0; i < m; ++i) {
                std::swap(W(i, k), W(i, pj));
            }
            std::swap(cp[k], cp[pj]);
        }
        const double pivot = W(k, k);
        for (std::size_t i = k + 1; i < m; ++i) {
            const double l = W(i, k) / pivot;
            W(i, k) = l;
            if (l == 0.0) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                W(i, j) -= l * W(k, j);
            }
        }
    }

    LuCompletePivot out{DenseMatrix(m, steps), DenseMatrix(steps, n), std::move(rp), std::move(cp), pivots};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < std::min(i, steps); ++j) {
            out.L(i, j) = W(i, j);
        }
        if (i < steps) {
            out.L(i, i) = 1.0;
        }
    }
    for (std::size_t i = 0; i < steps; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            out.U(i, j) = W(i, j);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reduced row echelon form
// ---------------------------------------------------------------------------

struct RowEchelon {
    DenseMatrix reduced;  ///< full m x n RREF; rows past the rank are zero
    IndexList pivot_cols; ///< strictly increasing

    [[nodiscard]] std::size_t rank() const noexcept { return pivot_cols.size(); }
    /// The nonzero rows of the RREF.
    [[nodiscard]] DenseMatrix nonzero_rows() const { return reduced.block(0, 0, rank(), reduced.cols()); }
};

/// Elimination threshold used by rref when no explicit tolerance is given:
/// 16 * max(m,n) * eps * ||A||_F. Relative tolerances scale by ||A||_F.
inline double elimination_tolerance(const DenseMatrix& A, Tolerance tol = {}) {
    const double scale = frobenius_norm(A);
    if (tol.kind() == Tolerance::Kind::automatic) {
        return 16.0 * tol.resolve(scale, A.rows(), A.cols());
    }
    return tol.resolve(scale, A.rows(), A.cols());
}

/// Gauss-Jordan elimination with partial pivoting (largest magnitude in the
/// column, smallest row index on ties). Columns whose best candidate is at or
/// below the threshold are skipped and zeroed.
///
/// With the automatic tolerance the threshold for a column grows with the
/// coefficients that express it in the pivot columns found so far,
/// 1 + sum_i |W(i, col)| over pivot rows; rounding in the remainder scales
/// the same way. Explicit tolerances are used as given.
inline RowEchelon rref(const DenseMatrix& A, Tolerance tol = {}) {
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    const double threshold = elimination_tolerance(A, tol);
    const bool adaptive = tol.kind() == Tolerance::Kind::automatic;
    DenseMatrix W = A;
    IndexList pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t best = row;
        double best_abs = -1.0;
        for (std::size_t i = row; i < m; ++i) {
            if (std::abs(W(i, col)) > best_abs) {
                best_abs = std::abs(W(i, col));
                best = i;
            }
        }
        double growth = 1.0;
        if (adaptive) {
            for (std::size_t i = 0; i < row; ++i) {
                growth += std::abs(W(i, col));
            }
        }
        if (best_abs <= threshold * growth) {
            for (std::size_t i = row; i < m; ++i) {
                W(i, col) = 0.0;
            }
            continue;
        }
        if (best != row) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(W(row, j), W(best, j));
            }
        }
        const double p = W(row, col);
        for (std::size_t j = col; j < n; ++j) {
            W(row, j) /= p;
        }
        W(row, col) = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row) {
                continue;
            }
            const double f = W(i, col);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = col; j < n; ++j) {
                W(i, j) -= f * W(row, j);
            }
            W(i, col) = 0.0;
        }
        pivots.push_back(col);
        ++row;
    }
    for (std::size_t i = row; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            W(i, j) = 0.0;
        }
    }
    return {std::move(W), std::move(pivots)};
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver (cyclic Jacobi)
// ---------------------------------------------------------------------------

struct SymmetricEigen {
    Vector values;       ///< ascending
    DenseMatrix vectors; ///< orthonormal columns, vectors(:,k) pairs with values[k]
};

inline SymmetricEigen symmetric_eigen(const DenseMatrix& S, std::size_t max_sweeps = 100) {
    if (!S.is_square()) {
        throw PreconditionError("symmetric_eigen: matrix is " + S.shape_string() + ", not square");
    }
    const double scale = frobenius_norm(S);
    if (asymmetry(S) > 1e-10 * scale) {
        throw PreconditionError("symmetric_eigen: matrix is not symmetric");
    }
    const std::size_t n = S.rows();
    DenseMatrix W = 0.5 * (S + S.transpose());
    DenseMatrix V = DenseMatrix::identity(n);

    bool converged = n < 2;
    std::size_t sweep = 0;
    for (; sweep < max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = W(p, q);
                if (apq == 0.0) {
                    continue;
                }
                // negligible against the diagonal or the whole matrix
                if (std::abs(apq) <= machine_epsilon * std::sqrt(std::abs(W(p, p) * W(q, q))) ||
                    std::abs(apq) <= machine_epsilon * machine_epsilon * scale) {
                    W(p, q) = 0.0;
                    W(q, p) = 0.0;
                    continue;
                }
                rotated = true;
                const double theta = (W(q, q) - W(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double wkp = W(k, p);
                    const double wkq = W(k, q);
                    W(k, p) = c * wkp - s * wkq;
                    W(k, q) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double wpk = W(p, k);
                    const double wqk = W(q, k);
                    W(p, k) = c * wpk - s * wqk;
                    W(q, k) = s * wpk + c * wqk;
                }
                W(p, q) = 0.0;
                W(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V(k, p);
                    const double vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
        converged = !rotated;
    }
    if (!converged) {
        throw ConvergenceError("symmetric_eigen: Jacobi did not converge", sweep);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return W(a, a) < W(b, b); });
    SymmetricEigen out{Vector(n), DenseMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = W(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = V(i, order[k]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Small dense solves
// ---------------------------------------------------------------------------

/// Inverse of a square matrix by Gauss-Jordan with partial pivoting. Throws
/// PreconditionError when the matrix is numerically singular (rank decision
/// with `tol`).
inline DenseMatrix inverse(const DenseMatrix& M, Tolerance tol = {}) {
    if (!M.is_square()) {
        throw ShapeError("inverse: matrix is " + M.shape_string());
    }
    const std::size_t n = M.rows();
    if (numeric_rank(M, tol) < n) {
        throw PreconditionError("inverse: matrix is numerically singular");
    }
    DenseMatrix W = M;
    DenseMatrix X = DenseMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(W(i, k)) > std::abs(W(best, k))) {
                best = i;
            }
        }
        if (best != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(W(k, j), W(best, j));
                std::swap(X(k, j), X(best, j));
            }
        }
        const double p = W(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            W(k, j) /= p;
            X(k, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || W(i, k) == 0.0) {
                continue;
            }
            const double f = W(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                W(i, j) -= f * W(k, j);
                X(i, j) -= f * X(k, j);
            }
        }
    }
    return X;
}

/// Solves T * X = B for upper triangular, nonsingular T.
inline DenseMatrix solve_upper_triangular(const DenseMatrix& T, const DenseMatrix& B) {
    if (!T.is_square() || T.rows() != B.rows()) {
        throw ShapeError("solve_upper_triangular: " + T.shape_string() + " \\ " + B.shape_string());
    }
    const std::size_t n = T.rows();
    DenseMatrix X = B;
    for (std::size_t c = 0; c < B.cols(); ++c) {
        for (std::size_t i = n; i-- > 0;) {
            double s = X(i, c);
            for (std::size_t k = i + 1; k < n; ++k) {
                s -= T(i, k) * X(k, c);
            }
            if (T(i, i) == 0.0) {
                throw PreconditionError("solve_upper_triangular: zero on the diagonal");
            }
            X(i, c) = s / T(i, i);
        }
    }
    return X;
}

} // namespace geninv
