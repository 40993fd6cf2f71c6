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
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "decompositions.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "randomized.hpp"

namespace geninv {

struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
    double w = 1.0; ///< conductance
};

/// Undirected graph with positive edge conductances. Parallel edges are
/// allowed and add up.
struct WeightedGraph {
    std::size_t node_count = 0;
    std::vector<Edge> edges;

    WeightedGraph() = default;
    WeightedGraph(std::size_t n, std::vector<Edge> e) : node_count(n), edges(std::move(e)) { validate(); }

    void validate() const {
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const Edge& e = edges[k];
            const std::string where = "edge " + std::to_string(k) + ": ";
            if (e.i >= node_count || e.j >= node_count) {
                throw PreconditionError(where + "node index out of range");
            }
            if (e.i == e.j) {
                throw PreconditionError(where + "self-loop");
            }
            if (!(e.w > 0.0) || !std::isfinite(e.w)) {
                throw PreconditionError(where + "conductance must be positive and finite");
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Connectivity
// ---------------------------------------------------------------------------

namespace detail {

class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

    std::vector<IndexList> groups() {
        std::vector<IndexList> out;
        std::vector<std::size_t> slot(parent_.size(), parent_.size());
        for (std::size_t x = 0; x < parent_.size(); ++x) {
            const std::size_t r = find(x);
            if (slot[r] == parent_.size()) {
                slot[r] = out.size();
                out.emplace_back();
            }
            out[slot[r]].push_back(x);
        }
        return out;
    }

  private:
    std::vector<std::size_t> parent_;
};

inline std::string describe_components(const std::vector<IndexList>& comps) {
    std::string s;
    for (const IndexList& c : comps) {
        s += s.empty() ? "{" : " {";
        for (std::size_t k = 0; k < c.size(); ++k) {
            s += (k ? "," : "") + std::to_string(c[k]);
        }
        s += "}";
    }
    return s;
}

} // namespace detail

/// Connected components, each sorted, ordered by smallest member.
inline std::vector<IndexList> connected_components(const WeightedGraph& g) {
    detail::DisjointSets ds(g.node_count);
    for (const Edge& e : g.edges) {
        ds.unite(e.i, e.j);
    }
    return ds.groups();
}

/// Components of the graph whose Laplacian is L (nonzero off-diagonals).
inline std::vector<IndexList> laplacian_components(const DenseMatrix& L) {
    detail::DisjointSets ds(L.rows());
    for (std::size_t i = 0; i < L.rows(); ++i) {
        for (std::size_t j = i + 1; j < L.cols(); ++j) {
            if (L(i, j) != 0.0) {
                ds.unite(i, j);
            }
        }
    }
    return ds.groups();
}

inline bool is_connected(const WeightedGraph& g) { return connected_components(g).size() <= 1; }

/// Spectral facts about a connected Laplacian that the estimators share.
struct LaplacianSpectrum {
    Vector eigenvalues; ///< ascending
    double lambda2 = 0.0;
    double gamma = 0.0; ///< 2 / lambda2
};

/// Union-find on the sparsity pattern and lambda2 > n * eps * lambda_max must
/// agree that the graph is connected.
inline LaplacianSpectrum analyze_laplacian(const DenseMatrix& L) {
    if (!L.is_square()) {
        throw ShapeError("Laplacian is " + L.shape_string() + ", not square");
    }
    const std::size_t n = L.rows();
    if (n < 2) {
        throw PreconditionError("Laplacian needs at least two nodes");
    }
    const auto comps = laplacian_components(L);
    if (comps.size() > 1) {
        throw PreconditionError("graph is disconnected: components " + detail::describe_components(comps));
    }
    const SymmetricEigen eig = symmetric_eigen(L);
    LaplacianSpectrum out;
    out.eigenvalues = eig.values;
    out.lambda2 = eig.values[1];
    const double lmax = eig.values.back();
    if (!(out.lambda2 > static_cast<double>(n) * machine_epsilon * lmax)) {
        throw PreconditionError("graph is numerically disconnected: lambda2 = " + std::to_string(out.lambda2) +
                                " although the edge pattern is connected");
    }
    out.gamma = 2.0 / out.lambda2;
    return out;
}

// ---------------------------------------------------------------------------
// Laplacian and resistance
// ---------------------------------------------------------------------------

/// Signed edge-node incidence matrix: row k has +1 at edges[k].i and -1 at edges[k].j.
inline DenseMatrix incidence_matrix(const WeightedGraph& g) {
    DenseMatrix A(g.edges.size(), g.node_count);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        A(k, g.edges[k].i) = 1.0;
        A(k, g.edges[k].j) = -1.0;
    }
    return A;
}

/// Diagonal matrix of edge conductances.
inline DenseMatrix conductance_matrix(const WeightedGraph& g) {
    Vector w(g.edges.size());
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        w[k] = g.edges[k].w;
    }
    return DenseMatrix::diagonal(w);
}

/// L = A^T W A, assembled edge by edge.
inline DenseMatrix laplacian(const WeightedGraph& g) {
    g.validate();
    DenseMatrix L(g.node_count, g.node_count);
    for (const Edge& e : g.edges) {
        L(e.i, e.i) += e.w;
        L(e.j, e.j) += e.w;
        L(e.i, e.j) -= e.w;
        L(e.j, e.i) -= e.w;
    }
    return L;
}

inline void check_pair(const DenseMatrix& L, std::size_t i, std::size_t j) {
    if (i >= L.rows() || j >= L.rows()) {
        throw PreconditionError("node index out of range (" + std::to_string(i) + ", " + std::to_string(j) +
                                " with " + std::to_string(L.rows()) + " nodes)");
    }
    if (i == j) {
        throw PreconditionError("resistance needs two distinct nodes");
    }
}

/// diag(M) 1^T + 1 diag(M)^T - 2 M for a (generalized) inverse M of L.
inline DenseMatrix resistance_from_inverse(const DenseMatrix& M) {
    const std::size_t n = M.rows();
    DenseMatrix R(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            R(i, j) = i == j ? 0.0 : M(i, i) + M(j, j) - M(i, j) - M(j, i);
        }
    }
    return R;
}

/// (e_i - e_j)^T L^+ (e_i - e_j).
inline double resistance_exact(const DenseMatrix& L, std::size_t i, std::size_t j) {
    check_pair(L, i, j);
    (void)analyze_laplacian(L);
    const DenseMatrix Lp = pinv_oracle(L);
    return Lp(i, i) + Lp(j, j) - 2.0 * Lp(i, j);
}

inline DenseMatrix resistance_matrix(const DenseMatrix& L) {
    (void)analyze_laplacian(L);
    return resistance_from_inverse(pinv_oracle(L));
}

/// Schur complement L_SS - L_ST L_TT^+ L_TS, T the complement of S. Rows and
/// columns follow the order of S.
inline DenseMatrix kron_reduce(const DenseMatrix& L, const IndexList& S) {
    if (!L.is_square()) {
        throw ShapeError("kron_reduce: Laplacian is " + L.shape_string());
    }
    const std::size_t n = L.rows();
    std::vector<bool> in_s(n, false);
    for (std::size_t s : S) {
        if (s >= n || in_s[s]) {
            throw PreconditionError("kron_reduce: subset has a duplicate or out-of-range node");
        }
        in_s[s] = true;
    }
    if (S.empty() || S.size() == n) {
        throw PreconditionError("kron_reduce: subset must be nonempty and proper");
    }
    IndexList T;
    for (std::size_t k = 0; k < n; ++k) {
        if (!in_s[k]) {
            T.push_back(k);
        }
    }
    const DenseMatrix LS = L.select_rows(S);
    const DenseMatrix LT = L.select_rows(T);
    return LS.select_cols(S) - LS.select_cols(T) * pinv_oracle(LT.select_cols(T)) * LT.select_cols(S);
}

/// d^T M^+ d for d = (1, -1) and the symmetric 2x2 matrix M = [[a, b], [b, c]],
/// through its closed-form eigendecomposition.
inline double pinv_quadratic_2x2(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    const double lambdas[2] = {mean + radius, mean - radius};
    const double cutoff = 2.0 * machine_epsilon * std::max(std::abs(lambdas[0]), std::abs(lambdas[1]));
    if (radius == 0.0) {
        // M = a I, so d^T M^+ d = 2 / a
        return std::abs(a) > cutoff ? 2.0 / a : 0.0;
    }
    double total = 0.0;
    for (double lambda : lambdas) {
        if (std::abs(lambda) <= cutoff) {
            continue;
        }
        // two candidate eigenvectors; the longer one is the stable choice
        double vx = b;
        double vy = lambda - a;
        const double ux = lambda - c;
        const double uy = b;
        if (std::hypot(ux, uy) > std::hypot(vx, vy)) {
            vx = ux;
            vy = uy;
        }
        const double proj = (vx - vy) / std::hypot(vx, vy);
        total += proj * proj / lambda;
    }
    return total;
}

struct ResistanceEstimate {
    std::size_t i = 0;
    std::size_t j = 0;
    double exact = 0.0;
    double approx = 0.0;
    double epsilon = 0.0; ///< exact - approx
    double gamma = 0.0;   ///< 2 / lambda2
};

/// Estimates for many pairs sharing one L^+ and one eigendecomposition.
inline std::vector<ResistanceEstimate> resistance_submatrix_estimates(
    const DenseMatrix& L, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    for (const auto& [i, j] : pairs) {
        check_pair(L, i, j);
    }
    const LaplacianSpectrum spec = analyze_laplacian(L);
    const DenseMatrix Lp = pinv_oracle(L);
    std::vector<ResistanceEstimate> out;
    out.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
        ResistanceEstimate e;
        e.i = i;
        e.j = j;
        e.exact = Lp(i, i) + Lp(j, j) - 2.0 * Lp(i, j);
        e.approx = pinv_quadratic_2x2(L(i, i), 0.5 * (L(i, j) + L(j, i)), L(j, j));
        e.epsilon = e.exact - e.approx;
        e.gamma = spec.gamma;
        out.push_back(e);
    }
    return out;
}

/// R~_ij = d^T L_SS^+ d on the principal submatrix S = {i, j}.
inline ResistanceEstimate resistance_submatrix_estimate(const DenseMatrix& L, std::size_t i, std::size_t j) {
    return resistance_submatrix_estimates(L, {{i, j}}).front();
}

/// All unordered pairs i < j.
inline std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            out.emplace_back(i, j);
        }
    }
    return out;
}

inline double gamma_bound(const DenseMatrix& L) { return analyze_laplacian(L).gamma; }

// ---------------------------------------------------------------------------
// Ordering inference
// ---------------------------------------------------------------------------

enum class Ordering { less, greater, inconclusive };

inline std::string_view to_string(Ordering o) {
    switch (o) {
    case Ordering::less:
        return "less";
    case Ordering::greater:
        return "greater";
    case Ordering::inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

struct OrderingInference {
    Ordering verdict = Ordering::inconclusive;
};

/// less when rt_ij - rt_ik < -gamma (then R_ij < R_ik), greater when the
/// difference exceeds gamma.
inline OrderingInference infer_ordering(double rt_ij, double rt_ik, double gamma) {
    if (!(gamma > 0.0)) {
        throw PreconditionError("infer_ordering: gamma must be positive");
    }
    const double diff = rt_ij - rt_ik;
    if (diff < -gamma) {
        return {Ordering::less};
    }
    if (diff > gamma) {
        return {Ordering::greater};
    }
    return {};
}

/// Resistance matrix from L_p = Q (P^T L Q)^+ P^T.
inline DenseMatrix resistance_randomized(const DenseMatrix& L, const SketchPair& s, Tolerance tol = {}) {
    return resistance_from_inverse(sketched_pinv(L, s, tol));
}

} // namespace geninv
