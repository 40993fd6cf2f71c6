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

// Seeded randomized property checks shared by the unit tests and the
// acceptance runner. Each check counts trials and violations and keeps the
// first failure for diagnostics.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "geninv/geninv.hpp"
#include "support/oracles.hpp"

namespace geninv::testing {

struct PropertyResult {
    std::size_t trials = 0;
    std::size_t violations = 0;
    std::size_t skipped = 0;
    std::string first_failure;
    std::string note;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            ++violations;
            if (first_failure.empty()) {
                first_failure = what;
            }
        }
    }
    [[nodiscard]] bool ok() const { return violations == 0; }
};

inline std::size_t draw(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.index(hi - lo + 1); }

inline double rel_gap(const DenseMatrix& X, const DenseMatrix& Y) {
    return distance(X, Y) / std::max(1.0, frobenius_norm(Y));
}

inline const Tolerance property_rank_tol = Tolerance::relative(1e-10);

// ---------------------------------------------------------------------------
// Pseudoinverse oracle and {1}-inverse parametrization
// ---------------------------------------------------------------------------

inline PropertyResult penrose_classification(std::size_t trials, std::uint64_t seed) {
    PropertyResult res;
    Rng rng(seed);
    std::size_t exact_two = 0;
    std::size_t above_absolute = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t m = draw(rng, 1, 12);
        const std::size_t n = draw(rng, 1, 12);
        const std::size_t r = draw(rng, 0, std::min(m, n));
        const DenseMatrix A = planted_rank_matrix(m, n, r, rng);
        const std::string tag = "trial " + std::to_string(t) + " (" + std::to_string(m) + "x" + std::to_string(n) +
                                ", rank " + std::to_string(r) + "): ";
        ++res.trials;

        const PenroseReport oracle = verify_penrose(A, pinv_oracle(A));
        res.check(oracle.classification == InverseClass::pseudoinverse,
                  tag + "oracle residuals " + std::to_string(std::max({oracle.r1, oracle.r2, oracle.r3, oracle.r4})));

        OneInverseSpec spec{gaussian_matrix(r, m - r, rng), gaussian_matrix(n - r, r, rng), DenseMatrix(n - r, m - r)};
        spec.Z22 = spec.Z21 * spec.Z12;
        const DenseMatrix G = construct_one_inverse(A, spec);
        // Rounding in the elimination factors is amplified by ||G||, which is
        // large when the pivot columns are nearly dependent.
        const double scaled = 1e-9 * std::max(1.0, frobenius_norm(A) * frobenius_norm(G));
        const PenroseReport two = verify_penrose(A, G, scaled);
        if (std::max(two.r1, two.r2) > 1e-9) {
            ++above_absolute;
        }
        const bool free_blocks = !spec.Z12.empty() || !spec.Z21.empty();
        if (free_blocks) {
            res.check(two.classification == InverseClass::one_two_inverse,
                      tag + "Z22 = Z21 Z12 classified " + std::string(to_string(two.classification)));
            ++exact_two;
        } else {
            res.check(two.classification >= InverseClass::one_two_inverse, tag + "empty blocks not a {1,2}-inverse");
        }
        res.check(eigen_rank(G) == r, tag + "rank(G) != rank(A)");

        if (!spec.Z22.empty()) {
            DenseMatrix E = gaussian_matrix(n - r, m - r, rng);
            E *= 1e-3 / frobenius_norm(E) * std::sqrt(static_cast<double>(E.size()));
            OneInverseSpec off = spec;
            off.Z22 += E; // ||E||_F >= 1e-3
            const PenroseReport one = verify_penrose(A, construct_one_inverse(A, off), scaled);
            res.check(one.r1 <= scaled, tag + "perturbed Z22 broke A G A = A");
            res.check(one.r2 > 1e-6, tag + "perturbed Z22 kept r2 = " + std::to_string(one.r2));
        }
    }
    res.note = std::to_string(exact_two) + " instances with nonempty free blocks, " + std::to_string(above_absolute) +
               " need the norm-scaled tolerance";
    return res;
}

// ---------------------------------------------------------------------------
// Reverse order law
// ---------------------------------------------------------------------------

/// Pairs of three families: full-rank factors (law holds), factors sharing
/// their middle singular vectors (law holds), and generic rank-deficient
/// factors (law fails).
inline PropertyResult greville_iff(std::size_t trials, std::uint64_t seed) {
    PropertyResult res;
    Rng rng(seed);
    std::size_t holds = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t family = t % 3;
        const std::size_t m = draw(rng, 2, 8);
        const std::size_t n = draw(rng, 2, 8);
        DenseMatrix C;
        DenseMatrix R;
        if (family == 0) {
            const std::size_t k = draw(rng, 1, std::min(m, n));
            C = planted_rank_matrix(m, k, k, rng, 0.5, 2.0);
            R = planted_rank_matrix(k, n, k, rng, 0.5, 2.0);
        } else if (family == 1) {
            const std::size_t k = draw(rng, 2, 6);
            const DenseMatrix W = from_eigen(
                Eigen::HouseholderQR<Eigen::MatrixXd>(to_eigen(gaussian_matrix(k, k, rng))).householderQ() *
                Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
            auto diag_factor = [&](std::size_t rows, std::size_t cols) {
                // diagonal with random zeros; D(0,0) stays nonzero so CR is not
                // pure rounding noise
                const std::size_t d = std::min(rows, cols);
                DenseMatrix D(rows, cols);
                for (std::size_t i = 0; i < d; ++i) {
                    D(i, i) = i > 0 && rng.uniform() < 0.35 ? 0.0 : 0.5 + 1.5 * rng.uniform();
                }
                return D;
            };
            const DenseMatrix U = planted_rank_matrix(m, m, m, rng, 1.0, 1.0);
            const DenseMatrix V = planted_rank_matrix(n, n, n, rng, 1.0, 1.0);
            C = U * diag_factor(m, k) * W.transpose();
            R = W * diag_factor(k, n) * V.transpose();
        } else {
            const std::size_t k = draw(rng, 3, 7);
            C = planted_rank_matrix(m, k, draw(rng, 1, std::min(m, k) - (std::min(m, k) > 1 ? 1 : 0)), rng, 0.5, 2.0);
            R = planted_rank_matrix(k, n, draw(rng, 1, std::min(k, n) - (std::min(k, n) > 1 ? 1 : 0)), rng, 0.5, 2.0);
        }
        ++res.trials;
        const std::string tag = "trial " + std::to_string(t) + " family " + std::to_string(family) + ": ";
        const GrevilleConditions g = greville_conditions(C, R, property_rank_tol);
        const DenseMatrix lhs = eigen_pinv(C * R);
        const bool law = distance(lhs, eigen_pinv(R) * eigen_pinv(C)) <= 1e-8 * std::max(1.0, frobenius_norm(lhs));
        res.check(g.both() == law, tag + "conditions (" + std::to_string(g.row_inclusion) + "," +
                                       std::to_string(g.column_inclusion) + ") but law " + (law ? "holds" : "fails"));
        if (g.both()) {
            ++holds;
            const double resid = two_sided_projection_residual(C, R, property_rank_tol);
            res.check(resid <= 1e-9, tag + "projection residual " + std::to_string(resid));
        }
        const DenseMatrix corrected = pinv_corrected(C, R, property_rank_tol);
        res.check(rel_gap(corrected, lhs) <= 1e-8, tag + "corrected formula differs from the oracle");
    }
    res.note = std::to_string(holds) + " of " + std::to_string(res.trials) + " pairs satisfy the law";
    return res;
}

// ---------------------------------------------------------------------------
// Sketched pseudoinverse: exact iff rank preserved
// ---------------------------------------------------------------------------

inline PropertyResult sketch_iff_forward(std::size_t instances, std::uint64_t seed) {
    PropertyResult res;
    Rng rng(seed);
    while (res.trials < instances) {
        const std::size_t m = draw(rng, 1, 12);
        const std::size_t n = draw(rng, 1, 12);
        const std::size_t r = draw(rng, 1, std::min(m, n));
        const DenseMatrix A = planted_rank_matrix(m, n, r, rng);
        const std::size_t p = draw(rng, r, m);
        const std::size_t q = draw(rng, r, n);
        const SketchPair s = make_gaussian_sketch(m, n, p, q, rng.index(1u << 30));
        if (!check_rank_preservation(A, s, property_rank_tol).preserved) {
            ++res.skipped;
            continue;
        }
        ++res.trials;
        const DenseMatrix oracle = eigen_pinv(A);
        const double gap = distance(pinv_randomized(A, s, property_rank_tol), oracle);
        res.check(gap <= 1e-8 * std::max(1.0, frobenius_norm(oracle)),
                  "preserved instance " + std::to_string(res.trials) + " misses A^+ by " + std::to_string(gap));
    }
    return res;
}

inline PropertyResult sketch_iff_converse(std::size_t instances, std::uint64_t seed) {
    PropertyResult res;
    Rng rng(seed);
    while (res.trials < instances) {
        const std::size_t m = draw(rng, 2, 12);
        const std::size_t n = draw(rng, 2, 12);
        const std::size_t r = draw(rng, 2, std::min(m, n));
        const DenseMatrix A = planted_rank_matrix(m, n, r, rng);
        // break the row sketch, the column sketch, or both
        const std::size_t mode = res.trials % 3;
        const std::size_t p = mode == 1 ? draw(rng, r, m) : draw(rng, 1, r - 1);
        const std::size_t q = mode == 0 ? draw(rng, r, n) : draw(rng, 1, r - 1);
        const SketchPair s = make_gaussian_sketch(m, n, p, q, rng.index(1u << 30));
        const RankPreservationReport rep = check_rank_preservation(A, s, property_rank_tol);
        if (rep.preserved) {
            ++res.skipped;
            continue;
        }
        ++res.trials;
        const DenseMatrix out = pinv_randomized(A, s, property_rank_tol);
        const std::size_t out_rank = eigen_rank(out);
        res.check(out_rank < r, "broken instance " + std::to_string(res.trials) + " has output rank " +
                                    std::to_string(out_rank) + ", rank(A) = " + std::to_string(r));
        res.check(rep.rank_PTA <= rep.rank_A && rep.rank_AQ <= rep.rank_A, "sketch increased a rank");
    }
    return res;
}

// ---------------------------------------------------------------------------
// Resistance estimator corpus
// ---------------------------------------------------------------------------

struct GraphCorpusStats {
    std::size_t pairs = 0;
    std::size_t triples = 0;
    std::size_t conclusive = 0;
};

inline PropertyResult resistance_corpus(std::size_t graphs, std::uint64_t seed, GraphCorpusStats* stats = nullptr) {
    PropertyResult res;
    GraphCorpusStats st;
    Rng rng(seed);
    for (std::size_t gi = 0; gi < graphs; ++gi) {
        const std::size_t n = draw(rng, 2, 12);
        const WeightedGraph g = random_connected_graph(n, 0.5 * rng.uniform(), rng);
        const DenseMatrix L = laplacian(g);
        const std::string tag = "graph " + std::to_string(gi) + " (n=" + std::to_string(n) + "): ";
        ++res.trials;
        res.check(distance(L, incidence_laplacian(g)) <= 1e-12, tag + "Laplacian differs from A^T W A");

        const auto est = resistance_submatrix_estimates(L, all_pairs(n));
        const double gamma = est.front().gamma;
        const auto lambdas = eigen_symmetric_values(L);
        res.check(std::abs(gamma - 2.0 / lambdas[1]) <= 1e-9 * gamma, tag + "gamma disagrees with the oracle spectrum");

        DenseMatrix R(n, n);
        DenseMatrix Rt(n, n);
        for (const ResistanceEstimate& e : est) {
            ++st.pairs;
            const double oracle = grounded_resistance(L, e.i, e.j);
            const std::string pt = tag + "pair (" + std::to_string(e.i) + "," + std::to_string(e.j) + ") ";
            res.check(std::abs(e.exact - oracle) <= 1e-9 * std::max(1.0, oracle), pt + "exact differs from grounded solve");
            res.check(e.approx <= e.exact + 1e-10, pt + "overestimates");
            res.check(e.epsilon >= -1e-10 && e.epsilon <= gamma + 1e-9, pt + "epsilon outside [0, gamma]");
            R(e.i, e.j) = R(e.j, e.i) = e.exact;
            Rt(e.i, e.j) = Rt(e.j, e.i) = e.approx;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < n; ++k) {
                    if (i == j || j == k || i == k) {
                        continue;
                    }
                    ++st.triples;
                    const std::string tt = tag + "triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                           std::to_string(k) + ") ";
                    const double dt = Rt(i, j) - Rt(i, k);
                    const double d = R(i, j) - R(i, k);
                    res.check(std::abs(dt - d) <= gamma + 1e-9, tt + "difference bound");
                    const Ordering v = infer_ordering(Rt(i, j), Rt(i, k), gamma).verdict;
                    if (v != Ordering::inconclusive) {
                        ++st.conclusive;
                        res.check(v == Ordering::less ? d < 0.0 : d > 0.0, tt + "unsound verdict");
                    }
                    res.check(R(j, k) <= R(j, i) + R(i, k) + 1e-9, tt + "triangle inequality");
                }
            }
        }
        if (n >= 3) {
            for (int rep = 0; rep < 3; ++rep) {
                const std::size_t size = draw(rng, 2, n - 1);
                IndexList S = rng.subset(n, size);
                const DenseMatrix K = kron_reduce(L, S);
                const DenseMatrix Kp = eigen_pinv(K);
                res.check(std::abs(std::accumulate(K.data().begin(), K.data().end(), 0.0)) <= 1e-9 * frobenius_norm(L),
                          tag + "Kron reduction is not a Laplacian");
                for (std::size_t a = 0; a < S.size(); ++a) {
                    for (std::size_t b = a + 1; b < S.size(); ++b) {
                        const double viaK = Kp(a, a) + Kp(b, b) - 2.0 * Kp(a, b);
                        const double exact = R(S[a], S[b]);
                        res.check(std::abs(viaK - exact) <= 1e-9 * std::max(1.0, exact), tag + "Kron invariance");
                    }
                }
            }
        }
    }
    res.note = std::to_string(st.pairs) + " pairs, " + std::to_string(st.triples) + " triples, " +
               std::to_string(st.conclusive) + " conclusive verdicts";
    if (stats) {
        *stats = st;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Applications
// ---------------------------------------------------------------------------

/// CUR equals the column-select sketched formula entrywise.
inline PropertyResult cur_matches_sketch(std::size_t trials, std::uint64_t seed) {
    PropertyResult res;
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t m = draw(rng, 1, 12);
        const std::size_t n = draw(rng, 1, 12);
        const DenseMatrix A = planted_rank_matrix(m, n, draw(rng, 1, std::min(m, n)), rng);
        const IndexList I = rng.subset(m, draw(rng, 1, m));
        const IndexList J = rng.subset(n, draw(rng, 1, n));
        const DenseMatrix cur = cur_pinv(A, I, J);
        const DenseMatrix sk = pinv_randomized(A, make_column_select_sketch(m, n, I, J));
        ++res.trials;
        res.check(max_abs(cur - sk) <= 1e-12, "trial " + std::to_string(t) + ": max entry gap " +
                                                  std::to_string(max_abs(cur - sk)));
    }
    return res;
}

/// Randomized-SVD pattern with q >= rank reproduces A^+ in at least 95% of
/// trials; A X is symmetric in all of them.
inline PropertyResult rsvd_exact(std::size_t trials, std::uint64_t seed) {
    PropertyResult res;
    Rng rng(seed);
    std::size_t good = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t m = draw(rng, 2, 12);
        const std::size_t n = draw(rng, 2, 12);
        const std::size_t r = draw(rng, 1, std::min(m, n));
        const DenseMatrix A = planted_rank_matrix(m, n, r, rng);
        const std::size_t q = draw(rng, r, n);
        const DenseMatrix X = randomized_svd_pinv(A, q, rng.index(1u << 30), property_rank_tol);
        ++res.trials;
        const DenseMatrix oracle = eigen_pinv(A);
        good += distance(X, oracle) <= 1e-8 * std::max(1.0, frobenius_norm(oracle)) ? 1 : 0;
        res.check(asymmetry(A * X) <= 1e-9, "trial " + std::to_string(t) + ": A X is not an orthogonal projector");
    }
    res.check(good >= trials * 95 / 100, std::to_string(good) + " exact trials");
    res.note = std::to_string(good) + "/" + std::to_string(trials) + " exact";
    return res;
}

/// Sensor placement with p = rank reconstructs signals in C(A).
inline PropertyResult sensor_reconstruction(std::size_t trials, std::uint64_t seed) {
    PropertyResult res;
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t m = draw(rng, 2, 12);
        const std::size_t n = draw(rng, 2, 12);
        const std::size_t r = draw(rng, 1, std::min(m, n));
        const DenseMatrix A = planted_rank_matrix(m, n, r, rng);
        const Vector x0 = gaussian_matrix(n, 1, rng).column_vector(0);
        const Vector y = A * x0;
        ++res.trials;
        for (const SensorPlacement& sp : {sensor_place_qr(A, r), sensor_place_lu(A, r)}) {
            const Vector ye = reconstruct_signal(A, sp, y, property_rank_tol);
            res.check(norm2(ye - y) <= 1e-8 * std::max(1.0, norm2(y)),
                      "trial " + std::to_string(t) + " " + std::string(to_string(sp.method)) + " misses y");
            const DenseMatrix Ap = A * sensor_estimator(A, sp, property_rank_tol) * A;
            res.check(distance(Ap, A) <= 1e-8 * frobenius_norm(A),
                      "trial " + std::to_string(t) + " " + std::string(to_string(sp.method)) + " reconstruction of A");
        }
    }
    return res;
}

/// Generalized Nystrom with Gaussian width >= rank + 2 is exact.
inline PropertyResult nystrom_exact(std::size_t trials, std::uint64_t seed, std::size_t* successes = nullptr) {
    PropertyResult res;
    Rng rng(seed);
    std::size_t good = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const DenseMatrix A = random_rank_matrix(8, 6, 3, rng);
        const std::size_t w = draw(rng, 5, 6);
        const SketchPair s = make_gaussian_sketch(8, 6, w, w, rng.index(1u << 30));
        const NystromResult nr = generalized_nystrom(A, s, property_rank_tol);
        ++res.trials;
        good += nr.report.approximation_error <= 1e-8 * frobenius_norm(A) ? 1 : 0;
    }
    res.check(good >= trials * 95 / 100, std::to_string(good) + " exact reconstructions");
    res.note = std::to_string(good) + "/" + std::to_string(trials) + " exact";
    if (successes) {
        *successes = good;
    }
    return res;
}

} // namespace geninv::testing
