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

#include <catch_amalgamated.hpp>

#include "geninv/geninverse.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace geninv;
using namespace geninv::testing;

namespace {

const DenseMatrix example_A{{1, 4, 5}, {2, 3, 5}};
const DenseMatrix example_A_plus = DenseMatrix{{-8, 9}, {7, -6}, {-1, 3}} * (1.0 / 15.0);
const DenseMatrix example_C{{1, 4}, {2, 3}};
const DenseMatrix example_R{{1, 0, 1}, {0, 1, 1}};

// the subspace example: A^T = [[1,0,0],[0,0,0]] and its 1-inverse
const DenseMatrix sub_A{{1, 0}, {0, 0}, {0, 0}};
const DenseMatrix sub_Ag{{1, 3, 2}, {3, 3, 2}};

} // namespace

TEST_CASE("Penrose verification") {
    CHECK(verify_penrose(example_A, example_A_plus).classification == InverseClass::pseudoinverse);
    const PenroseReport sub = verify_penrose(sub_A, sub_Ag);
    CHECK(sub.classification == InverseClass::one_inverse);
    CHECK(sub.r1 == 0.0);
    CHECK(sub.r2 > 1.0);
    const PenroseReport id = verify_penrose(DenseMatrix::identity(2), DenseMatrix::identity(2));
    CHECK(id.classification == InverseClass::pseudoinverse);
    CHECK(id.r1 + id.r2 + id.r3 + id.r4 == 0.0);
    CHECK_THROWS_AS(verify_penrose(example_A, example_A), ShapeError);
    CHECK(inverse_class_from_string("one_two_inverse") == InverseClass::one_two_inverse);
    CHECK_FALSE(inverse_class_from_string("bogus").has_value());
}

TEST_CASE("a random transpose is typically not an inverse") {
    Rng rng(31);
    const DenseMatrix A = gaussian_matrix(4, 3, rng);
    CHECK(verify_penrose(A, A.transpose()).classification == InverseClass::not_an_inverse);
}

TEST_CASE("reverse order law under full rank") {
    CHECK(distance(pinv_reverse_order(example_C, example_R), example_A_plus) <= 1e-12);
    CHECK(distance(pinv_reverse_order(cr_factorize(example_A)), example_A_plus) <= 1e-12);
    CHECK(verify_penrose(example_A, pinv_reverse_order(example_C, example_R)).classification == InverseClass::pseudoinverse);
    CHECK(distance(pinv_reverse_order(DenseMatrix::identity(2), DenseMatrix::identity(2)), DenseMatrix::identity(2)) <=
          1e-15);
}

TEST_CASE("reverse order law counterexample") {
    const DenseMatrix C{{1, 0}};
    const DenseMatrix R{{1}, {1}};
    try {
        (void)pinv_reverse_order(C, R);
        FAIL("expected the full column rank check to fire");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("C lacks full column rank") != std::string::npos);
    }
    CHECK(std::abs(pinv_oracle(C * R)(0, 0) - 1.0) <= 1e-12);
    CHECK(std::abs(reverse_order_product(C, R)(0, 0) - 0.5) <= 1e-12);
    try {
        (void)pinv_reverse_order(DenseMatrix::identity(2), DenseMatrix{{1, 1}, {1, 1}});
        FAIL("expected the full row rank check to fire");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("R lacks full row rank") != std::string::npos);
    }
}

TEST_CASE("corrected formula") {
    CHECK(std::abs(pinv_corrected(DenseMatrix{{1, 0}}, DenseMatrix{{1}, {1}})(0, 0) - 1.0) <= 1e-12);
    const DenseMatrix C{{1, 1}, {1, 1}};
    const DenseMatrix R{{1, 0}, {1, 0}};
    const DenseMatrix quarter = DenseMatrix{{1, 1}, {0, 0}} * 0.25;
    CHECK(distance(pinv_corrected(C, R), quarter) <= 1e-12);
    CHECK(distance(pinv_oracle(C * R), quarter) <= 1e-12);
    CHECK(distance(reverse_order_product(C, R), quarter) <= 1e-12);
    CHECK(distance(pinv_corrected(DenseMatrix::identity(2), DenseMatrix::identity(2)), DenseMatrix::identity(2)) <= 1e-15);
    CHECK_THROWS_AS(pinv_corrected(C, example_R.transpose()), ShapeError);
}

TEST_CASE("MacDuffee formula") {
    CHECK(distance(pinv_macduffee(cr_factorize(example_A)), example_A_plus) <= 1e-12);
    CHECK(distance(pinv_macduffee(cr_factorize(DenseMatrix::identity(2))), DenseMatrix::identity(2)) <= 1e-15);
    Rng rng(32);
    for (int t = 0; t < 20; ++t) {
        const DenseMatrix A = planted_rank_matrix(5, 3, 2, rng);
        const CRFactorization F = cr_factorize(A);
        const DenseMatrix M = pinv_macduffee(F);
        CHECK(rel_gap(M, eigen_pinv(A)) <= 1e-9);
        CHECK(distance(M, pinv_reverse_order(F)) <= 1e-10 * frobenius_norm(eigen_pinv(A)));
    }
    CRFactorization broken{DenseMatrix{{1, 0}}, DenseMatrix{{1}, {1}}, 1, {0}};
    CHECK_THROWS_AS(pinv_macduffee(broken), PreconditionError);
}

TEST_CASE("Greville conditions on the worked examples") {
    CHECK_FALSE(greville_conditions(DenseMatrix{{1, 0}}, DenseMatrix{{1}, {1}}).both());
    const GrevilleConditions full = greville_conditions(example_C, example_R);
    CHECK(full.row_inclusion);
    CHECK(full.column_inclusion);
    CHECK(greville_conditions(DenseMatrix{{1, 1}, {1, 1}}, DenseMatrix{{1, 0}, {1, 0}}).both());
}

TEST_CASE("two-sided projection residual") {
    CHECK(two_sided_projection_residual(example_C, example_R) <= 1e-10);
    CHECK(two_sided_projection_residual(DenseMatrix{{1, 0}}, DenseMatrix{{1}, {1}}) > 1e-6);
    CHECK(two_sided_projection_residual(DenseMatrix::identity(2), DenseMatrix::identity(2)) == 0.0);
}

TEST_CASE("reverse order law iff the Greville conditions") {
    const PropertyResult r = greville_iff(90, 33);
    INFO(r.first_failure);
    CHECK(r.ok());
}

TEST_CASE("one-inverse parametrization reproduces the subspace example") {
    const OneInverseParameters p = one_inverse_parameters(sub_A, sub_Ag);
    CHECK(p.identity_defect <= 1e-15);
    const DenseMatrix G = construct_one_inverse(sub_A, p.spec);
    CHECK(distance(G, sub_Ag) <= 1e-12);
    CHECK(verify_penrose(sub_A, G).classification == InverseClass::one_inverse);
    CHECK(eigen_rank(G) == 2);
    CHECK(eigen_rank(sub_A) == 1);
    // Z22 differs from Z21 Z12, which is why the second identity fails
    CHECK(distance(p.spec.Z22, p.spec.Z21 * p.spec.Z12) > 1.0);
}

TEST_CASE("zero free blocks give the pseudoinverse") {
    Rng rng(34);
    for (int t = 0; t < 20; ++t) {
        const std::size_t m = draw(rng, 1, 8);
        const std::size_t n = draw(rng, 1, 8);
        const std::size_t r = draw(rng, 0, std::min(m, n));
        const DenseMatrix A = planted_rank_matrix(m, n, r, rng, 0.5, 2.0);
        const DenseMatrix G = construct_one_inverse(A, OneInverseSpec::zeros(r, m, n));
        CHECK(rel_gap(G, eigen_pinv(A)) <= 1e-9);
    }
}

TEST_CASE("block shapes are checked") {
    CHECK_THROWS_AS(construct_one_inverse(example_A, OneInverseSpec::zeros(1, 2, 3)), ShapeError);
}

TEST_CASE("Penrose classification of constructed inverses") {
    const PropertyResult r = penrose_classification(60, 35);
    INFO(r.first_failure);
    CHECK(r.ok());
}

TEST_CASE("matrix equation solver") {
    SECTION("identity factors") {
        const DenseMatrix A{{1, 2}, {3, 4}};
        const DenseMatrix Z{{5, 6}, {7, 8}};
        const MatrixEquationSolution s = solve_matrix_equation(DenseMatrix::identity(2), A, DenseMatrix::identity(2), Z);
        REQUIRE(s.solvable);
        CHECK(distance(*s.X, A) <= 1e-14);
    }
    SECTION("inconsistent right-hand side") {
        const MatrixEquationSolution s =
            solve_matrix_equation(DenseMatrix{{1}, {0}}, DenseMatrix{{0}, {1}}, DenseMatrix{{1}});
        CHECK_FALSE(s.solvable);
        CHECK_FALSE(s.X.has_value());
    }
    SECTION("constructive instances with random free parts") {
        Rng rng(36);
        const DenseMatrix Cbar = planted_rank_matrix(5, 3, 2, rng);
        const DenseMatrix Rbar = planted_rank_matrix(2, 4, 2, rng);
        const DenseMatrix A = Cbar * gaussian_matrix(3, 2, rng) * Rbar;
        for (int t = 0; t < 20; ++t) {
            const MatrixEquationSolution s = solve_matrix_equation(Cbar, A, Rbar, gaussian_matrix(3, 2, rng));
            REQUIRE(s.solvable);
            CHECK(distance(Cbar * *s.X * Rbar, A) <= 1e-9 * std::max(1.0, frobenius_norm(A)));
        }
    }
}

TEST_CASE("general solution of A x = b") {
    CHECK(general_solution_x(DenseMatrix::identity(2), DenseMatrix::identity(2), {3, 4}, {9, 9}) == Vector{3, 4});

    Rng rng(37);
    const Vector b{13, 0, 0};
    for (int t = 0; t < 10; ++t) {
        const Vector z = gaussian_matrix(2, 1, rng).column_vector(0);
        const Vector x = general_solution_x(sub_A, sub_Ag, b, z);
        CHECK(norm2(sub_A * x - b) <= 1e-12);
    }
    CHECK_THROWS_AS(general_solution_x(sub_A, sub_Ag, {0, 1, 0}, {0, 0}), PreconditionError);
    // 2 A^T gives A G A = 2 A
    CHECK_THROWS_AS(general_solution_x(sub_A, sub_A.transpose() * 2.0, b, {0, 0}), PreconditionError);

    const DenseMatrix A = planted_rank_matrix(4, 3, 2, rng);
    const DenseMatrix G = pinv_oracle(A);
    const Vector rhs = A * gaussian_matrix(3, 1, rng).column_vector(0);
    for (int t = 0; t < 20; ++t) {
        const Vector x = general_solution_x(A, G, rhs, gaussian_matrix(3, 1, rng).column_vector(0));
        CHECK(norm2(A * x - rhs) <= 1e-10);
    }
}

TEST_CASE("subspace example chain") {
    const Vector y{0, 3, 2};
    const Vector gy = sub_Ag * y;
    CHECK(gy == Vector{13, 13});
    const Vector agy = sub_A * gy;
    CHECK(agy == Vector{13, 0, 0});
    CHECK(sub_Ag * agy == Vector{13, 39});
}

TEST_CASE("general solution of A^+ b = x") {
    Rng rng(38);
    const DenseMatrix A = planted_rank_matrix(5, 4, 2, rng);
    const DenseMatrix Ap = pinv_oracle(A);
    const Vector x = Ap * gaussian_matrix(5, 1, rng).column_vector(0); // in the row space
    for (int t = 0; t < 10; ++t) {
        const Vector b = general_solution_b(A, Ap, x, gaussian_matrix(5, 1, rng).column_vector(0));
        CHECK(norm2(Ap * b - x) <= 1e-10);
    }
}
