#include <catch2/catch_amalgamated.hpp>

#include "qpreth/benchmarks.hpp"
#include "qpreth/homological.hpp"
#include "support/generators.hpp"

using namespace qpreth;
using namespace qpreth::testgen;

TEST_CASE("cosine drive solves to the analytic sine generator", "[homological]") {
    auto lat = LatticeSpec::cube(1, 0, 2);
    auto nu = DiophantineVector::certify({golden_ratio(), 1.0}, 1.2, 16);
    Rng rng(81);
    MatrixXcd m = random_hermitian(2, rng);
    Mode l0{2, -1};
    Interaction a(lat, 2);
    TrigMatrix p(2, 2);
    p.add_coeff(l0, 0.5 * m);
    p.add_coeff({-2, 1}, 0.5 * m);
    a.add_term(SupportSet({{0}}), p);

    auto sol = solve_homological(a, nu, 8.0, 0.3, 0.2);
    double nl = dot(nu.nu, l0);
    // G = -M sin(l0 phi)/(nu.l0): coefficients ∓ M/(2 i nu.l0) at ±l0
    MatrixXcd expect_plus = (-0.5 / Complex(0, nl)) * m;
    const TrigMatrix* g = sol.g.find(SupportSet({{0}}));
    REQUIRE(g != nullptr);
    REQUIRE((g->coeff(l0) - expect_plus).cwiseAbs().maxCoeff() <= 1e-14);
    REQUIRE((g->coeff({-2, 1}) - expect_plus.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
    REQUIRE(sol.g.hermitian());
    REQUIRE(sol.residual_rel <= 1e-12);
    REQUIRE(sol.bound_ok);
}

TEST_CASE("constant and ultraviolet inputs solve to zero", "[homological]") {
    auto lat = LatticeSpec::cube(1, 0, 2);
    auto nu = DiophantineVector::certify({golden_ratio(), 1.0}, 1.2, 16);
    Interaction c(lat, 2);
    TrigMatrix p(2, 2);
    p.add_coeff({0, 0}, pauli(3));
    c.add_term(SupportSet({{0}}), p);
    auto sol = solve_homological(c, nu, 8.0);
    REQUIRE(sol.g.empty());
    REQUIRE(sol.residual_rel <= 1e-12);

    Interaction hi(lat, 2);
    TrigMatrix q(2, 2);
    q.add_coeff({7, 3}, pauli(1));  // |l| = 10 > K
    q.add_coeff({-7, -3}, pauli(1));
    hi.add_term(SupportSet({{0}}), q);
    auto sol2 = solve_homological(hi, nu, 8.0);
    REQUIRE(sol2.g.empty());
    REQUIRE(sol2.residual_rel <= 1e-12);  // A = A^uv + <A> holds identically
}

TEST_CASE("random interactions: residual and certified bound", "[homological][property]") {
    auto lat = LatticeSpec::cube(1, 2, 2);
    auto nu = DiophantineVector::certify({golden_ratio(), 1.0}, 1.2, 16);
    Rng rng(82);
    for (int rep = 0; rep < 20; ++rep) {
        InteractionSpec spec;
        spec.max_mode = 4;
        spec.modes_per_term = 4;
        auto a = random_interaction(lat, spec, rng);
        auto sol = solve_homological(a, nu, 6.0, 0.5, 0.1);
        REQUIRE(sol.residual_rel <= 1e-12);
        REQUIRE(sol.g_norm <= sol.bound_rhs * (1 + 1e-12));
        REQUIRE(sol.g.hermitian());
    }
}

TEST_CASE("resonant frequency vectors are rejected", "[homological]") {
    auto lat = LatticeSpec::cube(1, 0, 2);
    DiophantineVector bad;  // bypass certification on purpose
    bad.nu = {1.0, 1.0};
    bad.tau = 1.0;
    bad.gamma_certified = 1.0;
    bad.L_max = 8;
    Interaction a(lat, 2);
    TrigMatrix p(2, 2);
    p.add_coeff({1, -1}, pauli(1));
    p.add_coeff({-1, 1}, pauli(1));
    a.add_term(SupportSet({{0}}), p);
    REQUIRE_THROWS_AS(solve_homological(a, bad, 8.0), numeric_error);
}
