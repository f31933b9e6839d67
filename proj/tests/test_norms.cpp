#include <catch2/catch_amalgamated.hpp>

#include "qpreth/benchmarks.hpp"
#include "qpreth/diophantine.hpp"
#include "qpreth/norms.hpp"
#include "support/generators.hpp"

using namespace qpreth;
using namespace qpreth::testgen;

namespace {

Interaction field_sz(const LatticeSpec& lat) {
    Interaction a(lat, 2);
    for (const auto& x : lat.sites()) {
        TrigMatrix p(2, 2);
        p.add_coeff({0, 0}, pauli(3));
        a.add_term(SupportSet({x}), p);
    }
    return a;
}

}  // namespace

TEST_CASE("kappa norm of the transverse field is e^kappa", "[norms]") {
    auto lat = LatticeSpec::cube(1, 2, 2);
    REQUIRE(norm_kappa(field_sz(lat), 1.0).value == Catch::Approx(std::exp(1.0)).epsilon(1e-14));
    REQUIRE(norm_kappa(Interaction(lat, 2), 1.0).value == 0.0);
}

TEST_CASE("kappa norm of a single two-site term, by hand enumeration", "[norms]") {
    // one term of operator norm 3 on a pair: every covered site sees 3 e^{2 kappa}
    auto lat = LatticeSpec::cube(1, 2, 2);
    Interaction a(lat, 2);
    TrigMatrix p(2, 4);
    p.add_coeff({0, 0}, 3.0 * kron(pauli(1), pauli(1)));
    a.add_term(interval_support(0, 1), p);
    REQUIRE(norm_kappa(a, 0.5).value == Catch::Approx(3.0 * std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("kappa norm rejects angle-dependent input", "[norms]") {
    auto lat = LatticeSpec::cube(1, 1, 2);
    Interaction a(lat, 2);
    TrigMatrix p(2, 2);
    p.add_coeff({1, 0}, pauli(1));
    a.add_term(SupportSet({{0}}), p);
    REQUIRE_THROWS_AS(norm_kappa(a, 1.0), config_error);
}

TEST_CASE("kappa-sigma norm equals kappa norm on constants", "[norms]") {
    auto lat = LatticeSpec::cube(1, 2, 2);
    auto a = field_sz(lat);
    for (double sigma : {0.0, 0.5, 1.0})
        REQUIRE(nks(a, 0.7, sigma) == Catch::Approx(norm_kappa(a, 0.7).value).epsilon(1e-14));
}

TEST_CASE("kappa-sigma norm of a single mode", "[norms]") {
    auto lat = LatticeSpec::cube(1, 1, 2);
    Interaction a(lat, 2);
    TrigMatrix p(2, 2);
    p.add_coeff({2, -1}, pauli(1));  // unit operator norm, |l| = 3
    a.add_term(SupportSet({{0}}), p);
    REQUIRE(nks(a, 0.0, 1.0) == Catch::Approx(std::exp(3.0)).epsilon(1e-14));
}

TEST_CASE("kappa-sigma norm matches an independent re-evaluation", "[norms]") {
    auto lat = LatticeSpec::cube(1, 2, 2);
    Rng rng(7);
    InteractionSpec spec;
    spec.num_terms = 2;
    auto a = random_interaction(lat, spec, rng);
    REQUIRE(nks(a, 0.6, 0.4) == Catch::Approx(oracle_norm_kappa_sigma(a, 0.6, 0.4)).epsilon(1e-9));
}

TEST_CASE("Cp bracket collapses on constants", "[norms]") {
    auto lat = LatticeSpec::cube(1, 2, 2);
    auto a = field_sz(lat);
    auto [lo, up] = norm_kappa_cp(a, 0.9, 3, 16);
    double exact = norm_kappa(a, 0.9).value;
    REQUIRE(lo.value == Catch::Approx(exact).epsilon(1e-13));
    REQUIRE(up.value == Catch::Approx(exact).epsilon(1e-13));
    REQUIRE(lo.kind == NormKind::grid_lower);
    REQUIRE(up.kind == NormKind::certified_upper);
}

TEST_CASE("Cp bracket of the resonant drive lands in the stated interval", "[norms]") {
    auto cs = convergents(golden_ratio(), 12);
    double gamma = estimate_gamma({golden_ratio(), 1.0}, 1.05, 20);
    auto sc = build_scenario(cs, 3, 3, 1.05, gamma);  // k = (5,-8)
    auto lat = LatticeSpec::cube(1, 0, 2);
    auto v = heating_v(sc, lat);
    int p = 3;
    auto [lo, up] = norm_kappa_cp(v, 0.0, p, 64);
    double true_cp = 2.0 * std::pow(std::max(std::abs((double)sc.k1), std::abs((double)sc.k2)) / sc.k_l1, p);
    REQUIRE(lo.value <= true_cp * (1 + 1e-12));
    REQUIRE(up.value >= true_cp * (1 - 1e-12));
    REQUIRE(up.value >= std::pow(2.0, 1 - p) - 1e-12);
    REQUIRE(up.value <= 2.0 + 1e-12);
    REQUIRE(lo.value >= 0.9 * up.value);
}

TEST_CASE("Cp bracket of cos(phi) M straddles the analytic value", "[norms]") {
    auto lat = LatticeSpec::cube(1, 1, 2);
    Rng rng(11);
    MatrixXcd m = random_hermitian(2, rng);
    double mn = op_norm(m);
    Interaction a(lat, 1);
    TrigMatrix p(1, 2);
    p.add_coeff({1}, 0.5 * m);
    p.add_coeff({-1}, 0.5 * m);
    a.add_term(SupportSet({{0}}), p);
    auto [lo, up] = norm_kappa_cp(a, 0.0, 1, 64);
    REQUIRE(lo.value <= mn * (1 + 1e-12));
    REQUIRE(up.value >= mn * (1 - 1e-12));
    REQUIRE(up.value == Catch::Approx(mn).epsilon(1e-12));  // coefficient sum is exactly ‖M‖ here
}

TEST_CASE("norm monotonicity in kappa and sigma", "[norms][property]") {
    auto lat = LatticeSpec::cube(1, 2, 2);
    Rng rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        auto a = random_interaction(lat, {}, rng);
        REQUIRE(nks(a, 0.2, 0.3) <= nks(a, 0.8, 0.3) * (1 + 1e-12));
        REQUIRE(nks(a, 0.5, 0.1) <= nks(a, 0.5, 0.9) * (1 + 1e-12));
    }
}

TEST_CASE("grid C0 lower bound never exceeds the kappa-0 norm", "[norms][property]") {
    auto lat = LatticeSpec::cube(1, 2, 2);
    Rng rng(22);
    for (int rep = 0; rep < 10; ++rep) {
        auto a = random_interaction(lat, {}, rng);
        auto [lo, up] = norm_kappa_cp(a, 0.4, 0, 16);
        REQUIRE(lo.value <= nks(a, 0.4, 0.0) * (1 + 1e-12));
    }
}

TEST_CASE("operator norm basics and power-iteration oracle", "[norms]") {
    REQUIRE(op_norm(MatrixXcd::Identity(4, 4)) == Catch::Approx(1.0).epsilon(1e-14));
    REQUIRE(op_norm(pauli(1)) == Catch::Approx(1.0).epsilon(1e-14));
    Rng rng(31);
    for (int rep = 0; rep < 5; ++rep) {
        MatrixXcd m = random_hermitian(8, rng);
        REQUIRE(op_norm(m) == Catch::Approx(power_iteration_norm(m)).epsilon(1e-10));
    }
    MatrixXcd g = random_matrix(6, rng);  // non-Hermitian path
    REQUIRE(op_norm(g) == Catch::Approx(power_iteration_norm(g)).epsilon(1e-10));
}
