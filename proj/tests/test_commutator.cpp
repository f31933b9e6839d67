#include <catch2/catch_amalgamated.hpp>

#include "qpreth/algebra.hpp"
#include "qpreth/benchmarks.hpp"
#include "qpreth/norms.hpp"
#include "support/generators.hpp"

using namespace qpreth;
using namespace qpreth::testgen;

namespace {

Interaction single_site(const LatticeSpec& lat, int n, const Site& x, const TrigMatrix& p) {
    Interaction a(lat, n);
    a.add_term(SupportSet({x}), p);
    return a;
}

TrigMatrix const_payload(int n, const MatrixXcd& m) {
    TrigMatrix p(n, static_cast<int>(m.rows()));
    p.add_coeff(Mode(n, 0), m);
    return p;
}

}  // namespace

TEST_CASE("same-site Pauli commutator", "[commutator]") {
    auto lat = LatticeSpec::cube(1, 1, 2);
    auto a = single_site(lat, 0, {0}, const_payload(0, pauli(3)));
    auto b = single_site(lat, 0, {0}, const_payload(0, pauli(1)));
    auto c = commutator(a, b);
    REQUIRE(c.term_count() == 1);
    MatrixXcd expected = Complex(0, 2) * pauli(2);
    REQUIRE((c.terms().begin()->second.payload.coeff({}) - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("disjoint supports commute", "[commutator]") {
    auto lat = LatticeSpec::cube(1, 2, 2);
    auto a = single_site(lat, 0, {-1}, const_payload(0, pauli(1)));
    auto b = single_site(lat, 0, {1}, const_payload(0, pauli(3)));
    REQUIRE(commutator(a, b).empty());
}

TEST_CASE("Fourier convolution of a one-angle commutator, by hand", "[commutator]") {
    // [cos(phi) sigma1, sin(phi) sigma3] = -i sin(2 phi) sigma2
    auto lat = LatticeSpec::cube(1, 1, 2);
    TrigMatrix pa(1, 2);
    pa.add_coeff({1}, 0.5 * pauli(1));
    pa.add_coeff({-1}, 0.5 * pauli(1));
    TrigMatrix pb(1, 2);
    pb.add_coeff({1}, Complex(0, -0.5) * pauli(3));
    pb.add_coeff({-1}, Complex(0, 0.5) * pauli(3));
    auto c = commutator(single_site(lat, 1, {0}, pa), single_site(lat, 1, {0}, pb));
    REQUIRE(c.term_count() == 1);
    const auto& payload = c.terms().begin()->second.payload;
    // -i sin(2phi) sigma2 has coefficients -(1/2) sigma2 at l=2 and +(1/2) sigma2 at l=-2
    REQUIRE((payload.coeff({2}) + 0.5 * pauli(2)).cwiseAbs().maxCoeff() <= 1e-14);
    REQUIRE((payload.coeff({-2}) - 0.5 * pauli(2)).cwiseAbs().maxCoeff() <= 1e-14);
    REQUIRE(payload.coeff({0}).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("commutator antisymmetry", "[commutator][property]") {
    auto lat = LatticeSpec::cube(1, 2, 2);
    Rng rng(41);
    for (int rep = 0; rep < 6; ++rep) {
        auto a = random_interaction(lat, {}, rng);
        auto b = random_interaction(lat, {}, rng);
        REQUIRE(nks(add(commutator(a, b), commutator(b, a)), 0, 0) <=
                1e-12 * std::max(1.0, nks(a, 0, 0) * nks(b, 0, 0)));
    }
}

TEST_CASE("Jacobi identity on single-site triples", "[commutator][property]") {
    auto lat = LatticeSpec::cube(1, 0, 2);
    Rng rng(42);
    std::vector<double> phi{0.3, 1.9};
    for (int rep = 0; rep < 5; ++rep) {
        InteractionSpec spec;
        spec.max_support = 1;
        spec.num_terms = 1;
        auto a = random_interaction(lat, spec, rng);
        auto b = random_interaction(lat, spec, rng);
        auto c = random_interaction(lat, spec, rng);
        auto jac = add(add(commutator(a, commutator(b, c)), commutator(b, commutator(c, a))),
                       commutator(c, commutator(a, b)));
        REQUIRE(op_norm(assemble_global(jac, phi)) <= 1e-12 * std::max(1.0, nks(a, 0, 0) * nks(b, 0, 0) * nks(c, 0, 0)));
    }
}

TEST_CASE("assembled commutator equals commutator of assembled operators", "[commutator][property]") {
    auto lat = LatticeSpec::cube(1, 2, 2);
    Rng rng(43);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    for (int rep = 0; rep < 5; ++rep) {
        auto a = random_interaction(lat, {}, rng);
        auto b = random_interaction(lat, {}, rng);
        std::vector<double> phi{ang(rng), ang(rng)};
        MatrixXcd lhs = assemble_global(commutator(a, b), phi);
        MatrixXcd ma = assemble_global(a, phi), mb = assemble_global(b, phi);
        MatrixXcd rhs = ma * mb - mb * ma;
        double scale = std::max(1.0, op_norm(ma) * op_norm(mb));
        REQUIRE(op_norm((lhs - rhs).eval()) <= 1e-12 * scale);
    }
}

TEST_CASE("dimension mismatch is rejected", "[commutator]") {
    auto lat2 = LatticeSpec::cube(1, 1, 2);
    auto lat3 = LatticeSpec::cube(1, 1, 3);
    Interaction a(lat2, 1), b(lat3, 1);
    REQUIRE_THROWS_AS(commutator(a, b), config_error);
}
