#include <catch2/catch_amalgamated.hpp>

#include "qpreth/benchmarks.hpp"
#include "qpreth/diophantine.hpp"
#include "qpreth/propagate.hpp"

using namespace qpreth;

namespace {

MatrixXcd expm_minus_it(const MatrixXcd& h, double t) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    Eigen::VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::exp(Complex(0, -t * es.eigenvalues()(i)));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Drive golden_drive(const LatticeSpec& lat, double lambda, double a1, double a2) {
    return Drive{heating_h0(lat), benchmark_chain_v(lat, a1, a2), lambda, {golden_ratio(), 1.0}};
}

}  // namespace

TEST_CASE("undriven propagation matches the eigensolve exponential", "[propagate]") {
    auto lat = LatticeSpec::chain(3);
    Drive d{heating_h0(lat), Interaction(lat, 2), 50.0, {golden_ratio(), 1.0}};
    std::vector<double> grid{0.0, 0.7, 1.9};
    auto pr = propagate(d, grid);
    MatrixXcd h0 = assemble_constant(d.h0);
    for (std::size_t i = 0; i < grid.size(); ++i)
        REQUIRE(op_norm((pr.unitaries[i] - expm_minus_it(h0, grid[i])).eval()) <= 1e-10);
}

TEST_CASE("autonomous flows satisfy the group property", "[propagate]") {
    auto lat = LatticeSpec::chain(3);
    Interaction v(lat, 2);  // constant perturbation: time-independent total H
    MatrixXcd sx = pauli(1);
    for (const auto& x : lat.sites()) {
        TrigMatrix p(2, 2);
        p.add_coeff({0, 0}, 0.4 * sx);
        v.add_term(SupportSet({x}), p);
    }
    Drive d{heating_h0(lat), v, 30.0, {golden_ratio(), 1.0}};
    std::vector<double> grid{0.0, 0.9, 1.3, 2.2};
    auto pr = propagate(d, grid);
    REQUIRE(op_norm((pr.unitaries[3] - pr.unitaries[2] * pr.unitaries[1]).eval()) <= 1e-9);
}

TEST_CASE("commuting drives accrue no splitting error", "[propagate]") {
    // H(t) = sum sigma3 + a cos(w t) sigma3: everything commutes, so the
    // stepper must equal the exponential of the accumulated midpoint phase
    // to rounding (the only residual error is the scalar quadrature)
    auto lat = LatticeSpec::chain(2);
    Interaction v(lat, 2);
    for (const auto& x : lat.sites()) {
        TrigMatrix p(2, 2);
        p.add_coeff({1, 0}, 0.25 * pauli(3));
        p.add_coeff({-1, 0}, 0.25 * pauli(3));
        v.add_term(SupportSet({x}), p);
    }
    double lambda = 20.0;
    Drive d{heating_h0(lat), v, lambda, {golden_ratio(), 1.0}};
    double t_end = 1.1;
    std::vector<double> grid{0.0, t_end};
    PropagatorConfig pc;
    pc.c = 0.05;
    auto pr = propagate(d, grid, pc);
    double w = lambda * golden_ratio();
    MatrixXcd sz_sum = assemble_constant(d.h0);
    MatrixXcd v0 = MatrixXcd::Zero(4, 4);
    {
        SupportSet all = full_support(lat);
        for (const auto& [s, t] : v.terms()) v0 += embed_payload(s, all, 2.0 * t.payload.coeff({1, 0}), 2);
    }
    // accumulated midpoint phase over the same substeps the propagator took
    long long ns = pr.steps;
    double dt = t_end / static_cast<double>(ns);
    double quad = 0;
    for (long long k = 0; k < ns; ++k) quad += std::cos(w * (k + 0.5) * dt) * dt;
    MatrixXcd phase_mid = sz_sum * t_end + v0 * quad;
    REQUIRE(op_norm((pr.unitaries[1] - expm_minus_it(phase_mid, 1.0)).eval()) <= 1e-12);
    // and the midpoint phase only differs from the analytic integral by the
    // scalar quadrature error
    MatrixXcd phase_exact = sz_sum * t_end + v0 * (std::sin(w * t_end) / w);
    REQUIRE(op_norm((pr.unitaries[1] - expm_minus_it(phase_exact, 1.0)).eval()) <=
            2.0 * std::abs(quad - std::sin(w * t_end) / w) * op_norm(v0) + 1e-12);
}

TEST_CASE("heating diagnostic is zero without a drive and at t = 0", "[propagate]") {
    auto lat = LatticeSpec::chain(3);
    Drive d{heating_h0(lat), Interaction(lat, 2), 40.0, {golden_ratio(), 1.0}};
    auto diag = heating_diag(d, {0.0, 1.0, 3.0});
    REQUIRE(diag.heating[0] == 0.0);
    for (double h : diag.heating) REQUIRE(h <= 1e-12);
}

TEST_CASE("local observable diagnostics vanish in the trivial cases", "[propagate]") {
    auto lat = LatticeSpec::chain(3);
    Drive d{heating_h0(lat), Interaction(lat, 2), 40.0, {golden_ratio(), 1.0}};
    std::vector<double> grid{0.0, 0.8, 1.6};

    // O = identity
    TrigMatrix pid(2, 2);
    pid.add_coeff({0, 0}, MatrixXcd::Identity(2, 2));
    auto diag_id = local_obs_diag(d, LocalTerm{SupportSet({{0}}), pid}, d.h0, grid);
    for (double e : diag_id.obs_error) REQUIRE(e <= 1e-12);

    // O = sigma3 at the center, V = 0, H_eff = H0: exact commutation
    auto diag_sz = local_obs_diag(d, central_observable(lat, 3), d.h0, grid);
    REQUIRE(diag_sz.obs_error[0] <= 1e-13);
    for (double e : diag_sz.obs_error) REQUIRE(e <= 1e-12);
}

TEST_CASE("step halving converges at the declared order", "[propagate]") {
    auto lat = LatticeSpec::chain(3);
    Drive d = golden_drive(lat, 25.0, 0.35, 0.2);
    std::vector<double> grid{0.0, 2.0};
    auto terminal = [&](int order, double c) {
        PropagatorConfig pc;
        pc.order = order;
        pc.c = c;
        auto diag = heating_diag(d, grid, pc);
        return diag.heating.back();
    };
    for (int order : {2, 4}) {
        double d1 = std::abs(terminal(order, 0.4) - terminal(order, 0.2));
        double d2 = std::abs(terminal(order, 0.2) - terminal(order, 0.1));
        double expected = std::pow(2.0, order);
        REQUIRE(d2 <= d1 / expected * 4.0);
    }
}

TEST_CASE("unitarity stays at the rounding floor on short runs", "[propagate]") {
    auto lat = LatticeSpec::chain(3);
    Drive d = golden_drive(lat, 25.0, 0.35, 0.2);
    std::vector<double> grid{0.0, 0.5, 1.0};
    PropagatorConfig pc;
    pc.order = 4;
    auto pr = propagate(d, grid, pc);
    REQUIRE(pr.unitarity_defect <= 1e-12);  // cumulative, short horizon
    REQUIRE(pr.unitarity_defect / std::max<long long>(1, pr.steps) <= 1e-13);
}

TEST_CASE("grid and cap validation", "[propagate]") {
    auto lat = LatticeSpec::chain(3);
    Drive d = golden_drive(lat, 25.0, 0.35, 0.2);
    REQUIRE_THROWS_AS(propagate(d, {0.5, 1.0}), config_error);
    REQUIRE_THROWS_AS(propagate(d, {0.0, 1.0, 0.5}), config_error);
    PropagatorConfig pc;
    pc.max_steps = 3;
    REQUIRE_THROWS_AS(propagate(d, {0.0, 10.0}, pc), numeric_error);
}
