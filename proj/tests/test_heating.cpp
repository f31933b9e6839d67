#include <catch2/catch_amalgamated.hpp>

#include "qpreth/diophantine.hpp"
#include "qpreth/algebra.hpp"
#include "qpreth/heating.hpp"
#include "qpreth/norms.hpp"

using namespace qpreth;

namespace {

struct GoldenLab {
    ConvergentSeq cs = convergents(golden_ratio(), 14);
    double tau = 1.05;
    double gamma = estimate_gamma({golden_ratio(), 1.0}, 1.05, 60);
    HeatingScenario at(int m, int p = 3) const { return build_scenario(cs, m, p, tau, gamma); }
};

}  // namespace

TEST_CASE("scenario constants match direct arithmetic", "[heating]") {
    GoldenLab lab;
    auto sc = lab.at(3);  // (p,q) = (8,5) -> k = (5,-8)
    REQUIRE(sc.k1 == 5);
    REQUIRE(sc.k2 == -8);
    REQUIRE(std::abs(sc.nu_dot_k) == Catch::Approx(0.09016994).epsilon(1e-6));
    REQUIRE(sc.lambda == Catch::Approx(22.18034).epsilon(1e-6));
    REQUIRE(sc.t_star == Catch::Approx(kPi / 4.0 * 13 * 13 * 13).epsilon(1e-12));
    REQUIRE(sc.omega_plus - sc.omega_minus == Catch::Approx(4.0).margin(1e-12));
    REQUIRE(sc.opposite_signs);
    REQUIRE(sc.lambda_bounds_ok);
}

TEST_CASE("omega and k-component lower bounds hold above their floors", "[heating][property]") {
    GoldenLab lab;
    for (int m = 2; m <= 7; ++m) {
        auto sc = lab.at(m);
        double lpow = std::pow(sc.lambda, 1.0 / sc.tau);
        if (sc.lambda > sc.floor_k_components) {
            REQUIRE(std::abs(static_cast<double>(sc.k1)) >= sc.c_two_components * lpow);
            REQUIRE(std::abs(static_cast<double>(sc.k2)) >= sc.c_two_components * lpow);
        }
        if (sc.lambda > sc.floor_omega) {
            double bound = sc.c_two_components * sc.nu_l1 / 2.0 * lpow;
            REQUIRE(std::abs(sc.omega_plus) >= bound);
            REQUIRE(std::abs(sc.omega_minus) >= bound);
        }
    }
}

TEST_CASE("initial magnetization is -1 and zero drive freezes it", "[heating]") {
    GoldenLab lab;
    auto sc = lab.at(2);
    IntegratorConfig cfg;
    auto tr = evolve(sc, 1.0, cfg, Frame::gauge, 8);
    REQUIRE(tr.magnetization.front() == Catch::Approx(-1.0).margin(1e-14));

    // amplitude-zero drive: the gauge state never moves, the lab state only
    // rotates its phases, so M stays at -1
    detail::GaugeRhs rhs{0.0, sc.alpha * sc.lambda * sc.k1, sc.lambda * static_cast<double>(sc.k2)};
    State2 y{Complex(0, 0), Complex(1, 0)};
    double h = 0;
    rk45_integrate(rhs, y, 0.0, 5.0, cfg, &h);
    REQUIRE(magnetization_of(y) == Catch::Approx(-1.0).margin(1e-12));

    detail::LabRhs lab_rhs{0.0, rhs.w1, rhs.w2};
    State2 z{Complex(0, 0), Complex(1, 0)};
    h = 0;
    rk45_integrate(lab_rhs, z, 0.0, 5.0, cfg, &h);
    REQUIRE(std::abs(z[1] - std::exp(Complex(0, 5.0))) <= 1e-9);  // e^{-i sigma3 t} on (0,1)
}

TEST_CASE("short trajectories satisfy the certified remainder bound", "[heating]") {
    GoldenLab lab;
    auto sc = lab.at(2);  // |k| = 8, cheap
    IntegratorConfig cfg;
    auto tr = evolve(sc, sc.t_star, cfg, Frame::gauge, 64);
    REQUIRE(tr.complete);
    REQUIRE(tr.norm_drift <= 10 * cfg.rel_tol);
    for (std::size_t i = 0; i < tr.times.size(); ++i) REQUIRE(tr.remainder_ok[i] == 1);
    // the slow rotation rate is 1/(2|k|^p): magnetization tracks -cos(t/|k|^p)
    double kp = std::pow(sc.k_l1, sc.p);
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        REQUIRE(std::abs(tr.magnetization[i] + std::cos(tr.times[i] / kp)) <= 9.0 / kp);
}

TEST_CASE("gauge and lab frames agree on short horizons", "[heating]") {
    GoldenLab lab;
    auto sc = lab.at(2);
    IntegratorConfig cfg;
    std::vector<double> times{0.0, 2.5, 5.0, 7.5, 10.0};
    auto tg = evolve(sc, 10.0, cfg, Frame::gauge, 4, &times);
    auto tl = evolve(sc, 10.0, cfg, Frame::lab, 4, &times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        State2 mapped = gauge_to_lab(tg.states[i], times[i]);
        double diff = std::sqrt(std::norm(mapped[0] - tl.states[i][0]) + std::norm(mapped[1] - tl.states[i][1]));
        REQUIRE(diff <= 100 * cfg.rel_tol);
        State2 back = lab_to_gauge(mapped, times[i]);
        REQUIRE(std::abs(back[0] - tg.states[i][0]) <= 1e-14);
    }
}

TEST_CASE("detector finds the analytic crossing of a synthetic record", "[heating]") {
    // synthetic magnetization law M(t) = -cos(2 t / |k|^p): first crossing of
    // M - M(0) >= 1/2 at t = (pi/6)|k|^p, recovered to relative 1e-3
    double kp = 512.0;
    TrajectoryRecord tr;
    tr.frame = Frame::gauge;
    for (int i = 0; i <= 400; ++i) {
        double t = i * (kp / 400.0);
        tr.times.push_back(t);
        tr.states.push_back(State2{0.0, 1.0});
        tr.magnetization.push_back(-std::cos(2.0 * t / kp));
    }
    auto refiner = [&](double, const State2&, double t) { return -std::cos(2.0 * t / kp); };
    auto det = detect_heating_time(tr, refiner);
    REQUIRE(det.found);
    REQUIRE(det.t_heat == Catch::Approx(kPi / 6.0 * kp).epsilon(2e-3));
}

TEST_CASE("detector signals no heating on a flat record", "[heating]") {
    TrajectoryRecord tr;
    for (int i = 0; i < 32; ++i) {
        tr.times.push_back(i);
        tr.states.push_back(State2{0.0, 1.0});
        tr.magnetization.push_back(-1.0);
    }
    auto det = detect_heating_time(tr, [](double, const State2&, double) { return -1.0; });
    REQUIRE_FALSE(det.found);
    REQUIRE(det.max_excursion == 0.0);
}

TEST_CASE("scaling fit nails an exact power law and rejects degenerate input", "[heating]") {
    std::vector<double> lambdas{10, 40, 100, 400, 1000};
    std::vector<double> times;
    for (double l : lambdas) times.push_back(std::pow(l, 3.0));
    auto fit = scaling_fit(lambdas, times);
    REQUIRE(fit.slope == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(fit.residual <= 1e-12);

    REQUIRE_THROWS_AS(scaling_fit({10, 20}, {1, 2}), config_error);
    REQUIRE_THROWS_AS(scaling_fit({10, 11, 12, 13}, {1, 2, 3, 4}), config_error);  // span too small
}

TEST_CASE("evolve validates its horizon and reports an estimate", "[heating]") {
    GoldenLab lab;
    auto sc = lab.at(2);
    IntegratorConfig cfg;
    REQUIRE_THROWS_AS(evolve(sc, 5.0 * sc.t_star, cfg), config_error);
    auto tr = evolve(sc, 2.0, cfg, Frame::gauge, 4);
    REQUIRE(tr.est_steps > 0);

    IntegratorConfig tiny = cfg;
    tiny.max_steps = 10;
    auto partial = evolve(sc, sc.t_star, tiny, Frame::gauge, 8);
    REQUIRE_FALSE(partial.complete);
}

TEST_CASE("drive interaction norms sit in the stated band", "[heating]") {
    GoldenLab lab;
    auto sc = lab.at(4);
    auto lat = LatticeSpec::cube(1, 1, 2);
    auto v = heating_v(sc, lat);
    REQUIRE(v.hermitian());
    REQUIRE(average(v).empty());
    double kappa = 0.7;
    auto [lo, up] = norm_kappa_cp(v, kappa, sc.p, 32);
    REQUIRE(up.value <= 2.0 * std::exp(kappa) * (1 + 1e-12));
    REQUIRE(lo.value >= std::pow(2.0, 1 - sc.p) * std::exp(kappa) * 0.9);
}
