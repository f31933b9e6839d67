#pragma once

#include <chrono>
#include <functional>

#include "qpreth/continued_fraction.hpp"
#include "qpreth/interaction.hpp"
#include "qpreth/rk45.hpp"

namespace qpreth {

enum class Frame { gauge, lab };

/// One resonant counterexample instance built from a convergent k_m = (q_m, -p_m):
/// the drive frequency vector is λ_m ν with ν = (α, 1) and λ_m = 2/|ν·k_m|, so
/// the mode k_m beats exactly at the spectral gap 2 of σ³.
struct HeatingScenario {
    double alpha = 0;
    int p = 3;
    int m_index = 0;
    long long k1 = 0, k2 = 0;  // (q_m, -p_m)
    double k_l1 = 0;
    double lambda = 0;
    double nu_dot_k = 0;
    double omega_plus = 0, omega_minus = 0;
    double t_star = 0;
    double window_lo = 0, window_hi = 0;
    double tau = 0, eps = 0, gamma = 0;
    double nu_l1 = 0;
    // paper-style λ floors, reported per scenario; assertions gate on them
    double c_two_components = 0;
    double floor_k_components = 0;
    double floor_omega = 0;
    double floor_remainder = 0;
    // documented admissibility floor: the closed-form error 9/|k|^p must leave
    // an O(1) margin in the magnetization criterion
    bool admissible = false;
    bool lambda_bounds_ok = false;
    bool opposite_signs = false;

    double drive_amplitude() const { return 2.0 / std::pow(k_l1, p); }
    double slow_rate() const { return 1.0 / (2.0 * std::pow(k_l1, p)); }  // σ¹ rotation rate
};

inline HeatingScenario build_scenario(const ConvergentSeq& cs, int m, int p, double tau, double gamma) {
    if (m < 0 || m >= static_cast<int>(cs.size())) throw config_error("build_scenario: m out of range");
    if (p < 3) throw config_error("build_scenario: need p >= 3");
    if (!(tau >= 1.0)) throw config_error("build_scenario: need tau >= 1");
    HeatingScenario sc;
    sc.alpha = cs.alpha;
    sc.p = p;
    sc.m_index = m;
    sc.k1 = cs.pairs[m].second;   // q_m
    sc.k2 = -cs.pairs[m].first;   // -p_m
    sc.k_l1 = static_cast<double>(std::llabs(sc.k1) + std::llabs(sc.k2));
    sc.nu_dot_k = cs.alpha * sc.k1 + sc.k2;
    if (sc.nu_dot_k == 0.0) throw numeric_error("build_scenario: nu.k vanished (resonant alpha)");
    sc.lambda = 2.0 / std::abs(sc.nu_dot_k);
    sc.omega_plus = cs.alpha * sc.lambda * sc.k1 - sc.lambda * sc.k2 + 2.0;
    sc.omega_minus = cs.alpha * sc.lambda * sc.k1 - sc.lambda * sc.k2 - 2.0;
    sc.t_star = kPi / 4.0 * std::pow(sc.k_l1, p);
    sc.tau = tau;
    sc.eps = tau - 1.0;
    sc.gamma = gamma;
    sc.nu_l1 = cs.alpha + 1.0;

    double c1 = kPi / 4.0 * std::pow(gamma / 2.0, p / tau);
    double c2 = kPi / 4.0 * std::pow(sc.nu_l1, 2.0 * p / tau);
    sc.window_lo = c1 * std::pow(sc.lambda, p / tau);
    sc.window_hi = c2 * std::pow(sc.lambda, p / tau + sc.eps);

    double numin = std::min(cs.alpha, 1.0);
    sc.c_two_components = std::min(cs.alpha / 4.0, 1.0 / (4.0 * cs.alpha)) * std::pow(gamma / 2.0, 1.0 / tau);
    sc.floor_k_components = std::pow(8.0 / numin, tau) * 2.0 / gamma;
    sc.floor_omega = std::pow(4.0 / (sc.c_two_components * sc.nu_l1), tau);
    sc.floor_remainder = std::pow(300.0 / (sc.c_two_components * sc.nu_l1), tau);

    sc.admissible = 9.0 / std::pow(sc.k_l1, p) <= 0.25;
    sc.lambda_bounds_ok = sc.lambda >= std::pow(sc.k_l1, tau - sc.eps) / sc.nu_l1 * (1 - 1e-12) &&
                          sc.lambda <= 2.0 / gamma * std::pow(sc.k_l1, tau) * (1 + 1e-12);
    sc.opposite_signs = (sc.k1 > 0) != (sc.k2 > 0);
    return sc;
}

/// Time grid, two-level states (frame flagged), magnetization, and the
/// per-sample remainder-bound check of the gauge frame.
struct TrajectoryRecord {
    Frame frame = Frame::gauge;
    std::vector<double> times;
    std::vector<State2> states;
    std::vector<double> magnetization;
    std::vector<double> remainder_lhs, remainder_rhs;
    std::vector<char> remainder_ok;
    double norm_drift = 0;
    long long steps_used = 0;
    double est_steps = 0;
    double runtime_sec = 0;
    bool complete = false;
};

inline double magnetization_of(const State2& s) {
    return std::norm(s[0]) - std::norm(s[1]);
}

/// e^{-i a t σ¹} ψ0 with ψ0 = (0,1): the slow rotation the gauge-frame state
/// tracks up to the certified remainder.
inline State2 slow_reference(double a, double t) {
    return State2{Complex(0, -std::sin(a * t)), Complex(std::cos(a * t), 0)};
}

namespace detail {

struct GaugeRhs {
    double amp, w1, w2;
    void operator()(double t, const State2& y, State2& dy) const {
        double f = amp * std::cos(w1 * t) * std::cos(w2 * t);
        double c2t = std::cos(2 * t), s2t = std::sin(2 * t);
        Complex e_plus(c2t, s2t), e_minus(c2t, -s2t);
        // -i f(t) [[0, e^{2it}],[e^{-2it}, 0]] y
        dy[0] = Complex(0, -f) * (e_plus * y[1]);
        dy[1] = Complex(0, -f) * (e_minus * y[0]);
    }
};

struct LabRhs {
    double amp, w1, w2;
    void operator()(double t, const State2& y, State2& dy) const {
        double f = amp * std::cos(w1 * t) * std::cos(w2 * t);
        dy[0] = Complex(0, -1) * (y[0] + f * y[1]);
        dy[1] = Complex(0, -1) * (f * y[0] - y[1]);
    }
};

inline double estimate_rk45_steps(const HeatingScenario& sc, double t_end, const IntegratorConfig& cfg) {
    double omega = std::abs(sc.alpha * sc.lambda * sc.k1) + std::abs(sc.lambda * sc.k2) + 2.0;
    double amp = sc.drive_amplitude();
    double h = std::pow(720.0 * cfg.rel_tol / std::max(amp * std::pow(omega, 5), 1e-300), 1.0 / 6.0);
    return t_end / std::min(h, t_end);
}

}  // namespace detail

inline State2 gauge_to_lab(const State2& phi, double t) {
    return State2{std::exp(Complex(0, -t)) * phi[0], std::exp(Complex(0, t)) * phi[1]};
}

inline State2 lab_to_gauge(const State2& psi, double t) {
    return State2{std::exp(Complex(0, t)) * psi[0], std::exp(Complex(0, -t)) * psi[1]};
}

/// Integrate the scenario's two-level Schrödinger equation from ψ0 = (0,1)
/// and record the requested samples (default: 512 log-spaced plus t_star).
/// The default gauge frame removes σ³; the drive amplitude is ~|k|^{-p}.
inline TrajectoryRecord evolve(const HeatingScenario& sc, double t_end, const IntegratorConfig& cfg,
                               Frame frame = Frame::gauge, int num_samples = 512,
                               const std::vector<double>* explicit_times = nullptr) {
    if (!(t_end > 0)) throw config_error("evolve: need t_end > 0");
    if (t_end > 4.0 * sc.t_star) throw config_error("evolve: t_end exceeds 4 t_star");

    std::vector<double> ts;
    if (explicit_times) {
        ts = *explicit_times;
    } else {
        ts.push_back(0.0);
        double lo = t_end * 1e-3;
        for (int i = 0; i < num_samples; ++i)
            ts.push_back(lo * std::pow(t_end / lo, static_cast<double>(i) / (num_samples - 1)));
        if (sc.t_star <= t_end) ts.push_back(sc.t_star);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    if (ts.empty() || ts.front() < 0) throw config_error("evolve: sample times must start at t >= 0");
    if (ts.front() > 0) ts.insert(ts.begin(), 0.0);

    TrajectoryRecord tr;
    tr.frame = frame;
    tr.est_steps = detail::estimate_rk45_steps(sc, t_end, cfg);

    const double a = sc.slow_rate();
    const double kp = std::pow(sc.k_l1, sc.p);
    const double k2p = kp * kp;

    detail::GaugeRhs grhs{sc.drive_amplitude(), sc.alpha * sc.lambda * sc.k1, sc.lambda * static_cast<double>(sc.k2)};
    detail::LabRhs lrhs{grhs.amp, grhs.w1, grhs.w2};

    State2 y{Complex(0, 0), Complex(1, 0)};
    double t_now = 0;
    double h_carry = 0;
    auto wall0 = std::chrono::steady_clock::now();
    try {
        for (double t : ts) {
            if (t > t_now) {
                if (frame == Frame::gauge)
                    tr.steps_used += rk45_integrate(grhs, y, t_now, t, cfg, &h_carry);
                else
                    tr.steps_used += rk45_integrate(lrhs, y, t_now, t, cfg, &h_carry);
                t_now = t;
            }
            tr.times.push_back(t);
            tr.states.push_back(y);
            tr.magnetization.push_back(magnetization_of(y));
            double nrm = std::sqrt(std::norm(y[0]) + std::norm(y[1]));
            tr.norm_drift = std::max(tr.norm_drift, std::abs(nrm - 1.0));
            if (frame == Frame::gauge) {
                State2 ref = slow_reference(a, t);
                double lhs = std::sqrt(std::norm(y[0] - ref[0]) + std::norm(y[1] - ref[1]));
                double rhs = 1.0 / kp + 2.0 * t / k2p;
                tr.remainder_lhs.push_back(lhs);
                tr.remainder_rhs.push_back(rhs);
                tr.remainder_ok.push_back(lhs <= rhs ? 1 : 0);
            }
        }
        tr.complete = true;
    } catch (const numeric_error&) {
        tr.complete = false;  // partial record, flagged incomplete
    }
    tr.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return tr;
}

struct HeatingDetection {
    bool found = false;
    double t_heat = 0;
    double max_excursion = 0;  // max over the record of M(t) - M(0)
};

/// Evaluates M at an off-grid time, restarting from a stored sample state.
using MagnetizationRefiner = std::function<double(double t_lo, const State2& state_lo, double t)>;

/// Refiner backed by the scenario's own equation of motion.
inline MagnetizationRefiner make_scenario_refiner(const HeatingScenario& sc, const IntegratorConfig& cfg,
                                                  Frame frame) {
    detail::GaugeRhs grhs{sc.drive_amplitude(), sc.alpha * sc.lambda * sc.k1,
                          sc.lambda * static_cast<double>(sc.k2)};
    detail::LabRhs lrhs{grhs.amp, grhs.w1, grhs.w2};
    return [=](double t_lo, const State2& state_lo, double t) {
        State2 y = state_lo;
        double h_carry = 0;
        if (frame == Frame::gauge)
            rk45_integrate(grhs, y, t_lo, t, cfg, &h_carry);
        else
            rk45_integrate(lrhs, y, t_lo, t, cfg, &h_carry);
        return magnetization_of(y);
    };
}

/// First time with M(t) - M(0) >= 1/2: grid scan, then bisection between the
/// bracketing samples to relative 1e-3. The refiner evaluates M between grid
/// points (the production one re-integrates short sub-intervals).
inline HeatingDetection detect_heating_time(const TrajectoryRecord& tr, const MagnetizationRefiner& refine) {
    if (tr.times.empty()) throw config_error("detect_heating_time: empty trajectory");
    HeatingDetection det;
    double m0 = tr.magnetization.front();
    std::size_t hit = tr.times.size();
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        det.max_excursion = std::max(det.max_excursion, tr.magnetization[i] - m0);
        if (hit == tr.times.size() && tr.magnetization[i] - m0 >= 0.5) hit = i;
    }
    if (hit == tr.times.size()) return det;
    det.found = true;
    if (hit == 0) {
        det.t_heat = tr.times[0];
        return det;
    }

    double lo = tr.times[hit - 1], hi = tr.times[hit];
    double t_anchor = lo;
    State2 anchor = tr.states[hit - 1];
    while (hi - lo > 1e-3 * hi) {
        double mid = 0.5 * (lo + hi);
        if (refine(t_anchor, anchor, mid) - m0 >= 0.5)
            hi = mid;
        else
            lo = mid;
    }
    det.t_heat = hi;
    return det;
}

inline HeatingDetection detect_heating_time(const HeatingScenario& sc, const TrajectoryRecord& tr,
                                            const IntegratorConfig& cfg) {
    return detect_heating_time(tr, make_scenario_refiner(sc, cfg, tr.frame));
}

struct ScalingFit {
    double slope = 0, intercept = 0, residual = 0;
};

/// Least squares of ln(t) on ln(λ). Requires >= 4 points with an ln-spread
/// of at least 1.5 in λ.
inline ScalingFit scaling_fit(const std::vector<double>& lambdas, const std::vector<double>& times) {
    if (lambdas.size() != times.size()) throw config_error("scaling_fit: size mismatch");
    if (lambdas.size() < 4) throw config_error("scaling_fit: need at least 4 scenarios");
    double lmin = *std::min_element(lambdas.begin(), lambdas.end());
    double lmax = *std::max_element(lambdas.begin(), lambdas.end());
    if (!(lmin > 0) || std::log(lmax / lmin) < 1.5)
        throw config_error("scaling_fit: lambda spread below ln-span 1.5");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        double x = std::log(lambdas[i]), y = std::log(times[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    ScalingFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        double r = std::log(times[i]) - (fit.intercept + fit.slope * std::log(lambdas[i]));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

/// H0 = Σ_x σ³_x on the given lattice.
inline Interaction heating_h0(const LatticeSpec& lattice) {
    Interaction h(lattice, 2);
    MatrixXcd sz(2, 2);
    sz << 1, 0, 0, -1;
    for (const auto& x : lattice.sites()) {
        TrigMatrix p(2, 2);
        p.add_coeff({0, 0}, sz);
        h.add_term(SupportSet({x}), p);
    }
    return h;
}

/// V_m(φ) = (2/|k|^p) cos(k1 φ1) cos(k2 φ2) σ¹ on every site: four modes
/// (±k1, ±k2) with coefficient σ¹/(2|k|^p) each. Zero mean, Hermitian.
inline Interaction heating_v(const HeatingScenario& sc, const LatticeSpec& lattice) {
    Interaction v(lattice, 2);
    MatrixXcd sx(2, 2);
    sx << 0, 1, 1, 0;
    double c = sc.drive_amplitude() / 4.0;
    int k1 = static_cast<int>(sc.k1), k2 = static_cast<int>(sc.k2);
    for (const auto& x : lattice.sites()) {
        TrigMatrix p(2, 2);
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) p.add_coeff({s1 * k1, s2 * k2}, c * sx);
        v.add_term(SupportSet({x}), p);
    }
    return v;
}

}  // namespace qpreth
