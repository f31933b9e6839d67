#pragma once

#include "qpreth/norms.hpp"
#include "qpreth/tensor.hpp"

namespace qpreth {

/// Drive H(t) = H0 + V(λ ν t) on a small lattice.
struct Drive {
    Interaction h0;
    Interaction v;
    double lambda = 1;
    std::vector<double> nu;
};

/// Commutator-free exponential stepper. Order 2 is the exponential midpoint;
/// order 4 uses the two-exponential Gauss-node scheme. Per-step exponentials
/// are exact (Hermitian eigensolve), so unitarity holds structurally.
struct PropagatorConfig {
    int order = 2;  // 2 or 4
    double c = 0.1;  // dt <= c / (λ · max drive frequency)
    long long cap = 4096;
    long long max_steps = 2'000'000'000LL;
};

struct PropagationResult {
    std::vector<MatrixXcd> unitaries;  // one per grid time
    double unitarity_defect = 0;       // max over grid of ‖U†U - 1‖_max
    long long steps = 0;
    double dt = 0;
};

namespace detail {

/// Precomputed dense evaluator for H(φ) = const + Σ_k e^{i ℓ_k·φ} E_k.
struct DenseDrive {
    MatrixXcd h_static;
    std::vector<std::pair<Mode, MatrixXcd>> modes;
    std::vector<double> omega;  // λ ν
    long long dim = 0;

    MatrixXcd at_time(double t) const {
        MatrixXcd h = h_static;
        for (const auto& [l, e] : modes) {
            double phase = 0;
            for (std::size_t i = 0; i < omega.size(); ++i) phase += omega[i] * l[i] * t;
            h += std::exp(Complex(0, phase)) * e;
        }
        return h;
    }
};

inline DenseDrive make_dense_drive(const Drive& d, long long cap) {
    d.h0.check_compatible(d.v);
    if (!d.h0.hermitian() || !d.v.hermitian()) throw config_error("propagate: drive must be Hermitian");
    if (!d.h0.constant()) throw config_error("propagate: H0 must be constant");
    DenseDrive dd;
    dd.dim = ipow(d.h0.lattice().q, d.h0.lattice().volume());
    if (dd.dim > cap)
        throw numeric_error("propagate: dimension " + std::to_string(dd.dim) + " exceeds cap");
    dd.h_static = assemble_constant(d.h0, cap);
    SupportSet all = full_support(d.v.lattice());
    Mode zero(d.v.angles(), 0);
    for (const auto& [s, t] : d.v.terms()) {
        for (const auto& [l, m] : t.payload.coeffs()) {
            MatrixXcd e = embed_payload(s, all, m, d.v.lattice().q);
            if (l == zero)
                dd.h_static += e;
            else
                dd.modes.emplace_back(l, e);
        }
    }
    dd.omega.resize(d.nu.size());
    for (std::size_t i = 0; i < d.nu.size(); ++i) dd.omega[i] = d.lambda * d.nu[i];
    return dd;
}

inline MatrixXcd expm_minus_i(const MatrixXcd& h, double dt) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    Eigen::VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::exp(Complex(0, -dt * es.eigenvalues()(i)));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// One commutator-free step over [t, t+dt] applied from the left.
inline MatrixXcd cf_step(const DenseDrive& dd, double t, double dt, int order) {
    if (order == 2) return expm_minus_i(dd.at_time(t + 0.5 * dt), dt);
    // CF4: nodes c = 1/2 ∓ √3/6, weights a = 1/4 ± √3/6
    const double s3 = std::sqrt(3.0) / 6.0;
    MatrixXcd h1 = dd.at_time(t + (0.5 - s3) * dt);
    MatrixXcd h2 = dd.at_time(t + (0.5 + s3) * dt);
    MatrixXcd first = expm_minus_i((0.25 + s3) * h1 + (0.25 - s3) * h2, dt);
    MatrixXcd second = expm_minus_i((0.25 - s3) * h1 + (0.25 + s3) * h2, dt);
    return second * first;
}

inline double drive_rate(const Drive& d) {
    double maxfreq = 0;
    for (const auto& [s, t] : d.v.terms())
        for (const auto& [l, m] : t.payload.coeffs()) maxfreq = std::max(maxfreq, std::abs(dot(d.nu, l)));
    double local_scale = nks(d.v, 0.0, 0.0);
    if (!d.h0.empty()) local_scale += norm_kappa(d.h0, 0.0).value;
    return std::max(d.lambda * maxfreq, std::max(local_scale, 1.0));
}

}  // namespace detail

/// Ordered product of per-step exponentials of node-evaluated Hamiltonians,
/// with a snapshot at every grid time. Grid must increase from 0.
inline PropagationResult propagate(const Drive& d, const std::vector<double>& t_grid,
                                   const PropagatorConfig& cfg = {}) {
    if (t_grid.empty() || t_grid.front() != 0.0) throw config_error("propagate: grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1]) throw config_error("propagate: grid must increase");
    if (cfg.order != 2 && cfg.order != 4) throw config_error("propagate: order must be 2 or 4");

    detail::DenseDrive dd = detail::make_dense_drive(d, cfg.cap);
    double dt_target = cfg.c / detail::drive_rate(d);

    long long total = 0;
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        total += static_cast<long long>(std::ceil((t_grid[i] - t_grid[i - 1]) / dt_target));
    if (total > cfg.max_steps)
        throw numeric_error("propagate: dt rule needs " + std::to_string(total) + " steps, budget " +
                            std::to_string(cfg.max_steps));

    PropagationResult res;
    res.dt = dt_target;
    MatrixXcd u = MatrixXcd::Identity(dd.dim, dd.dim);
    res.unitaries.push_back(u);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        double t0 = t_grid[i - 1], t1 = t_grid[i];
        long long ns = static_cast<long long>(std::ceil((t1 - t0) / dt_target));
        double dt = (t1 - t0) / static_cast<double>(ns);
        for (long long k = 0; k < ns; ++k) {
            u = detail::cf_step(dd, t0 + k * dt, dt, cfg.order) * u;
            ++res.steps;
        }
        res.unitaries.push_back(u);
        double defect = (u.adjoint() * u - MatrixXcd::Identity(dd.dim, dd.dim)).cwiseAbs().maxCoeff();
        res.unitarity_defect = std::max(res.unitarity_defect, defect);
    }
    return res;
}

/// Per-sample diagnostics of Theorem-style observables.
struct ObservableDiag {
    std::vector<double> times;
    std::vector<double> heating;    // ‖U†H0U - H0‖_op / |Λ|
    std::vector<double> obs_error;  // ‖U†OU - e^{iH_eff t}Oe^{-iH_eff t}‖_op
    SupportSet O_support;
    double time_cap = 0;  // the reported theorem horizon (context, not a gate)
    double unitarity_defect = 0;
    long long steps = 0;
};

/// |Λ|^{-1} ‖U*(t) H0 U(t) - H0‖_op on the grid.
inline ObservableDiag heating_diag(const Drive& d, const std::vector<double>& t_grid,
                                   const PropagatorConfig& cfg = {}) {
    PropagationResult pr = propagate(d, t_grid, cfg);
    MatrixXcd h0m = assemble_constant(d.h0, cfg.cap);
    double vol = static_cast<double>(d.h0.lattice().volume());
    ObservableDiag out;
    out.times = t_grid;
    out.unitarity_defect = pr.unitarity_defect;
    out.steps = pr.steps;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const MatrixXcd& u = pr.unitaries[i];
        out.heating.push_back(op_norm((u.adjoint() * h0m * u - h0m).eval()) / vol);
    }
    return out;
}

/// ‖U*(t) O U(t) - e^{iH_eff t} O e^{-iH_eff t}‖_op on the grid.
inline ObservableDiag local_obs_diag(const Drive& d, const LocalTerm& obs, const Interaction& h_eff,
                                     const std::vector<double>& t_grid, const PropagatorConfig& cfg = {}) {
    h_eff.check_compatible(d.h0);
    if (!h_eff.constant()) throw config_error("local_obs_diag: H_eff must be constant");
    PropagationResult pr = propagate(d, t_grid, cfg);
    SupportSet all = full_support(d.h0.lattice());
    Mode zero(d.h0.angles(), 0);
    MatrixXcd om = embed_payload(obs.support, all, obs.payload.coeff(zero), d.h0.lattice().q);
    MatrixXcd he = assemble_constant(h_eff, cfg.cap);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(he);

    ObservableDiag out;
    out.times = t_grid;
    out.O_support = obs.support;
    out.unitarity_defect = pr.unitarity_defect;
    out.steps = pr.steps;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        double t = t_grid[i];
        Eigen::VectorXcd ph(es.eigenvalues().size());
        for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::exp(Complex(0, t * es.eigenvalues()(k)));
        MatrixXcd eplus = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
        MatrixXcd ref = eplus * om * eplus.adjoint();
        const MatrixXcd& u = pr.unitaries[i];
        out.obs_error.push_back(op_norm((u.adjoint() * om * u - ref).eval()));
    }
    return out;
}

/// Horizon λ^{-b + (p/τ)(1-b) - ε} of the slow-heating window.
inline double prethermal_horizon(double lambda, double b, int p, double tau, double eps) {
    return std::pow(lambda, -b + static_cast<double>(p) / tau * (1.0 - b) - eps);
}

/// Horizon λ^{(-b + (p/τ)(1-b) - ε)/(d+1)} of the local-observable window.
inline double local_obs_cap(double lambda, double b, int p, double tau, double eps, int d) {
    return std::pow(lambda, (-b + static_cast<double>(p) / tau * (1.0 - b) - eps) / (d + 1));
}

}  // namespace qpreth
