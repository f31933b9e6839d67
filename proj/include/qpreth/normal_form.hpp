#pragma once

#include "qpreth/ad_series.hpp"
#include "qpreth/homological.hpp"
#include "qpreth/smoothing.hpp"

namespace qpreth {

/// Iteration schedule derived from (λ, b, ε, p, κ0, τ):
///   σ = λ^{-(1-b-ε)/τ},  K = ln(2e/σ^p)/σ,
///   n* = ceil(ln(λ^{-b} σ^{-p})),  δ = κ0/(2 n*),  κ_n = κ0 - nδ.
/// Both the raw (real-valued) and ceil-adjusted n* are kept.
struct NFSchedule {
    double lambda = 0, b = 0, eps = 0, kappa0 = 0, tau = 0;
    int p = 0;
    double exponent = 0;   // (1-b-ε)/τ
    double sigma = 0;
    double K = 0;
    double n_star_raw = 0;
    int n_star = 1;
    double delta = 0;

    double kappa_at(int n) const { return kappa0 - n * delta; }
    double kappa_fin() const { return kappa_at(n_star); }

    static NFSchedule make(double lambda, double b, double eps, int p, double kappa0, double tau) {
        if (!(lambda > 1.0)) throw config_error("NFSchedule: need lambda > 1");
        if (!(tau > 0.0)) throw config_error("NFSchedule: need tau > 0");
        if (!(p >= 1)) throw config_error("NFSchedule: need p >= 1");
        if (!(b > 0.0 && b < static_cast<double>(p) / (p + tau)))
            throw config_error("NFSchedule: need b in (0, p/(p+tau))");
        if (!(eps > 0.0 && eps < 1.0 - b * (p + tau) / p))
            throw config_error("NFSchedule: need eps in (0, 1 - b(p+tau)/p)");
        if (!(kappa0 > 0.0)) throw config_error("NFSchedule: need kappa0 > 0");
        NFSchedule s;
        s.lambda = lambda;
        s.b = b;
        s.eps = eps;
        s.p = p;
        s.kappa0 = kappa0;
        s.tau = tau;
        s.exponent = (1.0 - b - eps) / tau;
        s.sigma = std::pow(lambda, -s.exponent);
        s.K = std::log(2.0 * std::exp(1.0) / std::pow(s.sigma, p)) / s.sigma;
        s.n_star_raw = std::log(std::pow(lambda, -b) * std::pow(s.sigma, -p));
        s.n_star = std::max(1, static_cast<int>(std::ceil(s.n_star_raw)));
        s.delta = kappa0 / (2.0 * s.n_star);
        return s;
    }
};

struct NFOptions {
    double c_hat = 1.0;            // constant used in the recorded lemma-bound checks
    int support_cap = 6;           // |S| cap; shed mass is recorded per step
    double mode_cap_factor = 4.0;  // L_cut = factor * K
    double ad_tol = 1e-14;
    int ad_max_terms = 40;
    double prune_eps_rel = 1e-16;
    double residual_tol = 1e-12;
    double lambda_floor = 10.0;
};

/// Norms of the state entering step n, the generator solved at that step, and
/// the pass/fail of the iterative bounds at the schedule's constants.
struct NFStepRecord {
    int n = 0;
    double kappa_n = 0;
    double norm_Z = 0;  // ‖Z^{(n)}‖_{κ_n}
    double norm_V = 0;  // ‖V^{(n)}‖_{κ_n,σ}
    double norm_R = 0;  // certified upper for ‖R^{(n)}‖_{κ_n,C^0} (the κ_n,0 value)
    double norm_G = 0;  // ‖G^{(n)}‖_{κ_n,σ}; 0 in the final record
    double hom_residual_rel = 0;
    double smallness = 0;  // 4 e^{-κ_{n+1}} ‖G^{(n)}‖_{κ_n,σ} / δ
    bool g_small_ok = true;
    bool z_bound_ok = true;
    bool v_bound_ok = true;
    bool r_bound_ok = true;
    double truncation_mass = 0;
    bool has_generator = false;
};

struct NFState {
    Interaction h0, z, v, r;
};

struct NFResult {
    Interaction h_eff, v_fin, r_fin;
    std::vector<Interaction> generators;
    std::vector<NFStepRecord> transcript;  // n_star + 1 records when completed
    NFSchedule schedule;
    double v_cp_ref = 0;  // certified upper of ‖V‖_{κ0,C^p} before smoothing
    bool completed = false;
    std::string abort_reason;
};

namespace detail {

inline NFStepRecord state_record(const NFState& st, const NFSchedule& sch, int n) {
    NFStepRecord rec;
    rec.n = n;
    rec.kappa_n = sch.kappa_at(n);
    rec.norm_Z = st.z.empty() ? 0.0 : norm_kappa(st.z, rec.kappa_n).value;
    rec.norm_V = nks(st.v, rec.kappa_n, sch.sigma);
    rec.norm_R = nks(st.r, rec.kappa_n, 0.0);
    return rec;
}

/// Pass/fail of the iterative bounds at the schedule's constants, with the
/// configurable Ĉ and the reference ‖V‖_{κ0,C^p}.
inline void refresh_bound_checks(NFStepRecord& rec, const NFSchedule& sch, const NFOptions& opt,
                                 double v_cp_ref) {
    double lamb = std::pow(sch.lambda, -sch.b);
    double geo = 0;
    for (int j = 0; j <= rec.n - 1; ++j) geo += std::exp(-static_cast<double>(j));
    rec.z_bound_ok =
        rec.n == 0 ? rec.norm_Z == 0.0 : rec.norm_Z <= opt.c_hat * lamb * geo * v_cp_ref * (1 + 1e-9);
    double vb =
        rec.n == 0 ? opt.c_hat * v_cp_ref : opt.c_hat * lamb * std::exp(-static_cast<double>(rec.n)) * v_cp_ref;
    rec.v_bound_ok = rec.norm_V <= vb * (1 + 1e-9);
    double rgeo = geo + std::exp(-static_cast<double>(rec.n));
    rec.r_bound_ok = rec.norm_R <= opt.c_hat * rgeo * std::pow(sch.sigma, sch.p) * v_cp_ref * (1 + 1e-9);
}

}  // namespace detail

/// One iteration step n -> n+1:
///   G solves (ν·∂)G + λ^{-1}V = λ^{-1}V^uv + λ^{-1}⟨V⟩ (modes <= K),
///   Z' = Z + ⟨V⟩,
///   V' = (e^{-iG}(H0+Z+V)e^{iG} - (H0+Z+V)) + (∫_0^1 e^{-isG} λ(ν·∂)G e^{isG} ds - λ(ν·∂)G),
///   R' = e^{-iG} R e^{iG} + V^uv,
/// with λ(ν·∂)G replaced by its exact Fourier value V^uv + ⟨V⟩ - V.
inline std::pair<NFState, NFStepRecord> nf_step(const NFState& st, const NFSchedule& sch,
                                                const DiophantineVector& nu, int n, const NFOptions& opt,
                                                Interaction* g_out = nullptr) {
    if (n >= sch.n_star) throw config_error("nf_step: n >= n_star");
    NFStepRecord rec = detail::state_record(st, sch, n);

    auto hom = solve_homological(scale(st.v, 1.0 / sch.lambda), nu, sch.K, sch.kappa_at(n), sch.sigma);
    rec.hom_residual_rel = hom.residual_rel;
    rec.norm_G = hom.g_norm;
    rec.has_generator = true;
    rec.smallness = 4.0 * std::exp(-sch.kappa_at(n + 1)) * hom.g_norm / sch.delta;
    rec.g_small_ok = rec.smallness < 0.5;
    if (g_out) *g_out = hom.g;

    AdOptions ao;
    ao.kappa = sch.kappa_at(n + 1);
    ao.delta = sch.delta;
    ao.sigma = sch.sigma;
    ao.tol = opt.ad_tol;
    ao.max_terms = opt.ad_max_terms;
    ao.mode_cap = opt.mode_cap_factor > 0 ? opt.mode_cap_factor * sch.K : 0;
    ao.support_cap = opt.support_cap;
    ao.prune_eps_rel = opt.prune_eps_rel;

    Interaction gc = scale(hom.g, Complex(0, -1));  // -iG
    auto [v_ir, v_uv] = uv_ir_split(st.v, sch.K);
    Interaction v_mean = average(st.v);

    NFState next;
    next.h0 = st.h0;
    next.z = add(st.z, v_mean);

    Interaction x = add(add(st.h0, st.z), st.v);
    auto defect = ad_conj_defect(gc, x, ao);
    // W = λ(ν·∂)G exactly, by the homological identity
    Interaction w = subtract(add(v_uv, v_mean), st.v);
    auto integ = ad_integral_defect(gc, w, ao);
    next.v = add(defect.value, integ.value);
    rec.truncation_mass += defect.shed_mass + defect.tail_estimate + integ.shed_mass + integ.tail_estimate;

    if (st.r.empty()) {
        next.r = v_uv;
    } else {
        auto rconj = ad_exp(gc, st.r, ao);
        next.r = add(rconj.value, v_uv);
        rec.truncation_mass += rconj.shed_mass + rconj.tail_estimate;
    }
    return {std::move(next), rec};
}

/// Full §-by-step run: analytic smoothing at the schedule's σ, then n* steps.
/// The mean of V is moved into H0 up front; H_eff = H0 + Z^{(fin)}.
inline NFResult run_normal_form(Interaction h0, Interaction v, const NFSchedule& sch,
                                const DiophantineVector& nu, NFOptions opt = {}) {
    h0.check_compatible(v);
    if (sch.lambda < opt.lambda_floor)
        throw config_error("run_normal_form: lambda below configured floor");
    if (!h0.constant()) throw config_error("run_normal_form: H0 must be constant");
    if (!h0.hermitian() || !v.hermitian()) throw config_error("run_normal_form: H0, V must be Hermitian");
    if (sch.p < nu.n() + 1) throw config_error("run_normal_form: need p >= n + 1");
    if (!(sch.tau > nu.n() - 1)) throw config_error("run_normal_form: need tau > n - 1");

    NFResult res;
    res.schedule = sch;

    Interaction v_mean = average(v);
    if (!v_mean.empty()) {
        h0 = add(h0, v_mean);
        v = subtract(v, v_mean);
    }
    res.v_cp_ref = norm_kappa_cp(v, sch.kappa0, sch.p, 8).second.value;

    SmoothingResult sm = smooth(v, sch.sigma);
    NFState st{h0, Interaction(h0.lattice(), h0.angles()), sm.smoothed, sm.remainder};

    try {
        for (int n = 0; n < sch.n_star; ++n) {
            Interaction g;
            auto [next, rec] = nf_step(st, sch, nu, n, opt, &g);
            res.transcript.push_back(rec);
            res.generators.push_back(std::move(g));
            st = std::move(next);
        }
        res.transcript.push_back(detail::state_record(st, sch, sch.n_star));
        res.completed = true;
    } catch (const numeric_error& e) {
        res.abort_reason = e.what();
    }

    for (auto& rec : res.transcript) detail::refresh_bound_checks(rec, sch, opt, res.v_cp_ref);

    res.h_eff = add(st.h0, st.z);
    res.v_fin = st.v;
    res.r_fin = st.r;
    return res;
}

/// Apply the run's conjugations to A: forward gives Y^(fin) A Y^(fin)*, i.e.
/// e^{-iG^(0)} first; inverse applies the adjoint chain.
inline Interaction conjugate_chain(const std::vector<Interaction>& generators, Interaction a, bool forward,
                                   const AdOptions& base = {}) {
    if (forward) {
        for (const auto& g : generators) a = ad_exp(scale(g, Complex(0, -1)), a, base).value;
    } else {
        for (auto it = generators.rbegin(); it != generators.rend(); ++it)
            a = ad_exp(scale(*it, Complex(0, 1)), a, base).value;
    }
    return a;
}

}  // namespace qpreth
