#pragma once

#include "qpreth/algebra.hpp"
#include "qpreth/norms.hpp"

namespace qpreth {

struct AdOptions {
    double kappa = 0;          // norm index for smallness check and termination
    double delta = 0.1;        // analyticity-loss increment in the smallness check
    double sigma = 0;          // e^{σ|ℓ|} weight in termination norms
    double tol = 1e-14;        // relative termination threshold
    int max_terms = 40;
    double mode_cap = 0;       // |ℓ|_1 cap; 0 disables
    int support_cap = 0;       // |S| cap; 0 disables
    double prune_eps_rel = 0;  // per-coefficient prune threshold, relative to the series scale
};

struct AdResult {
    Interaction value;
    double smallness = 0;  // 4 e^{-κ} ‖G‖_{κ+δ,σ} / δ
    bool smallness_ok = true;
    double shed_mass = 0;      // norm mass removed by mode/support caps and pruning
    double tail_estimate = 0;  // bound on the dropped series tail
    int terms = 0;             // highest commutator order summed
};

namespace detail {

/// Remove capped content in place; returns the removed (κ,σ)-weighted mass
/// (summed over terms, an upper bound for the sup-sum norm).
inline double apply_caps(Interaction& a, const AdOptions& o, double prune_eps) {
    if (o.mode_cap <= 0 && o.support_cap <= 0 && prune_eps <= 0) return 0;
    double shed = 0;
    Interaction kept(a.lattice(), a.angles());
    for (const auto& [s, t] : a.terms()) {
        double sw = std::exp(o.kappa * static_cast<double>(s.size()));
        if (o.support_cap > 0 && static_cast<int>(s.size()) > o.support_cap) {
            for (const auto& [l, m] : t.payload.coeffs())
                shed += op_norm(m) * std::exp(o.sigma * static_cast<double>(l1_norm(l))) * sw;
            continue;
        }
        TrigMatrix p(a.angles(), t.payload.dim());
        for (const auto& [l, m] : t.payload.coeffs()) {
            double nm = op_norm(m);
            bool drop = (o.mode_cap > 0 && static_cast<double>(l1_norm(l)) > o.mode_cap) || nm <= prune_eps;
            if (drop)
                shed += nm * std::exp(o.sigma * static_cast<double>(l1_norm(l))) * sw;
            else
                p.add_coeff(l, m);
        }
        if (!p.empty()) kept.add_term(s, p);
    }
    a = std::move(kept);
    return shed;
}

/// Shared engine: out = w(0)·A·[include_zeroth] + Σ_{r>=1} w(r) Ad_G^r A / r!.
template <class WeightFn>
inline AdResult ad_series(const Interaction& g, const Interaction& a, const AdOptions& o, bool include_zeroth,
                          WeightFn w) {
    g.check_compatible(a);
    AdResult res;
    res.smallness = o.delta > 0 ? 4.0 * std::exp(-o.kappa) * nks(g, o.kappa + o.delta, o.sigma) / o.delta
                                : std::numeric_limits<double>::infinity();
    res.smallness_ok = res.smallness < 1.0;

    const double in_scale = std::max(nks(a, o.kappa, o.sigma), 1e-300);
    double prune_eps = o.prune_eps_rel > 0 ? o.prune_eps_rel * in_scale : 0.0;

    res.value = Interaction(a.lattice(), a.angles());
    if (include_zeroth) res.value = qpreth::scale(a, static_cast<double>(w(0)));

    Interaction cur = a;  // Ad^r_G A / r!
    double prev_norm = in_scale;
    for (int r = 1; r <= o.max_terms; ++r) {
        cur = qpreth::scale(commutator(g, cur), 1.0 / static_cast<double>(r));
        res.shed_mass += apply_caps(cur, o, prune_eps);
        double nrm = nks(cur, o.kappa, o.sigma);
        if (nrm == 0.0) {
            res.terms = r;
            return res;
        }
        res.value = add(res.value, qpreth::scale(cur, static_cast<double>(w(r))));
        res.terms = r;
        if (nrm <= o.tol * in_scale) {
            double ratio = prev_norm > 0 ? std::min(nrm / prev_norm, 0.9) : 0.5;
            res.tail_estimate = nrm * ratio / (1.0 - ratio);
            return res;
        }
        prev_norm = nrm;
    }
    throw numeric_error("ad series failed to decay within " + std::to_string(o.max_terms) +
                        " terms (smallness = " + std::to_string(res.smallness) + ")");
}

}  // namespace detail

/// e^G A e^{-G}, summed until the next term falls below tol relative to the
/// input scale (hard cap max_terms).
inline AdResult ad_exp(const Interaction& g, const Interaction& a, const AdOptions& o = {}) {
    return detail::ad_series(g, a, o, true, [](int) { return 1.0; });
}

/// e^G A e^{-G} - A.
inline AdResult ad_conj_defect(const Interaction& g, const Interaction& a, const AdOptions& o = {}) {
    return detail::ad_series(g, a, o, false, [](int) { return 1.0; });
}

/// ∫_0^1 e^{sG} W e^{-sG} ds - W, evaluated term-by-term in closed form:
/// the s-integral of s^r contributes 1/(r+1).
inline AdResult ad_integral_defect(const Interaction& g, const Interaction& w, const AdOptions& o = {}) {
    return detail::ad_series(g, w, o, false, [](int r) { return 1.0 / static_cast<double>(r + 1); });
}

}  // namespace qpreth
