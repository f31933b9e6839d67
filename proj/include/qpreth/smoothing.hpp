#pragma once

#include "qpreth/algebra.hpp"

namespace qpreth {

/// Radial C^∞ bump: 1 on the l1 ball of radius r_inner, 0 outside radius
/// r_outer, with the standard exponential smooth step on the band.
struct BumpProfile {
    double r_inner = 0.5;
    double r_outer = 1.0;
};

namespace detail {
inline double smooth_g(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }
}

/// χ at l1 radius t: 1 for t <= r_inner, 0 for t >= r_outer, monotone
/// decreasing and C^∞ across the band.
inline double chi_radial(double t, const BumpProfile& profile = {}) {
    t = std::abs(t);
    if (t <= profile.r_inner) return 1.0;
    if (t >= profile.r_outer) return 0.0;
    double u = (t - profile.r_inner) / (profile.r_outer - profile.r_inner);
    double a = detail::smooth_g(1.0 - u), b = detail::smooth_g(u);
    return a / (a + b);
}

inline double chi(const std::vector<double>& xi, const BumpProfile& profile = {}) {
    return chi_radial(l1_norm(xi), profile);
}

/// Smoothed part and remainder of an interaction at width σ, plus σ itself.
struct SmoothingResult {
    Interaction smoothed;   // A_σ
    Interaction remainder;  // A - A_σ
    double sigma = 0;
};

/// Analytic smoothing as an exact Fourier multiplier:
///   Â_σ(ℓ) = χ(σℓ) Â(ℓ),  remainder (1-χ(σℓ)) Â(ℓ).
/// The split is exact coefficient-wise, the mean is preserved exactly
/// (χ(0) = 1), and the Hermitian symmetry survives because χ is even.
inline SmoothingResult smooth(const Interaction& a, double sigma, const BumpProfile& profile = {}) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw config_error("smooth: need sigma in (0,1)");
    Interaction sm(a.lattice(), a.angles());
    Interaction rem(a.lattice(), a.angles());
    for (const auto& [s, t] : a.terms()) {
        TrigMatrix ps(a.angles(), t.payload.dim());
        TrigMatrix pr(a.angles(), t.payload.dim());
        for (const auto& [l, m] : t.payload.coeffs()) {
            double c = chi_radial(sigma * static_cast<double>(l1_norm(l)), profile);
            if (c != 0.0) ps.add_coeff(l, c * m);
            if (c != 1.0) pr.add_coeff(l, (1.0 - c) * m);
        }
        if (!ps.empty()) sm.add_term(s, ps);
        if (!pr.empty()) rem.add_term(s, pr);
    }
    return SmoothingResult{std::move(sm), std::move(rem), sigma};
}

}  // namespace qpreth
