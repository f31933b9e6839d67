#pragma once

#include <functional>

#include "qpreth/interaction.hpp"
#include "qpreth/op_norm.hpp"

namespace qpreth {

enum class NormKind { exact, certified_upper, grid_lower };

/// A computed norm value together with how much to trust it.
struct NormReport {
    double value = 0;
    NormKind kind = NormKind::exact;
    double kappa = 0;
    double sigma = 0;   // meaningful for the κ,σ family
    int p = -1;         // meaningful for the κ,C^p family
    long grid_size = 0; // meaningful for kind == grid_lower
};

namespace detail {

/// sup over x ∈ Λ of Σ_{S ∋ x} w(S) e^{κ|S|}, for per-term weights w.
inline double sup_site_sum(const Interaction& a, double kappa,
                           const std::map<SupportSet, double>& weights) {
    std::map<Site, double> acc;
    for (const auto& [s, w] : weights) {
        double contrib = w * std::exp(kappa * static_cast<double>(s.size()));
        for (const auto& x : s.sites) acc[x] += contrib;
    }
    double mx = 0;
    for (const auto& [x, v] : acc) mx = std::max(mx, v);
    return mx;
}

inline std::vector<std::vector<int>> multi_indices_up_to(int n, int p) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, 0);
    // enumerate all p' ∈ N^n with |p'| <= p
    std::function<void(int, int)> rec = [&](int axis, int budget) {
        if (axis == n) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= budget; ++k) {
            cur[axis] = k;
            rec(axis + 1, budget - k);
        }
        cur[axis] = 0;
    };
    rec(0, p);
    return out;
}

}  // namespace detail

/// ‖A‖_κ = sup_x Σ_{S ∋ x} ‖A_S‖_op e^{κ|S|} for constant interactions.
/// Rejects angle-dependent input; use norm_kappa_sigma or norm_kappa_cp there.
inline NormReport norm_kappa(const Interaction& a, double kappa) {
    if (kappa < 0) throw config_error("norm_kappa: need kappa >= 0");
    if (!a.constant())
        throw config_error("norm_kappa: interaction is angle-dependent; use norm_kappa_sigma or norm_kappa_cp");
    Mode zero(a.angles(), 0);
    std::map<SupportSet, double> w;
    for (const auto& [s, t] : a.terms()) w[s] = op_norm(t.payload.coeff(zero));
    return NormReport{detail::sup_site_sum(a, kappa, w), NormKind::exact, kappa, 0.0, -1, 0};
}

/// ‖A‖_{κ,σ} = sup_x Σ_{S ∋ x} ( Σ_ℓ ‖Â_S(ℓ)‖_op e^{σ|ℓ|} ) e^{κ|S|}.
/// Exact: the Fourier support is finite.
inline NormReport norm_kappa_sigma(const Interaction& a, double kappa, double sigma) {
    if (kappa < 0 || sigma < 0) throw config_error("norm_kappa_sigma: need kappa, sigma >= 0");
    std::map<SupportSet, double> w;
    for (const auto& [s, t] : a.terms()) {
        double c = 0;
        for (const auto& [l, m] : t.payload.coeffs())
            c += op_norm(m) * std::exp(sigma * static_cast<double>(l1_norm(l)));
        w[s] = c;
    }
    return NormReport{detail::sup_site_sum(a, kappa, w), NormKind::exact, kappa, sigma, -1, 0};
}

/// Convenience: scalar value of ‖A‖_{κ,σ}.
inline double nks(const Interaction& a, double kappa, double sigma) {
    return norm_kappa_sigma(a, kappa, sigma).value;
}

/// ‖A‖_{κ,C^p} bracket. The sup over φ is not exactly computable, so the
/// value is reported as a pair:
///   lower — sup over a uniform φ-grid and all |p'| <= p of the exact
///           derivative's operator norm (a true lower bound);
///   upper — sup_{|p'|<=p} Σ_ℓ ‖Â_S(ℓ)‖ |ℓ^{p'}| pushed through the κ-weighted
///           sup-sum (a certified upper bound).
inline std::pair<NormReport, NormReport> norm_kappa_cp(const Interaction& a, double kappa, int p,
                                                       long grid = 64) {
    if (kappa < 0 || p < 0) throw config_error("norm_kappa_cp: need kappa >= 0, p >= 0");
    if (grid < 8) throw config_error("norm_kappa_cp: need grid >= 8 per angle dimension");
    const int n = a.angles();
    auto indices = detail::multi_indices_up_to(n, p);

    std::map<SupportSet, double> wlo, wup;
    for (const auto& [s, t] : a.terms()) {
        double lo = 0, up = 0;
        for (const auto& idx : indices) {
            TrigMatrix d = t.payload.derivative(idx);
            // certified upper: sum of coefficient norms (|ℓ^{p'}| already folded in)
            double u = 0;
            for (const auto& [l, m] : d.coeffs()) u += op_norm(m);
            up = std::max(up, u);
            // grid lower: evaluate the exact derivative polynomial on the grid
            if (n == 0) {
                lo = std::max(lo, u);
                continue;
            }
            std::vector<long> counter(n, 0);
            std::vector<double> phi(n, 0.0);
            while (true) {
                for (int i = 0; i < n; ++i) phi[i] = 2.0 * kPi * counter[i] / static_cast<double>(grid);
                lo = std::max(lo, op_norm(d.eval(phi)));
                int axis = n - 1;
                while (axis >= 0) {
                    if (++counter[axis] < grid) break;
                    counter[axis] = 0;
                    --axis;
                }
                if (axis < 0) break;
            }
        }
        wlo[s] = lo;
        wup[s] = up;
    }
    NormReport lower{detail::sup_site_sum(a, kappa, wlo), NormKind::grid_lower, kappa, 0.0, p, grid};
    NormReport upper{detail::sup_site_sum(a, kappa, wup), NormKind::certified_upper, kappa, 0.0, p, 0};
    return {lower, upper};
}

}  // namespace qpreth
