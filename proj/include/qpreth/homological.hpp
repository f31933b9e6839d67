#pragma once

#include "qpreth/algebra.hpp"
#include "qpreth/diophantine.hpp"
#include "qpreth/norms.hpp"

namespace qpreth {

/// Solution record of (ν·∂_φ)G + A = A^uv + ⟨A⟩.
struct HomologicalSolution {
    Interaction g;
    double residual_rel = 0;  // ‖(ν·∂)G + A - A^uv - ⟨A⟩‖_{0,0} / ‖A‖_{0,0}
    double g_norm = 0;        // ‖G‖_{κ,σ} at the requested (κ,σ)
    double bound_rhs = 0;     // γ^{-1} K^τ ‖A‖_{κ,σ}
    bool bound_ok = true;
};

/// Mode-by-mode division: Ĝ(ℓ) = -Â(ℓ)/(i ν·ℓ) for 0 < |ℓ| <= K, else 0.
/// Rejects resonant divisors. G is Hermitian-symmetric whenever A is.
inline HomologicalSolution solve_homological(const Interaction& a, const DiophantineVector& nu, double K,
                                             double kappa = 0.0, double sigma = 0.0) {
    if (static_cast<int>(nu.nu.size()) != a.angles())
        throw config_error("solve_homological: nu length != interaction angle count");
    double numax = 0;
    for (double x : nu.nu) numax = std::max(numax, std::abs(x));

    Interaction g(a.lattice(), a.angles());
    for (const auto& [s, t] : a.terms()) {
        TrigMatrix p(a.angles(), t.payload.dim());
        for (const auto& [l, m] : t.payload.coeffs()) {
            long long absl = l1_norm(l);
            if (absl == 0 || static_cast<double>(absl) > K) continue;
            double nl = dot(nu.nu, l);
            if (std::abs(nl) <= 1e-13 * numax * static_cast<double>(absl))
                throw numeric_error("solve_homological: resonant frequency vector within mode range");
            p.add_coeff(l, m / Complex(0, nl) * (-1.0));
        }
        if (!p.empty()) g.add_term(s, p);
    }

    HomologicalSolution sol;
    sol.g = std::move(g);

    // residual of the defining equation, in the plain (0,0) norm
    auto [ir, uv] = uv_ir_split(a, K);
    Interaction residual = add(nu_partial(sol.g, nu.nu), subtract(subtract(a, uv), average(a)));
    double na = nks(a, 0.0, 0.0);
    sol.residual_rel = na > 0 ? nks(residual, 0.0, 0.0) / na : nks(residual, 0.0, 0.0);

    sol.g_norm = nks(sol.g, kappa, sigma);
    sol.bound_rhs = std::pow(K, nu.tau) / nu.gamma_certified * nks(a, kappa, sigma);
    sol.bound_ok = sol.g_norm <= sol.bound_rhs * (1.0 + 1e-12);
    return sol;
}

}  // namespace qpreth
