#pragma once

#include <functional>
#include <sstream>

#include "qpreth/common.hpp"

namespace qpreth {

namespace detail {
/// Visit every ℓ ∈ Z^n with 0 < |ℓ|_1 <= L.
inline void for_each_mode(int n, long L, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> l(n, 0);
    std::function<void(int, long)> rec = [&](int axis, long budget) {
        if (axis == n) {
            if (l1_norm(l) > 0) fn(l);
            return;
        }
        for (long k = -budget; k <= budget; ++k) {
            l[axis] = static_cast<int>(k);
            rec(axis + 1, budget - std::abs(k));
        }
        l[axis] = 0;
    };
    rec(0, L);
}
}  // namespace detail

/// Brute-force certification oracle: min over 0 < |ℓ| <= L_max of |ν·ℓ| |ℓ|^τ.
/// Rejects resonant ν (a numerically vanishing ν·ℓ) with the offending ℓ.
inline double estimate_gamma(const std::vector<double>& nu, double tau, long L_max) {
    if (L_max < 8) throw config_error("estimate_gamma: need L_max >= 8");
    double numax = 0;
    for (double x : nu) {
        if (x == 0.0) throw config_error("estimate_gamma: nu has a zero component");
        numax = std::max(numax, std::abs(x));
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> witness;
    detail::for_each_mode(static_cast<int>(nu.size()), L_max, [&](const std::vector<int>& l) {
        double small = std::abs(dot(nu, l));
        double absl = static_cast<double>(l1_norm(l));
        if (small <= 1e-13 * numax * absl) {
            std::ostringstream os;
            os << "estimate_gamma: resonant frequency vector, nu.l = " << small << " at l = (";
            for (std::size_t i = 0; i < l.size(); ++i) os << (i ? "," : "") << l[i];
            os << ")";
            throw numeric_error(os.str());
        }
        double v = small * std::pow(absl, tau);
        if (v < best) {
            best = v;
            witness = l;
        }
    });
    return best;
}

/// Frequency direction ν with a brute-force-certified Diophantine constant:
/// |ν·ℓ| >= gamma_certified / |ℓ|^τ holds for all 0 < |ℓ| <= L_max.
struct DiophantineVector {
    std::vector<double> nu;
    double tau = 1.0;
    double gamma_certified = 0;
    long L_max = 0;

    static DiophantineVector certify(std::vector<double> nu, double tau, long L_max) {
        for (double x : nu)
            if (x < 0.5 || x > 2.0) throw config_error("DiophantineVector: components must lie in [1/2, 2]");
        DiophantineVector v;
        v.nu = std::move(nu);
        v.tau = tau;
        v.L_max = L_max;
        v.gamma_certified = estimate_gamma(v.nu, tau, L_max);
        return v;
    }

    int n() const { return static_cast<int>(nu.size()); }
};

/// The golden ratio (1+√5)/2, the library's default badly-approximable α.
inline double golden_ratio() { return 0.5 * (1.0 + std::sqrt(5.0)); }

}  // namespace qpreth
