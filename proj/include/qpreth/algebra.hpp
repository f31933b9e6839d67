#pragma once

#include "qpreth/tensor.hpp"

namespace qpreth {

inline Interaction add(const Interaction& a, const Interaction& b) {
    a.check_compatible(b);
    Interaction sum(a.lattice(), a.angles());
    for (const auto& [s, t] : a.terms()) sum.add_term(s, t.payload);
    for (const auto& [s, t] : b.terms()) sum.add_term(s, t.payload);
    return sum;
}

inline Interaction scale(const Interaction& a, Complex c) {
    Interaction out(a.lattice(), a.angles());
    if (c == Complex(0, 0)) return out;
    for (const auto& [s, t] : a.terms()) {
        TrigMatrix p = t.payload;
        p *= c;
        out.add_term(s, p);
    }
    return out;
}

inline Interaction dagger(const Interaction& a) {
    Interaction out(a.lattice(), a.angles());
    for (const auto& [s, t] : a.terms()) out.add_term(s, t.payload.dagger());
    return out;
}

inline Interaction subtract(const Interaction& a, const Interaction& b) { return add(a, scale(b, -1.0)); }

/// Angle average ⟨A⟩: keeps only the ℓ = 0 coefficients.
inline Interaction average(const Interaction& a) {
    Interaction out(a.lattice(), a.angles());
    Mode zero(a.angles(), 0);
    for (const auto& [s, t] : a.terms()) {
        auto it = t.payload.coeffs().find(zero);
        if (it != t.payload.coeffs().end()) {
            TrigMatrix p(a.angles(), t.payload.dim());
            p.add_coeff(zero, it->second);
            out.add_term(s, p);
        }
    }
    return out;
}

/// Split by mode magnitude: ir carries |ℓ| <= K, uv the rest; ir + uv = A exactly.
inline std::pair<Interaction, Interaction> uv_ir_split(const Interaction& a, double K) {
    if (!(K > 0)) throw config_error("uv_ir_split: need K > 0");
    Interaction ir(a.lattice(), a.angles());
    Interaction uv(a.lattice(), a.angles());
    for (const auto& [s, t] : a.terms()) {
        TrigMatrix pir(a.angles(), t.payload.dim());
        TrigMatrix puv(a.angles(), t.payload.dim());
        for (const auto& [l, m] : t.payload.coeffs()) {
            if (static_cast<double>(l1_norm(l)) <= K)
                pir.add_coeff(l, m);
            else
                puv.add_coeff(l, m);
        }
        if (!pir.empty()) ir.add_term(s, pir);
        if (!puv.empty()) uv.add_term(s, puv);
    }
    return {ir, uv};
}

/// Commutator [A, B]: terms with overlapping supports contribute on the
/// support union, with angle dependence composed by Fourier convolution.
/// Terms on disjoint supports commute and are skipped.
inline Interaction commutator(const Interaction& a, const Interaction& b) {
    a.check_compatible(b);
    const int q = a.lattice().q;
    Interaction out(a.lattice(), a.angles());
    for (const auto& [sa, ta] : a.terms()) {
        for (const auto& [sb, tb] : b.terms()) {
            if (!sa.overlaps(sb)) continue;
            SupportSet u = sa.unite(sb);
            // embed each side's coefficients once per union
            std::vector<std::pair<const Mode*, MatrixXcd>> ea, eb;
            ea.reserve(ta.payload.coeffs().size());
            eb.reserve(tb.payload.coeffs().size());
            for (const auto& [l, m] : ta.payload.coeffs()) ea.emplace_back(&l, embed_payload(sa, u, m, q));
            for (const auto& [l, m] : tb.payload.coeffs()) eb.emplace_back(&l, embed_payload(sb, u, m, q));
            TrigMatrix p(a.angles(), static_cast<int>(ipow(q, u.size())));
            for (const auto& [la, ma] : ea) {
                for (const auto& [lb, mb] : eb) {
                    Mode l(*la);
                    for (std::size_t i = 0; i < l.size(); ++i) l[i] += (*lb)[i];
                    p.add_coeff(l, ma * mb - mb * ma);
                }
            }
            if (!p.empty()) out.add_term(u, p);
        }
    }
    return out;
}

/// Directional angle derivative (ν·∂_φ)A: coeff(ℓ) ↦ i (ν·ℓ) coeff(ℓ).
inline Interaction nu_partial(const Interaction& a, const std::vector<double>& nu) {
    if (static_cast<int>(nu.size()) != a.angles()) throw config_error("nu_partial: nu length != n");
    Interaction out(a.lattice(), a.angles());
    for (const auto& [s, t] : a.terms()) {
        TrigMatrix p(a.angles(), t.payload.dim());
        for (const auto& [l, m] : t.payload.coeffs()) {
            double nl = dot(nu, l);
            if (nl != 0.0) p.add_coeff(l, Complex(0, nl) * m);
        }
        if (!p.empty()) out.add_term(s, p);
    }
    return out;
}

}  // namespace qpreth
