#pragma once

#include "qpreth/interaction.hpp"

namespace qpreth {

/// Positions of sub's sites inside sup (both sorted). Throws if sub ⊄ sup.
inline std::vector<int> site_positions(const SupportSet& sub, const SupportSet& sup) {
    std::vector<int> pos;
    pos.reserve(sub.size());
    for (const auto& x : sub.sites) {
        auto it = std::lower_bound(sup.sites.begin(), sup.sites.end(), x);
        if (it == sup.sites.end() || *it != x) throw config_error("site_positions: sub not contained in sup");
        pos.push_back(static_cast<int>(it - sup.sites.begin()));
    }
    return pos;
}

/// Embed an operator on the tensor space of `sub` into the tensor space of
/// `sup` (identity off `sub`). Tensor order: sorted sites, first site slowest.
inline MatrixXcd embed_payload(const SupportSet& sub, const SupportSet& sup, const MatrixXcd& m, int q) {
    const int msup = static_cast<int>(sup.size());
    const int msub = static_cast<int>(sub.size());
    const long long dim_sup = ipow(q, msup);
    const long long dim_sub = ipow(q, msub);
    if (m.rows() != dim_sub) throw config_error("embed_payload: operator dim != q^{|sub|}");
    if (msub == msup) return m;  // sorted containment with equal size implies equality

    std::vector<int> pos = site_positions(sub, sup);
    std::vector<bool> in_sub(msup, false);
    for (int p : pos) in_sub[p] = true;

    // For each sup basis index: its sub-index and its index on the complement.
    std::vector<long long> sub_idx(dim_sup), rest_idx(dim_sup);
    std::vector<long long> digits(msup);
    for (long long I = 0; I < dim_sup; ++I) {
        long long rem = I;
        for (int j = msup - 1; j >= 0; --j) {
            digits[j] = rem % q;
            rem /= q;
        }
        long long si = 0;
        for (int p : pos) si = si * q + digits[p];
        long long ri = 0;
        for (int j = 0; j < msup; ++j)
            if (!in_sub[j]) ri = ri * q + digits[j];
        sub_idx[I] = si;
        rest_idx[I] = ri;
    }

    MatrixXcd out = MatrixXcd::Zero(dim_sup, dim_sup);
    for (long long I = 0; I < dim_sup; ++I)
        for (long long J = 0; J < dim_sup; ++J)
            if (rest_idx[I] == rest_idx[J]) out(I, J) = m(sub_idx[I], sub_idx[J]);
    return out;
}

inline SupportSet full_support(const LatticeSpec& lattice) { return SupportSet(lattice.sites()); }

/// Realize Σ_S A_S(φ) as a dense matrix on H_Λ. Guarded by a dimension cap
/// (default 4096, i.e. 12 spin-1/2 sites).
inline MatrixXcd assemble_global(const Interaction& a, const std::vector<double>& phi, long long cap = 4096) {
    long long dim = ipow(a.lattice().q, a.lattice().volume());
    if (dim > cap)
        throw numeric_error("assemble_global: dimension " + std::to_string(dim) + " exceeds cap " +
                            std::to_string(cap) + "; raise the cap to at least " + std::to_string(dim));
    SupportSet all = full_support(a.lattice());
    MatrixXcd out = MatrixXcd::Zero(dim, dim);
    for (const auto& [s, t] : a.terms()) out += embed_payload(s, all, t.payload.eval(phi), a.lattice().q);
    return out;
}

/// Assemble a constant interaction (φ irrelevant).
inline MatrixXcd assemble_constant(const Interaction& a, long long cap = 4096) {
    return assemble_global(a, std::vector<double>(a.angles(), 0.0), cap);
}

}  // namespace qpreth
