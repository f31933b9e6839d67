#pragma once

#include "qpreth/lattice.hpp"
#include "qpreth/trig_matrix.hpp"

namespace qpreth {

/// One interaction element: a connected support and its angle-dependent payload.
struct LocalTerm {
    SupportSet support;
    TrigMatrix payload;
};

/// Quasi-local angle-dependent interaction {A_S(φ)}: at most one term per
/// connected support. Immutable by convention once built; all operations on
/// interactions are pure functions.
class Interaction {
  public:
    Interaction() = default;
    Interaction(LatticeSpec lattice, int n) : lattice_(std::move(lattice)), n_(n) {
        if (n < 0) throw config_error("Interaction: need n >= 0");
    }

    const LatticeSpec& lattice() const { return lattice_; }
    int angles() const { return n_; }
    const std::map<SupportSet, LocalTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    /// Accumulate a payload on a support. Validates connectivity, membership
    /// and the dimension q^{|S|}.
    void add_term(const SupportSet& s, const TrigMatrix& payload) {
        for (const auto& x : s.sites)
            if (!lattice_.contains(x)) throw config_error("Interaction: site outside lattice");
        if (!s.connected()) throw config_error("Interaction: support not connected");
        if (payload.angles() != n_) throw config_error("Interaction: angle count mismatch");
        long long dim = ipow(lattice_.q, static_cast<long long>(s.size()));
        if (payload.dim() != dim) throw config_error("Interaction: payload dim != q^{|S|}");
        auto it = terms_.find(s);
        if (it == terms_.end()) {
            if (!payload.empty()) terms_.emplace(s, LocalTerm{s, payload});
        } else {
            it->second.payload += payload;
            if (it->second.payload.empty()) terms_.erase(it);
        }
    }

    const TrigMatrix* find(const SupportSet& s) const {
        auto it = terms_.find(s);
        return it == terms_.end() ? nullptr : &it->second.payload;
    }

    /// True when every payload carries the Hermitian symmetry
    /// coeff(-ℓ) = coeff(ℓ)^†, so A(φ) is self-adjoint for every φ.
    bool hermitian(double tol = 1e-12) const {
        for (const auto& [s, t] : terms_)
            if (!t.payload.hermitian_symmetric(tol)) return false;
        return true;
    }

    /// True when only ℓ = 0 coefficients appear.
    bool constant() const {
        for (const auto& [s, t] : terms_)
            for (const auto& [l, m] : t.payload.coeffs())
                if (l1_norm(l) != 0) return false;
        return true;
    }

    /// Largest |ℓ|_1 across all payload modes.
    long long max_mode() const {
        long long mx = 0;
        for (const auto& [s, t] : terms_)
            for (const auto& [l, m] : t.payload.coeffs()) mx = std::max(mx, l1_norm(l));
        return mx;
    }

    void check_compatible(const Interaction& o) const {
        if (!lattice_.compatible(o.lattice_) || n_ != o.n_)
            throw config_error("Interaction: incompatible lattice or angle count");
    }

    double prune(double eps) {
        double shed = 0;
        for (auto it = terms_.begin(); it != terms_.end();) {
            shed += it->second.payload.prune(eps);
            if (it->second.payload.empty())
                it = terms_.erase(it);
            else
                ++it;
        }
        return shed;
    }

  private:
    LatticeSpec lattice_;
    int n_ = 0;
    std::map<SupportSet, LocalTerm> terms_;
};

}  // namespace qpreth
