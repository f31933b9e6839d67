#pragma once

#include "qpreth/heating.hpp"
#include "qpreth/interaction.hpp"

namespace qpreth {

inline MatrixXcd pauli(int j) {
    MatrixXcd m(2, 2);
    switch (j) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw config_error("pauli: index must be 0..3");
    }
    return m;
}

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Two-angle nearest-neighbor benchmark drive on a chain:
///   V = a1 Σ_x cos(φ1) σ¹_x + a2 Σ_x cos(φ1+φ2) σ¹_x σ¹_{x+1}.
/// Zero mean, Hermitian, modes of l1 size <= 2.
inline Interaction benchmark_chain_v(const LatticeSpec& lattice, double a1, double a2) {
    if (lattice.d != 1 || lattice.q != 2) throw config_error("benchmark_chain_v: needs a spin-1/2 chain");
    Interaction v(lattice, 2);
    MatrixXcd sx = pauli(1);
    MatrixXcd sxsx = kron(sx, sx);
    auto sites = lattice.sites();
    for (const auto& x : sites) {
        TrigMatrix p(2, 2);
        p.add_coeff({1, 0}, 0.5 * a1 * sx);
        p.add_coeff({-1, 0}, 0.5 * a1 * sx);
        v.add_term(SupportSet({x}), p);
    }
    for (std::size_t i = 0; i + 1 < sites.size(); ++i) {
        TrigMatrix p(2, 4);
        p.add_coeff({1, 1}, 0.5 * a2 * sxsx);
        p.add_coeff({-1, -1}, 0.5 * a2 * sxsx);
        v.add_term(SupportSet({sites[i], sites[i + 1]}), p);
    }
    return v;
}

/// σ^j at the central site of the lattice, as a constant local observable.
inline LocalTerm central_observable(const LatticeSpec& lattice, int j) {
    auto sites = lattice.sites();
    Site center = sites[sites.size() / 2];
    TrigMatrix p(2, 2);
    p.add_coeff({0, 0}, pauli(j));
    return LocalTerm{SupportSet({center}), p};
}

}  // namespace qpreth
