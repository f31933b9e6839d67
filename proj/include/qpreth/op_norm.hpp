#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "qpreth/common.hpp"

namespace qpreth {

inline bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) return false;
    double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0) return true;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

/// Largest singular value. Hermitian input goes through the self-adjoint
/// eigensolver, everything else through SVD; both are exact to eigensolver
/// tolerance (1e-12 relative).
inline double op_norm(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw config_error("op_norm: matrix must be square");
    if (m.rows() == 0) return 0.0;
    if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    if (m.rows() == 1) return std::abs(m(0, 0));
    if (is_hermitian(m)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

}  // namespace qpreth
