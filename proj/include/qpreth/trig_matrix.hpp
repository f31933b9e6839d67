#pragma once

#include <Eigen/Dense>
#include <map>

#include "qpreth/common.hpp"
#include "qpreth/op_norm.hpp"

namespace qpreth {

using Eigen::MatrixXcd;

/// Frequency vector ℓ ∈ Z^n of one Fourier mode.
using Mode = std::vector<int>;

/// Operator-valued trigonometric polynomial on T^n:
///   A(φ) = Σ_ℓ coeff(ℓ) e^{i ℓ·φ},  finitely many ℓ.
/// Self-adjointness of A(φ) for every φ is equivalent to
/// coeff(-ℓ) = coeff(ℓ)^† for all ℓ.
class TrigMatrix {
  public:
    TrigMatrix() = default;
    TrigMatrix(int n, int dim) : n_(n), dim_(dim) {
        if (n < 0 || dim < 1) throw config_error("TrigMatrix: need n >= 0, dim >= 1");
    }

    int angles() const { return n_; }
    int dim() const { return dim_; }
    const std::map<Mode, MatrixXcd>& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }

    void add_coeff(const Mode& l, const MatrixXcd& m) {
        check_mode(l);
        if (m.rows() != dim_ || m.cols() != dim_) throw config_error("TrigMatrix: coefficient dimension mismatch");
        auto it = coeffs_.find(l);
        if (it == coeffs_.end()) {
            if (m.norm() > 0.0) coeffs_.emplace(l, m);
        } else {
            it->second += m;
            if (it->second.norm() == 0.0) coeffs_.erase(it);
        }
    }

    void set_coeff(const Mode& l, const MatrixXcd& m) {
        check_mode(l);
        if (m.rows() != dim_ || m.cols() != dim_) throw config_error("TrigMatrix: coefficient dimension mismatch");
        if (m.norm() == 0.0)
            coeffs_.erase(l);
        else
            coeffs_[l] = m;
    }

    MatrixXcd coeff(const Mode& l) const {
        auto it = coeffs_.find(l);
        if (it != coeffs_.end()) return it->second;
        return MatrixXcd::Zero(dim_, dim_);
    }

    /// Evaluate A(φ).
    MatrixXcd eval(const std::vector<double>& phi) const {
        MatrixXcd out = MatrixXcd::Zero(dim_, dim_);
        for (const auto& [l, m] : coeffs_) {
            double phase = 0;
            for (int i = 0; i < n_; ++i) phase += l[i] * phi[i];
            out += std::exp(Complex(0, phase)) * m;
        }
        return out;
    }

    /// Exact derivative ∂^{p'}_φ A: multiplies coeff(ℓ) by Π_j (i ℓ_j)^{p'_j}.
    TrigMatrix derivative(const std::vector<int>& multi_index) const {
        TrigMatrix out(n_, dim_);
        for (const auto& [l, m] : coeffs_) {
            Complex factor = 1.0;
            for (int i = 0; i < n_; ++i)
                for (int k = 0; k < multi_index[i]; ++k) factor *= Complex(0, l[i]);
            if (factor != Complex(0, 0)) out.add_coeff(l, factor * m);
        }
        return out;
    }

    TrigMatrix dagger() const {
        TrigMatrix out(n_, dim_);
        for (const auto& [l, m] : coeffs_) {
            Mode neg(l);
            for (auto& x : neg) x = -x;
            out.add_coeff(neg, m.adjoint());
        }
        return out;
    }

    bool hermitian_symmetric(double tol = 1e-12) const {
        double scale = 0;
        for (const auto& [l, m] : coeffs_) scale = std::max(scale, m.cwiseAbs().maxCoeff());
        if (scale == 0) return true;
        for (const auto& [l, m] : coeffs_) {
            Mode neg(l);
            for (auto& x : neg) x = -x;
            if ((coeff(neg) - m.adjoint()).cwiseAbs().maxCoeff() > tol * scale) return false;
        }
        return true;
    }

    TrigMatrix& operator+=(const TrigMatrix& o) {
        if (o.n_ != n_ || o.dim_ != dim_) throw config_error("TrigMatrix: shape mismatch in +=");
        for (const auto& [l, m] : o.coeffs_) add_coeff(l, m);
        return *this;
    }

    TrigMatrix& operator*=(Complex c) {
        if (c == Complex(0, 0)) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [l, m] : coeffs_) m *= c;
        return *this;
    }

    /// Largest operator norm among coefficients (pruning scale).
    double max_coeff_norm() const {
        double s = 0;
        for (const auto& [l, m] : coeffs_) s = std::max(s, op_norm(m));
        return s;
    }

    /// Drop coefficients with op norm <= eps; returns the op-norm mass shed.
    double prune(double eps) {
        double shed = 0;
        for (auto it = coeffs_.begin(); it != coeffs_.end();) {
            double nm = op_norm(it->second);
            if (nm <= eps) {
                shed += nm;
                it = coeffs_.erase(it);
            } else {
                ++it;
            }
        }
        return shed;
    }

  private:
    void check_mode(const Mode& l) const {
        if (static_cast<int>(l.size()) != n_) throw config_error("TrigMatrix: mode length != n");
    }

    int n_ = 0;
    int dim_ = 1;
    std::map<Mode, MatrixXcd> coeffs_;
};

}  // namespace qpreth
