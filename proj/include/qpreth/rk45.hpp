#pragma once

#include <array>

#include "qpreth/common.hpp"

namespace qpreth {

/// Adaptive one-step integrator settings: an order-5 embedded Dormand-Prince
/// pair with a order-4 error estimate.
struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long long max_steps = 4'000'000'000LL;
    double h_init = 1e-4;
    double h_min = 1e-14;
    double safety = 0.9;
    static constexpr int order = 5;
};

using State2 = std::array<Complex, 2>;

namespace detail {
inline double err_norm(const State2& e, const State2& y0, const State2& y1, double atol, double rtol) {
    double s = 0;
    for (int i = 0; i < 2; ++i) {
        double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        double r = std::abs(e[i]) / sc;
        s += r * r;
    }
    return std::sqrt(0.5 * s);
}
}  // namespace detail

/// Integrate y' = f(t, y) from t0 to t1 in place. Returns steps taken.
/// Throws numeric_error when the step budget is exhausted.
template <class RHS>
inline long long rk45_integrate(RHS&& f, State2& y, double t0, double t1, const IntegratorConfig& cfg,
                                double* h_carry = nullptr) {
    if (t1 < t0) throw config_error("rk45: need t1 >= t0");
    if (t1 == t0) return 0;

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    double t = t0;
    double h = h_carry && *h_carry > 0 ? *h_carry : cfg.h_init;
    h = std::min(h, t1 - t0);

    State2 k1, k2, k3, k4, k5, k6, k7, yt, y1;
    f(t, y, k1);  // k1 stays valid at (t, y); rejected steps leave both unchanged

    long long steps = 0;
    while (t < t1) {
        if (++steps > cfg.max_steps) throw numeric_error("rk45: step budget exhausted");
        if (h < cfg.h_min) throw numeric_error("rk45: step size underflow");
        if (t + h >= t1) h = t1 - t;

        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a21 * k1[i]);
        f(t + c2 * h, yt, k2);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, yt, k3);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, yt, k4);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, yt, k5);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, yt, k6);
        for (int i = 0; i < 2; ++i)
            y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, y1, k7);

        State2 err;
        for (int i = 0; i < 2; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        double en = detail::err_norm(err, y, y1, cfg.abs_tol, cfg.rel_tol);

        if (en <= 1.0) {
            t += h;
            y = y1;
            k1 = k7;  // FSAL
        }
        double fac = en > 0 ? cfg.safety * std::pow(en, -0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, fac));
    }
    if (h_carry) *h_carry = h;
    return steps;
}

}  // namespace qpreth
