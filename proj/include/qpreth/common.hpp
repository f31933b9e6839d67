#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpreth {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Bad user input: malformed config, parameter outside its admissible range.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical rejection: resonant frequency vector, non-decaying series,
/// exhausted step budget, dimension cap overflow.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// l1 norm of an integer vector.
inline long long l1_norm(const std::vector<int>& v) {
    long long s = 0;
    for (int x : v) s += std::abs(static_cast<long long>(x));
    return s;
}

inline double l1_norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += std::abs(x);
    return s;
}

inline double dot(const std::vector<double>& a, const std::vector<int>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Integer power q^m with overflow guard (dimensions of tensor spaces).
inline long long ipow(long long q, long long m) {
    long long r = 1;
    for (long long i = 0; i < m; ++i) {
        if (r > (1LL << 46) / q) throw numeric_error("ipow: tensor dimension overflow");
        r *= q;
    }
    return r;
}

inline constexpr const char* kVersion = "qpreth 0.1.0";

}  // namespace qpreth
