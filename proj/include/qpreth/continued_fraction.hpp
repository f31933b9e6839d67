#pragma once

#include "qpreth/common.hpp"

namespace qpreth {

/// Continued-fraction convergents p_m/q_m of α with q strictly increasing
/// (among convergents sharing a denominator only the better one is kept).
/// Every pair satisfies |α q_m - p_m| <= 1/q_m.
struct ConvergentSeq {
    double alpha = 0;
    std::vector<std::pair<long long, long long>> pairs;  // (p_m, q_m)
    std::vector<double> errors;                          // |α q_m - p_m|

    std::size_t size() const { return pairs.size(); }
};

inline ConvergentSeq convergents(double alpha, int M) {
    if (M < 1 || M > 25) throw config_error("convergents: need 1 <= M <= 25 (double-precision safety)");
    if (!(alpha > 0)) throw config_error("convergents: need alpha > 0");
    ConvergentSeq cs;
    cs.alpha = alpha;

    // standard recursion p_k = a_k p_{k-1} + p_{k-2}, q_k likewise
    long long pm1 = 1, pm2 = 0;  // p_{k-1}, p_{k-2}
    long long qm1 = 0, qm2 = 1;
    double x = alpha;
    std::vector<std::pair<long long, long long>> raw;
    for (int k = 0; k < M; ++k) {
        double a_real = std::floor(x);
        long long a = static_cast<long long>(a_real);
        long long p = a * pm1 + pm2;
        long long q = a * qm1 + qm2;
        raw.emplace_back(p, q);
        pm2 = pm1;
        pm1 = p;
        qm2 = qm1;
        qm1 = q;
        double frac = x - a_real;
        if (frac < 1e-12)
            throw config_error("convergents: alpha is rational to working precision");
        x = 1.0 / frac;
    }

    // keep q strictly increasing; among equal q the later convergent is better
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (i + 1 < raw.size() && raw[i + 1].second == raw[i].second) continue;
        if (!cs.pairs.empty() && raw[i].second <= cs.pairs.back().second) continue;
        cs.pairs.push_back(raw[i]);
        cs.errors.push_back(std::abs(alpha * raw[i].second - raw[i].first));
    }
    return cs;
}

}  // namespace qpreth
