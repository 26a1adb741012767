#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "sqz/core.hpp"
#include "sqz/specfun.hpp"
#include "sqz/summation.hpp"

namespace sqz {

// |a_k|^2 <= amplitude2 * exp(-gamma (k - center)^2)
struct GaussianDecay {
    long center = 0;
    double gamma = 1.0;
    double amplitude2 = 1.0;
};

// |a_k|^2 = mag2(k), zero outside [center - support, center + support].
struct FiniteDecay {
    long center = 0;
    long support = 0;
    std::function<double(long)> mag2;
};

// Window [center - K, center + K] with a bound on sum (1 + k^4)|a_k|^2 outside it.
struct Truncation {
    long center = 0;
    long K = 0;
    double tail_bound = 0.0;
    long k_first() const { return center - K; }
    long k_last() const { return center + K; }
};

namespace detail {
// Upper bound on sum_{j > K} j^m exp(-gamma j^2) for m in {0, 2, 4}.
inline double gaussian_sum_tail(long K, double gamma, int m) {
    double x = static_cast<double>(K);
    double integral = gaussian_tail_moment(x, gamma, m);
    double tpeak = std::max(x, m == 0 ? x : std::sqrt(m / (2.0 * gamma)));
    double peak = std::pow(tpeak, m) * std::exp(-gamma * tpeak * tpeak);
    return integral + peak;
}
} // namespace detail

// Certified tail of the (1 + k^4)-weighted mass outside the window of half-width K.
inline double gaussian_window_tail(const GaussianDecay& d, long K) {
    const double c = static_cast<double>(d.center);
    const double c2 = c * c;
    double t0 = detail::gaussian_sum_tail(K, d.gamma, 0);
    double t2 = detail::gaussian_sum_tail(K, d.gamma, 2);
    double t4 = detail::gaussian_sum_tail(K, d.gamma, 4);
    // (c+j)^4 + (c-j)^4 = 2c^4 + 12 c^2 j^2 + 2 j^4
    return d.amplitude2 * ((2.0 + 2.0 * c2 * c2) * t0 + 12.0 * c2 * t2 + 2.0 * t4);
}

inline Truncation choose_truncation(const GaussianDecay& d, double tol, long K_max = 1L << 22) {
    require(d.gamma > 0.0, ErrorCode::InvalidGamma, "choose_truncation: decay rate must be positive");
    require(tol > 0.0, ErrorCode::InvalidArgument, "choose_truncation: tolerance must be positive");
    // Exponential search then bisection on the monotone bound.
    long hi = 1;
    while (gaussian_window_tail(d, hi) >= tol) {
        hi *= 2;
        require(hi <= 2 * K_max, ErrorCode::NoFiniteTail, "choose_truncation: tolerance unreachable");
    }
    long lo = 0;
    if (gaussian_window_tail(d, 0) < tol) hi = 0;
    while (hi - lo > 1) {
        long mid = (lo + hi) / 2;
        if (gaussian_window_tail(d, mid) < tol) hi = mid;
        else lo = mid;
    }
    require(hi <= K_max, ErrorCode::NoFiniteTail, "choose_truncation: K exceeds limit");
    return {d.center, hi, gaussian_window_tail(d, hi)};
}

inline Truncation choose_truncation(const FiniteDecay& d, double tol) {
    require(tol > 0.0, ErrorCode::InvalidArgument, "choose_truncation: tolerance must be positive");
    require(d.support >= 0, ErrorCode::InvalidArgument, "choose_truncation: negative support");
    auto w = [&](long k) {
        double kk = static_cast<double>(k);
        return (1.0 + kk * kk * kk * kk) * d.mag2(k);
    };
    // Accumulate from the outside in; the first K whose outside mass reaches tol sets the window.
    CompensatedSum<double> tail;
    for (long j = d.support; j >= 1; --j) {
        double next = tail.value() + w(d.center + j) + w(d.center - j);
        if (next >= tol) return {d.center, j, tail.value()};
        tail += w(d.center + j) + w(d.center - j);
    }
    return {d.center, 0, tail.value()};
}

} // namespace sqz
