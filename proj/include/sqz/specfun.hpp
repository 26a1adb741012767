#pragma once

#include <cmath>
#include <numbers>

#include "sqz/error.hpp"

namespace sqz {

inline constexpr double pi = std::numbers::pi;

// Nearest integer, ties to even, independent of the floating-point environment.
inline double round_half_even(double x) {
    double f = std::floor(x);
    double d = x - f;
    if (d > 0.5) return f + 1.0;
    if (d < 0.5) return f;
    return std::fmod(f, 2.0) == 0.0 ? f : f + 1.0;
}

inline double distance_to_integer(double x) { return std::abs(x - round_half_even(x)); }

// Phi(x) = integral of exp(-t^2) over [x, inf).
inline double gauss_phi(double x) { return 0.5 * std::sqrt(pi) * std::erfc(x); }

// Integral of t^order exp(-gamma t^2) over [x, inf) for order 0, 2 or 4.
inline double gaussian_tail_moment(double x, double gamma, int order) {
    require(gamma > 0.0 && std::isfinite(gamma), ErrorCode::InvalidGamma, "gaussian_tail: gamma must be positive");
    require(std::isfinite(x), ErrorCode::InvalidArgument, "gaussian_tail: x must be finite");
    const double s = std::sqrt(gamma);
    const double u = s * x;
    switch (order) {
    case 0: return gauss_phi(u) / s;
    case 2: return 0.5 * (gauss_phi(u) + u * std::exp(-u * u)) / (gamma * s);
    case 4:
        return x * x * x * std::exp(-gamma * x * x) / (2.0 * gamma) +
               1.5 / gamma * gaussian_tail_moment(x, gamma, 2);
    default: throw Error(ErrorCode::InvalidArgument, "gaussian_tail: order must be 0, 2 or 4");
    }
}

// Integral of t^2 exp(-gamma t^2) over [x, inf).
inline double gaussian_tail(double x, double gamma) { return gaussian_tail_moment(x, gamma, 2); }

enum class ThetaBranch { automatic, direct, modular };

struct ThetaValue {
    double value = 0.0;
    double tail_bound = 0.0;
    int terms = 0;
};

// theta(x, tau) = sum_k exp(-pi tau k^2 + 2 pi i k x) for real x and tau > 0.
// The direct series is used for tau >= 1, the Gaussian comb (Jacobi transform) below.
inline ThetaValue theta_eval(double x, double tau, ThetaBranch branch = ThetaBranch::automatic) {
    require(tau > 0.0 && std::isfinite(tau), ErrorCode::InvalidTau, "theta: tau must be positive");
    require(std::isfinite(x), ErrorCode::InvalidArgument, "theta: x must be finite");
    const double xr = x - round_half_even(x);
    if (branch == ThetaBranch::automatic) branch = tau >= 1.0 ? ThetaBranch::direct : ThetaBranch::modular;
    ThetaValue out;
    if (branch == ThetaBranch::direct) {
        // Long double accumulation keeps cancellation near x = 1/2 below 1e-12 relative.
        long double sum = 1.0L;
        const long double a = pi * static_cast<long double>(tau);
        int k = 1;
        for (;; ++k) {
            double tail = 2.0 * gaussian_tail_moment(k - 1.0, pi * tau, 0);
            if (tail < 1e-19 || k > 100000) {
                out.tail_bound = tail;
                break;
            }
            long double kk = k;
            sum += 2.0L * std::exp(-a * kk * kk) * std::cos(2.0L * static_cast<long double>(pi) * kk * xr);
        }
        out.value = static_cast<double>(sum);
        out.terms = 2 * k - 1;
        return out;
    }
    // sum_k exp(-pi (k - x)^2 / tau) / sqrt(tau)
    const double g = pi / tau;
    double sum = std::exp(-g * xr * xr);
    int m = 1;
    for (;; ++m) {
        double lo = m - 0.5;
        double tail = 2.0 * gaussian_tail_moment(lo, g, 0);
        double a1 = std::exp(-g * (m - xr) * (m - xr));
        double a2 = std::exp(-g * (m + xr) * (m + xr));
        sum += a1 + a2;
        if (tail < 1e-19 * sum || tail < 1e-300 || m > 100000) {
            out.tail_bound = tail / std::sqrt(tau);
            break;
        }
    }
    out.value = sum / std::sqrt(tau);
    out.terms = 2 * m + 1;
    return out;
}

inline double theta(double x, double tau) { return theta_eval(x, tau).value; }

} // namespace sqz
