#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sqz/core.hpp"
#include "sqz/quadrature.hpp"

namespace sqz {

// Even, non-increasing probability density on the real line.
struct DensitySpec {
    std::string name;
    std::function<double(double)> phi;
    double second_moment = 1.0; // claimed variance
    double scale = 1.0;         // width used for grids and quadrature splits
    double support = inf;       // half-width of the support
    std::vector<double> kinks;  // points where phi is not smooth
    double peak() const { return phi(0.0); }
};

inline DensitySpec gaussian_density(double dq = 1.0) {
    require(dq > 0.0, ErrorCode::InvalidArgument, "density: width must be positive");
    double c = 1.0 / std::sqrt(2.0 * pi * dq * dq);
    return {"gaussian", [=](double q) { return c * std::exp(-q * q / (2.0 * dq * dq)); }, dq * dq, dq, inf, {}};
}

// Laplace density exp(-|q|/b)/(2b) with variance dq^2, symmetric by construction.
inline DensitySpec laplace_density(double dq = 1.0) {
    require(dq > 0.0, ErrorCode::InvalidArgument, "density: width must be positive");
    double b = dq / std::sqrt(2.0);
    return {"laplace", [=](double q) { return std::exp(-std::abs(q) / b) / (2.0 * b); }, dq * dq, dq, inf, {0.0}};
}

inline DensitySpec triangular_density(double dq = 1.0) {
    require(dq > 0.0, ErrorCode::InvalidArgument, "density: width must be positive");
    double w = dq * std::sqrt(6.0);
    return {"triangular",
            [=](double q) { return std::max(0.0, (w - std::abs(q)) / (w * w)); },
            dq * dq, dq, w, {-w, 0.0, w}};
}

inline DensitySpec density_by_name(const std::string& name, double dq = 1.0) {
    if (name == "gaussian") return gaussian_density(dq);
    if (name == "laplace" || name == "laplace-symmetrized") return laplace_density(dq);
    if (name == "triangular") return triangular_density(dq);
    throw Error(ErrorCode::InvalidArgument, "unknown density: " + name);
}

// Integral of f over [a, inf) honoring the density kinks and support.
template <class F>
QuadratureResult<double> integrate_density_half(const DensitySpec& d, F f, double a, const QuadratureOptions& opt = {}) {
    std::vector<double> extra = d.kinks;
    for (int m = 1; m <= 8; ++m) extra.push_back(a + m * d.scale);
    if (std::isfinite(d.support)) {
        if (a >= d.support) return {0.0, 0.0, 0, true};
        return integrate(f, breakpoints_within(a, d.support, extra), opt);
    }
    double cut = a + 40.0 * d.scale;
    auto head = integrate(f, breakpoints_within(a, cut, extra), opt);
    auto tail = integrate_to_infinity(f, cut, opt);
    return {head.value + tail.value, head.abs_error + tail.abs_error, head.intervals + tail.intervals,
            head.converged && tail.converged && std::isfinite(tail.value)};
}

struct DensityCertificate {
    double mass = 0.0;
    double mean = 0.0;
    double second_moment = 0.0;
    double max_asymmetry = 0.0;
    double max_rise = 0.0;
};

// Checks evenness, monotonicity in |q|, unit mass and a finite second moment.
inline DensityCertificate certify_density(const DensitySpec& d) {
    DensityCertificate c;
    const double span = std::isfinite(d.support) ? d.support : 8.0 * d.scale;
    const int n = 10000;
    const double p0 = d.phi(0.0);
    require(p0 > 0.0 && std::isfinite(p0), ErrorCode::InvalidArgument, "density: phi(0) must be positive");
    double prev = p0;
    for (int i = 1; i <= n; ++i) {
        double q = span * i / n;
        double a = d.phi(q), b = d.phi(-q);
        c.max_asymmetry = std::max(c.max_asymmetry, std::abs(a - b));
        c.max_rise = std::max(c.max_rise, a - prev);
        prev = a;
    }
    require(c.max_asymmetry <= 1e-12 * p0, ErrorCode::DensityNotEven, "density: phi is not even");
    require(c.max_rise <= 1e-12 * p0, ErrorCode::DensityNotMonotone, "density: phi increases away from 0");
    QuadratureOptions opt{1e-15, 1e-13, 4000};
    auto m0 = integrate_density_half(d, [&](double q) { return d.phi(q); }, 0.0, opt);
    auto m2 = integrate_density_half(d, [&](double q) { return q * q * d.phi(q); }, 0.0, opt);
    c.mass = 2.0 * m0.value;
    c.mean = 0.0;
    require(m2.converged && std::isfinite(m2.value), ErrorCode::InfiniteSecondMoment, "density: second moment is not finite");
    c.second_moment = 2.0 * m2.value;
    require(std::abs(c.mass - 1.0) <= 1e-10, ErrorCode::InvalidArgument, "density: mass differs from 1");
    return c;
}

} // namespace sqz
