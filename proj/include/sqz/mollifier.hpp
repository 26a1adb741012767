#pragma once

#include <cmath>

#include "sqz/error.hpp"
#include "sqz/quadrature.hpp"

namespace sqz {

// Smooth bump omega(t) = C exp(-eps / (eps - |t|)) on (-eps, eps) with unit mass.
class Mollifier {
public:
    explicit Mollifier(double epsilon) : eps_(epsilon) {
        require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::InvalidArgument, "mollifier: epsilon must be positive");
        auto bump = [e = eps_](double t) {
            double a = e - std::abs(t);
            return a > 0.0 ? std::exp(-e / a) : 0.0;
        };
        auto r = integrate(bump, {-eps_, 0.0, eps_}, {1e-300, 5e-14, 4000});
        require(r.converged && r.value > 0.0, ErrorCode::QuadratureFailure, "mollifier: normalization quadrature failed");
        c_ = 1.0 / r.value;
    }
    double epsilon() const { return eps_; }
    double normalization() const { return c_; }

    double omega(double t) const {
        double a = eps_ - std::abs(t);
        return a > 0.0 ? c_ * std::exp(-eps_ / a) : 0.0;
    }
    double omega_d1(double t) const {
        double a = eps_ - std::abs(t);
        if (a <= 0.0) return 0.0;
        double v = -c_ * std::exp(-eps_ / a) * eps_ / (a * a);
        return t > 0.0 ? v : -v;
    }
    // Integral of omega over (-inf, s].
    double cdf(double s) const {
        if (s <= -eps_) return 0.0;
        if (s >= eps_) return 1.0;
        if (s > 0.0) return 1.0 - cdf(-s);
        return c_ * eps_ * primitive(1.0 - std::abs(s) / eps_);
    }

    // Integral of exp(-1/v) over [0, z] for z in [0, 1].
    static double primitive(double z) {
        if (z <= 0.0) return 0.0;
        double y = 1.0 / z;
        if (y > 700.0) return 0.0;
        double e1 = -std::expint(-y);
        return z * std::exp(-y) - e1;
    }

private:
    double eps_;
    double c_ = 0.0;
};

// eta(x) = integral of omega(x - y) over y in [-l + 2 eps, l - 2 eps]: 1 on [-l + 3 eps, l - 3 eps], 0 outside (-l + eps, l - eps).
class BoxCutoff {
public:
    BoxCutoff(double l, double epsilon) : l_(l), w_(epsilon) {
        require(3.0 * epsilon < l, ErrorCode::EpsilonTooLarge, "cutoff: 3 eps must be below l");
    }
    double value(double x) const {
        double e = w_.epsilon();
        return w_.cdf(x + l_ - 2.0 * e) - w_.cdf(x - l_ + 2.0 * e);
    }
    double d1(double x) const {
        double e = w_.epsilon();
        return w_.omega(x + l_ - 2.0 * e) - w_.omega(x - l_ + 2.0 * e);
    }
    double d2(double x) const {
        double e = w_.epsilon();
        return w_.omega_d1(x + l_ - 2.0 * e) - w_.omega_d1(x - l_ + 2.0 * e);
    }
    const Mollifier& mollifier() const { return w_; }
    std::vector<double> breakpoints() const {
        double e = w_.epsilon();
        return {-l_ + e, -l_ + 2 * e, -l_ + 3 * e, l_ - 3 * e, l_ - 2 * e, l_ - e};
    }

private:
    double l_;
    Mollifier w_;
};

} // namespace sqz
