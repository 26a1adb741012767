#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqz/error.hpp"
#include "sqz/specfun.hpp"
#include "sqz/summation.hpp"

namespace sqz {

using cplx = std::complex<double>;
inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double hbar_si = 1.054571817e-34;

enum class UnitMode { dimensionless, si };

// Box [-l, l] with Planck constant and mass.
struct IntervalGeometry {
    double l = 1.0;
    double hbar = 1.0;
    double mass = 1.0;
    UnitMode units = UnitMode::dimensionless;

    static IntervalGeometry dimensionless(double l = 1.0, double hbar = 1.0, double mass = 1.0) {
        IntervalGeometry g{l, hbar, mass, UnitMode::dimensionless};
        g.validate();
        return g;
    }
    static IntervalGeometry si(double l, double mass) {
        IntervalGeometry g{l, hbar_si, mass, UnitMode::si};
        g.validate();
        return g;
    }
    void validate() const {
        require(l > 0 && std::isfinite(l), ErrorCode::InvalidArgument, "geometry: l must be positive");
        require(hbar > 0 && std::isfinite(hbar), ErrorCode::InvalidArgument, "geometry: hbar must be positive");
        require(mass > 0 && std::isfinite(mass), ErrorCode::InvalidArgument, "geometry: mass must be positive");
    }
    // p_k = momentum_quantum() * k
    double momentum_quantum() const { return pi * hbar / l; }
    // Eigenvalue of the Dirichlet Hamiltonian on [-l, l].
    double energy_level(long n) const {
        double w = pi * static_cast<double>(n) / (2.0 * l);
        return hbar * hbar / (2.0 * mass) * w * w;
    }
};

struct ClassicalTarget {
    double x_star = 0.0;
    double p_star = 0.0;
    double k_star = 0.0; // p_star in units of the momentum quantum
    long k_bar = 0;      // nearest integer, ties to even
};

inline ClassicalTarget make_target(const IntervalGeometry& g, double x_star, double p_star) {
    g.validate();
    require(std::isfinite(x_star) && std::isfinite(p_star), ErrorCode::InvalidArgument, "target: non-finite input");
    require(std::abs(x_star) < g.l, ErrorCode::OutOfDomain, "target: |x*| must be below l");
    ClassicalTarget t;
    t.x_star = x_star;
    t.p_star = p_star;
    t.k_star = p_star / g.momentum_quantum();
    t.k_bar = static_cast<long>(round_half_even(t.k_star));
    return t;
}

// Coefficients a_k of the momentum basis exp(i pi k x / l) / sqrt(2 l) for k in [k_first, k_last].
// tail_bound bounds sum of (1 + k^2)|a_k|^2 over the omitted k; +inf means no finite certificate.
class SpectralSeries {
public:
    SpectralSeries() = default;
    SpectralSeries(long k_first, std::vector<cplx> coeffs, double tail_bound)
        : k_first_(k_first), a_(std::move(coeffs)), tail_(tail_bound) {
        require(!(tail_bound < 0.0), ErrorCode::InvalidArgument, "series: negative tail bound");
    }
    long k_first() const { return k_first_; }
    long k_last() const { return k_first_ + static_cast<long>(a_.size()) - 1; }
    std::size_t size() const { return a_.size(); }
    bool empty() const { return a_.empty(); }
    cplx operator[](long k) const {
        long i = k - k_first_;
        return (i >= 0 && i < static_cast<long>(a_.size())) ? a_[static_cast<std::size_t>(i)] : cplx{};
    }
    std::span<const cplx> coefficients() const { return a_; }
    double tail_bound() const { return tail_; }
    bool has_finite_tail() const { return std::isfinite(tail_); }
    long truncation_K() const { return empty() ? 0 : std::max(std::abs(k_first()), std::abs(k_last())); }
    double norm_squared() const {
        CompensatedSum<double> s;
        for (const auto& c : a_) s += std::norm(c);
        return s.value();
    }

private:
    long k_first_ = 0;
    std::vector<cplx> a_;
    double tail_ = 0.0;
};

inline SpectralSeries normalize_series(const SpectralSeries& s) {
    double n2 = s.norm_squared();
    require(n2 > 0.0 && std::isfinite(n2), ErrorCode::ZeroSeries, "normalize: series has zero norm");
    double f = 1.0 / std::sqrt(n2);
    std::vector<cplx> a(s.coefficients().begin(), s.coefficients().end());
    for (auto& c : a) c *= f;
    return SpectralSeries(s.k_first(), std::move(a), s.tail_bound() / n2);
}

struct WaveValue {
    cplx value;
    double error_bound = 0.0;
};

// Bound on sum |a_k| over omitted k, by Cauchy-Schwarz against sum 1/(1+k^2) <= pi coth(pi).
inline double omitted_l1_bound(const SpectralSeries& s) {
    if (!s.has_finite_tail()) return inf;
    return std::sqrt(s.tail_bound() * 3.1533);
}

// sum_k a_k d^m/dx^m exp(i pi k x / l) / sqrt(2 l)
inline WaveValue evaluate_series(const SpectralSeries& s, const IntervalGeometry& g, double x, int derivative = 0) {
    const double w = pi / g.l;
    CompensatedSum<cplx> acc;
    long k = s.k_first();
    cplx step = std::polar(1.0, w * x);
    cplx e;
    for (std::size_t i = 0; i < s.size(); ++i, ++k) {
        if (i % 32 == 0) e = std::polar(1.0, w * static_cast<double>(k) * x);
        cplx term = s.coefficients()[i] * e;
        if (derivative > 0) {
            cplx f = cplx(0.0, w * static_cast<double>(k));
            for (int m = 0; m < derivative; ++m) term *= f;
        }
        acc += term;
        e *= step;
    }
    WaveValue v;
    const double norm = 1.0 / std::sqrt(2.0 * g.l);
    v.value = acc.value() * norm;
    v.error_bound = derivative == 0 ? omitted_l1_bound(s) * norm : inf;
    return v;
}

// psi(-l) and psi(l) from the series, which converges absolutely when the tail is finite.
inline std::pair<WaveValue, WaveValue> boundary_values(const SpectralSeries& s, const IntervalGeometry& g) {
    require(s.has_finite_tail(), ErrorCode::NonSummable, "boundary_values: coefficients are not absolutely summable");
    return {evaluate_series(s, g, -g.l), evaluate_series(s, g, g.l)};
}

// Coefficients b_n, n = 1..N, in the Dirichlet eigenbasis sin(pi n (x - l) / (2 l)) / sqrt(l).
struct EnergySeries {
    std::vector<cplx> b; // b[n - 1]
    double tail_bound = 0.0; // bound on max_n |error in b_n| from the momentum truncation
    long N() const { return static_cast<long>(b.size()); }
    cplx operator()(long n) const { return b.at(static_cast<std::size_t>(n - 1)); }
};

} // namespace sqz
