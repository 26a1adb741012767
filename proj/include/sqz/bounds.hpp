#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sqz/families.hpp"
#include "sqz/moments.hpp"
#include "sqz/quadrature.hpp"
#include "sqz/specfun.hpp"

namespace sqz {

// ---------------------------------------------------------------- discretized-family bounds

// Integral over y in [-1, 1] of (y - s)^2 / sin^2(pi (y - s) / 2).
inline double sine_weight_integral(double s) {
    require(std::abs(s) < 1.0, ErrorCode::OutOfDomain, "sine weight: |x*/l| must be below 1");
    auto f = [s](double y) {
        double u = y - s;
        double h = 0.5 * pi * u;
        if (std::abs(h) < 1e-4) return (4.0 / (pi * pi)) * (1.0 + h * h / 3.0);
        double sn = std::sin(h);
        return u * u / (sn * sn);
    };
    auto r = integrate(f, breakpoints_within(-1.0, 1.0, {s}), {1e-15, 5e-14, 2000});
    require(r.converged, ErrorCode::QuadratureFailure, "sine weight: quadrature failed");
    return r.value;
}

struct Thm3Report {
    double alpha = 0.0;
    double phi0 = 0.0;
    double sine_integral = 0.0;
    double dstar_x2 = 0.0;
    double dstar_x2_bound = 0.0;
    double mean_x_dev = 0.0;
    double mean_x_bound = 0.0;
    double mean_p = 0.0;
    double mean_p_expected = 0.0;
    double envelope_min_margin = 0.0; // min over grid of bound - |psi|
    double product = 0.0;             // dx^2 dp
    double product_bound = 0.0;
    bool x_ok = false, mean_x_ok = false, mean_p_ok = false, envelope_ok = false, product_ok = false;
    bool ok() const { return x_ok && mean_x_ok && mean_p_ok && envelope_ok && product_ok; }
};

inline Thm3Report thm3_bounds(const StateDescriptor& s) {
    const auto* dp = std::get_if<DiscretizedParams>(&s.params);
    require(dp != nullptr, ErrorCode::InvalidArgument, "thm3: needs a discretized state");
    const double l = s.geometry.l, h = s.geometry.hbar, xs = s.target.x_star;
    Thm3Report r;
    r.alpha = dp->alpha;
    r.phi0 = dp->density.peak();
    r.sine_integral = sine_weight_integral(xs / l);
    auto pm = position_moments(s);
    auto mm = momentum_moments(s);
    const double floor = 1e-13 * l * l + pm.error * l * l;
    r.dstar_x2 = pm.dstar_x2;
    r.dstar_x2_bound = 9.0 * pi * r.phi0 * l / (2.0 * r.alpha) * r.sine_integral;
    r.x_ok = r.dstar_x2 <= r.dstar_x2_bound + floor;
    const double c = std::cos(pi * xs / (2.0 * l));
    r.mean_x_dev = std::abs(pm.mean_x - xs);
    r.mean_x_bound = std::abs(xs) / (r.alpha * l) * 18.0 * pi * r.phi0 / (c * c);
    r.mean_x_ok = r.mean_x_dev <= r.mean_x_bound + 1e-13 * l + pm.error * l;
    r.mean_p = mm.mean_p;
    r.mean_p_expected = s.geometry.momentum_quantum() * static_cast<double>(s.target.k_bar);
    r.mean_p_ok = std::abs(r.mean_p - r.mean_p_expected) <= 1e-14 * std::max(std::abs(r.mean_p_expected), s.geometry.momentum_quantum());
    const double env = 3.0 * std::sqrt(pi * r.phi0 / (2.0 * r.alpha * l * l));
    r.envelope_min_margin = inf;
    for (int i = 0; i <= 200; ++i) {
        double x = -l + 2.0 * l * i / 200.0;
        if (std::abs(x - xs) < 1e-9 * l) continue;
        double bound = env / std::abs(std::sin(pi * (x - xs) / (2.0 * l)));
        double v = std::abs(evaluate_wave(s, x).value);
        r.envelope_min_margin = std::min(r.envelope_min_margin, bound - v);
    }
    r.envelope_ok = r.envelope_min_margin >= -1e-12;
    const double dq = std::sqrt(dp->density.second_moment);
    const double phil0 = pi / l * r.phi0;
    const double delta = 1.0 / 6.0 + phil0 / (3.0 * r.alpha);
    const double ratio = pi / (l * r.alpha * dq);
    r.product = pm.dx2 * std::sqrt(mm.dp2);
    r.product_bound = 4.5 * pi * l * h * r.phi0 * dq * r.sine_integral * std::sqrt(1.0 + ratio * ratio * delta);
    r.product_ok = r.product <= r.product_bound * (1.0 + 1e-12) + floor * std::sqrt(mm.dp2);
    return r;
}

// Momentum spread forced by the product bound for a requested position spread.
inline double thm3_required_dp(double l, double hbar, double phi0, double dq, double sine_integral, double dx) {
    return 4.5 * pi * l * hbar * phi0 * dq * sine_integral / (dx * dx);
}

// Window on the momentum dispersion about the discretization center.
struct WindowRow {
    double alpha = 0.0;
    double measured = 0.0;   // sum (p_k - p_kbar)^2 |a_k|^2
    double reference = 0.0;  // (hbar alpha dq)^2
    double difference = 0.0; // measured - reference
    double lower = 0.0, upper = 0.0;
    double refined_residual = 0.0; // difference - (pi hbar / l)^2 / 12
    bool inside = false;
};

inline WindowRow lemC_window(const StateDescriptor& s) {
    const auto* dp = std::get_if<DiscretizedParams>(&s.params);
    require(dp != nullptr, ErrorCode::InvalidArgument, "window: needs a discretized state");
    const double q = s.geometry.momentum_quantum();
    CompensatedSum<double> m, n;
    long k = s.series.k_first();
    for (const auto& c : s.series.coefficients()) {
        double d = static_cast<double>(k++ - s.target.k_bar);
        m += d * d * std::norm(c);
        n += std::norm(c);
    }
    WindowRow r;
    r.alpha = dp->alpha;
    r.measured = q * q * m.value() / n.value();
    const double dq = std::sqrt(dp->density.second_moment);
    r.reference = std::pow(s.geometry.hbar * r.alpha * dq, 2);
    r.difference = r.measured - r.reference;
    const double phil0 = pi / s.geometry.l * dp->density.peak();
    const double f = 1.0 + 2.0 * phil0 / r.alpha;
    r.lower = -q * q / 12.0 * f;
    r.upper = q * q / 6.0 * f;
    r.refined_residual = r.difference - q * q / 12.0;
    r.inside = r.difference >= r.lower && r.difference <= r.upper;
    return r;
}

// Least-squares slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument, "slope: need two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double u = std::log(x[i]), v = std::log(std::abs(y[i]));
        sx += u;
        sy += v;
        sxx += u * u;
        sxy += u * v;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct WindowLadder {
    std::vector<WindowRow> rows;
    double slope = 0.0;
    bool all_inside = false;
};

inline WindowLadder lemC_ladder(const IntervalGeometry& g, const ClassicalTarget& t, const DensitySpec& d, const std::vector<double>& alphas) {
    WindowLadder out;
    std::vector<double> xs, ys;
    out.all_inside = true;
    for (double a : alphas) {
        auto row = lemC_window(build_discretized_state(g, t, d, a));
        out.all_inside = out.all_inside && row.inside;
        xs.push_back(a);
        ys.push_back(row.refined_residual);
        out.rows.push_back(row);
    }
    out.slope = loglog_slope(xs, ys);
    return out;
}

// ---------------------------------------------------------------- cosine-series bound

struct CosineBound {
    double chi = 0.0;   // a_0 + 2 sum_{k >= 1} a_k cos(k x)
    double bound = 0.0; // C |a_0| / |sin(x/2)|
    bool ok = false;
};

// Symmetric cosine series of a monotone sequence, bounded by C |a_0| / |sin(x/2)|.
inline CosineBound lemD_bound(std::span<const double> a, double x, double C = 3.0) {
    require(!a.empty(), ErrorCode::InvalidArgument, "cosine bound: empty sequence");
    bool nonincreasing = true, nondecreasing = true;
    for (std::size_t k = 1; k < a.size(); ++k) {
        nonincreasing = nonincreasing && a[k] <= a[k - 1];
        nondecreasing = nondecreasing && a[k] >= a[k - 1];
    }
    // A finite sequence is padded with zeros, so the tail must approach 0 monotonically.
    bool sign_ok = nonincreasing ? a.back() >= 0.0 : a.back() <= 0.0;
    require((nonincreasing || nondecreasing) && sign_ok, ErrorCode::NotMonotone, "cosine bound: sequence is not monotone toward zero");
    const double s = std::sin(0.5 * x);
    require(std::abs(s) > 1e-15, ErrorCode::AtSingularity, "cosine bound: x is a multiple of 2 pi");
    CompensatedSum<double> acc;
    acc += a[0];
    for (std::size_t k = 1; k < a.size(); ++k) acc += 2.0 * a[k] * std::cos(static_cast<double>(k) * x);
    CosineBound r;
    r.chi = acc.value();
    r.bound = C * std::abs(a[0]) / std::abs(s);
    r.ok = std::abs(r.chi) <= r.bound * (1.0 + 1e-12);
    return r;
}

struct CosineSuite {
    int cases = 0;
    int violations = 0;      // against the requested constant
    int violations_unit = 0; // against C = 1
    double max_ratio = 0.0;  // max |chi| sin|x/2| / |a_0|
};

// Random monotone non-increasing square-summable sequences: finite steps, geometric and power-law decay.
inline CosineSuite lemD_random_suite(std::uint64_t seed, int count, double C = 3.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    CosineSuite out;
    std::vector<double> a;
    for (int i = 0; i < count; ++i) {
        a.clear();
        const int kind = i % 3;
        if (kind == 0) {
            int n = 1 + static_cast<int>(U(rng) * 400.0);
            double v = 0.1 + 10.0 * U(rng);
            for (int k = 0; k < n; ++k) {
                a.push_back(v);
                v *= U(rng) < 0.3 ? 1.0 : U(rng);
            }
        } else if (kind == 1) {
            double r = 0.999 * U(rng);
            double v = 0.1 + 10.0 * U(rng);
            for (int k = 0; k < 100000 && v > 1e-300; ++k, v *= r) a.push_back(v);
        } else {
            double sexp = 0.51 + 2.5 * U(rng);
            for (int k = 0; k < 20000; ++k) a.push_back(std::pow(1.0 + k, -sexp));
        }
        double x = 0.1 + (pi - 0.1) * U(rng);
        auto r = lemD_bound(a, x, C);
        auto r1 = lemD_bound(a, x, 1.0);
        ++out.cases;
        out.violations += r.ok ? 0 : 1;
        out.violations_unit += r1.ok ? 0 : 1;
        out.max_ratio = std::max(out.max_ratio, std::abs(r.chi) * std::abs(std::sin(0.5 * x)) / std::abs(a[0]));
    }
    return out;
}

// ---------------------------------------------------------------- asymptotic residual ladders

struct AsymptoticRow {
    double parameter = 0.0;
    double measured = 0.0;
    double leading = 0.0;
    double residual = 0.0;
    double remainder = 0.0; // magnitude of the stated remainder term
    double floor = 0.0;     // numerical noise allowance
    double bound = 0.0;     // C * remainder + floor
    bool ok = false;
};

struct AsymptoticTable {
    std::string name;
    std::vector<AsymptoticRow> rows;
    bool all_ok() const {
        for (const auto& r : rows)
            if (!r.ok) return false;
        return !rows.empty();
    }
    // Residuals shrink along the ladder, allowing plateaus at the noise floor.
    bool monotone() const {
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (std::abs(rows[i].residual) > std::abs(rows[i - 1].residual) + rows[i].floor) return false;
        return true;
    }
};

inline AsymptoticRow make_row(double param, double measured, double leading, double remainder, double floor, double C) {
    AsymptoticRow r{param, measured, leading, measured - leading, remainder, floor, C * remainder + floor, false};
    r.ok = std::abs(r.residual) <= r.bound;
    return r;
}

enum class Quantity { mean_x, dstar_x2, dstar_p2 };

inline std::string_view to_string(Quantity q) {
    switch (q) {
    case Quantity::mean_x: return "mean_x";
    case Quantity::dstar_x2: return "dstar_x2";
    case Quantity::dstar_p2: return "dstar_p2";
    }
    return "?";
}

// Theta family as alpha grows; tables for mean_x, dstar_x2 and dstar_p2.
inline std::array<AsymptoticTable, 3> thm2_tables(const IntervalGeometry& g, const ClassicalTarget& t, const std::vector<double>& alphas,
                                                  double C = 100.0) {
    std::array<AsymptoticTable, 3> tab{AsymptoticTable{"theta_mean_x", {}}, AsymptoticTable{"theta_dstar_x2", {}},
                                       AsymptoticTable{"theta_dstar_p2", {}}};
    const double l = g.l, xs = t.x_star, qq = g.momentum_quantum();
    for (double a : alphas) {
        auto s = build_theta_state(g, t, a);
        const double e = std::exp(-2.0 * std::pow(pi * a * (1.0 - std::abs(xs) / l), 2));
        auto pm = position_moments(s);
        tab[0].rows.push_back(make_row(a, pm.mean_x, xs, l * e / a, 1e-14 * l + pm.error * l, C));
        double lx = std::pow(l / (2.0 * pi * a), 2);
        tab[1].rows.push_back(make_row(a, pm.dstar_x2, lx, l * l * e / a, 1e-14 * std::max(l * l, lx) + pm.error * l * l, C));
        auto m = momentum_moments(s);
        double lp = std::pow(qq * a, 2);
        tab[2].rows.push_back(make_row(a, m.dstar_p2, lp, lp * std::exp(-2.0 * std::pow(pi * a, 2)), 1e-14 * lp + m.tail_error, C));
    }
    return tab;
}

inline AsymptoticTable thm2_ladder(const IntervalGeometry& g, const ClassicalTarget& t, const std::vector<double>& alphas, Quantity q,
                                   double C = 100.0) {
    return thm2_tables(g, t, alphas, C)[static_cast<std::size_t>(q)];
}

// Mollified Gaussian family as beta shrinks; tables for mean_x, dstar_x2 and dstar_p2.
// Momentum moments come from quadrature, so only a short series is projected.
inline std::array<AsymptoticTable, 3> thm1_tables(const IntervalGeometry& g, const ClassicalTarget& t, const std::vector<double>& betas,
                                                  double epsilon, double C = 100.0) {
    std::array<AsymptoticTable, 3> tab{AsymptoticTable{"gauss_mean_x", {}}, AsymptoticTable{"gauss_dstar_x2", {}},
                                       AsymptoticTable{"gauss_dstar_p2", {}}};
    const double l = g.l, xs = t.x_star, h = g.hbar;
    const double gap = l - std::abs(xs) - 3.0 * epsilon;
    for (double b : betas) {
        auto s = build_truncated_gaussian(g, t, b, epsilon, {32});
        const double e = std::exp(-gap * gap / (2.0 * b * b));
        auto pm = position_moments(s);
        tab[0].rows.push_back(make_row(b, pm.mean_x, xs, b * e, 1e-14 * l + pm.error * l, C));
        tab[1].rows.push_back(make_row(b, pm.dstar_x2, b * b, l * b * e, 1e-14 * l * l + pm.error * l * l, C));
        auto m = momentum_moments_quadrature(s);
        double lp = std::pow(h / (2.0 * b), 2);
        tab[2].rows.push_back(make_row(b, m.dstar_p2, lp, h * h * l * e / (b * b * b), 1e-13 * lp + m.error, C));
    }
    return tab;
}

inline AsymptoticTable thm1_ladder(const IntervalGeometry& g, const ClassicalTarget& t, const std::vector<double>& betas, double epsilon,
                                   Quantity q, double C = 100.0) {
    return thm1_tables(g, t, betas, epsilon, C)[static_cast<std::size_t>(q)];
}

// sum_k k^2 exp(-pi tau k^2) against 1 / (2 pi tau^{3/2}).
inline AsymptoticTable lemB_k2_ladder(const std::vector<double>& taus, double C = 100.0) {
    AsymptoticTable tab{"theta_k2_sum", {}};
    for (double tau : taus) {
        require(tau > 0.0, ErrorCode::InvalidTau, "ladder: tau must be positive");
        CompensatedSum<double> s;
        for (long k = 1;; ++k) {
            double kk = static_cast<double>(k);
            double term = 2.0 * kk * kk * std::exp(-pi * tau * kk * kk);
            s += term;
            if (kk * kk * pi * tau > 60.0 && term < 1e-20 * s.value()) break;
        }
        double lead = 1.0 / (2.0 * pi * std::pow(tau, 1.5));
        tab.rows.push_back(make_row(tau, s.value(), lead, lead * std::exp(-pi / tau), 1e-14 * lead, C));
    }
    return tab;
}

// Exact next-order term of the k^2 sum: exp(-pi/tau) (1 / (pi tau^{3/2}) - 2 / tau^{5/2}).
inline double lemB_k2_next_order(double tau) {
    return std::exp(-pi / tau) * (1.0 / (pi * std::pow(tau, 1.5)) - 2.0 / std::pow(tau, 2.5));
}

// Integral of x^2 theta(x, tau)^2 over [-1/2 - a, 1/2 - a] against sqrt(tau/2) / (4 pi).
inline AsymptoticTable lemB_x2_ladder(const std::vector<double>& taus, double a, double C = 100.0) {
    require(std::abs(a) < 0.5, ErrorCode::OutOfDomain, "ladder: |a| must be below 1/2");
    AsymptoticTable tab{"theta_x2_integral", {}};
    for (double tau : taus) {
        auto f = [tau](double x) {
            double th = theta(x, tau);
            return x * x * th * th;
        };
        auto r = integrate(f, breakpoints_within(-0.5 - a, 0.5 - a, {0.0, -0.5 * std::sqrt(tau), 0.5 * std::sqrt(tau)}), {1e-16, 5e-14, 4000});
        double lead = std::sqrt(tau / 2.0) / (4.0 * pi);
        double rem = std::exp(-2.0 * pi / tau * std::pow(0.5 - std::abs(a), 2));
        tab.rows.push_back(make_row(tau, r.value, lead, rem, 1e-14 * lead + r.abs_error, C));
    }
    return tab;
}

} // namespace sqz
