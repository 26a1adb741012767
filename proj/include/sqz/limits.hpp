#pragma once

#include <cmath>
#include <vector>

#include "sqz/bounds.hpp"
#include "sqz/density.hpp"
#include "sqz/families.hpp"
#include "sqz/moments.hpp"

namespace sqz {

struct PacketValue {
    cplx value;
    double error = 0.0;      // quadrature error
    double tail_bound = 0.0; // bound on the omitted integral beyond the cut
};

// Free packet (1/sqrt(2 pi)) integral sqrt(phi(q)) exp(i q (x - x*)) dq, shifted to wave number p*/hbar.
inline PacketValue continuum_packet(const DensitySpec& d, double x_star, double k_shift, double x) {
    const double u = x - x_star;
    // Cut where sqrt(phi) is negligible; beyond it sqrt(phi) <= (q^2 phi + 1/q^2) / 2.
    double Q = std::isfinite(d.support) ? d.support : d.scale;
    if (!std::isfinite(d.support))
        while (std::sqrt(d.phi(Q)) > 1e-18 * std::sqrt(d.peak()) && Q < 1e6 * d.scale) Q *= 1.25;
    auto f = [&](double q) { return std::sqrt(d.phi(q)) * std::cos(q * u); };
    std::vector<double> pts = d.kinks;
    const int panels = 16 + static_cast<int>(std::abs(u) * Q / pi);
    for (int i = 1; i < panels; ++i) pts.push_back(Q * i / panels);
    auto r = integrate(f, breakpoints_within(0.0, Q, pts), {1e-16, 5e-14, 4000});
    PacketValue v;
    v.value = std::sqrt(2.0 / pi) * r.value * std::polar(1.0, k_shift * u);
    v.error = std::sqrt(2.0 / pi) * r.abs_error;
    if (!std::isfinite(d.support)) {
        auto q2 = integrate_density_half(d, [&](double q) { return q * q * d.phi(q); }, Q, {1e-300, 1e-10, 2000});
        v.tail_bound = std::sqrt(2.0 / pi) * 0.5 * (q2.value + 1.0 / Q);
    }
    return v;
}

inline std::vector<double> default_grid(double x_star, int n = 41, double half_width = 3.0) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(x_star - half_width + 2.0 * half_width * i / (n - 1));
    return g;
}

struct LargeLRow {
    double l = 0.0;
    double sup_error = 0.0;
    long K = 0;
};

struct LargeLTable {
    std::vector<LargeLRow> rows;
    bool strictly_decreasing() const {
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (!(rows[i].sup_error < rows[i - 1].sup_error)) return false;
        return true;
    }
    bool decreasing_within(double noise) const {
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].sup_error > rows[i - 1].sup_error + noise) return false;
        return true;
    }
};

// Discretized state at alpha = 1 on growing intervals against the free packet.
inline LargeLTable large_l_convergence(const DensitySpec& d, double x_star, double p_star, const std::vector<double>& ls,
                                       const std::vector<double>& grid) {
    LargeLTable tab;
    std::vector<cplx> ref;
    const double hbar = 1.0;
    for (double x : grid) ref.push_back(continuum_packet(d, x_star, p_star / hbar, x).value);
    for (double l : ls) {
        auto g = IntervalGeometry::dimensionless(l, hbar, 1.0);
        auto t = make_target(g, x_star, p_star);
        auto s = build_discretized_state(g, t, d, 1.0);
        LargeLRow row{l, 0.0, s.series.truncation_K()};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            require(std::abs(grid[i]) <= l, ErrorCode::OutOfDomain, "large-l: grid point outside the interval");
            // The discretized packet carries the rounded wave number pi k_bar / l.
            cplx v = evaluate_wave(s, grid[i]).value * std::polar(1.0, (p_star / hbar - pi * static_cast<double>(t.k_bar) / l) * (grid[i] - x_star));
            row.sup_error = std::max(row.sup_error, std::abs(v - ref[i]));
        }
        tab.rows.push_back(row);
    }
    return tab;
}

struct SemiclassicalRow {
    int j = 0;
    double hbar = 0.0, alpha = 0.0;
    double mean_x = 0.0, mean_p = 0.0, dx = 0.0, dp = 0.0;
    double mean_x_dev = 0.0, mean_x_bound = 0.0;
    double mean_p_dev = 0.0, mean_p_bound = 0.0;
    bool judge_weak_ok = false;
    bool within_bounds() const { return mean_x_dev <= mean_x_bound && mean_p_dev <= mean_p_bound; }
};

struct SemiclassicalTable {
    std::vector<SemiclassicalRow> rows;
    bool spreads_strictly_decreasing() const {
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (!(rows[i].dx < rows[i - 1].dx && rows[i].dp < rows[i - 1].dp)) return false;
        return true;
    }
    bool all_within_bounds() const {
        for (const auto& r : rows)
            if (!r.within_bounds()) return false;
        return !rows.empty();
    }
};

enum class SweepFamily { theta, discretized };

// hbar_j = 2^-j and alpha_j = 2^(j/2) for j = 1..rungs, so hbar alpha -> 0.
inline SemiclassicalTable semiclassical_sweep(SweepFamily fam, double x_star, double p_star, int rungs = 6, double l = 1.0, double mass = 1.0,
                                              double C = 100.0) {
    require(rungs >= 1, ErrorCode::InvalidArgument, "sweep: need at least one rung");
    SemiclassicalTable tab;
    for (int j = 1; j <= rungs; ++j) {
        auto g = IntervalGeometry::dimensionless(l, std::ldexp(1.0, -j), mass);
        const double alpha = std::pow(2.0, 0.5 * j);
        auto t = make_target(g, x_star, p_star);
        StateDescriptor s = fam == SweepFamily::theta ? build_theta_state(g, t, alpha) : build_discretized_state(g, t, gaussian_density(), alpha);
        auto r = uncertainty_report(s);
        SemiclassicalRow row;
        row.j = j;
        row.hbar = g.hbar;
        row.alpha = alpha;
        row.mean_x = r.x.mean_x;
        row.mean_p = r.p.mean_p;
        row.dx = std::sqrt(r.x.dx2);
        row.dp = std::sqrt(r.p.dp2);
        row.mean_x_dev = std::abs(r.x.mean_x - x_star);
        row.mean_p_dev = std::abs(r.p.mean_p - p_star);
        row.mean_p_bound = g.momentum_quantum() * (1.0 + 1e-12);
        const double floor = 1e-14 * l + r.x.error * l;
        if (fam == SweepFamily::theta)
            row.mean_x_bound = C * l * std::exp(-2.0 * std::pow(pi * alpha * (1.0 - std::abs(x_star) / l), 2)) / alpha + floor;
        else {
            const double c = std::cos(pi * x_star / (2.0 * l));
            row.mean_x_bound = std::abs(x_star) / (alpha * l) * 18.0 * pi * gaussian_density().peak() / (c * c) + floor;
        }
        row.judge_weak_ok = r.judge_weak_ok;
        tab.rows.push_back(row);
    }
    return tab;
}

} // namespace sqz
