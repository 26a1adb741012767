// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sqz/sqz.hpp"

using namespace sqz;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char* name;
    std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const IntervalGeometry unit = IntervalGeometry::dimensionless();
constexpr double electron_mass = 9.1093837015e-31;

// Every state built below, for the bounded-interval uncertainty check.
std::vector<StateDescriptor> battery;

Outcome jacobi() {
    double worst = 0.0;
    for (int it = 0; it < 10; ++it) {
        double tau = 0.05 * std::pow(400.0, it / 9.0);
        for (int ix = 0; ix < 8; ++ix) {
            double x = -0.5 + ix / 7.0;
            double comb = theta_eval(x, tau, ThetaBranch::modular).value;
            double direct = theta_eval(x, tau, ThetaBranch::direct).value;
            worst = std::max(worst, std::abs(comb - direct) / std::abs(direct));
        }
    }
    return {worst <= 1e-12, fmt("80 points, max relative residual %.3e", worst)};
}

Outcome gauss_tail() {
    double worst = 0.0;
    for (double gamma : {0.5, 1.0, 2.0})
        for (int i = 0; i <= 12; ++i) {
            double x = 0.5 * i;
            auto q = integrate_to_infinity([gamma](double t) { return t * t * std::exp(-gamma * t * t); }, x, {1e-300, 1e-15, 4000});
            worst = std::max(worst, std::abs(q.value - gaussian_tail(x, gamma)));
        }
    return {worst <= 1e-14, fmt("max residual %.3e", worst)};
}

Outcome theta_saturation() {
    double worst = 0.0;
    for (double a : {2.0, 4.0, 8.0}) {
        battery.push_back(build_theta_state(unit, make_target(unit, 0.0, 0.0), a));
        worst = std::max(worst, std::abs(uncertainty_report(battery.back()).product - 0.5));
    }
    return {worst <= 1e-10, fmt("max |dx dp - 1/2| = %.3e", worst)};
}

Outcome gauss_saturation() {
    battery.push_back(build_truncated_gaussian(unit, make_target(unit, 0.0, 0.0), 0.05, 0.02));
    auto r = uncertainty_report(battery.back());
    double dev = std::abs(r.x.dx2 * r.p.dp2 - 0.25);
    double half = std::pow(1.0 / (2.0 * 0.05), 2), quarter = std::pow(1.0 / (4.0 * 0.05), 2);
    double rel = std::abs(r.p.dstar_p2 - half) / half;
    bool pass = dev <= 1e-8 && rel <= 1e-8 && std::abs(r.p.dstar_p2 - quarter) > 0.5 * quarter;
    return {pass, fmt("|dx^2 dp^2 - 1/4| = %.3e, dstar_p2 = %.12g vs (hbar/2beta)^2 = %.12g", dev, r.p.dstar_p2, half)};
}

Outcome nanoscale() {
    auto g = IntervalGeometry::si(100e-9, electron_mass);
    battery.push_back(build_theta_state(g, make_target(g, 0.0, 0.0), 159.154943));
    auto r = uncertainty_report(battery.back());
    double dx = std::sqrt(r.x.dx2), dp = std::sqrt(r.p.dp2);
    double ratio = r.product / (0.5 * hbar_si);
    bool pass = dx >= 0.099e-9 && dx <= 0.101e-9 && dp >= 5.2e-25 && dp <= 5.4e-25 && std::abs(ratio - 1.0) <= 0.01;
    return {pass, fmt("dx = %.6e m, dp = %.6e kg m/s, product/(hbar/2) = %.12f", dx, dp, ratio)};
}

Outcome discretized_bounds() {
    bool pass = true;
    double worst_x = 0.0;
    for (double a : {10.0, 50.0, 100.0})
        for (double xs : {0.0, 0.3}) {
            battery.push_back(build_discretized_state(unit, make_target(unit, xs, 0.0), gaussian_density(), a));
            auto r = thm3_bounds(battery.back());
            pass = pass && r.x_ok && r.mean_x_ok && r.mean_p_ok;
            worst_x = std::max(worst_x, r.dstar_x2 / r.dstar_x2_bound);
        }
    double I = sine_weight_integral(0.0);
    double dp = thm3_required_dp(100e-9, hbar_si, gaussian_density().peak(), 1.0, I, 0.1e-9);
    pass = pass && std::abs(I - 1.12) <= 0.005 && std::abs(std::log10(dp) + 20.0) <= 0.5;
    return {pass, fmt("max spread/bound %.3f, sine integral %.5f, required dp %.3e kg m/s", worst_x, I, dp)};
}

Outcome momentum_window() {
    auto L = lemC_ladder(unit, make_target(unit, 0.0, 0.0), laplace_density(), {5, 10, 20, 40});
    auto G = lemC_ladder(unit, make_target(unit, 0.0, 0.0), gaussian_density(), {5, 10, 20, 40});
    bool pass = L.all_inside && G.all_inside && L.slope >= -2.6 && L.slope <= -1.4;
    return {pass, fmt("windows inside: %s, refined residual slope (laplace) %.3f", L.all_inside && G.all_inside ? "yes" : "no", L.slope)};
}

Outcome cosine_bound() {
    auto r = lemD_random_suite(20240611, 1000, 3.0);
    return {r.cases == 1000 && r.violations == 0,
            fmt("%d cases, %d violations (factor 3), %d with factor 1, max ratio %.4f", r.cases, r.violations, r.violations_unit, r.max_ratio)};
}

Outcome energy() {
    battery.push_back(build_theta_state(unit, make_target(unit, 0.5, 0.0), 1.0));
    auto ft = finiteness_diagnostic(battery.back(), 1L << 14);
    double last_ratio = ft.energy_detail.ratios.empty() ? 0.0 : ft.energy_detail.ratios.back();
    battery.push_back(build_well_adapted(unit, make_target(unit, 0.5, 0.0), InnerTheta{1.0}));
    auto fw = finiteness_diagnostic(battery.back(), 4096);
    auto em = energy_moments(energy_coefficients(battery.back(), 4096), unit, 0.0);
    double wall = std::max(std::abs(fw.psi_minus_l), std::abs(fw.psi_plus_l));
    bool pass = ft.energy == Growth::divergent && last_ratio > 1.2 && wall <= 1e-10 && fw.energy == Growth::converged &&
                std::abs(em.parseval - 1.0) <= 1e-6;
    return {pass, fmt("theta: %s (last ratio %.3f); well-adapted: %s, walls %.2e, parseval-1 = %.2e", to_string(ft.energy).data(), last_ratio,
                      to_string(fw.energy).data(), wall, em.parseval - 1.0)};
}

Outcome large_l() {
    auto t = large_l_convergence(gaussian_density(), 0.0, 0.0, {8, 16, 32, 64}, default_grid(0.0));
    std::ostringstream s;
    for (const auto& r : t.rows) s << " " << r.sup_error;
    bool pass = t.strictly_decreasing() && t.rows.back().sup_error <= 1e-3;
    return {pass, "sup errors" + s.str()};
}

int semiclassical_weak_failures = 0;

Outcome semiclassical() {
    auto t = semiclassical_sweep(SweepFamily::theta, 0.3, 1.0);
    for (const auto& r : t.rows) semiclassical_weak_failures += r.judge_weak_ok ? 0 : 1;
    bool pass = t.rows.size() == 6 && t.spreads_strictly_decreasing() && t.all_within_bounds();
    return {pass, fmt("dx %.3e -> %.3e, dp %.3e -> %.3e, final |p - p*| = %.2e", t.rows.front().dx, t.rows.back().dx, t.rows.front().dp,
                      t.rows.back().dp, t.rows.back().mean_p_dev)};
}

Outcome uncertainty_battery() {
    for (double a : {0.3, 1.0, 5.0})
        for (double xs : {0.0, 0.7}) battery.push_back(build_theta_state(unit, make_target(unit, xs, 2.0), a));
    battery.push_back(build_discretized_state(unit, make_target(unit, 0.5, 0.0), triangular_density(), 0.2));
    battery.push_back(make_momentum_eigenstate(unit, 2));
    int weak = semiclassical_weak_failures, conj = 0;
    double min_margin = inf;
    for (const auto& s : battery) {
        try {
            auto r = uncertainty_report(s);
            conj += r.judge_conj_ok ? 0 : 1;
            min_margin = std::min(min_margin, (r.product - r.judge_weak_rhs) / s.geometry.hbar);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BoundViolated) throw;
            ++weak;
        }
    }
    std::printf("INFO bounded-interval uncertainty: conjectured hbar/2 form violated by %d of %zu states\n", conj, battery.size());
    return {weak == 0, fmt("%zu states plus 6 sweep rungs, %d violations, min margin %.3e hbar", battery.size(), weak, min_margin)};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"theta modular identity", jacobi},
        {"gaussian tail identity", gauss_tail},
        {"theta family saturation", theta_saturation},
        {"truncated gaussian saturation", gauss_saturation},
        {"nanoscale squeezed state", nanoscale},
        {"discretized family bounds", discretized_bounds},
        {"momentum discretization window", momentum_window},
        {"monotone cosine sum bound", cosine_bound},
        {"energy dispersion finiteness", energy},
        {"large interval limit", large_l},
        {"semiclassical limit", semiclassical},
        {"bounded interval uncertainty", uncertainty_battery},
    };
    int failures = 0, index = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", ++index, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", index - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
