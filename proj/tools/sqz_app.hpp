#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"
#include "sqz/sqz.hpp"

namespace sqz::cli {

using report::Value;

inline constexpr double electron_mass_si = 9.1093837015e-31;

struct Options {
    std::string family = "theta";
    double alpha = 4.0;
    double beta = 0.05;
    double eps = 0.02;
    double xstar = 0.0;
    double pstar = 0.0;
    double l = 1.0;
    double hbar = 1.0;
    std::optional<double> mass;
    std::string units = "dimensionless";
    std::string density = "gaussian";
    double dq = 1.0;
    std::string inner = "theta";
    long k0 = 0;
    long N = 4096;
    std::string format = "json";
    std::uint64_t seed = 20240611;
    int count = 1000;
    std::string name;
};

// Physical scales of the reported quantities; the library always runs with l = hbar = m = 1 in SI mode.
struct Scales {
    double length = 1.0, momentum = 1.0, energy = 1.0;
};

struct Setup {
    IntervalGeometry geometry; // geometry the library works in
    IntervalGeometry physical; // geometry as reported
    Scales scale;
};

inline Setup make_setup(const Options& o) {
    Setup s;
    if (o.units == "si") {
        double m = o.mass.value_or(electron_mass_si);
        s.physical = IntervalGeometry::si(o.l, m);
        s.geometry = IntervalGeometry::dimensionless();
        s.scale = {o.l, hbar_si / o.l, hbar_si * hbar_si / (m * o.l * o.l)};
    } else if (o.units == "dimensionless") {
        s.physical = IntervalGeometry::dimensionless(o.l, o.hbar, o.mass.value_or(1.0));
        s.geometry = s.physical;
    } else {
        throw Error(ErrorCode::InvalidArgument, "units must be dimensionless or si");
    }
    return s;
}

inline StateDescriptor build_state(const Options& o, const Setup& su) {
    const double L = su.scale.length, P = su.scale.momentum;
    const auto& g = su.geometry;
    auto t = make_target(g, o.xstar / L, o.pstar / P);
    auto density = [&] { return density_by_name(o.density, o.dq * L); };
    if (o.family == "theta") return build_theta_state(g, t, o.alpha);
    if (o.family == "gauss") {
        // eps = 0 selects the sharp cut, whose momentum dispersion is infinite.
        if (o.eps == 0.0) return build_sharp_cut_gaussian(g, t, o.beta / L);
        return build_truncated_gaussian(g, t, o.beta / L, o.eps / L);
    }
    if (o.family == "disc") return build_discretized_state(g, t, density(), o.alpha);
    if (o.family == "momentum") return make_momentum_eigenstate(g, o.k0);
    if (o.family == "well") {
        if (o.inner == "theta") return build_well_adapted(g, t, InnerTheta{o.alpha});
        if (o.inner == "disc") return build_well_adapted(g, t, InnerDiscretized{density(), o.alpha});
        throw Error(ErrorCode::InvalidArgument, "inner family must be theta or disc");
    }
    throw Error(ErrorCode::InvalidArgument, "unknown family: " + o.family);
}

inline Value cplx_value(cplx z) { return Value::object().set("re", z.real()).set("im", z.imag()).set("abs", std::abs(z)); }

inline Value geometry_value(const Setup& su) {
    return Value::object()
        .set("units", su.physical.units == UnitMode::si ? "si" : "dimensionless")
        .set("l", su.physical.l)
        .set("hbar", su.physical.hbar)
        .set("mass", su.physical.mass);
}

inline Value state_summary(const StateDescriptor& s, const Setup& su) {
    const double L = su.scale.length, P = su.scale.momentum;
    auto params = Value::object();
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ThetaParams>) params.set("alpha", p.alpha).set("A", p.A);
            else if constexpr (std::is_same_v<T, GaussianParams>) params.set("beta", p.beta * L).set("epsilon", p.epsilon * L).set("B", p.B);
            else if constexpr (std::is_same_v<T, DiscretizedParams>)
                params.set("density", p.density.name).set("dq", std::sqrt(p.density.second_moment) / L).set("alpha", p.alpha);
            else if constexpr (std::is_same_v<T, WellAdaptedParams>)
                params.set("inner_family", to_string(p.inner->family)).set("pre_norm", p.pre_norm).set("inner_J", p.J);
        },
        s.params);
    auto series = Value::object()
                      .set("k_first", s.series.k_first())
                      .set("k_last", s.series.k_last())
                      .set("K", s.series.truncation_K())
                      .set("tail_bound", s.series.tail_bound())
                      .set("norm_squared", s.series.norm_squared());
    auto out = Value::object()
                   .set("family", to_string(s.family))
                   .set("geometry", geometry_value(su))
                   .set("target", Value::object()
                                      .set("x_star", s.target.x_star * L)
                                      .set("p_star", s.target.p_star * P)
                                      .set("k_star", s.target.k_star)
                                      .set("k_bar", s.target.k_bar))
                   .set("params", params)
                   .set("series", series);
    auto bv = Value::object();
    const double amp = 1.0 / std::sqrt(L);
    if (s.series.has_finite_tail()) {
        auto [lo, hi] = wall_values(s);
        bv.set("psi_minus_l", cplx_value(lo.value * amp)).set("psi_plus_l", cplx_value(hi.value * amp)).set("error_bound", lo.error_bound * amp);
    }
    out.set("boundary", bv);
    return out;
}

inline Value moments_report(const StateDescriptor& s, const Setup& su) {
    const double L = su.scale.length, P = su.scale.momentum;
    auto r = uncertainty_report(s);
    auto v = Value::object()
                 .set("family", to_string(s.family))
                 .set("mean_x", r.x.mean_x * L)
                 .set("mean_p", r.p.mean_p * P)
                 .set("dstar_x2", r.x.dstar_x2 * L * L)
                 .set("dstar_p2", r.p.dstar_p2 * P * P)
                 .set("dx2", r.x.dx2 * L * L)
                 .set("dp2", r.p.dp2 * P * P)
                 .set("dx", std::sqrt(r.x.dx2) * L)
                 .set("dp", std::sqrt(r.p.dp2) * P)
                 .set("product", r.product * L * P)
                 .set("product_over_half_hbar", r.product / (0.5 * s.geometry.hbar))
                 .set("judge_weak_rhs", r.judge_weak_rhs * L * P)
                 .set("judge_weak_ok", r.judge_weak_ok)
                 .set("judge_conjecture_rhs", r.judge_conj_rhs * L * P)
                 .set("judge_conjecture_ok", r.judge_conj_ok)
                 .set("quadrature_error", r.x.error)
                 .set("series_tail_error", r.p.tail_error * P * P);
    return v;
}

inline Value growth_value(const GrowthReport& g) {
    auto rows = Value::array();
    for (std::size_t i = 0; i < g.ladder.size(); ++i) {
        auto row = Value::object().set("N", g.ladder[i]).set("S", g.partial_sums[i]);
        row.set("ratio", i == 0 ? Value() : Value(g.ratios[i - 1]));
        rows.push(row);
    }
    return Value::object().set("classification", to_string(g.growth)).set("divergent_streak", g.divergent_streak).set("ladder", rows);
}

inline Value energy_report(const StateDescriptor& s, const Setup& su, long N) {
    require(N >= 1, ErrorCode::InvalidArgument, "N must be positive");
    const double E = su.scale.energy;
    auto f = finiteness_diagnostic(s, N);
    auto v = Value::object().set("family", to_string(s.family)).set("N", N);
    if (s.series.has_finite_tail()) {
        auto e = energy_coefficients(s, N);
        auto em = energy_moments(e, s.geometry, classical_energy(s.target, s.geometry));
        v.set("parseval", em.parseval)
            .set("E_star", classical_energy(s.target, s.geometry) * E)
            .set("mean_E_truncated", em.mean_E * E)
            .set("dstar_E2_truncated", em.dstar_E2 * E * E)
            .set("coefficient_error_bound", e.tail_bound);
    }
    const double amp = 1.0 / std::sqrt(su.scale.length);
    v.set("momentum_dispersion", to_string(f.momentum))
        .set("energy_dispersion", to_string(f.energy))
        .set("psi_minus_l", cplx_value(f.psi_minus_l * amp))
        .set("psi_plus_l", cplx_value(f.psi_plus_l * amp))
        .set("momentum_implies_periodic", f.momentum_implies_periodic)
        .set("energy_implies_vanishing", f.energy_implies_vanishing)
        .set("momentum_growth", growth_value(f.momentum_detail))
        .set("energy_growth", growth_value(f.energy_detail));
    return v;
}

inline Value table(const std::string& name, Value rows) { return Value::object().set("name", name).set("rows", std::move(rows)); }

inline Value asymptotic_table(const AsymptoticTable& t) {
    auto rows = Value::array();
    for (const auto& r : t.rows)
        rows.push(Value::object()
                      .set("parameter", r.parameter)
                      .set("measured", r.measured)
                      .set("leading", r.leading)
                      .set("residual", r.residual)
                      .set("remainder", r.remainder)
                      .set("bound", r.bound)
                      .set("ok", r.ok));
    return table(t.name, rows);
}

inline Value verify_report(const Options& o) {
    auto tables = Value::array();
    auto summary = Value::object();
    const auto g = IntervalGeometry::dimensionless();
    if (o.name == "theta") {
        auto rows = Value::array();
        double worst = 0.0;
        for (int it = 0; it < 10; ++it) {
            double tau = 0.05 * std::pow(400.0, it / 9.0);
            for (int ix = 0; ix < 8; ++ix) {
                double x = -0.5 + ix / 7.0;
                double comb = std::sqrt(tau) * theta_eval(x, tau, ThetaBranch::modular).value;
                double direct = std::sqrt(tau) * theta_eval(x, tau, ThetaBranch::direct).value;
                double rel = std::abs(comb - direct) / std::abs(direct);
                worst = std::max(worst, rel);
                rows.push(Value::object().set("x", x).set("tau", tau).set("comb", comb).set("sqrt_tau_theta", direct).set("relative_residual", rel));
            }
        }
        tables.push(table("jacobi", rows));
        summary.set("max_relative_residual", worst).set("ok", worst <= 1e-12);
    } else if (o.name == "gauss-tail") {
        auto rows = Value::array();
        double worst = 0.0;
        for (double gamma : {0.5, 1.0, 2.0})
            for (int i = 0; i <= 12; ++i) {
                double x = 0.5 * i;
                auto q = integrate_to_infinity([gamma](double t) { return t * t * std::exp(-gamma * t * t); }, x, {1e-300, 1e-15, 4000});
                double id = gaussian_tail(x, gamma);
                double res = std::abs(q.value - id);
                worst = std::max(worst, res);
                rows.push(Value::object().set("x", x).set("gamma", gamma).set("quadrature", q.value).set("identity", id).set("residual", res));
            }
        tables.push(table("gaussian_tail", rows));
        summary.set("max_residual", worst).set("ok", worst <= 1e-14);
    } else if (o.name == "thm1") {
        auto t = make_target(g, 0.3, 0.0);
        bool ok = true;
        for (const auto& tab : thm1_tables(g, t, {0.2, 0.1, 0.05}, 0.05)) {
            ok = ok && tab.all_ok() && tab.monotone();
            tables.push(asymptotic_table(tab));
        }
        summary.set("ok", ok);
    } else if (o.name == "thm2") {
        auto t = make_target(g, 0.5, 0.0);
        bool ok = true;
        for (const auto& tab : thm2_tables(g, t, {2, 3, 4, 6, 8})) {
            ok = ok && tab.all_ok() && tab.monotone();
            tables.push(asymptotic_table(tab));
        }
        summary.set("ok", ok);
    } else if (o.name == "thm3") {
        auto rows = Value::array();
        bool ok = true;
        for (double a : {10.0, 50.0, 100.0})
            for (double xs : {0.0, 0.3}) {
                auto s = build_discretized_state(g, make_target(g, xs, 0.0), gaussian_density(), a);
                auto r = thm3_bounds(s);
                ok = ok && r.ok();
                rows.push(Value::object()
                              .set("alpha", a)
                              .set("x_star", xs)
                              .set("dstar_x2", r.dstar_x2)
                              .set("dstar_x2_bound", r.dstar_x2_bound)
                              .set("mean_x_dev", r.mean_x_dev)
                              .set("mean_x_bound", r.mean_x_bound)
                              .set("mean_p", r.mean_p)
                              .set("envelope_margin", r.envelope_min_margin)
                              .set("product", r.product)
                              .set("product_bound", r.product_bound)
                              .set("ok", r.ok()));
            }
        tables.push(table("discretized_bounds", rows));
        double I = sine_weight_integral(0.0);
        double dp = thm3_required_dp(1e-7, hbar_si, gaussian_density().peak(), 1.0, I, 1e-10);
        summary.set("sine_integral", I).set("required_dp_si", dp).set("ok", ok);
    } else if (o.name == "lemC") {
        bool ok = true;
        for (const char* name : {"gaussian", "laplace"}) {
            auto L = lemC_ladder(g, make_target(g, 0.0, 0.0), density_by_name(name), {5, 10, 20, 40});
            auto rows = Value::array();
            for (const auto& r : L.rows)
                rows.push(Value::object()
                              .set("alpha", r.alpha)
                              .set("difference", r.difference)
                              .set("lower", r.lower)
                              .set("upper", r.upper)
                              .set("refined_residual", r.refined_residual)
                              .set("inside", r.inside));
            tables.push(table(std::string("window_") + name, rows));
            summary.set(std::string("slope_") + name, L.slope);
            ok = ok && L.all_inside;
        }
        summary.set("windows_ok", ok);
    } else if (o.name == "lemD") {
        auto r = lemD_random_suite(o.seed, o.count, 3.0);
        summary.set("seed", static_cast<long long>(o.seed))
            .set("cases", r.cases)
            .set("violations", r.violations)
            .set("violations_unit_constant", r.violations_unit)
            .set("max_ratio", r.max_ratio)
            .set("ok", r.violations == 0);
    } else if (o.name == "lemB") {
        auto k2 = lemB_k2_ladder({0.2, 0.1, 0.05});
        auto rows = Value::array();
        for (const auto& r : k2.rows)
            rows.push(Value::object()
                          .set("parameter", r.parameter)
                          .set("measured", r.measured)
                          .set("leading", r.leading)
                          .set("residual", r.residual)
                          .set("remainder", r.remainder)
                          .set("bound", r.bound)
                          .set("ok", r.ok)
                          .set("next_order", lemB_k2_next_order(r.parameter)));
        tables.push(table(k2.name, rows));
        auto x2 = lemB_x2_ladder({0.2, 0.1, 0.05}, 0.1);
        tables.push(asymptotic_table(x2));
        bool next_ok = true;
        for (const auto& r : k2.rows) next_ok = next_ok && std::abs(r.residual - lemB_k2_next_order(r.parameter)) <= 1e-13 * r.leading;
        summary.set("k2_ok", k2.all_ok()).set("k2_next_order_ok", next_ok).set("x2_ok", x2.all_ok());
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown verification: " + o.name);
    }
    return Value::object().set("verify", o.name).set("summary", summary).set("tables", tables);
}

inline Value limits_report(const Options& o) {
    auto tables = Value::array();
    auto summary = Value::object();
    if (o.name == "large-l") {
        auto d = density_by_name(o.density, o.dq);
        auto t = large_l_convergence(d, o.xstar, o.pstar, {8, 16, 32, 64}, default_grid(o.xstar));
        auto rows = Value::array();
        for (const auto& r : t.rows) rows.push(Value::object().set("l", r.l).set("sup_error", r.sup_error).set("K", r.K));
        tables.push(table("large_l", rows));
        summary.set("strictly_decreasing", t.strictly_decreasing()).set("final_error", t.rows.back().sup_error);
    } else if (o.name == "semiclassical") {
        auto fam = o.family == "disc" ? SweepFamily::discretized : SweepFamily::theta;
        auto t = semiclassical_sweep(fam, o.xstar, o.pstar);
        auto rows = Value::array();
        for (const auto& r : t.rows)
            rows.push(Value::object()
                          .set("j", r.j)
                          .set("hbar", r.hbar)
                          .set("alpha", r.alpha)
                          .set("mean_x", r.mean_x)
                          .set("mean_p", r.mean_p)
                          .set("dx", r.dx)
                          .set("dp", r.dp)
                          .set("mean_x_dev", r.mean_x_dev)
                          .set("mean_x_bound", r.mean_x_bound)
                          .set("mean_p_dev", r.mean_p_dev)
                          .set("mean_p_bound", r.mean_p_bound));
        tables.push(table("semiclassical", rows));
        summary.set("spreads_strictly_decreasing", t.spreads_strictly_decreasing()).set("within_bounds", t.all_within_bounds());
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown sweep: " + o.name);
    }
    return Value::object().set("limits", o.name).set("summary", summary).set("tables", tables);
}

inline void write_error(std::ostream& err, std::string_view code, const std::string& msg, int exit_code) {
    auto v = Value::object().set("error", Value::object().set("code", code).set("message", msg).set("exit_code", exit_code));
    v.write_json(err);
    err << '\n';
}

inline void emit(std::ostream& out, const Value& v, const std::string& format) {
    if (format == "csv") report::write_csv(out, v);
    else {
        v.write_json(out);
        out << '\n';
    }
}

// Runs one command line (without the program name); returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Squeezed states on a bounded interval"};
    app.set_config("--config", "", "key=value file; command-line flags override it");
    app.require_subcommand(1);
    app.add_option("--family", o.family, "theta | gauss | disc | well | momentum")->check(CLI::IsMember({"theta", "gauss", "disc", "well", "momentum"}));
    app.add_option("--alpha", o.alpha, "width parameter of theta and discretized states");
    app.add_option("--beta", o.beta, "Gaussian width");
    app.add_option("--eps", o.eps, "cutoff margin; 0 gives the sharp cut");
    app.add_option("--xstar", o.xstar, "target position");
    app.add_option("--pstar", o.pstar, "target momentum");
    app.add_option("--l", o.l, "interval half-length");
    app.add_option("--hbar", o.hbar, "Planck constant in dimensionless mode");
    app.add_option("--mass", o.mass, "particle mass");
    app.add_option("--units", o.units, "dimensionless | si")->check(CLI::IsMember({"dimensionless", "si"}));
    app.add_option("--density", o.density, "gaussian | laplace | triangular");
    app.add_option("--dq", o.dq, "density standard deviation");
    app.add_option("--inner", o.inner, "inner family of well-adapted states: theta | disc");
    app.add_option("--k0", o.k0, "index of a momentum eigenstate");
    app.add_option("--N", o.N, "number of energy coefficients");
    app.add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", o.seed, "seed of randomized checks");
    app.add_option("--count", o.count, "number of randomized cases");

    auto* state = app.add_subcommand("state", "build a state and report on it")->fallthrough();
    state->require_subcommand(1);
    auto* s_build = state->add_subcommand("build", "state summary")->fallthrough();
    auto* s_moments = state->add_subcommand("moments", "position and momentum moments")->fallthrough();
    auto* s_energy = state->add_subcommand("energy", "energy expansion and finiteness")->fallthrough();
    auto* verify = app.add_subcommand("verify", "residual tables for identities and bounds")->fallthrough();
    verify->add_option("name", o.name, "theta | gauss-tail | thm1 | thm2 | thm3 | lemC | lemD | lemB")->required();
    auto* limits = app.add_subcommand("limits", "limit sweeps")->fallthrough();
    limits->add_option("name", o.name, "large-l | semiclassical")->required();

    std::vector<const char*> argv{"sqz"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        write_error(err, "InvalidArgument", e.what(), 2);
        return 2;
    }
    try {
        Value v;
        if (*state) {
            auto su = make_setup(o);
            auto s = build_state(o, su);
            if (*s_build) v = state_summary(s, su);
            else if (*s_moments) v = moments_report(s, su);
            else if (*s_energy) v = energy_report(s, su, o.N);
        } else if (*verify) {
            v = verify_report(o);
        } else if (*limits) {
            v = limits_report(o);
        }
        emit(out, v, o.format);
        return 0;
    } catch (const Error& e) {
        int code = is_numerical(e.code()) ? 3 : 2;
        write_error(err, to_string(e.code()), e.what(), code);
        return code;
    } catch (const std::exception& e) {
        write_error(err, "InternalError", e.what(), 3);
        return 3;
    }
}

} // namespace sqz::cli
