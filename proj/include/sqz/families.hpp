#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "sqz/core.hpp"
#include "sqz/density.hpp"
#include "sqz/mollifier.hpp"
#include "sqz/quadrature.hpp"
#include "sqz/specfun.hpp"
#include "sqz/truncation.hpp"

namespace sqz {

enum class Family { momentum_eigenstate, theta, truncated_gaussian, sharp_cut_gaussian, discretized, well_adapted, series };

inline std::string_view to_string(Family f) {
    switch (f) {
    case Family::momentum_eigenstate: return "momentum_eigenstate";
    case Family::theta: return "theta";
    case Family::truncated_gaussian: return "gauss";
    case Family::sharp_cut_gaussian: return "sharp_cut_gauss";
    case Family::discretized: return "disc";
    case Family::well_adapted: return "well_adapted";
    case Family::series: return "series";
    }
    return "unknown";
}

struct StateDescriptor;

struct ThetaParams {
    double alpha = 1.0;
    double A = 1.0; // A^2 theta(0, 1/(2 pi alpha^2)) = 1
};
struct GaussianParams {
    double beta = 1.0;
    double epsilon = 0.0; // zero for the sharp cut
    double B = 1.0;
};
struct DiscretizedParams {
    DensitySpec density;
    double alpha = 1.0;
};
struct WellAdaptedParams {
    std::shared_ptr<const StateDescriptor> inner; // state on the doubled interval [-2l, 2l]
    double pre_norm = 1.0;
    std::vector<cplx> d; // d_j = c_j - c_{-j}, j in [-J, J]
    long J = 0;
};
using FamilyParams = std::variant<std::monostate, ThetaParams, GaussianParams, DiscretizedParams, WellAdaptedParams>;

using WaveFn = std::function<cplx(double)>;

struct StateDescriptor {
    Family family = Family::series;
    FamilyParams params;
    IntervalGeometry geometry;
    ClassicalTarget target;
    SpectralSeries series;
    WaveFn wave;    // closed form, empty when only the series is available
    WaveFn wave_d1;
    WaveFn wave_d2;
    std::vector<double> breakpoints; // interior points where the integrand changes character
};

enum class EvalPath { automatic, series, closed_form };

inline WaveValue evaluate_wave(const StateDescriptor& s, double x, EvalPath path = EvalPath::automatic, int derivative = 0) {
    const double l = s.geometry.l;
    require(std::abs(x) <= l * (1.0 + 1e-14), ErrorCode::OutOfDomain, "evaluate_wave: x outside [-l, l]");
    require(derivative >= 0 && derivative <= 2, ErrorCode::InvalidArgument, "evaluate_wave: derivative order 0..2");
    const WaveFn& f = derivative == 0 ? s.wave : derivative == 1 ? s.wave_d1 : s.wave_d2;
    if (path == EvalPath::closed_form || (path == EvalPath::automatic && f)) {
        require(static_cast<bool>(f), ErrorCode::InvalidArgument, "evaluate_wave: no closed form for this family");
        return {f(x), 0.0};
    }
    return evaluate_series(s.series, s.geometry, x, derivative);
}

// Integration points on [-l, l] for a state.
inline std::vector<double> integration_points(const StateDescriptor& s) {
    return breakpoints_within(-s.geometry.l, s.geometry.l, s.breakpoints);
}

// a_k = (1/sqrt(2l)) integral of psi(x) exp(-i pi k x / l) over [-l, l].
inline cplx project_coefficient(const WaveFn& psi, const IntervalGeometry& g, long k, const std::vector<double>& pts) {
    const double w = pi * static_cast<double>(k) / g.l;
    auto f = [&](double x) { return psi(x) * std::polar(1.0, -w * x); };
    std::vector<double> p = pts;
    // Split oscillatory integrands so each panel holds a few periods.
    if (k != 0) {
        double period = 2.0 * g.l / std::abs(static_cast<double>(k));
        int extra = static_cast<int>(std::min(512.0, 2.0 * g.l / (4.0 * period)));
        for (int i = 1; i < extra; ++i) p.push_back(-g.l + 2.0 * g.l * i / extra);
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
    }
    auto r = integrate(f, p, {1e-18, 1e-13, 4000, false});
    require(r.abs_error < 1e-12, ErrorCode::QuadratureFailure, "projection quadrature did not converge");
    return r.value / std::sqrt(2.0 * g.l);
}

// ---------------------------------------------------------------- momentum eigenstate

inline StateDescriptor make_momentum_eigenstate(const IntervalGeometry& g, long k0) {
    g.validate();
    StateDescriptor s;
    s.family = Family::momentum_eigenstate;
    s.geometry = g;
    s.target = make_target(g, 0.0, g.momentum_quantum() * static_cast<double>(k0));
    s.series = SpectralSeries(k0, {cplx(1.0, 0.0)}, 0.0);
    const double w = pi * static_cast<double>(k0) / g.l;
    const double n = 1.0 / std::sqrt(2.0 * g.l);
    s.wave = [=](double x) { return n * std::polar(1.0, w * x); };
    s.wave_d1 = [=](double x) { return cplx(0.0, w) * n * std::polar(1.0, w * x); };
    s.wave_d2 = [=](double x) { return -w * w * n * std::polar(1.0, w * x); };
    return s;
}

inline StateDescriptor make_series_state(const IntervalGeometry& g, const ClassicalTarget& t, const SpectralSeries& series) {
    StateDescriptor s;
    s.family = Family::series;
    s.geometry = g;
    s.target = t;
    s.series = normalize_series(series);
    s.breakpoints = {t.x_star};
    return s;
}

// ---------------------------------------------------------------- theta family

inline StateDescriptor build_theta_state(const IntervalGeometry& g, const ClassicalTarget& t, double alpha, double tol = 1e-15) {
    g.validate();
    require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::InvalidArgument, "theta: alpha must be positive");
    const double A = 1.0 / std::sqrt(theta(0.0, 1.0 / (2.0 * pi * alpha * alpha)));
    const Truncation tr = choose_truncation(GaussianDecay{t.k_bar, 1.0 / (2.0 * alpha * alpha), A * A}, tol);
    std::vector<cplx> a;
    a.reserve(static_cast<std::size_t>(2 * tr.K + 1));
    for (long k = tr.k_first(); k <= tr.k_last(); ++k) {
        double j = static_cast<double>(k - t.k_bar);
        double phase = -pi * static_cast<double>(k) * t.x_star / g.l;
        a.push_back(A * std::exp(-j * j / (4.0 * alpha * alpha)) * std::polar(1.0, phase));
    }
    StateDescriptor s;
    s.family = Family::theta;
    s.params = ThetaParams{alpha, A};
    s.geometry = g;
    s.target = t;
    s.series = normalize_series(SpectralSeries(tr.k_first(), std::move(a), tr.tail_bound));
    const double tau = 1.0 / (4.0 * pi * alpha * alpha);
    const double pref = A / std::sqrt(2.0 * g.l);
    const double kb = static_cast<double>(t.k_bar);
    const double l = g.l, xs = t.x_star;
    s.wave = [=](double x) {
        double th = theta((x - xs) / (2.0 * l), tau);
        return pref * th * std::polar(1.0, pi * kb * (x - xs) / l);
    };
    auto series = s.series;
    s.wave_d1 = [series, g](double x) { return evaluate_series(series, g, x, 1).value; };
    s.wave_d2 = [series, g](double x) { return evaluate_series(series, g, x, 2).value; };
    s.breakpoints = {t.x_star};
    return s;
}

// ---------------------------------------------------------------- Gaussian families

namespace detail {

// psi sampled once on Gauss-Kronrod panels no wider than max_width; each coefficient is then a weighted sum.
class ProjectionGrid {
public:
    ProjectionGrid(const WaveFn& psi, const std::vector<double>& pts, double max_width) {
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double len = pts[i + 1] - pts[i];
            if (!(len > 0.0)) continue;
            const int n = static_cast<int>(std::ceil(len / max_width));
            for (int p = 0; p < n; ++p) {
                const double a = pts[i] + len * p / n, b = pts[i] + len * (p + 1) / n;
                const double c = 0.5 * (a + b), h = 0.5 * (b - a);
                add(psi, c, h, kWgk_(10), 0.0);
                for (int j = 0; j < 10; ++j) {
                    double wg = j % 2 == 1 ? detail::kWg[static_cast<std::size_t>(j / 2)] : 0.0;
                    add(psi, c - h * kXgk_(j), h, kWgk_(j), wg);
                    add(psi, c + h * kXgk_(j), h, kWgk_(j), wg);
                }
            }
        }
    }
    // Integral of psi(x) exp(-i w x) with the summed Gauss-Kronrod difference as error estimate.
    std::pair<cplx, double> integrate(double w) const {
        CompensatedSum<cplx> total;
        double err = 0.0;
        for (std::size_t p = 0; p < x_.size(); p += 21) {
            cplx v{}, d{};
            for (std::size_t j = p; j < p + 21; ++j) {
                cplx e = std::polar(1.0, -w * x_[j]);
                v += fk_[j] * e;
                d += fd_[j] * e;
            }
            total += v;
            err += std::abs(d);
        }
        return {total.value(), err};
    }

private:
    static double kXgk_(int j) { return detail::kXgk[static_cast<std::size_t>(j)]; }
    static double kWgk_(int j) { return detail::kWgk[static_cast<std::size_t>(j)]; }
    void add(const WaveFn& psi, double x, double h, double wk, double wg) {
        cplx f = psi(x);
        x_.push_back(x);
        fk_.push_back(f * (wk * h));
        fd_.push_back(f * ((wk - wg) * h));
    }
    std::vector<double> x_;
    std::vector<cplx> fk_, fd_;
};

// Scans coefficients outward from the center until `quiet` consecutive magnitudes fall below `floor`,
// then adds probe coefficients out to twice the reach to estimate the omitted tail.
inline SpectralSeries project_outward(const WaveFn& psi, const IntervalGeometry& g, long center, const std::vector<double>& pts,
                                      long K_max, double max_width, double floor = 1e-16, int quiet = 3) {
    // Panels hold at most half an oscillation at the highest probed frequency.
    const double top = static_cast<double>(std::abs(center) + 2 * K_max + 1);
    const ProjectionGrid grid(psi, pts, std::min(max_width, g.l / top));
    const double norm = 1.0 / std::sqrt(2.0 * g.l);
    std::map<long, cplx> memo;
    auto a = [&](long k) {
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        auto [v, err] = grid.integrate(pi * static_cast<double>(k) / g.l);
        // The Gauss-Kronrod difference overstates the Kronrod error; the adaptive route only promises 1e-12.
        return memo[k] = err * norm < 1e-13 ? v * norm : project_coefficient(psi, g, k, pts);
    };
    auto reach = [&](int dir) {
        int run = 0;
        long j = 1;
        for (; j <= K_max; ++j) {
            if (std::abs(a(center + dir * j)) < floor) {
                if (++run >= quiet) break;
            } else {
                run = 0;
            }
        }
        return std::min(j, K_max);
    };
    long K = std::max(reach(+1), reach(-1));
    std::vector<cplx> coeffs;
    for (long k = center - K; k <= center + K; ++k) coeffs.push_back(a(k));
    double tail = 0.0;
    for (long j = K + 1; j <= 2 * K; ++j)
        for (long k : {center + j, center - j}) {
            double kk = static_cast<double>(k);
            tail += (1.0 + kk * kk) * std::norm(a(k));
        }
    return SpectralSeries(center - K, std::move(coeffs), 2.0 * tail + 1e-300);
}

} // namespace detail

struct GaussianBuildOptions {
    long K_max = 256;
};

// Gaussian packet multiplied by a smooth cutoff equal to 1 on [-l + 3 eps, l - 3 eps] and 0 near the walls.
inline StateDescriptor build_truncated_gaussian(const IntervalGeometry& g, const ClassicalTarget& t, double beta, double epsilon,
                                                const GaussianBuildOptions& opt = {}) {
    g.validate();
    require(beta > 0.0 && std::isfinite(beta), ErrorCode::InvalidArgument, "gauss: beta must be positive");
    require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::InvalidArgument, "gauss: epsilon must be positive");
    require(3.0 * epsilon < g.l, ErrorCode::EpsilonTooLarge, "gauss: 3 eps must be below l");
    require(std::abs(t.x_star) < g.l - 3.0 * epsilon, ErrorCode::TargetTooCloseToWall, "gauss: |x*| must be below l - 3 eps");
    auto eta = std::make_shared<const BoxCutoff>(g.l, epsilon);
    const double xs = t.x_star, ks = t.p_star / g.hbar;
    const double c0 = std::pow(2.0 * pi * beta * beta, -0.25);
    auto gauss = [=](double x) {
        double u = x - xs;
        return c0 * std::exp(-u * u / (4.0 * beta * beta)) * std::polar(1.0, x * ks);
    };
    std::vector<double> bps = eta->breakpoints();
    for (double m : {0.0, -8.0, -4.0, -2.0, 2.0, 4.0, 8.0}) bps.push_back(xs + m * beta);
    auto pts = breakpoints_within(-g.l, g.l, bps);
    auto mass = integrate([&](double x) { return std::norm(gauss(x)) * eta->value(x) * eta->value(x); }, pts, {1e-16, 5e-14, 4000});
    require(mass.converged && mass.value > 0.0, ErrorCode::QuadratureFailure, "gauss: normalization quadrature failed");
    const double B = 1.0 / std::sqrt(mass.value);

    StateDescriptor s;
    s.family = Family::truncated_gaussian;
    s.params = GaussianParams{beta, epsilon, B};
    s.geometry = g;
    s.target = t;
    s.breakpoints = bps;
    s.wave = [=](double x) { return B * gauss(x) * eta->value(x); };
    auto lg = [=](double x) { return cplx(-(x - xs) / (2.0 * beta * beta), ks); };
    s.wave_d1 = [=](double x) {
        cplx gv = gauss(x);
        return B * (gv * lg(x) * eta->value(x) + gv * eta->d1(x));
    };
    s.wave_d2 = [=](double x) {
        cplx gv = gauss(x), d = lg(x);
        cplx g2 = gv * (d * d - 1.0 / (2.0 * beta * beta));
        return B * (g2 * eta->value(x) + 2.0 * gv * d * eta->d1(x) + gv * eta->d2(x));
    };
    s.series = detail::project_outward(s.wave, g, t.k_bar, pts, opt.K_max, 0.5 * std::min(beta, epsilon));
    return s;
}

// Gaussian restricted to [-l, l] by a sharp cut; a fixture for states outside the operator domains.
inline StateDescriptor build_sharp_cut_gaussian(const IntervalGeometry& g, const ClassicalTarget& t, double beta, long K = 512) {
    g.validate();
    require(beta > 0.0 && std::isfinite(beta), ErrorCode::InvalidArgument, "sharp cut: beta must be positive");
    const double xs = t.x_star, ks = t.p_star / g.hbar;
    const double c0 = std::pow(2.0 * pi * beta * beta, -0.25);
    auto gauss = [=](double x) {
        double u = x - xs;
        return c0 * std::exp(-u * u / (4.0 * beta * beta)) * std::polar(1.0, x * ks);
    };
    auto pts = breakpoints_within(-g.l, g.l, {xs});
    auto mass = integrate([&](double x) { return std::norm(gauss(x)); }, pts, {1e-16, 5e-14, 4000});
    const double B = 1.0 / std::sqrt(mass.value);
    StateDescriptor s;
    s.family = Family::sharp_cut_gaussian;
    s.params = GaussianParams{beta, 0.0, B};
    s.geometry = g;
    s.target = t;
    s.breakpoints = {xs};
    s.wave = [=](double x) { return B * gauss(x); };
    s.wave_d1 = [=](double x) { return B * gauss(x) * cplx(-(x - xs) / (2.0 * beta * beta), ks); };
    s.wave_d2 = [=](double x) {
        cplx d(-(x - xs) / (2.0 * beta * beta), ks);
        return B * gauss(x) * (d * d - 1.0 / (2.0 * beta * beta));
    };
    std::vector<cplx> a;
    for (long k = t.k_bar - K; k <= t.k_bar + K; ++k) a.push_back(project_coefficient(s.wave, g, k, pts));
    // A jump of the periodic extension leaves |a_k| ~ 1/k, which has no finite weighted tail.
    double jump = std::abs(s.wave(-g.l) - s.wave(g.l));
    double tail = inf;
    if (jump < 1e-12) {
        double c = 0.0;
        for (long k = t.k_bar + K - 8; k <= t.k_bar + K; ++k) {
            double kk = static_cast<double>(k);
            c = std::max({c, std::abs(a[static_cast<std::size_t>(k - t.k_bar + K)]) * kk * kk,
                          std::abs(a[static_cast<std::size_t>(t.k_bar - k + K)]) * kk * kk});
        }
        double kk = static_cast<double>(K);
        tail = 2.0 * c * c * (1.0 / kk + 1.0 / (3.0 * kk * kk * kk));
    }
    s.series = SpectralSeries(t.k_bar - K, std::move(a), tail);
    return s;
}

// ---------------------------------------------------------------- discretized family

struct DiscretizedOptions {
    double tol = 1e-14;
    long K_max = 1L << 20;
};

// a_k = sqrt of the mass of phi_{alpha l} on [k - 1/2, k + 1/2] around k_bar, times exp(-i pi k x* / l).
inline StateDescriptor build_discretized_state(const IntervalGeometry& g, const ClassicalTarget& t, const DensitySpec& density, double alpha,
                                               const DiscretizedOptions& opt = {}) {
    g.validate();
    require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::InvalidArgument, "disc: alpha must be positive");
    certify_density(density);
    const double c = pi / (alpha * g.l); // bin width in the density variable
    QuadratureOptions qo{1e-18, 5e-14, 2000};
    auto bin_mass = [&](long j) {
        double lo = j == 0 ? 0.0 : c * (j - 0.5), hi = c * (j + 0.5);
        if (std::isfinite(density.support) && lo >= density.support) return 0.0;
        auto r = integrate(density.phi, breakpoints_within(lo, hi, density.kinks), qo);
        return j == 0 ? 2.0 * r.value : r.value;
    };
    const double kb = std::abs(static_cast<double>(t.k_bar));
    auto certified_tail = [&](long J) {
        double u0 = c * (J + 0.5);
        auto r = integrate_density_half(
            density,
            [&](double u) {
                double k = kb + u / c + 0.5;
                return (1.0 + k * k * k * k) * density.phi(u);
            },
            u0, {1e-30, 1e-10, 4000});
        return 2.0 * (r.value + r.abs_error);
    };
    std::vector<double> m;
    long J = 0;
    for (;; ++J) {
        require(J <= opt.K_max, ErrorCode::NoFiniteTail, "disc: tail does not reach tolerance");
        m.push_back(bin_mass(J));
        double k = kb + J;
        if (J > 0 && (1.0 + k * k * k * k) * m.back() < 1e-3 * opt.tol) {
            double tb = certified_tail(J);
            if (tb < opt.tol) break;
        }
    }
    const double tail = certified_tail(J);
    std::vector<cplx> a;
    for (long k = t.k_bar - J; k <= t.k_bar + J; ++k) {
        double phase = -pi * static_cast<double>(k) * t.x_star / g.l;
        a.push_back(std::sqrt(m[static_cast<std::size_t>(std::abs(k - t.k_bar))]) * std::polar(1.0, phase));
    }
    StateDescriptor s;
    s.family = Family::discretized;
    s.params = DiscretizedParams{density, alpha};
    s.geometry = g;
    s.target = t;
    s.series = normalize_series(SpectralSeries(t.k_bar - J, std::move(a), tail));
    auto series = s.series;
    s.wave_d1 = [series, g](double x) { return evaluate_series(series, g, x, 1).value; };
    s.wave_d2 = [series, g](double x) { return evaluate_series(series, g, x, 2).value; };
    s.breakpoints = {t.x_star};
    return s;
}

// ---------------------------------------------------------------- well-adapted states

struct InnerTheta {
    double alpha;
};
struct InnerDiscretized {
    DensitySpec density;
    double alpha;
};
using InnerFamily = std::variant<InnerTheta, InnerDiscretized>;

namespace detail {

// Bound on |a_k| for |k| > 2H from the odd moments of d and a remainder of order 8.
struct WellTailModel {
    std::vector<double> odd_moments; // |M_1|, |M_3|, |M_5|, |M_7|
    double remainder = 0.0;          // sum |d_j| |j/2|^8 over odd j
    double H = 0.0;
    double scale = 1.0; // 1 / (sqrt(2) pi norm)
    double bound(double k) const {
        double s = 0.0;
        for (std::size_t i = 0; i < odd_moments.size(); ++i) s += odd_moments[i] / std::pow(k, 2.0 * i + 2.0);
        s += remainder / (std::pow(k, 8.0) * (k - H));
        return scale * s;
    }
    // Sum of (1 + k^2) bound(k)^2 over |k| > K.
    double tail(long K) const {
        CompensatedSum<double> acc;
        const long L = K + 200000;
        for (long k = K + 1; k <= L; ++k) {
            double kk = static_cast<double>(k);
            double b = bound(kk);
            acc += 2.0 * (1.0 + kk * kk) * b * b;
        }
        // bound(k) <= bound(L) (L/k)^2 beyond L
        double bl = bound(static_cast<double>(L)) * static_cast<double>(L) * static_cast<double>(L);
        acc += 4.0 * bl * bl / static_cast<double>(L);
        return acc.value();
    }
    // Sum of bound(k) over |k| > K.
    double l1_tail(long K) const {
        CompensatedSum<double> acc;
        const long L = K + 200000;
        for (long k = K + 1; k <= L; ++k) acc += 2.0 * bound(static_cast<double>(k));
        double bl = bound(static_cast<double>(L)) * static_cast<double>(L);
        acc += 2.0 * bl;
        return acc.value();
    }
};

} // namespace detail

// Psi(x) = f(x + l) - f(-x - l) with f the inner state on [-2l, 2l] targeting (x* + l, p*).
inline StateDescriptor build_well_adapted(const IntervalGeometry& g, const ClassicalTarget& t, const InnerFamily& inner_family,
                                          long K_max = 16384) {
    g.validate();
    IntervalGeometry g2 = g;
    g2.l = 2.0 * g.l;
    const ClassicalTarget t2 = make_target(g2, t.x_star + g.l, t.p_star);
    auto inner = std::make_shared<StateDescriptor>(std::visit(
        [&](const auto& f) -> StateDescriptor {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, InnerTheta>) return build_theta_state(g2, t2, f.alpha, 1e-17);
            else return build_discretized_state(g2, t2, f.density, f.alpha, {1e-16, 1L << 20});
        },
        inner_family));
    const SpectralSeries& c = inner->series;
    const long J = c.truncation_K();
    std::vector<cplx> d(static_cast<std::size_t>(2 * J + 1));
    auto D = [&](long j) -> cplx& { return d[static_cast<std::size_t>(j + J)]; };
    for (long j = -J; j <= J; ++j) D(j) = c[j] - c[-j];
    CompensatedSum<double> n2;
    for (long j = 1; j <= J; ++j) n2 += std::norm(D(j));
    require(n2.value() > 0.0, ErrorCode::ZeroSeries, "well-adapted: antisymmetrized state vanishes");
    const double norm = std::sqrt(n2.value());

    const double s2 = 1.0 / (std::sqrt(2.0) * norm);
    const double s1 = 1.0 / (std::sqrt(2.0) * pi * norm);
    auto coefficient = [&](long k) {
        cplx even = (2 * std::abs(k) <= J) ? D(2 * k) * s2 : cplx{};
        CompensatedSum<cplx> odd;
        for (long j = 1; j <= J; j += 2) {
            double h = 0.5 * static_cast<double>(j);
            double kk = static_cast<double>(k);
            odd += D(j) / (h - kk) + D(-j) / (-h - kk);
        }
        cplx v = even + cplx(0.0, s1) * odd.value();
        return (k % 2 == 0) ? v : -v;
    };

    detail::WellTailModel model;
    model.H = 0.5 * static_cast<double>(J);
    model.scale = s1;
    for (int m = 1; m <= 7; m += 2) {
        CompensatedSum<cplx> mm;
        for (long j = 1; j <= J; j += 2) mm += 2.0 * D(j) * std::pow(0.5 * static_cast<double>(j), m);
        model.odd_moments.push_back(std::abs(mm.value()));
    }
    for (long j = 1; j <= J; j += 2) model.remainder += 2.0 * std::abs(D(j)) * std::pow(0.5 * static_cast<double>(j), 8);
    const double inner_part = 4.0 * c.tail_bound() / (norm * norm);

    long K = static_cast<long>(std::ceil(2.0 * model.H)) + 8;
    // Weighted tail below 1e-13 and pointwise series error below 1e-12.
    auto accurate = [&](long k) { return model.tail(k) + inner_part < 1e-13 && model.l1_tail(k) / std::sqrt(2.0 * g.l) < 1e-12; };
    while (!accurate(K) && K < K_max) K = std::min(2 * K, K_max);
    const double tail = model.tail(K) + inner_part;
    std::vector<cplx> a;
    a.reserve(static_cast<std::size_t>(2 * K + 1));
    for (long k = -K; k <= K; ++k) a.push_back(coefficient(k));

    StateDescriptor s;
    s.family = Family::well_adapted;
    s.params = WellAdaptedParams{inner, norm, d, J};
    s.geometry = g;
    s.target = t;
    s.series = SpectralSeries(-K, std::move(a), tail);
    const double l = g.l;
    auto f0 = [inner](double y) { return evaluate_wave(*inner, y).value; };
    s.wave = [=](double x) { return (f0(x + l) - f0(-x - l)) / norm; };
    s.wave_d1 = [=](double x) {
        return (evaluate_wave(*inner, x + l, EvalPath::automatic, 1).value + evaluate_wave(*inner, -x - l, EvalPath::automatic, 1).value) / norm;
    };
    s.wave_d2 = [=](double x) {
        return (evaluate_wave(*inner, x + l, EvalPath::automatic, 2).value - evaluate_wave(*inner, -x - l, EvalPath::automatic, 2).value) / norm;
    };
    s.breakpoints = {t.x_star, -t.x_star - 2.0 * l};
    return s;
}

// Sine coefficients b_n = i (-1)^n d_n / norm read directly from the doubled-interval state.
inline std::vector<cplx> well_adapted_sine_coefficients(const StateDescriptor& s, long N) {
    const auto* p = std::get_if<WellAdaptedParams>(&s.params);
    require(p != nullptr, ErrorCode::InvalidArgument, "well-adapted coefficients need a well-adapted state");
    std::vector<cplx> b(static_cast<std::size_t>(N));
    for (long n = 1; n <= N; ++n) {
        cplx dn = n <= p->J ? p->d[static_cast<std::size_t>(n + p->J)] : cplx{};
        b[static_cast<std::size_t>(n - 1)] = cplx(0.0, (n % 2 == 0) ? 1.0 : -1.0) * dn / p->pre_norm;
    }
    return b;
}

// psi(-l) and psi(l) from the series. For well-adapted states the omitted tail is added in closed form:
// beyond |k| = J/2 the coefficients are sums of d_j / (j/2 - k), whose tail at the walls telescopes.
inline std::pair<WaveValue, WaveValue> wall_values(const StateDescriptor& s) {
    const auto* p = std::get_if<WellAdaptedParams>(&s.params);
    if (p == nullptr) return boundary_values(s.series, s.geometry);
    const SpectralSeries& a = s.series;
    const long K = a.truncation_K();
    require(a.k_first() == -K && 2 * K >= p->J, ErrorCode::InvalidArgument, "wall values: unexpected well-adapted window");
    CompensatedSum<cplx> head;
    double mag = 0.0;
    for (long k = -K; k <= K; ++k) {
        head += (k % 2 == 0 ? 1.0 : -1.0) * a[k];
        mag += std::abs(a[k]);
    }
    CompensatedSum<cplx> tail;
    for (long j = 1; j <= p->J; j += 2) {
        const double h = 0.5 * static_cast<double>(j);
        CompensatedSum<double> t;
        for (long m = K + 1; m <= K + j; ++m) t += 1.0 / (static_cast<double>(m) - h);
        tail += -2.0 * t.value() * p->d[static_cast<std::size_t>(j + p->J)];
    }
    const cplx total = head.value() + cplx(0.0, 1.0 / (std::sqrt(2.0) * pi * p->pre_norm)) * tail.value();
    const double norm = 1.0 / std::sqrt(2.0 * s.geometry.l);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    WaveValue v{total * norm, 8.0 * eps * (mag + std::abs(total)) * norm};
    return {v, v};
}

} // namespace sqz
