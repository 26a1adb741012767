#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sqz/core.hpp"
#include "sqz/families.hpp"
#include "sqz/quadrature.hpp"
#include "sqz/summation.hpp"

namespace sqz {

struct PositionMoments {
    double mean_x = 0.0;
    double dstar_x2 = 0.0; // integral of (x - x*)^2 |psi|^2
    double dx2 = 0.0;      // variance
    double norm = 0.0;     // integral of |psi|^2
    double error = 0.0;    // combined quadrature error
};

struct MomentumMoments {
    double mean_p = 0.0;
    double dstar_p2 = 0.0; // sum (p_k - p*)^2 |a_k|^2
    double dp2 = 0.0;      // variance, summed directly about the mean
    double tail_error = 0.0;
};

struct QuadratureMomentum {
    double mean_p = 0.0;
    double dstar_p2 = 0.0;
    double imag_mean = 0.0;  // imaginary residue of <psi, p psi>
    double imag_dstar = 0.0; // imaginary residue of <psi, (p - p*)^2 psi>
    double error = 0.0;
};

inline PositionMoments position_moments(const StateDescriptor& s) {
    const double l = s.geometry.l, xs = s.target.x_star;
    auto pts = integration_points(s);
    auto dens = [&](double x) { return std::norm(evaluate_wave(s, x).value); };
    QuadratureOptions o{1e-15, 5e-14, 6000};
    auto r0 = integrate(dens, pts, {1e-15, 5e-14, 6000});
    o.epsabs = 1e-15 * l;
    auto r1 = integrate([&](double x) { return (x - xs) * dens(x); }, pts, o);
    o.epsabs = 1e-15 * l * l;
    auto r2 = integrate([&](double x) { return (x - xs) * (x - xs) * dens(x); }, pts, o);
    PositionMoments m;
    m.norm = r0.value;
    m.mean_x = xs + r1.value / r0.value;
    m.dstar_x2 = r2.value / r0.value;
    double shift = m.mean_x - xs;
    m.dx2 = m.dstar_x2 - shift * shift;
    m.error = r0.abs_error + r1.abs_error / l + r2.abs_error / (l * l);
    require(m.error <= 1e-12 && r0.value > 0.0, ErrorCode::QuadratureFailure, "position moments: quadrature tolerance unreachable");
    return m;
}

inline MomentumMoments momentum_moments(const StateDescriptor& s) {
    const SpectralSeries& a = s.series;
    require(a.has_finite_tail(), ErrorCode::NoFiniteTail, "momentum moments: series tail is not certified");
    const double q = s.geometry.momentum_quantum();
    const double ks = s.target.k_star;
    CompensatedSum<double> n0, n1, n2;
    long k = a.k_first();
    for (const auto& c : a.coefficients()) {
        double w = std::norm(c), kk = static_cast<double>(k++);
        n0 += w;
        n1 += kk * w;
        n2 += (kk - ks) * (kk - ks) * w;
    }
    MomentumMoments m;
    double kmean = n1.value() / n0.value();
    CompensatedSum<double> v;
    k = a.k_first();
    for (const auto& c : a.coefficients()) {
        double d = static_cast<double>(k++) - kmean;
        v += d * d * std::norm(c);
    }
    m.mean_p = q * kmean;
    m.dstar_p2 = q * q * n2.value() / n0.value();
    m.dp2 = q * q * v.value() / n0.value();
    m.tail_error = 2.0 * q * q * (1.0 + ks * ks) * a.tail_bound();
    return m;
}

// Momentum moments from psi' and psi'' by quadrature.
inline QuadratureMomentum momentum_moments_quadrature(const StateDescriptor& s) {
    require(static_cast<bool>(s.wave_d1) && static_cast<bool>(s.wave_d2), ErrorCode::InvalidArgument,
            "momentum quadrature: derivatives unavailable");
    const double h = s.geometry.hbar, ps = s.target.p_star;
    auto pts = integration_points(s);
    auto psi = [&](double x) { return evaluate_wave(s, x).value; };
    QuadratureOptions o{1e-13, 1e-13, 8000};
    auto r0 = integrate([&](double x) { return std::norm(psi(x)); }, pts, o);
    auto r1 = integrate([&](double x) { return std::conj(psi(x)) * cplx(0.0, -h) * s.wave_d1(x); }, pts, o);
    auto r2 = integrate(
        [&](double x) {
            cplx f = psi(x);
            return std::conj(f) * (-h * h * s.wave_d2(x) + cplx(0.0, 2.0 * h * ps) * s.wave_d1(x) + ps * ps * f);
        },
        pts, o);
    QuadratureMomentum m;
    m.mean_p = r1.value.real() / r0.value;
    m.imag_mean = r1.value.imag() / r0.value;
    m.dstar_p2 = r2.value.real() / r0.value;
    m.imag_dstar = r2.value.imag() / r0.value;
    m.error = r0.abs_error + r1.abs_error + r2.abs_error;
    return m;
}

// b_n for n = 1..N from the momentum coefficients.
inline EnergySeries energy_expand(const SpectralSeries& a, long N) {
    require(N >= 1, ErrorCode::InvalidArgument, "energy_expand: N must be positive");
    require(a.has_finite_tail(), ErrorCode::NoFiniteTail, "energy_expand: series tail is not certified");
    EnergySeries e;
    e.b.resize(static_cast<std::size_t>(N));
    const double r2 = 1.0 / std::sqrt(2.0);
    std::vector<cplx> alt(a.size());
    std::vector<double> k4(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        long k = a.k_first() + static_cast<long>(i);
        alt[i] = (k % 2 == 0) ? a.coefficients()[i] : -a.coefficients()[i];
        k4[i] = 4.0 * static_cast<double>(k) * static_cast<double>(k);
    }
    for (long n = 1; n <= N; ++n) {
        cplx b;
        if (n % 2 == 0) {
            long h = n / 2;
            b = cplx(0.0, r2) * (a[h] - a[-h]);
            if (h % 2 == 1) b = -b;
        } else {
            double nn = static_cast<double>(n) * static_cast<double>(n);
            CompensatedSum<cplx> acc;
            for (std::size_t i = 0; i < alt.size(); ++i) acc += alt[i] / (k4[i] - nn);
            b = 4.0 * static_cast<double>(n) / (std::sqrt(2.0) * pi) * acc.value();
        }
        e.b[static_cast<std::size_t>(n - 1)] = b;
    }
    // |k^2 - n^2/4| >= 1/4 for integer k and odd n; omitted terms weigh at most 4 n sum|a_k| / (sqrt 2 pi).
    e.tail_bound = 4.0 * static_cast<double>(N) / (std::sqrt(2.0) * pi) * 4.0 * omitted_l1_bound(a);
    return e;
}

// Energy coefficients of a state: exact sine coefficients for well-adapted states, the momentum route otherwise.
inline EnergySeries energy_coefficients(const StateDescriptor& s, long N) {
    const auto* p = std::get_if<WellAdaptedParams>(&s.params);
    if (p == nullptr) return energy_expand(s.series, N);
    EnergySeries e;
    e.b = well_adapted_sine_coefficients(s, N);
    // Omitted inner coefficients: sum_{|j| > J} |c_j|^2 <= inner tail, so |d_j| <= 2 sqrt(tail).
    e.tail_bound = 2.0 * std::sqrt(p->inner->series.tail_bound()) / p->pre_norm;
    return e;
}

enum class Growth { converged, divergent, inconclusive };

inline std::string_view to_string(Growth g) {
    switch (g) {
    case Growth::converged: return "CONVERGED";
    case Growth::divergent: return "DIVERGENT";
    case Growth::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

struct GrowthReport {
    Growth growth = Growth::inconclusive;
    std::vector<long> ladder;          // N values
    std::vector<double> partial_sums;  // S_N
    std::vector<double> ratios;        // S_{2N} / S_N for consecutive rungs
    int divergent_streak = 0;          // trailing rungs with ratio above threshold
};

struct GrowthOptions {
    double converged_rel = 1e-8;
    double divergent_ratio = 1.2;
    int min_streak = 3;
};

// Classifies partial sums S_N = sum_{i < N} terms[i] on the ladder N = 1, 2, 4, ..., size.
inline GrowthReport classify_growth(const std::vector<double>& terms, const GrowthOptions& opt = {}) {
    GrowthReport r;
    CompensatedSum<double> acc;
    std::size_t next = 1;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        acc += terms[i];
        if (i + 1 == next) {
            r.ladder.push_back(static_cast<long>(i + 1));
            r.partial_sums.push_back(acc.value());
            while (next <= i + 1) next *= 2;
        }
    }
    for (std::size_t i = 1; i < r.partial_sums.size(); ++i) {
        double prev = r.partial_sums[i - 1];
        r.ratios.push_back(prev > 0.0 ? r.partial_sums[i] / prev : (r.partial_sums[i] > 0.0 ? inf : 1.0));
    }
    for (auto it = r.ratios.rbegin(); it != r.ratios.rend() && *it > opt.divergent_ratio; ++it) ++r.divergent_streak;
    if (!r.ratios.empty()) {
        double last = r.partial_sums.back(), prev = r.partial_sums[r.partial_sums.size() - 2];
        bool finite = std::isfinite(last);
        if (finite && (last == 0.0 || std::abs(last - prev) < opt.converged_rel * std::abs(last))) r.growth = Growth::converged;
        else if (r.divergent_streak >= opt.min_streak) r.growth = Growth::divergent;
    } else if (!r.partial_sums.empty()) {
        r.growth = Growth::converged;
    }
    return r;
}

struct EnergyMoments {
    double mean_E = 0.0;
    double dstar_E2 = 0.0; // sum (E_n - E*)^2 |b_n|^2 truncated at N
    double parseval = 0.0; // sum |b_n|^2
    GrowthReport growth;   // of sum n^4 |b_n|^2
};

inline EnergyMoments energy_moments(const EnergySeries& e, const IntervalGeometry& g, double E_star) {
    EnergyMoments m;
    CompensatedSum<double> p, mean, d2;
    std::vector<double> t(e.b.size());
    for (long n = 1; n <= e.N(); ++n) {
        double w = std::norm(e(n));
        double E = g.energy_level(n);
        p += w;
        mean += E * w;
        d2 += (E - E_star) * (E - E_star) * w;
        double nn = static_cast<double>(n);
        t[static_cast<std::size_t>(n - 1)] = nn * nn * nn * nn * w;
    }
    m.parseval = p.value();
    m.mean_E = mean.value() / m.parseval;
    m.dstar_E2 = d2.value() / m.parseval;
    m.growth = classify_growth(t);
    return m;
}

inline double classical_energy(const ClassicalTarget& t, const IntervalGeometry& g) { return t.p_star * t.p_star / (2.0 * g.mass); }

struct FinitenessReport {
    Growth momentum = Growth::inconclusive; // sum k^2 |a_k|^2
    Growth energy = Growth::inconclusive;   // sum n^4 |b_n|^2
    GrowthReport momentum_detail;
    GrowthReport energy_detail;
    cplx psi_minus_l, psi_plus_l;
    bool momentum_implies_periodic = true; // finite momentum dispersion forces psi(-l) = psi(l)
    bool energy_implies_vanishing = true;  // finite energy dispersion forces psi(+-l) = 0
};

inline FinitenessReport finiteness_diagnostic(const StateDescriptor& s, long N_energy = 1L << 14, double boundary_tol = 1e-8) {
    FinitenessReport f;
    const SpectralSeries& a = s.series;
    // Symmetric windows |k| <= N in increasing order of |k|.
    long K = a.truncation_K();
    std::vector<double> mt(static_cast<std::size_t>(K + 1));
    for (long k = 0; k <= K; ++k) {
        double kk = static_cast<double>(k);
        mt[static_cast<std::size_t>(k)] = kk * kk * (std::norm(a[k]) + (k != 0 ? std::norm(a[-k]) : 0.0));
    }
    f.momentum_detail = classify_growth(mt);
    f.momentum = a.has_finite_tail() && f.momentum_detail.growth != Growth::divergent ? Growth::converged : f.momentum_detail.growth;
    if (a.has_finite_tail()) {
        auto [lo, hi] = wall_values(s);
        f.psi_minus_l = lo.value;
        f.psi_plus_l = hi.value;
        auto e = energy_coefficients(s, N_energy);
        auto em = energy_moments(e, s.geometry, classical_energy(s.target, s.geometry));
        f.energy_detail = em.growth;
        f.energy = em.growth.growth;
    } else {
        require(static_cast<bool>(s.wave), ErrorCode::NonSummable, "finiteness: no summable series and no closed form");
        f.psi_minus_l = s.wave(-s.geometry.l);
        f.psi_plus_l = s.wave(s.geometry.l);
        // A non-periodic boundary forces b_n ~ 1/n, so n^4 |b_n|^2 grows.
        f.energy = std::abs(f.psi_minus_l) > boundary_tol || std::abs(f.psi_plus_l) > boundary_tol ? Growth::divergent : Growth::inconclusive;
    }
    const double scale = 1.0 / std::sqrt(s.geometry.l);
    if (f.momentum == Growth::converged) f.momentum_implies_periodic = std::abs(f.psi_minus_l - f.psi_plus_l) <= boundary_tol * scale;
    if (f.energy == Growth::converged)
        f.energy_implies_vanishing = std::abs(f.psi_minus_l) <= boundary_tol * scale && std::abs(f.psi_plus_l) <= boundary_tol * scale;
    return f;
}

struct MomentReport {
    PositionMoments x;
    MomentumMoments p;
    double product = 0.0;        // dx dp
    double judge_weak_rhs = 0.0; // 0.16 hbar (1 - 3 dx^2 / l^2)
    double judge_conj_rhs = 0.0; // (hbar / 2)(1 - 3 dx^2 / l^2)
    bool judge_weak_ok = true;
    bool judge_conj_ok = true;
};

// Position and momentum moments with the bounded-interval uncertainty relation checked.
inline MomentReport uncertainty_report(const StateDescriptor& s) {
    MomentReport r;
    r.x = position_moments(s);
    r.p = momentum_moments(s);
    const double h = s.geometry.hbar, l = s.geometry.l;
    r.product = std::sqrt(std::max(0.0, r.x.dx2) * std::max(0.0, r.p.dp2));
    double f = 1.0 - 3.0 * r.x.dx2 / (l * l);
    r.judge_weak_rhs = 0.16 * h * f;
    r.judge_conj_rhs = 0.5 * h * f;
    const double slack = 1e-9 * h;
    r.judge_weak_ok = r.product >= r.judge_weak_rhs - slack;
    r.judge_conj_ok = r.product >= r.judge_conj_rhs - slack;
    require(r.judge_weak_ok, ErrorCode::BoundViolated, "uncertainty: bounded-interval relation violated");
    return r;
}

} // namespace sqz
