#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sqz/bounds.hpp"

using namespace sqz;

namespace {

const IntervalGeometry unit = IntervalGeometry::dimensionless();

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST(SineWeight, MatchesOracleAndQuotedValue) {
    for (double s : {0.0, 0.3, -0.6}) {
        auto f = [s](double y) {
            double u = y - s;
            double h = 0.5 * oracle::pi * u;
            if (std::abs(h) < 1e-5) return (1.0 + h * h / 3.0) / (0.25 * oracle::pi * oracle::pi);
            double sn = std::sin(0.5 * oracle::pi * u);
            return u * u / (sn * sn);
        };
        EXPECT_NEAR(sine_weight_integral(s), oracle::integrate(f, -1.0, 1.0, {s}), 1e-13) << s;
    }
    EXPECT_NEAR(sine_weight_integral(0.0), 1.12, 0.005);
    EXPECT_EQ(code_of([] { sine_weight_integral(1.0); }), ErrorCode::OutOfDomain);
}

TEST(DiscretizedBounds, HoldForGaussianDensity) {
    for (double a : {10.0, 50.0, 100.0})
        for (double xs : {0.0, 0.3}) {
            auto r = thm3_bounds(build_discretized_state(unit, make_target(unit, xs, 0.0), gaussian_density(), a));
            EXPECT_TRUE(r.x_ok) << a << " " << xs << " " << r.dstar_x2 << " > " << r.dstar_x2_bound;
            EXPECT_TRUE(r.mean_x_ok) << a << " " << xs;
            EXPECT_TRUE(r.mean_p_ok) << a << " " << xs;
            EXPECT_TRUE(r.envelope_ok) << a << " " << xs << " margin " << r.envelope_min_margin;
            EXPECT_TRUE(r.product_ok) << a << " " << xs;
        }
}

TEST(DiscretizedBounds, NonzeroMomentumCenter) {
    auto r = thm3_bounds(build_discretized_state(unit, make_target(unit, -0.2, 7.0 * unit.momentum_quantum()), laplace_density(), 20.0));
    EXPECT_TRUE(r.ok());
    EXPECT_NEAR(r.mean_p, 7.0 * unit.momentum_quantum(), 1e-12);
}

TEST(DiscretizedBounds, NanoscaleRequiredMomentumSpread) {
    const double hbar_si = 1.054571817e-34;
    double dp = thm3_required_dp(1e-7, hbar_si, gaussian_density().peak(), 1.0, sine_weight_integral(0.0), 1e-10);
    EXPECT_GT(dp, 1e-21);
    EXPECT_LT(dp, 1e-19);
    EXPECT_NEAR(std::log10(dp), -20.0, 0.5);
}

TEST(DiscretizedBounds, RejectsOtherFamilies) {
    auto s = build_theta_state(unit, make_target(unit, 0.0, 0.0), 3.0);
    EXPECT_EQ(code_of([&] { thm3_bounds(s); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { lemC_window(s); }), ErrorCode::InvalidArgument);
}

TEST(MomentumWindow, InsideForBothDensities) {
    for (const char* name : {"gaussian", "laplace"}) {
        auto L = lemC_ladder(unit, make_target(unit, 0.0, 0.0), density_by_name(name), {5, 10, 20, 40});
        EXPECT_TRUE(L.all_inside) << name;
        for (const auto& r : L.rows) EXPECT_LT(r.lower, r.upper);
    }
}

TEST(MomentumWindow, RefinedResidualDecaysLikeInverseSquare) {
    auto L = lemC_ladder(unit, make_target(unit, 0.0, 0.0), laplace_density(), {5, 10, 20, 40});
    EXPECT_GE(L.slope, -2.6);
    EXPECT_LE(L.slope, -1.4);
}

TEST(MomentumWindow, WindowSumMatchesDirectRecount) {
    auto s = build_discretized_state(unit, make_target(unit, 0.1, 3.0 * unit.momentum_quantum()), gaussian_density(), 10.0);
    auto r = lemC_window(s);
    long double m = 0, n = 0;
    long k = s.series.k_first();
    for (const auto& c : s.series.coefficients()) {
        long double d = static_cast<long double>(k++ - 3);
        m += d * d * std::norm(c);
        n += std::norm(c);
    }
    const double q = unit.momentum_quantum();
    EXPECT_NEAR(r.measured, q * q * static_cast<double>(m / n), 1e-12 * r.measured);
    EXPECT_NEAR(r.reference, 100.0, 1e-12);
}

TEST(CosineBound, GeometricSequenceClosedForm) {
    for (double r : {0.3, 0.9, 0.99})
        for (double x : {0.2, 1.0, 3.0}) {
            std::vector<double> a;
            for (double v = 1.0; v > 1e-300; v *= r) a.push_back(v);
            double exact = (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(x) + r * r);
            auto b = lemD_bound(a, x);
            EXPECT_NEAR(b.chi, exact, 1e-12 * std::max(1.0, exact)) << r << " " << x;
            EXPECT_TRUE(b.ok);
            EXPECT_TRUE(lemD_bound(a, x, 1.0).ok);
        }
}

TEST(CosineBound, RandomSuiteVsBruteForce) {
    auto suite = lemD_random_suite(20240611, 1000, 3.0);
    EXPECT_EQ(suite.cases, 1000);
    EXPECT_EQ(suite.violations, 0);
    EXPECT_LE(suite.max_ratio, 3.0);
    // Independent long double recount on power-law sequences.
    for (double sexp : {0.6, 1.0, 2.0})
        for (double x : {0.15, 1.3, 3.0}) {
            std::vector<double> a;
            for (int k = 0; k < 20000; ++k) a.push_back(std::pow(1.0 + k, -sexp));
            long double chi = a[0];
            for (std::size_t k = 1; k < a.size(); ++k) chi += 2.0L * a[k] * std::cos(static_cast<long double>(k) * x);
            auto b = lemD_bound(a, x);
            EXPECT_NEAR(b.chi, static_cast<double>(chi), 1e-11) << sexp << " " << x;
            EXPECT_LE(std::abs(static_cast<double>(chi)), 3.0 * a[0] / std::sin(0.5 * x));
        }
}

TEST(CosineBound, Preconditions) {
    std::vector<double> bumpy{1.0, 0.5, 0.7};
    EXPECT_EQ(code_of([&] { lemD_bound(bumpy, 1.0); }), ErrorCode::NotMonotone);
    std::vector<double> away{-1.0, -0.5, 0.5};
    EXPECT_EQ(code_of([&] { lemD_bound(away, 1.0); }), ErrorCode::NotMonotone);
    std::vector<double> ok{1.0, 0.5};
    EXPECT_EQ(code_of([&] { lemD_bound(ok, 0.0); }), ErrorCode::AtSingularity);
    EXPECT_EQ(code_of([&] { lemD_bound(ok, 2.0 * oracle::pi); }), ErrorCode::AtSingularity);
    std::vector<double> up{-1.0, -0.5, -0.1};
    EXPECT_TRUE(lemD_bound(up, 1.0).ok);
}

TEST(AsymptoticLadders, ThetaFamily) {
    for (const auto& tab : thm2_tables(unit, make_target(unit, 0.5, 0.0), {2, 3, 4, 6, 8})) {
        EXPECT_TRUE(tab.all_ok()) << tab.name;
        EXPECT_TRUE(tab.monotone()) << tab.name;
    }
}

TEST(AsymptoticLadders, GaussianFamily) {
    for (const auto& tab : thm1_tables(unit, make_target(unit, 0.3, 0.0), {0.2, 0.1, 0.05}, 0.05)) {
        EXPECT_TRUE(tab.all_ok()) << tab.name;
        EXPECT_TRUE(tab.monotone()) << tab.name;
    }
}

TEST(AsymptoticLadders, ThetaSumNextOrder) {
    auto tab = lemB_k2_ladder({0.2, 0.1, 0.05});
    for (const auto& r : tab.rows) {
        long double s = 0;
        for (long k = 1; k < 400; ++k) s += 2.0L * k * k * std::exp(-static_cast<long double>(oracle::pi) * r.parameter * k * k);
        EXPECT_NEAR(r.measured, static_cast<double>(s), 1e-14 * r.leading);
        EXPECT_NEAR(r.residual, lemB_k2_next_order(r.parameter), 1e-13 * r.leading) << r.parameter;
    }
}

TEST(AsymptoticLadders, ThetaSecondMomentIntegral) {
    auto tab = lemB_x2_ladder({0.2, 0.1, 0.05}, 0.1);
    EXPECT_TRUE(tab.all_ok());
    EXPECT_TRUE(tab.monotone());
    const double tau = 0.1;
    double ref = oracle::integrate([tau](double x) { double t = oracle::theta(x, tau); return x * x * t * t; }, -0.6, 0.4, {0.0});
    EXPECT_NEAR(tab.rows[1].measured, ref, 1e-14);
    EXPECT_EQ(code_of([] { lemB_x2_ladder({0.1}, 0.5); }), ErrorCode::OutOfDomain);
    EXPECT_EQ(code_of([] { lemB_k2_ladder({0.0}); }), ErrorCode::InvalidTau);
}
