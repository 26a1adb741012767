#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sqz/quadrature.hpp"
#include "sqz/specfun.hpp"
#include "sqz/summation.hpp"

using cplx = std::complex<double>;

using namespace sqz;

TEST(Quadrature, PolynomialsAreExactOnOnePanel) {
    for (int deg = 0; deg <= 20; ++deg) {
        auto r = integrate([deg](double x) { return std::pow(x, deg); }, 0.0, 1.0);
        EXPECT_NEAR(r.value, 1.0 / (deg + 1), 1e-15) << deg;
        EXPECT_TRUE(r.converged);
    }
}

TEST(Quadrature, KinkHandledByBreakpoint) {
    auto f = [](double x) { return std::abs(x - 0.3); };
    auto with = integrate(f, std::vector<double>{-1.0, 0.3, 1.0});
    EXPECT_NEAR(with.value, (1.3 * 1.3 + 0.7 * 0.7) / 2.0, 1e-15);
    auto without = integrate(f, -1.0, 1.0);
    EXPECT_NEAR(without.value, with.value, 1e-13);
}

TEST(Quadrature, OscillatoryMatchesClosedForm) {
    for (double w : {1.0, 10.0, 100.0, 400.0}) {
        auto r = integrate([w](double x) { return std::cos(w * x) * std::exp(-x * x); }, -6.0, 6.0);
        double exact = std::sqrt(pi) * std::exp(-w * w / 4.0);
        EXPECT_NEAR(r.value, exact, 2e-14) << w;
    }
}

TEST(Quadrature, ComplexIntegrandAgreesWithOracle) {
    auto f = [](double x) { return std::exp(cplx(-x * x, 3.0 * x)); };
    auto r = integrate(f, -2.0, 2.0);
    cplx ref = oracle::panels_complex([&](double x) { return f(x); }, -2.0, 2.0, 8);
    EXPECT_NEAR(std::abs(r.value - ref), 0.0, 1e-14);
}

TEST(Quadrature, SemiInfiniteMaps) {
    auto e = integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0);
    EXPECT_NEAR(e.value, 1.0, 1e-14);
    auto c = integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0);
    EXPECT_NEAR(c.value, pi / 2.0, 1e-13);
}

TEST(Quadrature, ReportedErrorCoversTrueError) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.5, 30.0);
    for (int i = 0; i < 50; ++i) {
        double w = U(rng);
        auto r = integrate([w](double x) { return std::sin(w * x) * std::sin(w * x); }, 0.0, 1.0);
        double exact = 0.5 - std::sin(2.0 * w) / (4.0 * w);
        EXPECT_LE(std::abs(r.value - exact), std::max(r.abs_error, 1e-15)) << w;
    }
}

TEST(Quadrature, FlagsNonConvergence) {
    auto r = integrate([](double x) { return 1.0 / std::sqrt(std::abs(x)) * std::sin(1.0 / x); }, std::vector<double>{-1.0, 1.0},
                       {1e-15, 1e-15, 20});
    EXPECT_FALSE(r.converged);
}

TEST(Summation, CompensatedSumRecoversCancellation) {
    std::vector<double> v{1.0, 1e100, 1.0, -1e100};
    EXPECT_EQ(compensated_sum(v), 2.0);
    CompensatedSum<double> s;
    for (int i = 0; i < 1000000; ++i) s += 0.1;
    EXPECT_NEAR(s.value(), 100000.0, 1e-9);
}

TEST(Summation, ComplexSum) {
    CompensatedSum<cplx> s;
    s += cplx(1.0, 1e100);
    s += cplx(1e100, 1.0);
    s += cplx(1.0, -1e100);
    s += cplx(-1e100, 1.0);
    EXPECT_EQ(s.value(), cplx(2.0, 2.0));
}
