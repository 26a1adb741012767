#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sqz/mollifier.hpp"
#include "sqz/specfun.hpp"

using namespace sqz;

std::vector<double> tau_grid() {
    std::vector<double> t;
    for (int i = 0; i < 10; ++i) t.push_back(0.05 * std::pow(400.0, i / 9.0));
    return t;
}

TEST(Theta, MatchesExtendedPrecisionSeries) {
    for (double tau : tau_grid())
        for (int i = 0; i < 8; ++i) {
            double x = -0.5 + i / 7.0;
            double ref = oracle::theta(x, tau);
            EXPECT_NEAR(theta(x, tau), ref, 2e-15 * std::abs(ref)) << x << " " << tau;
        }
}

TEST(Theta, BranchesAgreeOnJacobiGrid) {
    double worst = 0.0;
    for (double tau : tau_grid())
        for (int i = 0; i < 8; ++i) {
            double x = -0.5 + i / 7.0;
            double a = theta_eval(x, tau, ThetaBranch::direct).value;
            double b = theta_eval(x, tau, ThetaBranch::modular).value;
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
    EXPECT_LE(worst, 1e-12);
}

TEST(Theta, PeriodicEvenAndPositive) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> X(-3.0, 3.0), T(0.01, 10.0);
    for (int i = 0; i < 500; ++i) {
        double x = X(rng), tau = T(rng);
        double v = theta(x, tau);
        EXPECT_GT(v, 0.0);
        EXPECT_NEAR(theta(x + 1.0, tau), v, 1e-13 * v);
        EXPECT_NEAR(theta(-x, tau), v, 1e-13 * v);
    }
}

TEST(Theta, TailBoundIsReported) {
    auto v = theta_eval(0.2, 0.5);
    EXPECT_GT(v.terms, 0);
    EXPECT_LE(v.tail_bound, 1e-16 * v.value);
}

TEST(Theta, RejectsNonPositiveTau) {
    EXPECT_THROW(theta(0.0, 0.0), Error);
    EXPECT_THROW(theta(0.0, -1.0), Error);
}

TEST(Rounding, HalfEven) {
    EXPECT_EQ(round_half_even(0.5), 0.0);
    EXPECT_EQ(round_half_even(1.5), 2.0);
    EXPECT_EQ(round_half_even(-2.5), -2.0);
    EXPECT_EQ(round_half_even(2.4999), 2.0);
    EXPECT_NEAR(distance_to_integer(3.25), 0.25, 1e-15);
}

TEST(GaussianTail, IdentityMatchesQuadrature) {
    double worst = 0.0;
    for (double gamma : {0.5, 1.0, 2.0})
        for (int i = 0; i <= 12; ++i) {
            double x = 0.5 * i;
            double r = std::abs(gaussian_tail(x, gamma) - oracle::gaussian_tail_moment(x, gamma, 2));
            EXPECT_LE(r, 1e-14) << x << " " << gamma;
            worst = std::max(worst, r);
        }
    EXPECT_LE(worst, 1e-14);
}

TEST(GaussianTail, AllOrdersRelative) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> X(0.0, 8.0), G(0.1, 4.0);
    for (int i = 0; i < 200; ++i) {
        double x = X(rng), g = G(rng);
        for (int order : {0, 2, 4}) {
            double ref = oracle::gaussian_tail_moment(x, g, order);
            EXPECT_NEAR(gaussian_tail_moment(x, g, order), ref, 1e-12 * ref + 1e-300) << x << " " << g << " " << order;
        }
    }
}

TEST(GaussianTail, RejectsBadArguments) {
    EXPECT_THROW(gaussian_tail(1.0, 0.0), Error);
    EXPECT_THROW(gaussian_tail_moment(1.0, 1.0, 3), Error);
}

TEST(Mollifier, NormalizedAndSmooth) {
    Mollifier w(0.1);
    double mass = oracle::integrate([&](double t) { return w.omega(t); }, -0.1, 0.1, {0.0});
    EXPECT_NEAR(mass, 1.0, 1e-13);
    for (double s : {-0.09, -0.03, 0.0, 0.05, 0.099}) {
        double ref = oracle::integrate([&](double t) { return w.omega(t); }, -0.1, s, {0.0});
        EXPECT_NEAR(w.cdf(s), ref, 1e-13) << s;
    }
    EXPECT_EQ(w.omega(0.1), 0.0);
    EXPECT_EQ(w.omega(-0.2), 0.0);
}

TEST(Mollifier, DerivativeMatchesDifference) {
    Mollifier w(0.2);
    for (double t : {-0.15, -0.05, 0.01, 0.12}) {
        double h = 1e-6;
        double fd = (w.omega(t + h) - w.omega(t - h)) / (2 * h);
        EXPECT_NEAR(w.omega_d1(t), fd, 1e-6 * std::max(1.0, std::abs(fd))) << t;
    }
}

TEST(BoxCutoff, ShapeAndDerivatives) {
    const double l = 1.0, eps = 0.05;
    BoxCutoff eta(l, eps);
    EXPECT_NEAR(eta.value(0.0), 1.0, 1e-15);
    EXPECT_NEAR(eta.value(l - 3 * eps), 1.0, 1e-15);
    EXPECT_NEAR(eta.value(l - eps), 0.0, 1e-15);
    EXPECT_NEAR(eta.value(-l), 0.0, 1e-15);
    double prev = 1.0;
    for (int i = 0; i <= 400; ++i) {
        double x = (l - 3 * eps) + 2 * eps * i / 400.0;
        double v = eta.value(x);
        EXPECT_LE(v, prev + 1e-15);
        EXPECT_NEAR(eta.value(-x), v, 1e-15);
        prev = v;
    }
    for (double x : {0.86, 0.88, 0.92, 0.94}) {
        double h = 1e-5;
        EXPECT_NEAR(eta.d1(x), (eta.value(x + h) - eta.value(x - h)) / (2 * h), 1e-5) << x;
        EXPECT_NEAR(eta.d2(x), (eta.d1(x + h) - eta.d1(x - h)) / (2 * h), 1e-3) << x;
    }
    EXPECT_THROW(BoxCutoff(1.0, 0.34), Error);
}
