#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <vector>

#include "sqz/error.hpp"
#include "sqz/summation.hpp"

namespace sqz {

struct QuadratureOptions {
    double epsabs = 1e-15;
    double epsrel = 5e-14;
    int max_intervals = 4000;
    bool roundoff_floor = true; // QUADPACK floor of 50 eps |f| per panel
};

template <class T>
struct QuadratureResult {
    T value{};
    double abs_error = 0.0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980864095, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk21(F& f, double a, double b, bool floor = true) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<T, 21> fv;
    fv[0] = f(c);
    for (int j = 0; j < 10; ++j) {
        fv[1 + 2 * j] = f(c - h * kXgk[j]);
        fv[2 + 2 * j] = f(c + h * kXgk[j]);
    }
    T resk = fv[0] * kWgk[10];
    T resg{};
    double resabs = kWgk[10] * std::abs(fv[0]);
    for (int j = 0; j < 10; ++j) {
        T pair = fv[1 + 2 * j] + fv[2 + 2 * j];
        resk += kWgk[j] * pair;
        resabs += kWgk[j] * (std::abs(fv[1 + 2 * j]) + std::abs(fv[2 + 2 * j]));
        if (j % 2 == 1) resg += kWg[j / 2] * pair;
    }
    T mean = resk * 0.5;
    double resasc = kWgk[10] * std::abs(fv[0] - mean);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (std::abs(fv[1 + 2 * j] - mean) + std::abs(fv[2 + 2 * j] - mean));
    const double ah = std::abs(h);
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (floor && resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk * h, err};
}

} // namespace detail

// Globally adaptive Gauss-Kronrod quadrature over consecutive breakpoints.
template <class F>
auto integrate(F f, const std::vector<double>& points, const QuadratureOptions& opt = {}) {
    using T = std::decay_t<decltype(f(0.0))>;
    require(points.size() >= 2, ErrorCode::InvalidArgument, "integrate: need at least two points");
    std::priority_queue<detail::Panel<T>> heap;
    std::vector<detail::Panel<T>> done;
    for (size_t i = 0; i + 1 < points.size(); ++i)
        if (points[i + 1] > points[i]) heap.push(detail::gk21<T>(f, points[i], points[i + 1], opt.roundoff_floor));
    auto totals = [&]() {
        CompensatedSum<T> v;
        double e = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        for (const auto& p : done) {
            v += p.value;
            e += p.error;
        }
        return std::pair<T, double>(v.value(), e);
    };
    QuadratureResult<T> r;
    auto [val, err] = totals();
    double err_sum = err;
    int count = static_cast<int>(heap.size());
    while (!heap.empty()) {
        double target = std::max(opt.epsabs, opt.epsrel * std::abs(val));
        if (err_sum <= target) break;
        if (count >= opt.max_intervals) break;
        auto p = heap.top();
        heap.pop();
        double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            done.push_back(p);
            continue;
        }
        auto left = detail::gk21<T>(f, p.a, m, opt.roundoff_floor);
        auto right = detail::gk21<T>(f, m, p.b, opt.roundoff_floor);
        err_sum += left.error + right.error - p.error;
        val += left.value + right.value - p.value;
        heap.push(left);
        heap.push(right);
        ++count;
        if (count % 64 == 0) {
            auto t = totals();
            val = t.first;
            err_sum = t.second;
        }
    }
    auto t = totals();
    r.value = t.first;
    r.abs_error = t.second;
    r.intervals = count;
    r.converged = r.abs_error <= std::max(opt.epsabs, opt.epsrel * std::abs(r.value));
    return r;
}

template <class F>
auto integrate(F f, double a, double b, const QuadratureOptions& opt = {}) {
    return integrate(std::move(f), std::vector<double>{a, b}, opt);
}

// Integral over [a, inf) through the map x = a + t/(1-t).
template <class F>
auto integrate_to_infinity(F f, double a, const QuadratureOptions& opt = {}) {
    using T = std::decay_t<decltype(f(0.0))>;
    auto g = [&f, a](double t) -> T {
        double s = 1.0 - t;
        double x = a + t / s;
        if (!std::isfinite(x)) return T{};
        T v = f(x);
        return v / (s * s);
    };
    return integrate(g, 0.0, 1.0, opt);
}

// Merges breakpoints into [a, b], sorted and deduplicated.
inline std::vector<double> breakpoints_within(double a, double b, std::vector<double> extra) {
    std::vector<double> pts{a, b};
    for (double x : extra)
        if (x > a && x < b) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace sqz
