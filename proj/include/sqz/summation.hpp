#pragma once

#include <cmath>
#include <complex>

namespace sqz {

// Neumaier compensated accumulator for double or std::complex<double>.
template <class T>
class CompensatedSum {
public:
    CompensatedSum& operator+=(T x) {
        add(x);
        return *this;
    }
    void add(T x) {
        if constexpr (std::is_same_v<T, double>) {
            add_real(sum_, comp_, x);
        } else {
            double sr = sum_.real(), cr = comp_.real();
            double si = sum_.imag(), ci = comp_.imag();
            add_real(sr, cr, x.real());
            add_real(si, ci, x.imag());
            sum_ = T(sr, si);
            comp_ = T(cr, ci);
        }
    }
    T value() const { return sum_ + comp_; }

private:
    static void add_real(double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    T sum_{};
    T comp_{};
};

template <class Range>
auto compensated_sum(const Range& r) {
    using T = std::decay_t<decltype(*std::begin(r))>;
    CompensatedSum<T> acc;
    for (const auto& v : r) acc += v;
    return acc.value();
}

} // namespace sqz
