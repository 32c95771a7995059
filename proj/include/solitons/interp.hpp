#pragma once

#include <vector>

#include "solitons/util.hpp"

namespace solitons {

// Piecewise-cubic Hermite interpolant on strictly monotone knots. When the
// slopes are the exact derivatives of the interpolated function the value
// error is O(h^4) and the derivative error O(h^3) per interval.
class CubicHermite {
public:
    CubicHermite() = default;
    // x strictly monotone (increasing or decreasing), y and dydx per knot.
    CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dydx);

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;
    double derivative(double x) const;
    // Integral of the interpolant from the first knot to x (exact per piece).
    double integral_from_start(double x) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    bool increasing() const { return increasing_; }
    std::size_t size() const { return x_.size(); }

private:
    std::size_t locate(double x) const;

    std::vector<double> x_, y_, d_;
    std::vector<double> cum_;  // cumulative integral up to each knot
    bool increasing_ = true;
};

// Fritsch-Carlson monotone slopes for data without derivatives. Used where a
// curve is known only through samples; preserves samplewise monotonicity.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y);

inline CubicHermite monotone_cubic(std::vector<double> x, std::vector<double> y) {
    auto d = pchip_slopes(x, y);
    return CubicHermite(std::move(x), std::move(y), std::move(d));
}

}  // namespace solitons
