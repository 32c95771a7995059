#include "solitons/interp.hpp"

#include <algorithm>
#include <cmath>

namespace solitons {

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> d)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
    if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != d_.size())
        throw ValidationError("CubicHermite: need >= 2 knots with matching value/slope arrays");
    increasing_ = x_[1] > x_[0];
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        const bool up = x_[i + 1] > x_[i];
        if (x_[i + 1] == x_[i] || up != increasing_)
            throw ValidationError("CubicHermite: knots must be strictly monotone");
    }
    // Exact integral of each cubic piece: h/2 (y0+y1) + h^2/12 (d0-d1).
    cum_.resize(x_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        const double h = x_[i + 1] - x_[i];
        cum_[i + 1] = cum_[i] + 0.5 * h * (y_[i] + y_[i + 1]) + h * h / 12.0 * (d_[i] - d_[i + 1]);
    }
}

std::size_t CubicHermite::locate(double x) const {
    // Reject points beyond the span, with a small slack for accumulated
    // rounding in evaluation grids built from the span endpoints.
    const double tol = 1e-12 * (1.0 + std::abs(x_.front()) + std::abs(x_.back()));
    if (increasing_) {
        if (x < x_.front() - tol || x > x_.back() + tol)
            throw ValidationError("CubicHermite: evaluation outside knot span");
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t k = static_cast<std::size_t>(it - x_.begin());
        if (k > 0) --k;
        if (k + 1 >= x_.size()) k = x_.size() - 2;
        return k;
    }
    if (x > x_.front() + tol || x < x_.back() - tol)
        throw ValidationError("CubicHermite: evaluation outside knot span");
    auto it = std::upper_bound(x_.begin(), x_.end(), x, std::greater<>());
    std::size_t k = static_cast<std::size_t>(it - x_.begin());
    if (k > 0) --k;
    if (k + 1 >= x_.size()) k = x_.size() - 2;
    return k;
}

double CubicHermite::eval(double x) const {
    const std::size_t k = locate(x);
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h * h10 * d_[k] + h01 * y_[k + 1] + h * h11 * d_[k + 1];
}

double CubicHermite::derivative(double x) const {
    const std::size_t k = locate(x);
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t;
    const double g00 = (6 * t2 - 6 * t) / h;
    const double g10 = 3 * t2 - 4 * t + 1;
    const double g01 = (-6 * t2 + 6 * t) / h;
    const double g11 = 3 * t2 - 2 * t;
    return g00 * y_[k] + g10 * d_[k] + g01 * y_[k + 1] + g11 * d_[k + 1];
}

double CubicHermite::integral_from_start(double x) const {
    const std::size_t k = locate(x);
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
    // Antiderivatives of the Hermite basis on [0,1], scaled by h.
    const double H00 = t3 * (t / 2.0 - 1.0) + t;          // int of 2t^3-3t^2+1
    const double H10 = t4 / 4.0 - 2.0 * t3 / 3.0 + t2 / 2.0;
    const double H01 = -t4 / 2.0 + t3;
    const double H11 = t4 / 4.0 - t3 / 3.0;
    return cum_[k] + h * (H00 * y_[k] + h * H10 * d_[k] + H01 * y_[k + 1] + h * H11 * d_[k + 1]);
}

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw ValidationError("pchip_slopes: need >= 2 samples");
    std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] == 0.0 || delta[i] == 0.0 || (delta[i - 1] > 0) != (delta[i] > 0)) {
            d[i] = 0.0;
        } else {
            const double w1 = 2 * h[i] + h[i - 1];
            const double w2 = h[i] + 2 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // One-sided ends with the usual monotonicity clamp.
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0)
            s = 0.0;
        else if (d0 * d1 < 0 && std::abs(s) > 3 * std::abs(d0))
            s = 3 * d0;
        return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

}  // namespace solitons
