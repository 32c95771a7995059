#pragma once

// Test-only reference implementations, kept independent of the library's
// integration and root-finding paths.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Classical fixed-step RK4 for a 2-state system.
template <class Rhs>
std::array<double, 2> rk4_integrate(Rhs&& rhs, double t0, std::array<double, 2> y, double t1,
                                    long steps) {
    const double h = (t1 - t0) / static_cast<double>(steps);
    double t = t0;
    for (long i = 0; i < steps; ++i) {
        const auto k1 = rhs(t, y);
        std::array<double, 2> y2{y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]};
        const auto k2 = rhs(t + 0.5 * h, y2);
        std::array<double, 2> y3{y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]};
        const auto k3 = rhs(t + 0.5 * h, y3);
        std::array<double, 2> y4{y[0] + h * k3[0], y[1] + h * k3[1]};
        const auto k4 = rhs(t + h, y4);
        y[0] += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        y[1] += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        t = t0 + (i + 1) * h;
    }
    return y;
}

// All real roots of a continuous function in [lo, hi] found by sign scanning
// plus bisection; grid fine enough that no two roots share a cell.
inline std::vector<double> roots_by_bisection(const std::function<double(double)>& f, double lo,
                                              double hi, int grid) {
    std::vector<double> roots;
    double prev_x = lo, prev_f = f(lo);
    for (int i = 1; i <= grid; ++i) {
        const double x = lo + (hi - lo) * i / grid;
        const double fx = f(x);
        if (prev_f == 0.0) roots.push_back(prev_x);
        if ((prev_f > 0) != (fx > 0) && prev_f != 0.0 && fx != 0.0) {
            double a = prev_x, b = x, fa = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((fm > 0) == (fa > 0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    if (prev_f == 0.0) roots.push_back(prev_x);
    return roots;
}

}  // namespace oracles
