#include "solitons/cubic.hpp"

#include <algorithm>
#include <cmath>

#include "solitons/util.hpp"

namespace solitons {

namespace {

// One guarded Newton polish pass; closed-form roots of ill-conditioned
// cubics can be off by several ulps times the condition number.
double polish(double c3, double c2, double c1, double c0, double x) {
    for (int it = 0; it < 3; ++it) {
        const double f = ((c3 * x + c2) * x + c1) * x + c0;
        const double fp = (3 * c3 * x + 2 * c2) * x + c1;
        if (fp == 0.0) break;
        const double step = f / fp;
        if (!std::isfinite(step)) break;
        x -= step;
    }
    return x;
}

}  // namespace

std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0) {
    const double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
    if (scale == 0.0) throw NumericalError("cubic_real_roots: zero polynomial");
    if (std::abs(c3) < 1e-14 * scale) {
        // Quadratic (or linear) fallback.
        if (std::abs(c2) < 1e-14 * scale) {
            if (c1 == 0.0) throw NumericalError("cubic_real_roots: constant polynomial");
            return {-c0 / c1};
        }
        const double disc = c1 * c1 - 4 * c2 * c0;
        if (disc < 0) return {};
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (c1 + std::copysign(sq, c1));
        std::vector<double> roots;
        roots.push_back(q / c2);
        if (q != 0.0) roots.push_back(c0 / q);
        std::sort(roots.begin(), roots.end());
        return roots;
    }

    // Monic form x^3 + a x^2 + b x + c.
    const double a = c2 / c3, b = c1 / c3, c = c0 / c3;
    const double q = (a * a - 3 * b) / 9.0;
    const double r = (a * (2 * a * a - 9 * b) + 27 * c) / 54.0;
    const double r2 = r * r, q3 = q * q * q;
    std::vector<double> roots;
    if (r2 < q3) {
        double t = r / std::sqrt(q3);
        t = std::clamp(t, -1.0, 1.0);
        t = std::acos(t);
        const double m = -2.0 * std::sqrt(q);
        const double pi = 3.14159265358979323846;
        roots = {m * std::cos(t / 3.0) - a / 3.0,
                 m * std::cos((t + 2 * pi) / 3.0) - a / 3.0,
                 m * std::cos((t - 2 * pi) / 3.0) - a / 3.0};
    } else {
        const double u3 = -r - std::copysign(std::sqrt(r2 - q3), r);
        const double u = std::cbrt(u3);
        const double v = (u == 0.0) ? 0.0 : q / u;
        roots = {u + v - a / 3.0};
        // The conjugate pair is real only when it collapses onto a double root.
        const double im = 0.5 * std::sqrt(3.0) * (u - v);
        if (std::abs(im) < 1e-12 * (1.0 + std::abs(u) + std::abs(v)))
            roots.push_back(-0.5 * (u + v) - a / 3.0);
    }
    for (double& x : roots) {
        x = polish(c3, c2, c1, c0, x);
        if (!std::isfinite(x)) throw NumericalError("cubic_real_roots: non-finite root");
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double x, double y) {
                                return std::abs(x - y) <= 1e-12 * (1.0 + std::abs(x));
                            }),
                roots.end());
    return roots;
}

}  // namespace solitons
