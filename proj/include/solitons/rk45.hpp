#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "solitons/util.hpp"

namespace solitons {

struct IntegratorOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    double max_step = 1e-3;
    double min_step = 1e-14;
    double w_blow_up_limit = 1e8;
    bool dense_output = true;

    void validate() const {
        if (!(abs_tol > 0) || !(rel_tol > 0))
            throw ValidationError("IntegratorOptions: tolerances must be positive");
        if (!(min_step > 0) || !(max_step > 0) || !(min_step < max_step))
            throw ValidationError("IntegratorOptions: need 0 < min_step < max_step");
        if (!(w_blow_up_limit > 0))
            throw ValidationError("IntegratorOptions: w_blow_up_limit must be positive");
    }
};

enum class Termination { reached_end, blow_up, domain_boundary, step_underflow };

const char* to_string(Termination t);

// Step-by-step control hook. Called after each accepted step; may stop the
// integration with a reason, and may limit the next step size.
enum class StepAction { keep_going, stop };

template <int N>
struct StepDecision {
    StepAction action = StepAction::keep_going;
    Termination reason = Termination::reached_end;
};

template <int N>
struct Rk45Result {
    std::vector<double> t;
    std::vector<std::array<double, N>> y;
    std::vector<std::array<double, N>> dy;  // rhs at each accepted sample
    Termination reason = Termination::reached_end;
};

// Dormand-Prince 5(4) with a PI step controller. Integrates from t0 toward
// t1 in either direction; `inspect` is invoked on each accepted sample.
template <int N, class Rhs, class Inspect>
Rk45Result<N> rk45_integrate(Rhs&& rhs, double t0, std::array<double, N> y0, double t1,
                             const IntegratorOptions& opts, Inspect&& inspect) {
    opts.validate();
    for (double v : y0)
        if (!is_finite(v)) throw ValidationError("rk45_integrate: non-finite initial state");

    using State = std::array<double, N>;
    static const double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // Error coefficients: 5th-order solution minus the embedded 4th-order one.
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Rk45Result<N> out;
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    double t = t0;
    State y = y0;
    State k1 = rhs(t, y);

    out.t.push_back(t);
    out.y.push_back(y);
    out.dy.push_back(k1);
    {
        StepDecision<N> d = inspect(t, y, k1);
        if (d.action == StepAction::stop) {
            out.reason = d.reason;
            return out;
        }
    }
    if (t0 == t1) {
        out.reason = Termination::reached_end;
        return out;
    }

    // Initial step: conservative, refined immediately by the controller.
    double h = opts.max_step;
    {
        double ynorm = 0, fnorm = 0;
        for (int i = 0; i < N; ++i) {
            ynorm = std::max(ynorm, std::abs(y[i]));
            fnorm = std::max(fnorm, std::abs(k1[i]));
        }
        if (fnorm > 0) h = std::min(h, 0.01 * (1.0 + ynorm) / fnorm);
        h = std::max(h, opts.min_step);
    }

    const double safety = 0.9, alpha = 0.7 / 5.0, beta = 0.4 / 5.0;
    double prev_err = 1.0;
    const std::size_t max_steps = 200u * 1000u * 1000u;

    for (std::size_t step = 0; step < max_steps; ++step) {
        const double remaining = dir * (t1 - t);
        if (remaining <= 0) break;
        bool last = false;
        if (h >= remaining) {
            h = remaining;
            last = true;
        }

        State k2, k3, k4, k5, k6, k7, ytmp, y5;
        const double hd = dir * h;
        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + hd * a21 * k1[i];
        k2 = rhs(t + hd * c[1], ytmp);
        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + hd * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs(t + hd * c[2], ytmp);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + hd * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs(t + hd * c[3], ytmp);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + hd * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs(t + hd * c[4], ytmp);
        for (int i = 0; i < N; ++i)
            ytmp[i] =
                y[i] + hd * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = rhs(t + hd * c[5], ytmp);
        for (int i = 0; i < N; ++i)
            y5[i] = y[i] + hd * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = rhs(t + hd, y5);  // FSAL

        double err = 0.0;
        bool finite = true;
        for (int i = 0; i < N; ++i) {
            const double ei = hd * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double sk = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double q = ei / sk;
            err += q * q;
            if (!is_finite(y5[i])) finite = false;
        }
        err = std::sqrt(err / N);

        if (finite && err <= 1.0) {
            t += hd;
            y = y5;
            k1 = k7;
            out.t.push_back(t);
            out.y.push_back(y);
            out.dy.push_back(k1);
            StepDecision<N> d = inspect(t, y, k1);
            if (d.action == StepAction::stop) {
                out.reason = d.reason;
                return out;
            }
            if (last || dir * (t1 - t) <= 0) {
                out.reason = Termination::reached_end;
                return out;
            }
            const double fac =
                safety * std::pow(err > 0 ? err : 1e-10, -alpha) * std::pow(prev_err, beta);
            h = std::min(opts.max_step, h * std::clamp(fac, 0.2, 5.0));
            prev_err = std::max(err, 1e-10);
        } else {
            const double fac = finite ? safety * std::pow(err, -alpha) : 0.25;
            h *= std::clamp(fac, 0.1, 0.9);
        }
        if (h < opts.min_step) {
            out.reason = Termination::step_underflow;
            return out;
        }
    }
    out.reason = Termination::step_underflow;
    return out;
}

}  // namespace solitons
