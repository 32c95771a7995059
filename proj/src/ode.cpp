#include "solitons/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "solitons/cubic.hpp"

namespace solitons {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::reached_end: return "reached_end";
        case Termination::blow_up: return "blow_up";
        case Termination::domain_boundary: return "domain_boundary";
        case Termination::step_underflow: return "step_underflow";
    }
    return "?";
}

const char* to_string(LaunchMethod m) {
    switch (m) {
        case LaunchMethod::series: return "series";
        case LaunchMethod::manifold: return "manifold";
        case LaunchMethod::interior: return "interior";
        case LaunchMethod::inverse_branch: return "inverse-branch";
    }
    return "?";
}

CubicHermite Trajectory::f_interpolant() const {
    std::vector<double> s, f, w;
    s.reserve(samples.size());
    for (const auto& p : samples) {
        s.push_back(p.s);
        f.push_back(p.f);
        w.push_back(p.w);
    }
    return CubicHermite(std::move(s), std::move(f), std::move(w));
}

CubicHermite Trajectory::w_interpolant(const SubmersionProfile& profile) const {
    std::vector<double> s, w, wp;
    s.reserve(samples.size());
    for (const auto& p : samples) {
        s.push_back(p.s);
        w.push_back(p.w);
    }
    if (w_prime.size() == samples.size()) {
        wp = w_prime;
    } else {
        // Knots outside the open domain (e.g. a bowl's anchor at s = 0) fall
        // back to data slopes.
        std::vector<double> fallback = pchip_slopes(s, w);
        wp.resize(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            wp[i] = profile.contains(s[i]) ? generic_rhs(profile, s[i], w[i]) : fallback[i];
    }
    return CubicHermite(std::move(s), std::move(w), std::move(wp));
}

double generic_rhs(const SubmersionProfile& profile, double s, double w) {
    const double a = profile.alpha(s);
    const double ap = profile.alpha_prime(s);
    const double ph = profile.phi_hat(s);
    const double php = profile.phi_hat_prime(s);
    const double h = profile.h(s);
    const double bracket = 1.0 - php * w / (2.0 * ph * a) - w * h / std::sqrt(a);
    const double log_term = 0.5 * w * (ap / a - php / ph);
    const double out = (a + ph * w * w) * bracket + log_term;
    if (!is_finite(out)) {
        std::ostringstream os;
        os << "generic_rhs: non-finite value at s = " << s << ", w = " << w;
        throw NumericalError(os.str());
    }
    return out;
}

RotatorPq rotator_pq(int n, double s, double x) {
    // q(s,x) = -s^2(s^2+1)(n s^2+1) x^3 + s^3(s^2+1) x^2 - ((n+2)s^2+2) x + s
    const double s2 = s * s;
    const double A = s2 * (s2 + 1.0) * (n * s2 + 1.0);
    const double B = s2 * s * (s2 + 1.0);
    const double C = (n + 2.0) * s2 + 2.0;
    RotatorPq out;
    out.p = s2 * s + s;
    out.p_prime = 3.0 * s2 + 1.0;
    out.q = ((-A * x + B) * x - C) * x + s;
    out.q_x = (-3.0 * A * x + 2.0 * B) * x - C;
    const double dA = (6.0 * n * s2 * s2 + 4.0 * (n + 1.0) * s2 + 2.0) * s;
    const double dB = 5.0 * s2 * s2 + 3.0 * s2;
    const double dC = 2.0 * (n + 2.0) * s;
    out.q_s = ((-dA * x + dB) * x - dC) * x + 1.0;
    return out;
}

Trajectory integrate(const SubmersionProfile& profile, double s_start, double f_start,
                     double w_start, double s_end, const IntegratorOptions& opts) {
    opts.validate();
    profile.require_interior(s_start);
    if (!is_finite(f_start) || !is_finite(w_start))
        throw ValidationError("integrate: non-finite initial state");

    // The target may sit on (or past) the open boundary; clip it just inside
    // and remember that reaching the clipped target means leaving the domain.
    const double dir = (s_end >= s_start) ? 1.0 : -1.0;
    double target = s_end;
    bool boundary_limited = false;
    const double hi = profile.domain_hi(), lo = profile.domain_lo();
    if (dir > 0 && s_end >= hi) {
        target = hi - 1e-12 * (1.0 + std::abs(hi));
        boundary_limited = true;
    } else if (dir < 0 && s_end <= lo) {
        target = lo + 1e-12 * (1.0 + std::abs(lo));
        boundary_limited = true;
    }

    auto rhs = [&](double s, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[1], generic_rhs(profile, s, y[1])};
    };
    auto inspect = [&](double, const std::array<double, 2>& y,
                       const std::array<double, 2>&) -> StepDecision<2> {
        if (std::abs(y[1]) >= opts.w_blow_up_limit)
            return {StepAction::stop, Termination::blow_up};
        return {};
    };

    auto result = rk45_integrate<2>(rhs, s_start, {f_start, w_start}, target, opts, inspect);

    Trajectory traj;
    traj.profile_label = profile.label();
    traj.launch = LaunchMethod::interior;
    traj.abs_tol = opts.abs_tol;
    traj.rel_tol = opts.rel_tol;
    traj.termination = result.reason;
    if (boundary_limited && result.reason == Termination::reached_end)
        traj.termination = Termination::domain_boundary;
    traj.samples.reserve(result.t.size());
    for (std::size_t i = 0; i < result.t.size(); ++i)
        traj.samples.push_back({result.t[i], result.y[i][0], result.y[i][1]});
    if (opts.dense_output) {
        // Keep the rhs values: they are the Hermite slopes of w.
        traj.w_prime.reserve(result.t.size());
        for (std::size_t i = 0; i < result.t.size(); ++i)
            traj.w_prime.push_back(result.dy[i][1]);
    }
    return traj;
}

void ResidualReport::finalize(double threshold_in) {
    threshold = threshold_in;
    max_abs = 0.0;
    rms = 0.0;
    if (!residuals.empty() && !residuals.back().empty()) {
        const auto& fine = residuals.back();
        double sum_sq = 0.0;
        for (double r : fine) {
            max_abs = std::max(max_abs, std::abs(r));
            sum_sq += r * r;
        }
        rms = std::sqrt(sum_sq / fine.size());
    }
    if (steps.size() >= 3) {
        // Median observed order over the points, from the coarsest triple.
        std::vector<double> orders;
        const double ratio = steps[0] / steps[1];
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double o =
                observed_order(residuals[0][i], residuals[1][i], residuals[2][i], ratio);
            if (std::isfinite(o)) orders.push_back(o);
        }
        if (!orders.empty()) {
            std::sort(orders.begin(), orders.end());
            order = orders[orders.size() / 2];
        }
    }
    pass = max_abs <= threshold;
}

ResidualReport ode_residual(const SubmersionProfile& profile, const Trajectory& traj,
                            double s_lo, double s_hi, double threshold) {
    if (traj.samples.size() < 5)
        throw ValidationError("ode_residual: need at least 5 trajectory samples");
    const double lo_knot = std::min(traj.s_front(), traj.s_back());
    const double hi_knot = std::max(traj.s_front(), traj.s_back());
    double lo = std::max(s_lo, lo_knot);
    double hi = std::min(s_hi, hi_knot);
    if (!(lo < hi)) throw ValidationError("ode_residual: empty evaluation range");
    const double inset = 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
    lo += inset;
    hi -= inset;

    // Recenter f before interpolating: the second difference cancels to the
    // size of the local variation, so the knot values should not carry the
    // magnitude of f itself into the rounding error.
    std::vector<double> ks, kf, kw;
    ks.reserve(traj.samples.size());
    double f_min = 0, f_max = 0;
    bool first_in_range = true;
    for (const auto& p : traj.samples) {
        ks.push_back(p.s);
        kf.push_back(p.f);
        kw.push_back(p.w);
        if (p.s >= lo - 1e-9 && p.s <= hi + 1e-9) {
            if (first_in_range) {
                f_min = f_max = p.f;
                first_in_range = false;
            }
            f_min = std::min(f_min, p.f);
            f_max = std::max(f_max, p.f);
        }
    }
    const double f_center = 0.5 * (f_min + f_max);
    for (double& v : kf) v -= f_center;
    const CubicHermite f_interp(std::move(ks), std::move(kf), std::move(kw));

    // Resampling step: no finer than the finest in-range knot gap (differencing
    // below the knot scale only adds rounding noise), no coarser than 1/200 of
    // the range.
    double h_min = hi - lo;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        const double a = std::min(traj.samples[i].s, traj.samples[i + 1].s);
        const double b = std::max(traj.samples[i].s, traj.samples[i + 1].s);
        if (b < lo || a > hi) continue;
        h_min = std::min(h_min, b - a);
    }
    const double dx_raw = std::clamp(h_min, 2e-5, (hi - lo) / 200.0);
    std::size_t cells = static_cast<std::size_t>(std::ceil((hi - lo) / dx_raw));
    cells = std::min<std::size_t>(cells, 2000000);
    const double dx = (hi - lo) / static_cast<double>(cells);

    ResidualReport report;
    report.steps = {dx};
    report.residuals.emplace_back();
    for (std::size_t k = 1; k < cells; ++k) {
        const double s = lo + dx * static_cast<double>(k);
        if (!profile.contains(s)) continue;
        const double fm = f_interp.eval(s - dx);
        const double f0 = f_interp.eval(s);
        const double fp = f_interp.eval(s + dx);
        const double d1 = (fp - fm) / (2.0 * dx);
        const double d2 = (fp - 2.0 * f0 + fm) / (dx * dx);
        report.points.push_back(s);
        report.residuals.back().push_back(d2 - generic_rhs(profile, s, d1));
    }
    if (report.points.empty()) throw ValidationError("ode_residual: no interior grid points");
    report.finalize(threshold);
    return report;
}

ResidualReport ode_residual(const SubmersionProfile& profile, const Trajectory& traj,
                            double threshold) {
    const double lo = std::min(traj.s_front(), traj.s_back());
    const double hi = std::max(traj.s_front(), traj.s_back());
    return ode_residual(profile, traj, lo, hi, threshold);
}

CubicBounds cubic_bounds(int n, double s) {
    if (!(s > 0)) throw ValidationError("cubic_bounds: need s > 0");
    const double s2 = s * s;
    const double A = s2 * (s2 + 1.0) * (n * s2 + 1.0);
    const double B = s2 * s * (s2 + 1.0);
    const double C = (n + 2.0) * s2 + 2.0;
    const auto roots = cubic_real_roots(-A, B, -C, s);
    if (roots.empty())
        throw NumericalError("cubic_bounds: cubic root finder returned no real root");
    CubicBounds out;
    out.x_plus = roots.back();
    out.x_minus = std::min(0.0, roots.front());
    if (!(out.x_plus > 0))
        throw NumericalError("cubic_bounds: expected positive extreme root (q(s,0) = s > 0)");
    return out;
}

}  // namespace solitons
