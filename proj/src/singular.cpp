#include "solitons/singular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace solitons {

Trajectory bowl_launch(int n, double f0, double s_max, const IntegratorOptions& opts, double eps) {
    if (n < 2) throw ValidationError("bowl_launch: n must be >= 2");
    if (!(eps > 0)) throw ValidationError("bowl_launch: eps must be positive");
    if (!(s_max > eps)) throw ValidationError("bowl_launch: s_max must exceed the series start");

    const SubmersionProfile profile = rotator_profile(n);
    Trajectory traj = integrate(profile, eps, f0 + eps * eps / 6.0, eps / 3.0, s_max, opts);
    if (traj.termination != Termination::reached_end) {
        std::ostringstream os;
        os << "bowl_launch: integration stopped with reason " << to_string(traj.termination)
           << " at s = " << traj.s_back() << " before s_max = " << s_max;
        throw NumericalError(os.str());
    }
    traj.launch = LaunchMethod::series;
    traj.samples.insert(traj.samples.begin(), {0.0, f0, 0.0});
    traj.w_prime.insert(traj.w_prime.begin(), 1.0 / 3.0);
    return traj;
}

double wing_gamma_rhs(int n, double gamma, double gamma_prime) {
    if (!(gamma > 0)) throw ValidationError("wing_gamma_rhs: gamma must be positive");
    const double g2 = gamma * gamma;
    const double gp2 = gamma_prime * gamma_prime;
    const double num = (2.0 * g2 + 1.0) * gp2 -
                       (g2 * g2 + g2 + gp2) * (gamma * gamma_prime - n * g2 - 1.0);
    return num / (g2 * gamma + gamma);
}

namespace {

struct ArcHalf {
    // Samples in integration order, starting just after the vertex.
    std::vector<std::array<double, 3>> samples;  // (r, gamma, gamma')
    std::size_t switch_index = 0;                // first sample with |gamma'| >= delta
};

// Integrates the inverse-function arc from (s0, 0) in one r-direction until
// |gamma'| passes delta * grace; the handoff happens at the delta crossing,
// the rest of the arc is kept for cross-chart checks.
ArcHalf integrate_arc_half(int n, double s0, double r0, double direction, double delta,
                           IntegratorOptions opts) {
    // The inverted arc supplies the trajectory samples next to the vertex,
    // where the s-chart derivatives are largest; sampling it finely (the
    // s-spacing of inverted samples is |gamma'| dr) keeps the dense output
    // usable for residual checks there.
    opts.max_step = std::min(opts.max_step, 5e-5);
    const double gpp0 = wing_gamma_rhs(n, s0, 0.0);
    const double horizon = r0 + direction * std::max(50.0, 50.0 / gpp0);
    const double grace = 1.2;
    bool hit_zero = false;

    auto rhs = [n](double, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[1], wing_gamma_rhs(n, y[0], y[1])};
    };
    auto inspect = [&](double, const std::array<double, 2>& y,
                       const std::array<double, 2>&) -> StepDecision<2> {
        if (y[0] <= 1e-12) {
            hit_zero = true;
            return {StepAction::stop, Termination::domain_boundary};
        }
        if (std::abs(y[1]) >= grace * delta) return {StepAction::stop, Termination::reached_end};
        return {};
    };
    auto res = rk45_integrate<2>(rhs, r0, {s0, 0.0}, horizon, opts, inspect);
    if (hit_zero) {
        std::ostringstream os;
        os << "wing_launch: gamma reached 0 before |gamma'| reached the handoff value "
           << delta << " (degenerate s0 = " << s0 << ")";
        throw ValidationError(os.str());
    }
    if (res.t.size() < 4 || std::abs(res.y.back()[1]) < delta)
        throw NumericalError("wing_launch: arc integration ended before the handoff");

    ArcHalf out;
    out.samples.reserve(res.t.size() - 1);
    for (std::size_t i = 1; i < res.t.size(); ++i)
        out.samples.push_back({res.t[i], res.y[i][0], res.y[i][1]});
    out.switch_index = out.samples.size() - 1;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        if (std::abs(out.samples[i][2]) >= delta) {
            out.switch_index = i;
            break;
        }
    }
    return out;
}

// Branch trajectory: the inverted arc up to the handoff, then the continued
// (f, w) integration to s_max. The continuation keeps a tighter step cap
// while the solution is still steep, then relaxes to the caller's cap.
Trajectory build_branch(const SubmersionProfile& profile, const ArcHalf& arc, double s0,
                        double s_max, const IntegratorOptions& opts) {
    Trajectory traj;
    traj.profile_label = profile.label();
    traj.launch = LaunchMethod::inverse_branch;
    traj.abs_tol = opts.abs_tol;
    traj.rel_tol = opts.rel_tol;
    for (std::size_t i = 0; i <= arc.switch_index; ++i) {
        const auto& a = arc.samples[i];
        const double w = 1.0 / a[2];
        traj.samples.push_back({a[1], a[0], w});
        traj.w_prime.push_back(generic_rhs(profile, a[1], w));
    }
    traj.termination = Termination::reached_end;

    auto continue_to = [&](double target, const IntegratorOptions& leg_opts) {
        const auto& sw = traj.samples.back();
        if (sw.s >= target) return;
        Trajectory cont = integrate(profile, sw.s, sw.f, sw.w, target, leg_opts);
        for (std::size_t i = 1; i < cont.samples.size(); ++i) {
            traj.samples.push_back(cont.samples[i]);
            traj.w_prime.push_back(cont.w_prime[i]);
        }
        traj.termination = cont.termination;
    };
    IntegratorOptions near_opts = opts;
    near_opts.max_step = std::min(opts.max_step, 1e-4);
    continue_to(std::min(s0 + 1.0, s_max), near_opts);
    if (traj.termination == Termination::reached_end) continue_to(s_max, opts);
    return traj;
}

}  // namespace

WingCurve wing_launch(int n, double s0, double r0, double s_max, const IntegratorOptions& opts,
                      double delta_switch) {
    if (n < 2) throw ValidationError("wing_launch: n must be >= 2");
    if (!(s0 > 0)) throw ValidationError("wing_launch: s0 must be positive");
    if (!(s_max > s0)) throw ValidationError("wing_launch: s_max must exceed s0");
    if (!(delta_switch > 0)) throw ValidationError("wing_launch: delta_switch must be positive");

    const SubmersionProfile profile = rotator_profile(n);
    // gamma is convex at the vertex, so gamma' > 0 for r > r0 (the w > 0
    // branch) and gamma' < 0 for r < r0.
    ArcHalf plus = integrate_arc_half(n, s0, r0, +1.0, delta_switch, opts);
    ArcHalf minus = integrate_arc_half(n, s0, r0, -1.0, delta_switch, opts);

    WingCurve curve;
    curve.n = n;
    curve.s0 = s0;
    curve.r0 = r0;
    curve.branch_plus = build_branch(profile, plus, s0, s_max, opts);
    curve.branch_minus = build_branch(profile, minus, s0, s_max, opts);

    // Assemble the arc ordered by increasing r: minus half reversed, the
    // exact vertex, then the plus half.
    curve.gamma_arc.reserve(minus.samples.size() + plus.samples.size() + 1);
    for (std::size_t i = minus.samples.size(); i > 0; --i)
        curve.gamma_arc.push_back(minus.samples[i - 1]);
    curve.vertex_index = curve.gamma_arc.size();
    curve.gamma_arc.push_back({r0, s0, 0.0});
    const std::size_t plus_offset = curve.gamma_arc.size();
    for (const auto& a : plus.samples) curve.gamma_arc.push_back(a);
    curve.switch_minus_index = minus.samples.size() - 1 - minus.switch_index;
    curve.switch_plus_index = plus_offset + plus.switch_index;

    if (!(curve.branch_plus.samples.front().w > 0))
        throw NumericalError("wing_launch: plus branch does not start with w > 0");
    if (!(curve.branch_minus.samples.front().w < 0))
        throw NumericalError("wing_launch: minus branch does not start with w < 0");
    return curve;
}

namespace {

// Unit tangent of the wing traversal in the (s, f) plane. Arc samples carry
// (gamma', 1) d r; branch samples carry (1, w) ds. Orientation follows the
// traversal direction.
std::array<double, 2> unit2(double a, double b) {
    const double h = std::hypot(a, b);
    return {a / h, b / h};
}

void require_close(const std::array<double, 2>& a, const std::array<double, 2>& b, double tol,
                   const char* where) {
    const double d = std::hypot(a[0] - b[0], a[1] - b[1]);
    if (d > tol) {
        std::ostringstream os;
        os << "glue_wing: " << where << " tangent mismatch " << d << " exceeds tolerance " << tol;
        throw ValidationError(os.str());
    }
}

}  // namespace

GluedWing glue_wing(const WingCurve& curve, double tol) {
    const auto& arc = curve.gamma_arc;
    if (arc.empty() || curve.branch_plus.samples.empty() || curve.branch_minus.samples.empty())
        throw ValidationError("glue_wing: incomplete wing curve");

    // Cross-chart consistency where the charts overlap: the grace samples of
    // the arc beyond each handoff must match the branch's dense output.
    const SubmersionProfile profile = rotator_profile(curve.n);
    auto check_overlap = [&](const Trajectory& branch, std::size_t switch_idx, bool plus_side) {
        const CubicHermite f_of_s = branch.f_interpolant();
        const CubicHermite w_of_s = branch.w_interpolant(profile);
        const std::size_t lo = plus_side ? switch_idx : 0;
        const std::size_t hi = plus_side ? arc.size() : switch_idx + 1;
        for (std::size_t i = lo; i < hi; ++i) {
            const double r = arc[i][0], g = arc[i][1], gp = arc[i][2];
            if (g < std::min(f_of_s.x_front(), f_of_s.x_back()) ||
                g > std::max(f_of_s.x_front(), f_of_s.x_back()))
                continue;
            if (std::abs(f_of_s.eval(g) - r) > tol) {
                std::ostringstream os;
                os << "glue_wing: charts disagree on f at s = " << g;
                throw ValidationError(os.str());
            }
            // Tangents toward increasing s: (1, w) ds in the branch chart,
            // (gamma', 1) dr oriented by sign(gamma') in the arc chart.
            const double w = w_of_s.eval(g);
            const double sgn = (gp >= 0) ? 1.0 : -1.0;
            require_close(unit2(1.0, w), unit2(sgn * gp, sgn), tol,
                          plus_side ? "plus handoff" : "minus handoff");
        }
    };
    check_overlap(curve.branch_plus, curve.switch_plus_index, true);
    check_overlap(curve.branch_minus, curve.switch_minus_index, false);

    GluedWing glued;
    // branch_minus from s_max down to its handoff. The branch's first
    // switch-side samples coincide with arc samples; cut at the handoff s.
    const double s_sw_minus = arc[curve.switch_minus_index][1];
    const double s_sw_plus = arc[curve.switch_plus_index][1];
    const auto& bm = curve.branch_minus.samples;
    for (std::size_t i = bm.size(); i > 0; --i)
        if (bm[i - 1].s > s_sw_minus) glued.points.emplace_back(bm[i - 1].s, bm[i - 1].f);
    for (std::size_t i = curve.switch_minus_index; i <= curve.switch_plus_index; ++i) {
        if (i == curve.vertex_index) glued.vertex_index = glued.points.size();
        glued.points.emplace_back(arc[i][1], arc[i][0]);
    }
    const auto& bp = curve.branch_plus.samples;
    for (const auto& p : bp)
        if (p.s > s_sw_plus) glued.points.emplace_back(p.s, p.f);
    return glued;
}

}  // namespace solitons
