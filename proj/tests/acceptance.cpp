// Acceptance suite: every release criterion in one binary, one line each.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "solitons/geometry.hpp"
#include "solitons/io.hpp"
#include "solitons/ode.hpp"
#include "solitons/phase.hpp"
#include "solitons/profiles.hpp"
#include "solitons/singular.hpp"
#include "solitons/verify.hpp"

using namespace solitons;

namespace {

struct Criterion {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " !! " << what;
        }
    }
};

double rotator_rhs_closed_form(int n, double s, double w) {
    const double s2 = s * s;
    return (((s2 * s2 + s2) * w * w + 1) * (s - (n * s2 + 1) * w) - (2 * s2 + 1) * w) /
           (s * (1 + s2));
}
double translator_rhs_closed_form(int n, double s, double w) {
    return (w * w + 1) * (n * s * w + 1) / (s * s);
}
double dilation_rhs_closed_form(int n, double s, double w) {
    const double s2 = s * s;
    return ((s2 - (s2 - 1) * w * w) * (((2 * n - 3) * s2 + 1) * w + s) + s2 * w) /
           (s2 * s * (1 - s2));
}

void criterion_equivalence(Criterion& c) {
    Rng rng(kDefaultSeed);
    double worst = 0.0, worst_pq = 0.0;
    for (int n : {2, 3, 5}) {
        const auto rot = rotator_profile(n);
        const auto tr = translator_profile(n);
        const auto dil = dilation_profile(n);
        for (int k = 0; k < 1000; ++k) {
            const double w = rng.uniform(-10.0, 10.0);
            double s = rng.uniform(1e-3, 20.0);
            double printed = rotator_rhs_closed_form(n, s, w);
            worst = std::max(worst, std::abs(generic_rhs(rot, s, w) - printed) /
                                        (1 + std::abs(printed)));
            const auto pq = rotator_pq(n, s, w);
            worst_pq = std::max(worst_pq, std::abs(generic_rhs(rot, s, w) * pq.p - pq.q) /
                                              (1 + std::abs(pq.q)));
            printed = translator_rhs_closed_form(n, s, w);
            worst = std::max(worst, std::abs(generic_rhs(tr, s, w) - printed) /
                                        (1 + std::abs(printed)));
            s = rng.uniform(1e-3, 1 - 1e-3);
            printed = dilation_rhs_closed_form(n, s, w);
            worst = std::max(worst, std::abs(generic_rhs(dil, s, w) - printed) /
                                        (1 + std::abs(printed)));
        }
    }
    c.detail << "max relative deviation " << worst << ", rhs*p-q deviation " << worst_pq;
    c.expect(worst <= 1e-12, "printed-form deviation exceeds 1e-12");
    c.expect(worst_pq <= 1e-12, "planar-system deviation exceeds 1e-12");
}

void criterion_bowl_launch(Criterion& c) {
    for (int n : {2, 3, 5}) {
        std::vector<double> ratios;
        for (double eps : {1e-3, 1e-4, 1e-5}) {
            const auto traj = bowl_launch(n, 0.0, 1.0, {}, eps);
            const auto w = traj.w_interpolant(rotator_profile(n));
            ratios.push_back(w.eval(10 * eps) / (10 * eps));
        }
        const double limit = richardson_extrapolate(ratios, 100.0, 1.0);
        c.detail << "n=" << n << ": c1=" << limit << "  ";
        c.expect(std::abs(limit - 1.0 / 3.0) <= 1e-4, "slope coefficient is off for this n");
    }
    // Series launch against the saddle-manifold launch at s = 1.
    const auto series = bowl_launch(2, 0.0, 2.0);
    const auto w_series = series.w_interpolant(rotator_profile(2));
    const auto field = rotator_phase_field(2);
    const auto eqs = find_equilibria(field, {-0.5, 0.5, -1.0, 1.0}, 64);
    c.expect(eqs.size() == 1, "expected a unique equilibrium");
    IntegratorOptions opts;
    opts.max_step = 1e-4;
    const auto curve = manifold_launch(field, eqs[0], ManifoldKind::unstable, +1, 1e-6, 25.0,
                                       opts);
    const auto manifold =
        curve_to_solution(curve, field, curve.point[0][0], 0.0, ProfileFamily::rotation);
    const auto w_manifold = manifold.w_interpolant(rotator_profile(2));
    const double gap = std::abs(w_series.eval(1.0) - w_manifold.eval(1.0));
    c.detail << "series-vs-manifold |dw(1)|=" << gap;
    c.expect(gap <= 1e-6, "series and manifold launches disagree at s=1");
}

void criterion_saddle(Criterion& c) {
    const auto field = rotator_phase_field(2);
    const auto eqs = find_equilibria(field, {-0.5, 0.5, -1.0, 1.0}, 64);
    c.expect(eqs.size() == 1, "expected exactly one equilibrium");
    if (eqs.size() != 1) return;
    const auto& eq = eqs[0];
    c.detail << "at (" << eq.s0 << ", " << eq.x0 << "), eigenvalues {" << eq.eigenvalues[0]
             << ", " << eq.eigenvalues[1] << "}, product " << eq.eigenvalues[0] * eq.eigenvalues[1];
    c.expect(std::abs(eq.s0) <= 1e-10 && std::abs(eq.x0) <= 1e-10, "equilibrium not at (0,0)");
    c.expect(eq.eigenvalues[0] == 1.0 && eq.eigenvalues[1] == -2.0,
             "eigenvalues are not exactly {1, -2}");
    c.expect(eq.eigenvalues[0] * eq.eigenvalues[1] == -2.0, "admissibility product is not -2");
    c.expect(eq.admissible_saddle, "saddle not admissible");
    c.expect(eq.eigenvectors[1][0] == 0.0 && eq.eigenvectors[1][1] == 1.0,
             "stable direction is not (0,1)");
}

void criterion_extension(Criterion& c) {
    const auto traj = bowl_launch(2, 0.0, 100.0);
    c.detail << "termination " << to_string(traj.termination) << " at s=" << traj.s_back();
    c.expect(traj.termination == Termination::reached_end, "bowl did not reach s=100");
    std::size_t checked = 0, inside = 0;
    double crossing = -1.0, worst = 0.0, lag_end = 0.0;
    for (const auto& p : traj.samples) {
        if (p.s < 1.0) continue;
        const auto b = cubic_bounds(2, p.s);
        ++checked;
        const bool in = (p.w >= b.x_minus && p.w <= b.x_plus);
        inside += in;
        if (!in) {
            if (crossing < 0) crossing = p.s;
            worst = std::max(worst, (p.w - b.x_plus) / b.x_plus);
            lag_end = (p.w - b.x_plus) * p.s * p.s * p.s;
        }
    }
    c.detail << ", " << inside << "/" << checked << " samples inside [x-, x+]";
    if (inside != checked)
        c.detail << "; the exact solution leaves the root interval at s=" << crossing
                 << " (relative overshoot up to " << worst << ", (w-x+)*s^3 -> " << lag_end
                 << "): x+ decreases and the solution tracks it from above, so the stated"
                 << " pointwise bracket cannot hold for any integrator";
    c.expect(checked > 0 && inside == checked, "a sample escaped the cubic bounds");
}

void criterion_wing(Criterion& c) {
    struct Case {
        int n;
        double s0;
    };
    for (const Case cs : {Case{2, 0.5}, Case{2, 1.0}, Case{3, 2.0}}) {
        const auto curve = wing_launch(cs.n, cs.s0, 0.0, 20.0);
        std::vector<double> r, g, gp;
        for (const auto& a : curve.gamma_arc) {
            r.push_back(a[0]);
            g.push_back(a[1]);
            gp.push_back(a[2]);
        }
        const CubicHermite gamma(r, g, gp);
        std::vector<double> fd_ladder;
        for (double d : {2e-3, 1e-3, 5e-4})
            fd_ladder.push_back((gamma.eval(d) - 2 * gamma.eval(0.0) + gamma.eval(-d)) / (d * d));
        const double fd = richardson_extrapolate(fd_ladder, 2.0, 2.0);
        const double expected = wing_gamma_rhs(cs.n, cs.s0, 0.0);
        c.detail << "(n=" << cs.n << ",s0=" << cs.s0 << "): gamma''=" << fd << " vs " << expected
                 << "  ";
        c.expect(rel_err(fd, expected) <= 1e-6, "vertex curvature mismatch");
        c.expect(curve.branch_plus.termination == Termination::reached_end &&
                     curve.branch_plus.s_back() >= 20.0 - 1e-9,
                 "plus branch fell short of s_max");
        c.expect(curve.branch_minus.termination == Termination::reached_end &&
                     curve.branch_minus.s_back() >= 20.0 - 1e-9,
                 "minus branch fell short of s_max");
        try {
            const auto glued = glue_wing(curve, 1e-6);  // validates C0/C1 at the handoffs
            c.expect(glued.points[glued.vertex_index].first == cs.s0,
                     "glued traversal vertex is off");
        } catch (const std::exception& e) {
            c.expect(false, std::string("glue failed: ") + e.what());
        }
    }
}

void criterion_extrinsic(Criterion& c) {
    SolitonVerifyConfig cfg;  // points {0.2, 0.5, 1, 2}, steps {4e-3, 2e-3, 1e-3}
    const auto bowl = bowl_launch(2, 0.0, 5.0);
    const auto bowl_rep = rotator_soliton_report(bowl, 2, cfg);
    c.detail << "bowl max " << bowl_rep.max_abs << " order "
             << (bowl_rep.order ? *bowl_rep.order : -1.0);
    c.expect(bowl_rep.points.size() == 4, "bowl: not all points evaluated");
    c.expect(bowl_rep.max_abs <= 1e-4, "bowl residual above 1e-4");
    c.expect(bowl_rep.order && std::abs(*bowl_rep.order - 2.0) <= 0.3, "bowl order not 2 +- 0.3");

    const auto wing = wing_launch(2, 0.1, 0.0, 20.0);
    int tag = 0;
    for (const auto* branch : {&wing.branch_plus, &wing.branch_minus}) {
        const auto rep = rotator_soliton_report(*branch, 2, cfg);
        c.detail << (tag++ == 0 ? "; wing+ max " : "; wing- max ") << rep.max_abs << " order "
                 << (rep.order ? *rep.order : -1.0);
        c.expect(rep.points.size() == 4, "wing: not all points evaluated");
        c.expect(rep.max_abs <= 1e-4, "wing residual above 1e-4");
        c.expect(rep.order && std::abs(*rep.order - 2.0) <= 0.3, "wing order not 2 +- 0.3");
    }

    const auto control = control_plane_report(2, cfg);
    double at_one = 0.0;
    for (std::size_t i = 0; i < control.points.size(); ++i)
        if (std::abs(control.points[i] - 1.0) < 1e-12) at_one = control.residuals.back()[i];
    c.detail << "; control residual at s=1: " << at_one;
    c.expect(at_one > 0.1, "non-solution control did not fail the identity");
}

void criterion_appendix_b(Criterion& c) {
    // |grad pi|^2 on seeded fibre points.
    Rng rng(kDefaultSeed);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double s = rng.uniform(0.05, 5.0);
        const double x1 = rng.uniform(0.1, 10.0);
        Vec y{x1, rng.uniform(-5.0, 5.0), s * x1};
        worst = std::max(worst, std::abs(grad_pi_norm_sq(y) - (1 + s * s)));
    }
    c.detail << "grad-pi max err " << worst;
    c.expect(worst <= 1e-10, "grad pi norm mismatch");

    struct Case {
        int n;
        double s;
    };
    for (const Case cs : {Case{2, 1.0}, Case{3, 0.1}, Case{5, 2.0}}) {
        std::vector<double> ladder;
        for (double st : {1e-2, 5e-3, 2.5e-3})
            ladder.push_back(fiber_check(cs.n, cs.s, st).h_numeric);
        const double h = richardson_extrapolate(ladder, 2.0, 2.0);
        const double formula = (cs.n - 1) * cs.s / std::sqrt(1 + cs.s * cs.s);
        c.expect(rel_err(h, formula) <= 1e-6, "fibre mean curvature mismatch");
    }
    c.detail << "; fibre h ok";

    // Killing identity defect: second order for every family.
    for (KillingFamily fam :
         {KillingFamily::rotation, KillingFamily::translation, KillingFamily::dilation}) {
        const AmbientModel model{3, fam};
        double worst_fine = 0.0;
        bool order_ok = true;
        for (int trial = 0; trial < 6; ++trial) {
            Vec x{rng.uniform(0.5, 3.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            Vec X{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            Vec Y{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const double d1 = killing_defect_fd(model, x, X, Y, 4e-3);
            const double d3 = killing_defect_fd(model, x, X, Y, 1e-3);
            worst_fine = std::max(worst_fine, std::abs(d3));
            if (std::abs(d1) > 1e-12 && std::abs(d3) > 1e-14) {
                const double direct = std::log(std::abs(d1 / d3)) / std::log(4.0);
                order_ok = order_ok && direct > 1.7 && direct < 2.3;
            }
        }
        c.detail << "; " << to_string(fam) << " defect " << worst_fine;
        c.expect(worst_fine <= 1e-5, "Killing defect too large at the finest step");
        c.expect(order_ok, "Killing defect does not decay at order 2");
    }
}

void criterion_residuals(Criterion& c) {
    struct Emitted {
        std::string name;
        Trajectory traj;
        SubmersionProfile profile;
        double lo, hi;
    };
    std::vector<Emitted> set;

    set.push_back({"bowl n=2", bowl_launch(2, 0.0, 5.0), rotator_profile(2), 0.1, 5.0});
    set.push_back({"bowl n=3", bowl_launch(3, 0.0, 5.0), rotator_profile(3), 0.1, 5.0});

    const auto wing = wing_launch(2, 1.0, 0.0, 20.0);
    set.push_back({"wing+ n=2", wing.branch_plus, rotator_profile(2), 1.1, 20.0});
    set.push_back({"wing- n=2", wing.branch_minus, rotator_profile(2), 1.1, 20.0});

    // The fourth s-derivative of these runs grows like the inverse fourth
    // power of the distance to the steep end, so their dense output needs a
    // tighter sampling cap for the residual floor to sit below 1e-6.
    IntegratorOptions steep_opts;
    steep_opts.max_step = 5e-5;
    set.push_back({"translator n=2", integrate(translator_profile(2), 1.0, 0.0, 0.0, 0.3,
                                               steep_opts),
                   translator_profile(2), 0.3, 1.0});
    set.push_back({"dilation n=2", integrate(dilation_profile(2), 0.5, 0.0, 0.0, 0.7, steep_opts),
                   dilation_profile(2), 0.5, 0.7});

    ProfileSpec flat;
    flat.n = 2;
    flat.domain_lo = 0.0;
    flat.domain_hi = 10.0;
    flat.alpha.expression = "1";
    flat.phi_hat.expression = "1";
    flat.h.expression = "0";
    const auto flat_profile = custom_profile(flat);
    set.push_back({"flat custom", integrate(flat_profile, 5.0, 0.0, 0.0, 6.0), flat_profile, 5.0,
                   6.0});

    for (const auto& e : set) {
        c.expect(e.traj.termination == Termination::reached_end,
                 e.name + " did not reach its target");
        const auto rep = ode_residual(e.profile, e.traj, e.lo, e.hi);
        c.detail << e.name << " " << rep.max_abs << "; ";
        c.expect(rep.max_abs < 1e-6, e.name + " residual at or above 1e-6");
    }
}

void criterion_shapes(Criterion& c) {
    const auto bowl = bowl_launch(2, 0.0, 5.0);
    c.expect(bowl.samples.front().w == 0.0, "bowl w(0) != 0");
    bool positive = true;
    for (std::size_t i = 1; i < bowl.samples.size(); ++i) positive &= bowl.samples[i].w > 0.0;
    c.expect(positive, "bowl slope lost positivity");
    c.expect(bowl.samples[1].w < 1e-3, "bowl slope does not vanish toward s=0");

    const auto wing = wing_launch(2, 1.0, 0.0, 6.0);
    c.expect(std::abs(wing.branch_plus.samples.front().w) > 1.0,
             "plus branch does not steepen at the vertex");
    c.expect(std::abs(wing.branch_minus.samples.front().w) > 1.0,
             "minus branch does not steepen at the vertex");
    c.expect(wing.branch_plus.samples.front().w > wing.branch_plus.samples[10].w,
             "plus branch slope should decrease away from the vertex");

    const auto pts = embed_rotator_curve(bowl);
    const auto svg1 = curve_svg(pts);
    const auto svg2 = curve_svg(pts);
    c.expect(svg1 == svg2, "curve SVG is not byte-deterministic");
    const auto glued = glue_wing(wing);
    c.expect(curve_svg(embed_rotator_curve(glued.points)) ==
                 curve_svg(embed_rotator_curve(glued.points)),
             "wing SVG is not byte-deterministic");
    c.expect(trajectory_csv(bowl) == trajectory_csv(bowl), "CSV is not byte-deterministic");

    const auto field = rotator_phase_field(2);
    const Box box{-0.5, 5.0, -2.0, 2.0};
    const auto eqs = find_equilibria(field, box, 64);
    c.expect(phase_portrait_svg(field, box, eqs, {}) == phase_portrait_svg(field, box, eqs, {}),
             "portrait SVG is not byte-deterministic");
    c.detail << "bowl and wing shapes, SVG/CSV determinism";
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<void(Criterion&)> run;
    };
    const std::vector<Entry> entries = {
        {"1. reduced equation matches the published family ODEs", criterion_equivalence},
        {"2. bowl launch: slope 1/3 and manifold cross-check", criterion_bowl_launch},
        {"3. saddle structure at the origin", criterion_saddle},
        {"4. extension to s=100 within the cubic bounds", criterion_extension},
        {"5. wing vertex curvature, reach, and gluing", criterion_wing},
        {"6. extrinsic soliton verification H = g(K, nu)", criterion_extrinsic},
        {"7. half-space geometry: grad pi, fibre h, Killing identity", criterion_appendix_b},
        {"8. emitted trajectories keep FD residual below 1e-6", criterion_residuals},
        {"9. figure shapes and deterministic artifacts", criterion_shapes},
    };

    int failures = 0;
    for (const auto& entry : entries) {
        Criterion c;
        try {
            entry.run(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail << " !! exception: " << e.what();
        }
        std::printf("[%s] %s  (%s)\n", c.ok ? "PASS" : "FAIL", entry.name,
                    c.detail.str().c_str());
        failures += c.ok ? 0 : 1;
    }
    std::printf("%zu/%zu acceptance criteria passed\n", entries.size() - failures,
                entries.size());
    return failures == 0 ? 0 : 1;
}
