#include "solitons/phase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace solitons {

PhaseField rotator_phase_field(int n) {
    if (n < 2) throw ValidationError("rotator_phase_field: n must be >= 2");
    PhaseField f;
    f.p = [](double s) { return s * s * s + s; };
    f.p_prime = [](double s) { return 3.0 * s * s + 1.0; };
    f.q = [n](double s, double x) { return rotator_pq(n, s, x).q; };
    f.q_s = [n](double s, double x) { return rotator_pq(n, s, x).q_s; };
    f.q_x = [n](double s, double x) { return rotator_pq(n, s, x).q_x; };
    return f;
}

namespace {

double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw NumericalError("bisect: no sign change");
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0 || 0.5 * (b - a) < 1e-15 * (1.0 + std::abs(m))) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

Equilibrium linearize(const PhaseField& field, double s0, double x0) {
    Equilibrium eq;
    eq.s0 = s0;
    eq.x0 = x0;
    const double a = field.p_prime(s0);
    const double c = field.q_s(s0, x0);
    const double d = field.q_x(s0, x0);
    eq.jacobian = {{{a, 0.0}, {c, d}}};
    eq.eigenvalues = {a, d};
    // Triangular structure: eigenvector for a is (a-d, c) up to scale, the
    // one for d is (0, 1).
    auto unit = [](double u, double v) -> std::array<double, 2> {
        const double norm = std::hypot(u, v);
        if (norm == 0.0) return {1.0, 0.0};
        return {u / norm, v / norm};
    };
    eq.eigenvectors[0] = (a == d && c == 0.0) ? unit(1.0, 0.0) : unit(a - d, c);
    eq.eigenvectors[1] = {0.0, 1.0};
    eq.admissible_saddle = a * d < 0.0;
    return eq;
}

}  // namespace

std::vector<Equilibrium> find_equilibria(const PhaseField& field, const Box& box, int grid) {
    if (grid < 2) throw ValidationError("find_equilibria: grid must be >= 2");
    if (!(box.s_lo < box.s_hi) || !(box.x_lo < box.x_hi))
        throw ValidationError("find_equilibria: degenerate box");

    std::vector<double> s_roots;
    const double ds = (box.s_hi - box.s_lo) / grid;
    for (int i = 0; i < grid; ++i) {
        const double a = box.s_lo + i * ds, b = a + ds;
        const double fa = field.p(a), fb = field.p(b);
        if (fa == 0.0) s_roots.push_back(a);
        if ((fa > 0) != (fb > 0) && fa != 0.0 && fb != 0.0)
            s_roots.push_back(bisect(field.p, a, b));
    }
    if (field.p(box.s_hi) == 0.0) s_roots.push_back(box.s_hi);

    std::vector<Equilibrium> out;
    const double dx = (box.x_hi - box.x_lo) / grid;
    for (double s0 : s_roots) {
        auto qs = [&](double x) { return field.q(s0, x); };
        std::vector<double> x_roots;
        for (int j = 0; j < grid; ++j) {
            const double a = box.x_lo + j * dx, b = a + dx;
            const double fa = qs(a), fb = qs(b);
            if (fa == 0.0) x_roots.push_back(a);
            if ((fa > 0) != (fb > 0) && fa != 0.0 && fb != 0.0) x_roots.push_back(bisect(qs, a, b));
        }
        if (qs(box.x_hi) == 0.0) x_roots.push_back(box.x_hi);

        for (double x0 : x_roots) {
            // Newton polish on the pair; the Jacobian is triangular.
            double s = s0, x = x0;
            for (int it = 0; it < 50; ++it) {
                const double pv = field.p(s), qv = field.q(s, x);
                if (std::abs(pv) <= 1e-13 && std::abs(qv) <= 1e-13) break;
                const double pp = field.p_prime(s);
                const double qx = field.q_x(s, x);
                if (pp == 0.0 || qx == 0.0) break;
                const double step_s = pv / pp;
                s -= step_s;
                x -= (field.q(s, x)) / qx;
            }
            if (std::abs(field.p(s)) > 1e-12 || std::abs(field.q(s, x)) > 1e-12) continue;
            bool dup = false;
            for (const auto& e : out)
                dup = dup || (std::abs(e.s0 - s) < 1e-8 * (1 + std::abs(s)) &&
                              std::abs(e.x0 - x) < 1e-8 * (1 + std::abs(x)));
            if (!dup) out.push_back(linearize(field, s, x));
        }
    }
    std::sort(out.begin(), out.end(), [](const Equilibrium& a, const Equilibrium& b) {
        return a.s0 != b.s0 ? a.s0 < b.s0 : a.x0 < b.x0;
    });
    return out;
}

bool admissible_saddle(const Equilibrium& eq) {
    return eq.jacobian[0][0] * eq.jacobian[1][1] < 0.0;
}

IntegralCurve manifold_launch(const PhaseField& field, const Equilibrium& eq, ManifoldKind which,
                              int side, double offset, double arc_length_max,
                              const IntegratorOptions& opts) {
    if (!admissible_saddle(eq))
        throw ValidationError("manifold_launch: equilibrium is not an admissible saddle");
    if (!(offset > 0)) throw ValidationError("manifold_launch: offset must be positive");
    if (side != 1 && side != -1) throw ValidationError("manifold_launch: side must be +1 or -1");
    if (!(arc_length_max > 0)) throw ValidationError("manifold_launch: arc_length_max must be > 0");

    const bool want_positive = (which == ManifoldKind::unstable);
    int idx = -1;
    for (int i = 0; i < 2; ++i)
        if ((eq.eigenvalues[i] > 0) == want_positive && eq.eigenvalues[i] != 0.0) idx = i;
    if (idx < 0) throw NumericalError("manifold_launch: no eigenvalue of the requested sign");
    const auto v = eq.eigenvectors[idx];
    if (std::hypot(v[0], v[1]) < 0.5)
        throw NumericalError("manifold_launch: degenerate eigenvector");

    const double flow_sign = want_positive ? 1.0 : -1.0;  // stable: reverse time
    const std::array<double, 3> y0 = {eq.s0 + side * offset * v[0], eq.x0 + side * offset * v[1],
                                      0.0};
    auto rhs = [&](double, const std::array<double, 3>& y) {
        const double ps = field.p(y[0]);
        const double qs = field.q(y[0], y[1]);
        return std::array<double, 3>{flow_sign * ps, flow_sign * qs, std::hypot(ps, qs)};
    };
    auto inspect = [&](double, const std::array<double, 3>& y,
                       const std::array<double, 3>&) -> StepDecision<3> {
        if (y[2] >= arc_length_max) return {StepAction::stop, Termination::reached_end};
        if (y[0] <= field.s_lo || y[0] >= field.s_hi || y[1] <= field.x_lo || y[1] >= field.x_hi)
            return {StepAction::stop, Termination::domain_boundary};
        if (std::abs(y[0]) >= opts.w_blow_up_limit || std::abs(y[1]) >= opts.w_blow_up_limit)
            return {StepAction::stop, Termination::blow_up};
        return {};
    };
    // Generous parameter horizon; the arc-length event is the real stop.
    auto res = rk45_integrate<3>(rhs, 0.0, y0, 1e6, opts, inspect);

    IntegralCurve curve;
    curve.termination = res.reason;
    curve.r = res.t;
    curve.point.reserve(res.y.size());
    curve.tangent.reserve(res.y.size());
    for (std::size_t i = 0; i < res.y.size(); ++i) {
        curve.point.push_back({res.y[i][0], res.y[i][1]});
        curve.tangent.push_back({res.dy[i][0], res.dy[i][1]});
    }
    return curve;
}

Trajectory curve_to_solution(const IntegralCurve& curve, const PhaseField& field, double anchor_s,
                             double anchor_f, ProfileFamily label) {
    const std::size_t m = curve.point.size();
    if (m < 2) throw ValidationError("curve_to_solution: need at least 2 curve samples");
    const bool up = curve.point[1][0] > curve.point[0][0];
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double a = curve.point[i][0], b = curve.point[i + 1][0];
        if (b == a || (b > a) != up) {
            std::ostringstream os;
            os << "curve_to_solution: s is not strictly monotone along the curve (fold at index "
               << i + 1 << ")";
            throw ValidationError(os.str());
        }
    }

    // w(s) by cubic interpolation with the exact slopes dw/ds = q/p that the
    // field supplies along the curve.
    std::vector<double> s(m), w(m), slope(m);
    for (std::size_t i = 0; i < m; ++i) {
        s[i] = curve.point[i][0];
        w[i] = curve.point[i][1];
        const double ps = field.p(s[i]);
        if (ps == 0.0)
            throw ValidationError("curve_to_solution: p vanishes on the curve (not a graph over s)");
        slope[i] = field.q(s[i], w[i]) / ps;
    }
    if (!up) {
        std::reverse(s.begin(), s.end());
        std::reverse(w.begin(), w.end());
        std::reverse(slope.begin(), slope.end());
    }
    CubicHermite w_of_s(s, w, slope);

    if (anchor_s < s.front() || anchor_s > s.back())
        throw ValidationError("curve_to_solution: anchor_s outside the curve's s-range");
    const double F0 = w_of_s.integral_from_start(anchor_s);

    Trajectory traj;
    traj.profile_label = label;
    traj.launch = LaunchMethod::manifold;
    traj.termination = curve.termination;
    traj.samples.reserve(m);
    traj.w_prime.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double fi = anchor_f + w_of_s.integral_from_start(s[i]) - F0;
        traj.samples.push_back({s[i], fi, w[i]});
        traj.w_prime.push_back(slope[i]);
    }
    return traj;
}

namespace {

struct Canvas {
    double s_lo, s_hi, x_lo, x_hi;
    double width = 800, height = 600;
    double px(double s) const { return (s - s_lo) / (s_hi - s_lo) * width; }
    double py(double x) const { return height - (x - x_lo) / (x_hi - x_lo) * height; }
};

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    out += buf;
}

void append_polyline(std::string& out, const Canvas& cv,
                     const std::vector<std::array<double, 2>>& pts, const char* style) {
    if (pts.size() < 2) return;
    out += "<polyline fill=\"none\" ";
    out += style;
    out += " points=\"";
    for (const auto& p : pts) {
        append_num(out, cv.px(p[0]));
        out += ',';
        append_num(out, cv.py(p[1]));
        out += ' ';
    }
    out += "\"/>\n";
}

}  // namespace

std::string phase_portrait_svg(const PhaseField& field, const Box& box,
                               const std::vector<Equilibrium>& equilibria,
                               const std::vector<IntegralCurve>& curves, int grid) {
    Canvas cv{box.s_lo, box.s_hi, box.x_lo, box.x_hi};
    std::string out;
    out +=
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
        "viewBox=\"0 0 800 600\">\n";
    out += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";

    // p-nullclines: vertical lines at roots of p.
    const double ds = (box.s_hi - box.s_lo) / grid;
    for (int i = 0; i < grid; ++i) {
        const double a = box.s_lo + i * ds, b = a + ds;
        const double fa = field.p(a), fb = field.p(b);
        if ((fa > 0) != (fb > 0) || fa == 0.0) {
            const double root = (fa == 0.0) ? a : bisect(field.p, a, b);
            out += "<line stroke=\"#2b8cbe\" stroke-width=\"1\" x1=\"";
            append_num(out, cv.px(root));
            out += "\" y1=\"0\" x2=\"";
            append_num(out, cv.px(root));
            out += "\" y2=\"600\"/>\n";
        }
    }

    // q-nullcline: per-column roots in x, drawn as dots.
    for (int i = 0; i <= grid; ++i) {
        const double s = box.s_lo + i * ds;
        const double dx = (box.x_hi - box.x_lo) / grid;
        for (int j = 0; j < grid; ++j) {
            const double a = box.x_lo + j * dx, b = a + dx;
            const double fa = field.q(s, a), fb = field.q(s, b);
            if ((fa > 0) != (fb > 0) && fa != 0.0 && fb != 0.0) {
                const double root = bisect([&](double x) { return field.q(s, x); }, a, b);
                out += "<circle fill=\"#e34a33\" r=\"1.2\" cx=\"";
                append_num(out, cv.px(s));
                out += "\" cy=\"";
                append_num(out, cv.py(root));
                out += "\"/>\n";
            }
        }
    }

    for (const auto& c : curves)
        append_polyline(out, cv, c.point, "stroke=\"#31a354\" stroke-width=\"1.5\"");

    for (const auto& eq : equilibria) {
        out += "<circle fill=\"black\" r=\"4\" cx=\"";
        append_num(out, cv.px(eq.s0));
        out += "\" cy=\"";
        append_num(out, cv.py(eq.x0));
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace solitons
