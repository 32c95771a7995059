#include "solitons/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

namespace solitons {

const char* to_string(KillingFamily f) {
    switch (f) {
        case KillingFamily::rotation: return "rotation";
        case KillingFamily::translation: return "translation";
        case KillingFamily::dilation: return "dilation";
    }
    return "?";
}

KillingFamily killing_family_from_string(const std::string& name) {
    if (name == "rotation") return KillingFamily::rotation;
    if (name == "translation") return KillingFamily::translation;
    if (name == "dilation") return KillingFamily::dilation;
    throw ValidationError("unknown Killing family '" + name + "'");
}

namespace {

double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double a, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void scale(Vec& x, double a) {
    for (double& v : x) v *= a;
}

}  // namespace

void AmbientModel::require_chart(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim)
        throw ValidationError("AmbientModel: point dimension mismatch");
    if (!(x[0] > 0)) {
        std::ostringstream os;
        os << "AmbientModel: x1 = " << x[0] << " must be positive in the half-space chart";
        throw ValidationError(os.str());
    }
}

double metric_eval(const AmbientModel& model, const Vec& x, const Vec& X, const Vec& Y) {
    model.require_chart(x);
    if (X.size() != x.size() || Y.size() != x.size())
        throw ValidationError("metric_eval: vector dimension mismatch");
    return dot(X, Y) / (x[0] * x[0]);
}

Vec killing_eval(const AmbientModel& model, const Vec& x) {
    model.require_chart(x);
    Vec K(x.size(), 0.0);
    switch (model.killing) {
        case KillingFamily::rotation:
            K[x.size() - 2] = -x[x.size() - 1];
            K[x.size() - 1] = x[x.size() - 2];
            break;
        case KillingFamily::translation:
            K[x.size() - 1] = 1.0;
            break;
        case KillingFamily::dilation:
            K = x;
            break;
    }
    return K;
}

double gamma_derivative(const AmbientModel& model, const Vec& x, const Vec& X) {
    model.require_chart(x);
    return -X[0] / x[0];
}

double gamma_derivative_fd(const AmbientModel& model, const Vec& x, const Vec& X, double step) {
    model.require_chart(x);
    const double up = -std::log(x[0] + step * X[0]);
    const double dn = -std::log(x[0] - step * X[0]);
    return (up - dn) / (2.0 * step);
}

Vec conformal_connection(const AmbientModel& model, const Vec& x, const Vec& X, const Vec& Y,
                         const Vec& DXY, double Xgamma, double Ygamma, double XYinner) {
    model.require_chart(x);
    if (X.size() != x.size() || Y.size() != x.size() || DXY.size() != x.size())
        throw ValidationError("conformal_connection: vector dimension mismatch");
    Vec out = DXY;
    axpy(Xgamma, Y, out);
    axpy(Ygamma, X, out);
    out[0] += XYinner / x[0];
    return out;
}

Vec conformal_connection(const AmbientModel& model, const Vec& x, const Vec& X, const Vec& Y,
                         const Vec& DXY) {
    return conformal_connection(model, x, X, Y, DXY, gamma_derivative(model, x, X),
                                gamma_derivative(model, x, Y), dot(X, Y));
}

double killing_defect_fd(const AmbientModel& model, const Vec& x, const Vec& X, const Vec& Y,
                         double step) {
    model.require_chart(x);
    auto covariant_K = [&](const Vec& Z) {
        Vec K = killing_eval(model, x);
        Vec xp = x, xm = x;
        axpy(step, Z, xp);
        axpy(-step, Z, xm);
        const Vec Kp = killing_eval(model, xp);
        const Vec Km = killing_eval(model, xm);
        Vec DZK(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) DZK[i] = (Kp[i] - Km[i]) / (2.0 * step);
        const double Zg = gamma_derivative_fd(model, x, Z, step);
        const double Kg = gamma_derivative_fd(model, x, K, step);
        return conformal_connection(model, x, Z, K, DZK, Zg, Kg, dot(Z, K));
    };
    const Vec nXK = covariant_K(X);
    const Vec nYK = covariant_K(Y);
    return metric_eval(model, x, nXK, Y) + metric_eval(model, x, X, nYK);
}

void HypersurfacePatch::require_interior(const Vec& params, double margin) const {
    if (params.size() != ranges.size())
        throw ValidationError("HypersurfacePatch: parameter dimension mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!(params[i] >= ranges[i][0] + margin && params[i] <= ranges[i][1] - margin)) {
            std::ostringstream os;
            os << "HypersurfacePatch: parameter " << i << " = " << params[i]
               << " not interior to [" << ranges[i][0] << ", " << ranges[i][1]
               << "] by margin " << margin;
            throw ValidationError(os.str());
        }
    }
}

namespace {

struct Frame {
    Vec point;
    std::vector<Vec> e;              // g-orthonormal tangent frame
    std::vector<Vec> coeff;          // e[i] = sum_j coeff[i][j] * T[j] (original param order)
};

std::vector<int> resolve_order(const std::vector<int>& order, int m) {
    if (order.empty()) {
        std::vector<int> id(m);
        for (int i = 0; i < m; ++i) id[i] = i;
        return id;
    }
    if (static_cast<int>(order.size()) != m)
        throw ValidationError("mean_curvature_fd: frame_order must list every parameter once");
    return order;
}

Frame frame_at(const HypersurfacePatch& patch, const AmbientModel& model, const Vec& params,
               double step, const std::vector<int>& order) {
    const int m = patch.param_dim();
    Frame fr;
    fr.point = patch.map(params);
    model.require_chart(fr.point);

    std::vector<Vec> T(m);
    for (int j = 0; j < m; ++j) {
        Vec up = params, dn = params;
        up[j] += step;
        dn[j] -= step;
        const Vec a = patch.map(up), b = patch.map(dn);
        T[j].resize(fr.point.size());
        for (std::size_t i = 0; i < fr.point.size(); ++i) T[j][i] = (a[i] - b[i]) / (2.0 * step);
    }

    fr.e.resize(m);
    fr.coeff.assign(m, Vec(m, 0.0));
    for (int i = 0; i < m; ++i) {
        const int j = order[i];
        Vec v = T[j];
        Vec c(m, 0.0);
        c[j] = 1.0;
        for (int k = 0; k < i; ++k) {
            const double proj = metric_eval(model, fr.point, v, fr.e[k]);
            axpy(-proj, fr.e[k], v);
            axpy(-proj, fr.coeff[k], c);
        }
        const double norm = std::sqrt(metric_eval(model, fr.point, v, v));
        if (!(norm > 1e-10))
            throw NumericalError("mean_curvature_fd: degenerate tangent frame (immersion failure)");
        scale(v, 1.0 / norm);
        scale(c, 1.0 / norm);
        fr.e[i] = std::move(v);
        fr.coeff[i] = std::move(c);
    }
    return fr;
}

Vec normal_from_frame(const HypersurfacePatch& patch, const AmbientModel& model, const Frame& fr,
                      const Vec& params) {
    const std::size_t d = fr.point.size();
    Vec best;
    double best_norm = -1.0;
    for (std::size_t k = 0; k < d; ++k) {
        Vec r(d, 0.0);
        r[k] = 1.0;
        for (const Vec& e : fr.e) axpy(-metric_eval(model, fr.point, r, e), e, r);
        const double norm = std::sqrt(metric_eval(model, fr.point, r, r));
        if (norm > best_norm) {
            best_norm = norm;
            best = std::move(r);
        }
    }
    if (!(best_norm > 1e-8))
        throw NumericalError("unit_normal_fd: could not complete the tangent frame");
    scale(best, 1.0 / best_norm);
    const Vec ref = patch.normal_reference(params);
    if (dot(best, ref) < 0) scale(best, -1.0);
    return best;
}

}  // namespace

Vec unit_normal_fd(const HypersurfacePatch& patch, const AmbientModel& model, const Vec& params,
                   double step) {
    const auto order = resolve_order({}, patch.param_dim());
    const Frame fr = frame_at(patch, model, params, step, order);
    return normal_from_frame(patch, model, fr, params);
}

double mean_curvature_fd(const HypersurfacePatch& patch, const AmbientModel& model,
                         const Vec& params, double step, const std::vector<int>& frame_order) {
    if (!(step > 0)) throw ValidationError("mean_curvature_fd: step must be positive");
    patch.require_interior(params, 2.0 * step);
    const auto order = resolve_order(frame_order, patch.param_dim());

    const Frame fr = frame_at(patch, model, params, step, order);
    const Vec nu = normal_from_frame(patch, model, fr, params);

    double H = 0.0;
    const int m = patch.param_dim();
    for (int i = 0; i < m; ++i) {
        // Walk the parameter direction that realizes e_i on the surface and
        // differentiate the frame field along it.
        Vec up = params, dn = params;
        axpy(step, fr.coeff[i], up);
        axpy(-step, fr.coeff[i], dn);
        const Frame fup = frame_at(patch, model, up, step, order);
        const Frame fdn = frame_at(patch, model, dn, step, order);
        Vec Dee(fr.point.size());
        for (std::size_t k = 0; k < Dee.size(); ++k)
            Dee[k] = (fup.e[i][k] - fdn.e[i][k]) / (2.0 * step);
        const Vec nabla = conformal_connection(model, fr.point, fr.e[i], fr.e[i], Dee);
        H += metric_eval(model, fr.point, nabla, nu);
    }
    return H;
}

ResidualReport soliton_residual(const HypersurfacePatch& patch, const AmbientModel& model,
                                const std::vector<Vec>& points,
                                const std::vector<double>& point_labels,
                                const std::vector<double>& steps, double threshold) {
    if (points.empty() || steps.empty())
        throw ValidationError("soliton_residual: need points and a step ladder");
    if (point_labels.size() != points.size())
        throw ValidationError("soliton_residual: one label per point");
    ResidualReport report;
    report.points = point_labels;
    report.steps = steps;
    for (double step : steps) {
        report.residuals.emplace_back();
        for (const Vec& params : points) {
            const double H = mean_curvature_fd(patch, model, params, step);
            const Frame fr = frame_at(patch, model, params, step,
                                      resolve_order({}, patch.param_dim()));
            const Vec nu = normal_from_frame(patch, model, fr, params);
            const Vec K = killing_eval(model, fr.point);
            report.residuals.back().push_back(std::abs(H - metric_eval(model, fr.point, K, nu)));
        }
    }
    report.finalize(threshold);
    return report;
}

std::vector<std::array<double, 2>> embed_rotator_curve(const Trajectory& traj) {
    std::vector<std::array<double, 2>> out;
    out.reserve(traj.samples.size());
    for (const auto& p : traj.samples)
        out.push_back({p.s * std::cos(p.f), p.s * std::sin(p.f)});
    return out;
}

std::vector<std::array<double, 2>> embed_rotator_curve(
    const std::vector<std::pair<double, double>>& sf_points) {
    std::vector<std::array<double, 2>> out;
    out.reserve(sf_points.size());
    for (const auto& [s, f] : sf_points) out.push_back({s * std::cos(f), s * std::sin(f)});
    return out;
}

HypersurfacePatch embed_rotator_patch(const Trajectory& traj, int n,
                                      std::array<double, 2> u_range,
                                      std::array<double, 2> v_range) {
    if (n < 2) throw ValidationError("embed_rotator_patch: n must be >= 2");
    if (!(u_range[0] > 0) || !(u_range[0] < u_range[1]))
        throw ValidationError("embed_rotator_patch: u range must be positive");
    auto f_interp = std::make_shared<CubicHermite>(traj.f_interpolant());
    const double lo = std::min(f_interp->x_front(), f_interp->x_back());
    const double hi = std::max(f_interp->x_front(), f_interp->x_back());
    if (!(v_range[0] >= lo && v_range[1] <= hi && v_range[0] < v_range[1]))
        throw ValidationError("embed_rotator_patch: v range outside the trajectory span");

    HypersurfacePatch patch;
    patch.ambient_dim = n + 1;
    patch.ranges.push_back(u_range);
    for (int i = 0; i < n - 2; ++i) patch.ranges.push_back({-2.0, 2.0});
    patch.ranges.push_back(v_range);

    patch.map = [f_interp, n](const Vec& p) {
        const double u = p[0];
        const double v = p[n - 1];
        const double f = f_interp->eval(v);
        Vec x(static_cast<std::size_t>(n) + 1);
        x[0] = u;
        for (int i = 1; i <= n - 2; ++i) x[i] = u * p[i];
        x[n - 1] = u * v * std::cos(f);
        x[n] = u * v * std::sin(f);
        return x;
    };
    patch.normal_reference = [f_interp, n](const Vec& p) {
        const double v = p[n - 1];
        const double f = f_interp->eval(v);
        const double w = f_interp->derivative(v);
        Vec ref(static_cast<std::size_t>(n) + 1, 0.0);
        ref[0] = v * w;
        ref[n - 1] = -(w * std::cos(f) + std::sin(f) / v);
        ref[n] = -w * std::sin(f) + std::cos(f) / v;
        return ref;
    };
    return patch;
}

HypersurfacePatch embed_rotator_inverse_patch(const std::vector<std::array<double, 3>>& arc,
                                              int n, std::array<double, 2> u_range,
                                              std::array<double, 2> r_range) {
    if (n < 2) throw ValidationError("embed_rotator_inverse_patch: n must be >= 2");
    if (!(u_range[0] > 0) || !(u_range[0] < u_range[1]))
        throw ValidationError("embed_rotator_inverse_patch: u range must be positive");
    if (arc.size() < 2) throw ValidationError("embed_rotator_inverse_patch: need an arc");
    std::vector<double> r, g, gp;
    r.reserve(arc.size());
    for (const auto& a : arc) {
        r.push_back(a[0]);
        g.push_back(a[1]);
        gp.push_back(a[2]);
    }
    auto gamma = std::make_shared<CubicHermite>(std::move(r), std::move(g), std::move(gp));
    const double lo = std::min(gamma->x_front(), gamma->x_back());
    const double hi = std::max(gamma->x_front(), gamma->x_back());
    if (!(r_range[0] >= lo && r_range[1] <= hi && r_range[0] < r_range[1]))
        throw ValidationError("embed_rotator_inverse_patch: r range outside the arc span");

    HypersurfacePatch patch;
    patch.ambient_dim = n + 1;
    patch.ranges.push_back(u_range);
    for (int i = 0; i < n - 2; ++i) patch.ranges.push_back({-2.0, 2.0});
    patch.ranges.push_back(r_range);

    patch.map = [gamma, n](const Vec& p) {
        const double u = p[0];
        const double r = p[n - 1];
        const double gv = gamma->eval(r);
        Vec x(static_cast<std::size_t>(n) + 1);
        x[0] = u;
        for (int i = 1; i <= n - 2; ++i) x[i] = u * p[i];
        x[n - 1] = u * gv * std::cos(r);
        x[n] = u * gv * std::sin(r);
        return x;
    };
    // Orientation field continuous through the vertical tangent; equals the
    // graph-chart reference scaled by gamma' where both charts apply.
    patch.normal_reference = [gamma, n](const Vec& p) {
        const double r = p[n - 1];
        const double gv = gamma->eval(r);
        const double gp_ = gamma->derivative(r);
        Vec ref(static_cast<std::size_t>(n) + 1, 0.0);
        ref[0] = gv;
        ref[n - 1] = -std::cos(r) - gp_ * std::sin(r) / gv;
        ref[n] = -std::sin(r) + gp_ * std::cos(r) / gv;
        return ref;
    };
    return patch;
}

double grad_pi_norm_sq(const Vec& base_point) {
    if (base_point.size() < 2) throw ValidationError("grad_pi_norm_sq: need dimension >= 2");
    const double x1 = base_point.front();
    const double xn = base_point.back();
    if (!(x1 > 0)) throw ValidationError("grad_pi_norm_sq: x1 must be positive");
    return (x1 * x1 + xn * xn) / (x1 * x1);
}

FiberCheck fiber_check(int n, double s, double step) {
    if (n < 2) throw ValidationError("fiber_check: n must be >= 2");
    if (!(s > 0)) throw ValidationError("fiber_check: s must be positive");
    if (!(step > 0)) throw ValidationError("fiber_check: step must be positive");

    AmbientModel base{n, KillingFamily::rotation};
    HypersurfacePatch fiber;
    fiber.ambient_dim = n;
    fiber.ranges.push_back({0.25, 4.0});
    for (int i = 0; i < n - 2; ++i) fiber.ranges.push_back({-4.0, 4.0});
    fiber.map = [n, s](const Vec& a) {
        Vec y(static_cast<std::size_t>(n));
        y[0] = a[0];
        for (int i = 1; i <= n - 2; ++i) y[i] = a[i];
        y[n - 1] = s * a[0];
        return y;
    };
    // -grad(pi) has half-space components (x_n, 0, ..., -x_1).
    fiber.normal_reference = [n, s](const Vec& a) {
        Vec ref(static_cast<std::size_t>(n), 0.0);
        ref[0] = s * a[0];
        ref[n - 1] = -a[0];
        return ref;
    };

    Vec at(static_cast<std::size_t>(n) - 1, 0.5);
    at[0] = 1.0;
    FiberCheck out;
    out.h_numeric = mean_curvature_fd(fiber, base, at, step);
    out.grad_pi_norm_sq = grad_pi_norm_sq(fiber.map(at));
    return out;
}

namespace {

void append_fixed(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    out += buf;
}

}  // namespace

std::string curve_svg(const std::vector<std::array<double, 2>>& points) {
    double lo_x = 0, hi_x = 1, lo_y = 0, hi_y = 1;
    if (!points.empty()) {
        lo_x = hi_x = points[0][0];
        lo_y = hi_y = points[0][1];
        for (const auto& p : points) {
            lo_x = std::min(lo_x, p[0]);
            hi_x = std::max(hi_x, p[0]);
            lo_y = std::min(lo_y, p[1]);
            hi_y = std::max(hi_y, p[1]);
        }
    }
    // Equal-aspect mapping into the fixed 800x800 canvas.
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    const double pad = 0.05 * span;
    const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
    const double half = 0.5 * span + pad;
    auto px = [&](double x) { return (x - (cx - half)) / (2 * half) * 800.0; };
    auto py = [&](double y) { return 800.0 - (y - (cy - half)) / (2 * half) * 800.0; };

    std::string out =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
        "viewBox=\"0 0 800 800\">\n<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : points) {
        append_fixed(out, px(p[0]));
        out += ',';
        append_fixed(out, py(p[1]));
        out += ' ';
    }
    out += "\"/>\n</svg>\n";
    return out;
}

std::string patch_obj(const HypersurfacePatch& patch, int nu, int nv, const std::string& name) {
    if (patch.param_dim() != 2)
        throw ValidationError("patch_obj: OBJ export needs a two-parameter patch");
    if (nu < 1 || nv < 1) throw ValidationError("patch_obj: need at least one quad per side");
    std::string out = "o " + name + "\n";
    char buf[96];
    for (int i = 0; i <= nu; ++i) {
        for (int j = 0; j <= nv; ++j) {
            const double u =
                patch.ranges[0][0] + (patch.ranges[0][1] - patch.ranges[0][0]) * i / nu;
            const double v =
                patch.ranges[1][0] + (patch.ranges[1][1] - patch.ranges[1][0]) * j / nv;
            const Vec x = patch.map({u, v});
            std::snprintf(buf, sizeof buf, "v %.16e %.16e %.16e\n", x[0], x[1], x[2]);
            out += buf;
        }
    }
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            const int a = i * (nv + 1) + j + 1;
            const int b = a + nv + 1;
            std::snprintf(buf, sizeof buf, "f %d %d %d %d\n", a, b, b + 1, a + 1);
            out += buf;
        }
    }
    return out;
}

}  // namespace solitons
