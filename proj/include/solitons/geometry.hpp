#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "solitons/ode.hpp"
#include "solitons/singular.hpp"

namespace solitons {

using Vec = std::vector<double>;

enum class KillingFamily { rotation, translation, dilation };
const char* to_string(KillingFamily f);
KillingFamily killing_family_from_string(const std::string& name);

// Half-space model in dimension `dim`: points with x1 > 0 and metric
// <.,.>/x1^2, i.e. conformal log factor gamma = -log x1.
struct AmbientModel {
    int dim = 3;
    KillingFamily killing = KillingFamily::rotation;

    void require_chart(const Vec& x) const;
};

double metric_eval(const AmbientModel& model, const Vec& x, const Vec& X, const Vec& Y);

// Killing field at x: rotation -x_{dim} d_{dim-1} + x_{dim-1} d_{dim} (in
// 1-based coordinates), translation d_dim, dilation sum_i x_i d_i.
Vec killing_eval(const AmbientModel& model, const Vec& x);

// Directional derivative of the conformal log factor along X: analytic form
// -X_1/x_1, and a central-difference form used by the FD self-checks.
double gamma_derivative(const AmbientModel& model, const Vec& x, const Vec& X);
double gamma_derivative_fd(const AmbientModel& model, const Vec& x, const Vec& X, double step);

// Hyperbolic covariant derivative from the conformal-change formula:
// nabla_X Y = D_X Y + X(gamma) Y + Y(gamma) X + (1/x1) <X,Y> d1,
// with D_X Y (and optionally the gamma derivatives) supplied by the caller.
Vec conformal_connection(const AmbientModel& model, const Vec& x, const Vec& X, const Vec& Y,
                         const Vec& DXY, double Xgamma, double Ygamma, double XYinner);
Vec conformal_connection(const AmbientModel& model, const Vec& x, const Vec& X, const Vec& Y,
                         const Vec& DXY);

// Killing identity defect g(nabla_X K, Y) + g(X, nabla_Y K) evaluated with
// all directional derivatives taken by central differences at `step`; decays
// at second order as step -> 0.
double killing_defect_fd(const AmbientModel& model, const Vec& x, const Vec& X, const Vec& Y,
                         double step);

// Parametrized hypersurface patch: a map from a rectangular parameter domain
// into the half-space, with a reference field fixing the normal orientation.
struct HypersurfacePatch {
    int ambient_dim = 3;
    std::vector<std::array<double, 2>> ranges;       // one per parameter
    std::function<Vec(const Vec&)> map;              // params -> ambient point
    std::function<Vec(const Vec&)> normal_reference; // params -> orientation vector

    int param_dim() const { return static_cast<int>(ranges.size()); }
    void require_interior(const Vec& params, double margin) const;
};

// g-unit normal at a parameter point from FD tangents, oriented along the
// patch's reference field.
Vec unit_normal_fd(const HypersurfacePatch& patch, const AmbientModel& model, const Vec& params,
                   double step);

// Discrete extrinsic mean curvature: g-orthonormal frame by Gram-Schmidt on
// central-difference tangents, frame derivatives by central differences of
// the frame field along its own directions, covariant derivatives via the
// conformal connection, summed against the unit normal. Second order in step.
// `frame_order` permutes the coordinate tangents fed to Gram-Schmidt.
double mean_curvature_fd(const HypersurfacePatch& patch, const AmbientModel& model,
                         const Vec& params, double step, const std::vector<int>& frame_order = {});

// |H_fd - g(K, nu)| at each point over a step ladder.
ResidualReport soliton_residual(const HypersurfacePatch& patch, const AmbientModel& model,
                                const std::vector<Vec>& points,
                                const std::vector<double>& point_labels,
                                const std::vector<double>& steps, double threshold = 1e-4);

// Rotational-family embeddings. The (s, f) data is the half-space slice
// x1 = 1; a trajectory embeds as the curve v -> (v cos f(v), v sin f(v)).
std::vector<std::array<double, 2>> embed_rotator_curve(const Trajectory& traj);
std::vector<std::array<double, 2>> embed_rotator_curve(
    const std::vector<std::pair<double, double>>& sf_points);

// Graph-chart patch (u, t_2..t_{n-1}, v) -> u (1, t, v cos f(v), v sin f(v))
// with f interpolated from the trajectory. Regular wherever |f'| is finite.
HypersurfacePatch embed_rotator_patch(const Trajectory& traj, int n,
                                      std::array<double, 2> u_range,
                                      std::array<double, 2> v_range);

// Angle-chart patch (u, t_2..t_{n-1}, r) -> u (1, t, g(r) cos r, g(r) sin r)
// built from inverse-function samples (r, gamma, gamma'); regular through a
// vertical tangent of the graph chart.
HypersurfacePatch embed_rotator_inverse_patch(const std::vector<std::array<double, 3>>& arc,
                                              int n, std::array<double, 2> u_range,
                                              std::array<double, 2> r_range);

// Fibre of the submersion x -> x_n/x_1 inside the n-dimensional base model,
// with normal -grad(pi)/|grad(pi)|.
struct FiberCheck {
    double h_numeric = 0;
    double grad_pi_norm_sq = 0;
};
FiberCheck fiber_check(int n, double s, double step);

// |grad pi|_g^2 at a base point (exact formula; x_n/x_1 = s gives 1 + s^2).
double grad_pi_norm_sq(const Vec& base_point);

// Exports.
std::string curve_svg(const std::vector<std::array<double, 2>>& points);
std::string patch_obj(const HypersurfacePatch& patch, int nu, int nv, const std::string& name);

}  // namespace solitons
