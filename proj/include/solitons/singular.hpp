#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "solitons/ode.hpp"

namespace solitons {

// Bowl solution of the rotational family: the unique trajectory through the
// singular point s = 0 with w(0) = 0. Launched from s = eps with the series
// data w = eps/3, f = f0 + eps^2/6 (the leading slope 1/3 is n-independent);
// the returned trajectory is prepended with the exact anchor (0, f0, 0).
Trajectory bowl_launch(int n, double f0, double s_max, const IntegratorOptions& opts = {},
                       double eps = 1e-5);

// gamma'' of the inverse-function equation for the rotational family.
// At gamma' = 0 this evaluates to gamma (n gamma^2 + 1).
double wing_gamma_rhs(int n, double gamma, double gamma_prime);

// Wing-like pair through a vertical tangent at (s0, r0): the inverse-function
// arc gamma(r) around r0, plus the two branches f± continued to s_max.
struct WingCurve {
    int n = 2;
    double s0 = 0, r0 = 0;
    Trajectory branch_plus;   // w > 0 near s0
    Trajectory branch_minus;  // w < 0 near s0
    // (r, gamma, gamma') ordered by increasing r, containing the exact vertex
    // sample (r0, s0, 0); extends a little past the handoff on both sides so
    // the two charts can be cross-checked where they overlap.
    std::vector<std::array<double, 3>> gamma_arc;
    std::size_t vertex_index = 0;
    std::size_t switch_minus_index = 0;  // handoff samples inside gamma_arc
    std::size_t switch_plus_index = 0;
};

WingCurve wing_launch(int n, double s0, double r0, double s_max,
                      const IntegratorOptions& opts = {}, double delta_switch = 1.0);

// Single traversal of the wing in the (s, f) plane: branch_minus from s_max
// down to its handoff, the gamma arc through the vertex, then branch_plus up
// to s_max. Validates C0/C1 consistency where the charts meet.
struct GluedWing {
    std::vector<std::pair<double, double>> points;  // (s, f)
    std::size_t vertex_index = 0;
};

GluedWing glue_wing(const WingCurve& curve, double tol = 1e-6);

}  // namespace solitons
