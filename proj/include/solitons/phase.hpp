#pragma once

#include <array>
#include <functional>
#include <vector>

#include "solitons/ode.hpp"

namespace solitons {

// Planar field X(s,x) = (p(s), q(s,x)) with analytic partials. Only this
// triangular form appears: p depends on s alone.
struct PhaseField {
    std::function<double(double)> p;
    std::function<double(double)> p_prime;
    std::function<double(double, double)> q;
    std::function<double(double, double)> q_s;
    std::function<double(double, double)> q_x;
    double s_lo = -std::numeric_limits<double>::infinity();
    double s_hi = std::numeric_limits<double>::infinity();
    double x_lo = -std::numeric_limits<double>::infinity();
    double x_hi = std::numeric_limits<double>::infinity();
};

PhaseField rotator_phase_field(int n);

struct Box {
    double s_lo, s_hi, x_lo, x_hi;
};

// Zero of X with its linearization. The Jacobian of (s,x) -> (p,q) is
// [[p', 0], [dq/ds, dq/dx]]; its eigenvalues are exactly the two diagonal
// entries and the stored eigenvectors are the manifold tangents.
struct Equilibrium {
    double s0 = 0, x0 = 0;
    std::array<std::array<double, 2>, 2> jacobian{};
    std::array<double, 2> eigenvalues{};                  // {p'(s0), dq/dx(s0,x0)}
    std::array<std::array<double, 2>, 2> eigenvectors{};  // unit, one per eigenvalue
    bool admissible_saddle = false;                       // p' * dq/dx < 0
};

// Roots of p on the s-grid by bisection, then roots of q(s0, .) likewise,
// each pair polished by Newton to residual <= 1e-12.
std::vector<Equilibrium> find_equilibria(const PhaseField& field, const Box& box, int grid);

bool admissible_saddle(const Equilibrium& eq);

enum class ManifoldKind { stable, unstable };

// Integral curve of X sampled along its parameter r.
struct IntegralCurve {
    std::vector<double> r;
    std::vector<std::array<double, 2>> point;    // (s, x)
    std::vector<std::array<double, 2>> tangent;  // X at the samples (curve orientation)
    Termination termination = Termination::reached_end;
};

// Launches along the stable/unstable eigendirection from a saddle, offset by
// `offset` on the chosen side; stable manifolds are traced by time reversal.
IntegralCurve manifold_launch(const PhaseField& field, const Equilibrium& eq, ManifoldKind which,
                              int side, double offset, double arc_length_max,
                              const IntegratorOptions& opts = {});

// Reparametrizes an integral curve by s (Lemma-style correspondence): yields
// w(s) = x(s^{-1}(.)), with f recovered by quadrature from a supplied anchor.
// Fails when s is not strictly monotone along the curve.
Trajectory curve_to_solution(const IntegralCurve& curve, const PhaseField& field, double anchor_s,
                             double anchor_f, ProfileFamily label = ProfileFamily::custom);

// Phase portrait: nullclines p = 0 and q = 0, equilibria markers, manifold
// curves. Fixed 800x600 canvas mapped linearly from the box.
std::string phase_portrait_svg(const PhaseField& field, const Box& box,
                               const std::vector<Equilibrium>& equilibria,
                               const std::vector<IntegralCurve>& curves, int grid = 160);

}  // namespace solitons
