#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solitons/interp.hpp"
#include "solitons/profiles.hpp"
#include "solitons/rk45.hpp"

namespace solitons {

enum class LaunchMethod { series, manifold, interior, inverse_branch };
const char* to_string(LaunchMethod m);

struct TrajectorySample {
    double s, f, w;
};

// Adaptively sampled solution of the reduced equation, s strictly monotone.
struct Trajectory {
    ProfileFamily profile_label = ProfileFamily::custom;
    std::vector<TrajectorySample> samples;
    // rhs values at the samples, same length when available; used for dense
    // interpolation of w. Empty for trajectories read back from CSV.
    std::vector<double> w_prime;
    LaunchMethod launch = LaunchMethod::interior;
    Termination termination = Termination::reached_end;
    double abs_tol = 1e-12, rel_tol = 1e-10;

    double s_front() const { return samples.front().s; }
    double s_back() const { return samples.back().s; }

    // Dense evaluation: cubic Hermite on (f, w) and on (w, w'), the latter
    // taking w' from the profile where a knot is interior.
    CubicHermite f_interpolant() const;
    CubicHermite w_interpolant(const SubmersionProfile& profile) const;
};

// Right-hand side f'' of the reduced soliton equation for any profile; the
// equation is autonomous in f. (log(alpha/phi_hat))' is expanded analytically
// as alpha'/alpha - phi_hat'/phi_hat to dodge cancellation near endpoints.
double generic_rhs(const SubmersionProfile& profile, double s, double w);

// Planar system data for the rotational family: f' = w, w' = q(s,w)/p(s)
// with p(s) = s^3 + s and the cubic-in-x polynomial q.
struct RotatorPq {
    double p, q;
    double p_prime;   // dp/ds
    double q_s, q_x;  // partials of q
};
RotatorPq rotator_pq(int n, double s, double x);

// Integrates the (f, w) system from (s_start, f_start, w_start) toward s_end.
// Blow-up (|w| >= limit) and leaving the open domain are events, not errors.
Trajectory integrate(const SubmersionProfile& profile, double s_start, double f_start,
                     double w_start, double s_end, const IntegratorOptions& opts = {});

struct ResidualReport {
    std::vector<double> points;
    std::vector<double> steps;                    // ladder, coarse to fine
    std::vector<std::vector<double>> residuals;   // residuals[rung][point], absolute
    double max_abs = 0.0;                         // at the finest rung
    double rms = 0.0;
    std::optional<double> order;                  // only when >= 3 rungs
    double threshold = 0.0;
    bool pass = false;

    void finalize(double threshold_in);
};

// Finite-difference defect of a trajectory against the reduced equation,
// measured on a uniform resampling so it stays independent of the integrator
// internals: residual = D2 f - rhs(s, D1 f) with central differences.
ResidualReport ode_residual(const SubmersionProfile& profile, const Trajectory& traj,
                            double s_lo, double s_hi, double threshold = 1e-6);
ResidualReport ode_residual(const SubmersionProfile& profile, const Trajectory& traj,
                            double threshold = 1e-6);

// Extreme real roots of x -> q(s, x): q < 0 for x > x_plus and q > 0 for
// x < x_minus (the cubic's leading coefficient is negative for s > 0).
struct CubicBounds {
    double x_minus, x_plus;
};
CubicBounds cubic_bounds(int n, double s);

}  // namespace solitons
