#pragma once

#include <array>
#include <vector>

#include "solitons/geometry.hpp"
#include "solitons/ode.hpp"

namespace solitons {

// Extrinsic verification of a rotational-family trajectory: at each requested
// abscissa, compares the finite-difference mean curvature of the embedded
// hypersurface against the Killing-field pairing g(K, nu) over a step ladder.
// Points where |f'| is large are evaluated in the angle chart (the inverse
// parametrization), which stays regular through vertical tangents; the rest
// use the graph chart.
struct SolitonVerifyConfig {
    std::vector<double> s_points{0.2, 0.5, 1.0, 2.0};
    std::vector<double> steps{4e-3, 2e-3, 1e-3};
    double threshold = 1e-4;
    std::array<double, 2> u_range{0.5, 2.0};
    double chart_w_limit = 0.9;  // |w| above this switches to the angle chart
    bool drop_out_of_range = true;
};

ResidualReport rotator_soliton_report(const Trajectory& traj, int n,
                                      const SolitonVerifyConfig& cfg = {});

// The f = 0 control surface (a totally geodesic hyperplane, not a soliton):
// same report, expected to fail loudly.
ResidualReport control_plane_report(int n, const SolitonVerifyConfig& cfg = {});

}  // namespace solitons
