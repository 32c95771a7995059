#pragma once

#include <string>
#include <vector>

#include "solitons/geometry.hpp"
#include "solitons/ode.hpp"
#include "solitons/phase.hpp"
#include "solitons/singular.hpp"

namespace solitons {

// Lossless binary64 text form: 17 significant digits.
std::string format_g17(double v);

// Trajectory CSV: header `s,f,w`, one row per sample, LF line endings.
std::string trajectory_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text, ProfileFamily label);

// Wing CSV: header `s,f,branch` with branch in {minus, vertex, plus}, in the
// glued traversal order.
std::string wing_csv(const GluedWing& glued);

std::string residual_report_json(const ResidualReport& report);
std::string equilibria_json(const std::vector<Equilibrium>& eqs);
std::string trajectory_meta_json(const Trajectory& traj);

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace solitons
