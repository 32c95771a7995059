#pragma once

#include <vector>

namespace solitons {

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0, ascending, with multiple
// roots reported once. Degenerates gracefully to the quadratic/linear case
// when leading coefficients vanish.
std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0);

}  // namespace solitons
