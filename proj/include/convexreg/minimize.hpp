#pragma once

#include <functional>
#include <vector>

#include "convexreg/linalg.hpp"

namespace convexreg {

struct MinimizeResult {
  Vector x;
  double value = 0.0;
  bool converged = false;
};

// Golden-section minimum of a unimodal function on [a, b].
double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double x_tol);

// Expands [a, b] around x0 until it brackets a minimum of a unimodal f.
// Returns {lo, hi}; throws NumericsError if no bracket is found in budget.
std::pair<double, double> bracket_minimum(
    const std::function<double(double)>& f, double x0, double step);

// Derivative-free minimization of a convex objective: cyclic coordinate
// descent with golden-section line searches, best over all starts.
MinimizeResult minimize_convex(const std::function<double(const Vector&)>& f,
                               const std::vector<Vector>& starts,
                               double obj_tol, int max_sweeps = 400);

}  // namespace convexreg
