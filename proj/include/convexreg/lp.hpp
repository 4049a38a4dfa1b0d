#pragma once

#include <stdexcept>

#include "convexreg/linalg.hpp"

namespace convexreg {

struct LpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// maximize c^T x  subject to  A x <= b,  E x = d,  lb <= x <= ub.
// Empty A/E blocks are allowed. Bounds are optional: size-0 vectors mean
// free variables; +/-infinity entries are honored.
struct LinearProgram {
  Vector c;
  Matrix A;
  Vector b;
  Matrix E;
  Vector d;
  Vector lb;
  Vector ub;

  int num_vars() const { return static_cast<int>(c.size()); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double value = 0.0;
  Vector dual_ineq;  // one multiplier per row of A
  Vector dual_eq;    // one multiplier per row of E
};

// Dense two-phase revised simplex with Bland's anti-cycling rule. Optimal
// returns carry dual certificates which are verified internally (primal
// feasibility, complementary slackness, duality gap) before returning;
// certificate failure throws LpError.
LpSolution lp_solve(const LinearProgram& lp);

}  // namespace convexreg
