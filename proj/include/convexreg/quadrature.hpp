#pragma once

#include <functional>
#include <stdexcept>

namespace convexreg {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponential decay certificate for a half-line integrand:
// |g(r)| <= scale * exp(-beta * r) for r >= rho.
struct TailBound {
  double rho = 0.0;
  double beta = 1.0;
  double scale = 1.0;
};

// Adaptive integral of g over [a, b] with relative error <= rel_tol.
// Throws QuadratureError instead of returning a silent value on failure.
double quad_1d(const std::function<double(double)>& g, double a, double b,
               double rel_tol);

// Integral over [a, +inf). The caller certifies the tail so the half-line
// can be truncated; the remainder bound is charged against rel_tol.
double quad_1d_halfline(const std::function<double(double)>& g, double a,
                        const TailBound& tail, double rel_tol);

// Non-adaptive composite Gauss rule over [a, b]. For integrands whose
// evaluations come from inner optimizations: their small oracle noise
// defeats adaptive error control, while a fixed rule keeps the cost
// deterministic and the error at the noise floor.
double quad_1d_fixed(const std::function<double(double)>& g, double a,
                     double b, int panels);
double quad_1d_halfline_fixed(const std::function<double(double)>& g,
                              double a, const TailBound& tail, int panels);

// Solves g(x) = target for monotone increasing g on [lo, hi].
// Postcondition: |g(x) - target| <= tol * (1 + |target|).
double root_find_increasing(const std::function<double(double)>& g,
                            double target, double lo, double hi,
                            double tol_rel);

}  // namespace convexreg
