#include "convexreg/minimize.hpp"

#include <cmath>
#include <limits>

namespace convexreg {

namespace {
constexpr double kInvPhi = 0.6180339887498949;
}

double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double x_tol) {
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

std::pair<double, double> bracket_minimum(
    const std::function<double(double)>& f, double x0, double step) {
  double fa = f(x0);
  double lo = x0 - step, hi = x0 + step;
  double flo = f(lo), fhi = f(hi);
  for (int it = 0; it < 200; ++it) {
    if (flo >= fa && fhi >= fa) return {lo, hi};
    if (flo < fa) {
      hi = x0;
      fhi = fa;
      x0 = lo;
      fa = flo;
      step *= 2.0;
      lo = x0 - step;
      flo = f(lo);
    } else {
      lo = x0;
      flo = fa;
      x0 = hi;
      fa = fhi;
      step *= 2.0;
      hi = x0 + step;
      fhi = f(hi);
    }
  }
  throw NumericsError("bracket_minimum: no bracket found within budget");
}

namespace {

// One round of line searches along the columns of dirs, updating x in place.
// Returns the objective after the round.
double direction_sweeps(const std::function<double(const Vector&)>& f,
                        Vector& x, double fx, const Matrix& dirs,
                        double obj_tol, int max_sweeps) {
  int n = static_cast<int>(x.size());
  std::vector<double> steps(n, 1.0);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double before = fx;
    for (int i = 0; i < n; ++i) {
      Vector d = dirs.col(i);
      auto line = [&](double t) { return f(x + t * d); };
      auto [lo, hi] = bracket_minimum(line, 0.0, steps[i]);
      double t = golden_section_min(line, lo, hi, 1e-12);
      double ft = line(t);
      if (ft < fx) {
        steps[i] = std::max(std::abs(t), 1e-8);
        x += t * d;
        fx = ft;
      } else {
        steps[i] = std::max(steps[i] * 0.25, 1e-10);
      }
    }
    if (before - fx <= obj_tol * (1.0 + std::abs(fx))) break;
  }
  return fx;
}

}  // namespace

MinimizeResult minimize_convex(const std::function<double(const Vector&)>& f,
                               const std::vector<Vector>& starts,
                               double obj_tol, int max_sweeps) {
  MinimizeResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const Vector& start : starts) {
    Vector x = start;
    double fx = f(x);
    int n = static_cast<int>(x.size());
    // Axis-aligned descent first, then rotated orthonormal direction sets to
    // escape the stall points a fixed basis leaves on piecewise-linear
    // objectives. Stop once several fresh bases in a row fail to improve.
    fx = direction_sweeps(f, x, fx, Matrix::Identity(n, n), obj_tol,
                          max_sweeps);
    bool converged = false;
    int stale = 0;
    RngStream rot(0x9e3779b9u, 17);
    for (int round = 0; round < 40 && !converged; ++round) {
      RngStream rr = rot.derive(round);
      Matrix g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rr.normal();
      Matrix q = qr(g).first;
      double before = fx;
      fx = direction_sweeps(f, x, fx, q, obj_tol, max_sweeps);
      stale = (before - fx <= obj_tol * (1.0 + std::abs(fx))) ? stale + 1 : 0;
      if (stale >= 4) converged = true;
    }
    if (fx < best.value) {
      best.x = x;
      best.value = fx;
      best.converged = converged;
    }
  }
  if (!std::isfinite(best.value))
    throw NumericsError("minimize_convex: no finite start value");
  return best;
}

}  // namespace convexreg
