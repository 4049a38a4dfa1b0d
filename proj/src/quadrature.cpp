#include "convexreg/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace convexreg {

double quad_1d(const std::function<double(double)>& g, double a, double b,
               double rel_tol) {
  if (!(b > a)) throw QuadratureError("quad_1d: empty interval");
  double error = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      g, a, b, 15, rel_tol, &error);
  if (!std::isfinite(value))
    throw QuadratureError("quad_1d: non-finite result");
  if (error > rel_tol * std::max(std::abs(value), 1e-300) + 1e-300) {
    // One refinement pass with a deeper tree before giving up.
    value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        g, a, b, 18, rel_tol, &error);
    if (error > rel_tol * std::max(std::abs(value), 1e-300) + 1e-300)
      throw QuadratureError("quad_1d: failed to reach requested tolerance");
  }
  return value;
}

double quad_1d_halfline(const std::function<double(double)>& g, double a,
                        const TailBound& tail, double rel_tol) {
  if (tail.beta <= 0)
    throw QuadratureError("quad_1d_halfline: tail bound requires beta > 0");
  // Truncate where the certified tail is negligible at double precision.
  double cutoff =
      std::max(tail.rho, a) + (60.0 + std::log1p(std::abs(tail.scale))) / tail.beta;
  // Map r = t / (1 - t), dr = dt / (1 - t)^2.
  auto mapped = [&g](double t) {
    double om = 1.0 - t;
    double r = t / om;
    return g(r) / (om * om);
  };
  double t_lo = a / (1.0 + a);
  double t_hi = cutoff / (1.0 + cutoff);
  return quad_1d(mapped, t_lo, t_hi, rel_tol);
}

double quad_1d_fixed(const std::function<double(double)>& g, double a,
                     double b, int panels) {
  if (!(b > a)) throw QuadratureError("quad_1d_fixed: empty interval");
  if (panels < 1) throw QuadratureError("quad_1d_fixed: need panels >= 1");
  double total = 0.0;
  double w = (b - a) / panels;
  for (int i = 0; i < panels; ++i)
    total += boost::math::quadrature::gauss<double, 15>::integrate(
        g, a + i * w, a + (i + 1) * w);
  if (!std::isfinite(total))
    throw QuadratureError("quad_1d_fixed: non-finite result");
  return total;
}

double quad_1d_halfline_fixed(const std::function<double(double)>& g,
                              double a, const TailBound& tail, int panels) {
  if (tail.beta <= 0)
    throw QuadratureError("quad_1d_halfline: tail bound requires beta > 0");
  double cutoff = std::max(tail.rho, a) +
                  (60.0 + std::log1p(std::abs(tail.scale))) / tail.beta;
  auto mapped = [&g](double t) {
    double om = 1.0 - t;
    double r = t / om;
    return g(r) / (om * om);
  };
  return quad_1d_fixed(mapped, a / (1.0 + a), cutoff / (1.0 + cutoff),
                       panels);
}

double root_find_increasing(const std::function<double(double)>& g,
                            double target, double lo, double hi,
                            double tol_rel) {
  double glo = g(lo), ghi = g(hi);
  double slack = tol_rel * (1.0 + std::abs(target));
  if (std::abs(glo - target) <= slack) return lo;
  if (std::abs(ghi - target) <= slack) return hi;
  if (glo > target || ghi < target)
    throw QuadratureError("root_find_increasing: target outside bracket range");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    double gm = g(mid);
    if (gm < target)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  if (std::abs(g(x) - target) > slack)
    throw QuadratureError("root_find_increasing: residual above tolerance");
  return x;
}

}  // namespace convexreg
