#include "convexreg/logconcave.hpp"

#include <cmath>
#include <limits>

#include "convexreg/body_json.hpp"
#include "convexreg/config.hpp"
#include "convexreg/minimize.hpp"

namespace convexreg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// sup_r r^m e^{-beta r / 2}: absorbs the polynomial factor of a radial
// integrand into a pure exponential tail certificate.
double poly_cap(double m, double beta) {
  if (m <= 0.0) return 1.0;
  return std::pow(2.0 * m / (M_E * beta), m);
}
}  // namespace

LogConcaveFn::LogConcaveFn(int dim, std::function<double(const Vector&)> phi,
                           TailBound tail, double unit_lip, std::string label,
                           bool noisy)
    : dim_(dim),
      phi_(std::move(phi)),
      tail_(tail),
      unit_lip_(unit_lip),
      label_(std::move(label)),
      noisy_(noisy) {
  if (dim_ < 1) throw NumericsError("log-concave fn: bad dimension");
  double at0 = phi_(Vector::Zero(dim_));
  if (std::abs(at0) > 1e-9)
    throw NumericsError("log-concave fn '" + label_ + "': phi(0) != 0");
  if (!(tail_.beta > 0))
    throw NumericsError("log-concave fn '" + label_ + "': bad tail decay");
}

LogConcaveFn LogConcaveFn::indicator(const ConvexBody& body) {
  ConvexBody k = body;
  LogConcaveFn f(
      body.dim(),
      [k](const Vector& x) { return k.gauge(x) <= 1.0 ? 0.0 : kInf; },
      TailBound{body.outer_radius() * (1.0 + 1e-12), 1.0, 1.0}, 0.0,
      "indicator(" + body.provenance() + ")");
  f.body_ = body;
  return f;
}

double LogConcaveFn::phi(const Vector& x) const {
  if (x.size() != dim_)
    throw NumericsError("log-concave fn: dimension mismatch");
  return phi_(x);
}

double LogConcaveFn::value(const Vector& x) const {
  double p = phi(x);
  return std::isinf(p) ? 0.0 : std::exp(-p);
}

LogConcaveFn gaussian_fn(const Matrix& cov) {
  int n = static_cast<int>(cov.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  if (es.eigenvalues().minCoeff() <= 0)
    throw NumericsError("gaussian_fn: covariance not SPD");
  double lmax = es.eigenvalues().maxCoeff();
  double lmin = es.eigenvalues().minCoeff();
  Matrix prec = cov.inverse();
  return LogConcaveFn(
      n, [prec](const Vector& x) { return 0.5 * x.dot(prec * x); },
      TailBound{2.0 * lmax, 1.0, 1.0}, 0.5 / lmin, "gaussian");
}

LogConcaveFn lp_exp_fn(int n, double p) {
  if (!(p >= 1.0)) throw NumericsError("lp_exp_fn: p must be >= 1");
  double c = std::min(1.0, std::pow(double(n), 1.0 - 0.5 * p));
  double rho, beta;
  if (p == 1.0) {
    rho = 0.0;
    beta = c;
  } else {
    rho = std::max(1.0, std::pow(1.0 / c, 1.0 / (p - 1.0)));
    beta = 1.0;
  }
  double lip = std::max(1.0, std::pow(double(n), 1.0 - 0.5 * p));
  auto phi = [p](const Vector& x) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
    return s;
  };
  return LogConcaveFn(n, phi, TailBound{rho, beta, 1.0}, lip,
                      "lp_exp(p=" + std::to_string(p) + ")");
}

LogConcaveFn tilt_fn(const LogConcaveFn& f, const Vector& z) {
  if (f.is_indicator())
    throw NumericsError("tilt_fn: not defined for indicator functions");
  LogConcaveFn inner = f;
  Vector zz = z;
  return LogConcaveFn(
      f.dim(),
      [inner, zz](const Vector& x) {
        return inner.phi(x) + std::max(zz.dot(x), 0.0);
      },
      f.tail(), f.unit_lip() + z.norm(), "tilt(" + f.label() + ")",
      f.noisy());
}

LogConcaveFn delta_out(const LogConcaveFn& f) {
  if (f.is_indicator()) {
    int n = f.dim();
    return LogConcaveFn::indicator(
        linear_image(diff_body(*f.body()), 0.5 * Matrix::Identity(n, n)));
  }
  LogConcaveFn inner = f;
  auto phi = [inner](const Vector& x) {
    auto obj = [&](const Vector& y) {
      return 0.5 * (inner.phi(y) + inner.phi(y - 2.0 * x));
    };
    MinimizeResult r = minimize_convex(
        obj, {x, Vector(Vector::Zero(x.size())), Vector(2.0 * x)},
        tol().minimizer_obj);
    if (!r.converged)
      throw NumericsError("delta_out: pointwise minimization failed");
    return std::max(r.value, 0.0);
  };
  TailBound t = f.tail();
  return LogConcaveFn(f.dim(), phi,
                      TailBound{t.rho, 0.5 * t.beta, std::sqrt(t.scale)},
                      f.unit_lip(), "delta_out(" + f.label() + ")", true);
}

LogConcaveFn delta_in(const LogConcaveFn& f) {
  if (f.is_indicator())
    return LogConcaveFn::indicator(inner_reg(*f.body()));
  LogConcaveFn inner = f;
  return LogConcaveFn(
      f.dim(),
      [inner](const Vector& x) {
        return std::max(inner.phi(x), inner.phi(-x));
      },
      f.tail(), f.unit_lip(), "delta_in(" + f.label() + ")", f.noisy());
}

LogConcaveFn delta_zero(const LogConcaveFn& f) {
  if (f.is_indicator())
    return LogConcaveFn::indicator(diff_body(*f.body()));
  LogConcaveFn inner = f;
  auto phi = [inner](const Vector& x) {
    auto obj = [&](const Vector& y) {
      return inner.phi(y + x) + inner.phi(y);
    };
    MinimizeResult r = minimize_convex(
        obj,
        {Vector(Vector::Zero(x.size())), Vector(-0.5 * x), Vector(-x)},
        tol().minimizer_obj);
    if (!r.converged)
      throw NumericsError("delta_zero: pointwise minimization failed");
    return std::max(r.value, 0.0);
  };
  TailBound t = f.tail();
  return LogConcaveFn(f.dim(), phi,
                      TailBound{2.0 * t.rho, 0.5 * t.beta, t.scale},
                      f.unit_lip(), "delta_zero(" + f.label() + ")", true);
}

LogConcaveFn functional_projection(const LogConcaveFn& f, const Subspace& h) {
  if (h.ambient_dim() != f.dim())
    throw NumericsError("functional_projection: dimension mismatch");
  if (f.is_indicator())
    return LogConcaveFn::indicator(project(*f.body(), h));
  LogConcaveFn inner = f;
  Matrix basis = h.basis();
  Matrix comp = h.complement();
  auto phi = [inner, basis, comp](const Vector& z) {
    Vector lifted = basis * z;
    auto obj = [&](const Vector& w) { return inner.phi(lifted + comp * w); };
    MinimizeResult r = minimize_convex(
        obj, {Vector(Vector::Zero(comp.cols()))}, tol().minimizer_obj);
    if (!r.converged)
      throw NumericsError("functional_projection: fiber minimization failed");
    return std::max(r.value, 0.0);
  };
  return LogConcaveFn(h.dim(), phi, f.tail(), f.unit_lip(),
                      "project(" + f.label() + ")", true);
}

double ball_body_radial(const LogConcaveFn& f, double p, const Vector& x) {
  if (!(p > 0)) throw NumericsError("ball_body_radial: p must be positive");
  double norm = x.norm();
  if (norm == 0.0) throw NumericsError("ball_body_radial: zero direction");
  Vector xi = x / norm;
  if (f.is_indicator()) return f.body()->radial(xi) / norm;
  const TailBound& t = f.tail();
  TailBound qt{t.rho, 0.5 * t.beta,
               t.scale * p * poly_cap(p - 1.0, t.beta)};
  auto integrand = [&](double r) {
    return p * std::pow(r, p - 1.0) * f.value(r * xi);
  };
  double integral =
      f.noisy() ? quad_1d_halfline_fixed(integrand, 0.0, qt, 32)
                : quad_1d_halfline(integrand, 0.0, qt, tol().radial_rel);
  return std::pow(integral, 1.0 / p) / norm;
}

ConvexBody ball_body(const LogConcaveFn& f, double p) {
  if (f.is_indicator()) return *f.body();
  const TailBound& t = f.tail();
  // rho^p <= rho_tail^p + scale p Gamma(p) / beta^p  (f <= scale e^{-beta r})
  double r_out = std::pow(std::pow(t.rho, p) + t.scale * p *
                                                   std::tgamma(p) /
                                                   std::pow(t.beta, p),
                          1.0 / p);
  // rho^p >= int_0^1 p r^{p-1} e^{-L r} dr >= e^{-L}
  double r_in = std::exp(-f.unit_lip() * std::max(1.0, 1.0 / p));
  LogConcaveFn src = f;
  auto gauge = [src, p](const Vector& x) {
    if (x.norm() == 0.0) return 0.0;
    return 1.0 / ball_body_radial(src, p, x);
  };
  return oracle_body(f.dim(), gauge, nullptr, r_in, r_out, false,
                     "ball_body(p, " + f.label() + ")");
}

double level_body_radial(const LogConcaveFn& f, double p, const Vector& x) {
  if (!(p > 1)) throw NumericsError("level_body_radial: p must be > 1");
  double norm = x.norm();
  if (norm == 0.0) throw NumericsError("level_body_radial: zero direction");
  Vector xi = x / norm;
  if (f.is_indicator()) return f.body()->radial(xi) / norm;
  const TailBound& t = f.tail();
  double target = p - 1.0;
  // phi(r xi) >= beta r - log(scale) for r >= rho
  double hi = std::max(t.rho,
                       (target + std::log(std::max(t.scale, 1.0)) + 1.0) /
                           t.beta);
  int guard = 0;
  while (f.phi(hi * xi) < target) {
    hi *= 2.0;
    if (++guard > 200)
      throw NumericsError("level_body_radial: tail certificate exhausted");
  }
  double r = root_find_increasing(
      [&](double s) { return f.phi(s * xi); }, target, 0.0, hi,
      tol().root_find);
  return r / norm;
}

Estimate integral_mc(const LogConcaveFn& f, long samples,
                     const RngStream& rng, bool parallel) {
  if (f.is_indicator()) return volume_mc(*f.body(), samples, rng, parallel);
  int n = f.dim();
  const TailBound& t = f.tail();
  TailBound qt{t.rho, 0.5 * t.beta, t.scale * poly_cap(n - 1.0, t.beta)};
  double shell = n * unit_ball_volume(n);
  return mc_mean(
      samples, rng,
      [&](RngStream& r) {
        Vector theta = sphere_sample(n, r);
        // fixed rule: the Monte Carlo spread dominates the quadrature error
        return shell * quad_1d_halfline_fixed(
                           [&](double s) {
                             return std::pow(s, n - 1.0) *
                                    f.value(s * theta);
                           },
                           0.0, qt, 24);
      },
      parallel);
}

Estimate integral_over_subspace(const LogConcaveFn& f, const Subspace& h,
                                long samples, const RngStream& rng,
                                bool parallel) {
  if (h.ambient_dim() != f.dim())
    throw NumericsError("integral_over_subspace: dimension mismatch");
  if (f.is_indicator())
    return volume_mc(section(*f.body(), h), samples, rng, parallel);
  int k = h.dim();
  Matrix basis = h.basis();
  const TailBound& t = f.tail();
  TailBound qt{t.rho, 0.5 * t.beta, t.scale * poly_cap(k - 1.0, t.beta)};
  double shell = k * unit_ball_volume(k);
  return mc_mean(
      samples, rng,
      [&](RngStream& r) {
        Vector theta = basis * sphere_sample(k, r);
        return shell * quad_1d_halfline_fixed(
                           [&](double s) {
                             return std::pow(s, k - 1.0) *
                                    f.value(s * theta);
                           },
                           0.0, qt, 24);
      },
      parallel);
}

RayMomentPeak ray_moment_peak(const std::function<double(double)>& g,
                              double p) {
  if (!(p > 1)) throw NumericsError("ray_moment_peak: p must be > 1");
  // maximize (p-1) s - g(e^s) over s (concave); t = e^s keeps t > 0
  auto neg = [&](double s) { return g(std::exp(s)) - (p - 1.0) * s; };
  auto [lo, hi] = bracket_minimum(neg, 0.0, 1.0);
  double s = golden_section_min(neg, lo, hi, 1e-12);
  RayMomentPeak res;
  res.t_p = std::exp(s);
  res.m_p = std::exp(-g(res.t_p)) * std::pow(res.t_p, p - 1.0);
  return res;
}

LogConcaveFn fn_from_json(const nlohmann::json& j, const std::string& path) {
  using nlohmann::json;
  if (!j.is_object() || !j.contains("type"))
    throw BodyJsonError(path + "/type", "missing function type");
  std::string type = j.at("type").get<std::string>();
  auto get = [&](const char* key) -> const json& {
    if (!j.contains(key))
      throw BodyJsonError(path + "/" + key, "missing field");
    return j.at(key);
  };
  try {
    if (type == "gaussian") {
      const json& cj = get("cov");
      Matrix cov;
      if (cj.is_array()) {
        size_t n = cj.size();
        cov = Matrix(n, n);
        for (size_t i = 0; i < n; ++i) {
          if (!cj[i].is_array() || cj[i].size() != n)
            throw BodyJsonError(path + "/cov", "expected a square matrix");
          for (size_t jj = 0; jj < n; ++jj)
            cov(i, jj) = cj[i][jj].get<double>();
        }
      } else {
        throw BodyJsonError(path + "/cov", "expected a matrix");
      }
      return gaussian_fn(cov);
    }
    if (type == "lp_exp")
      return lp_exp_fn(get("n").get<int>(), get("p").get<double>());
    if (type == "indicator")
      return LogConcaveFn::indicator(
          body_from_json(get("body"), path + "/body"));
    if (type == "shift_center") {
      LogConcaveFn inner = fn_from_json(get("inner"), path + "/inner");
      const json& sj = get("shift");
      Vector z(sj.size());
      for (size_t i = 0; i < sj.size(); ++i) z[i] = sj[i].get<double>();
      return tilt_fn(inner, z);
    }
  } catch (const NumericsError& e) {
    throw BodyJsonError(path, e.what());
  }
  throw BodyJsonError(path + "/type", "unknown function type '" + type + "'");
}

}  // namespace convexreg
