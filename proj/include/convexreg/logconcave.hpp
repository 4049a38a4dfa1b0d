#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "convexreg/body.hpp"
#include "convexreg/measure.hpp"
#include "convexreg/quadrature.hpp"

namespace convexreg {

// Geometric log-concave function f = e^{-phi}: phi convex, phi(0) = 0, so
// f(0) = ||f||_inf = 1. Certificates:
//  - tail: f(x) <= tail.scale * e^{-tail.beta ||x||} for ||x|| >= tail.rho
//  - unit_lip: phi <= unit_lip on the unit sphere (hence phi(x) <=
//    unit_lip * ||x|| for ||x|| <= 1 by convexity)
// Indicator-backed instances represent the 1_K limit; their operators
// short-circuit to exact body constructions.
class LogConcaveFn {
 public:
  LogConcaveFn(int dim, std::function<double(const Vector&)> phi,
               TailBound tail, double unit_lip, std::string label,
               bool noisy = false);
  static LogConcaveFn indicator(const ConvexBody& body);

  int dim() const { return dim_; }
  bool is_indicator() const { return body_.has_value(); }
  const ConvexBody* body() const { return body_ ? &*body_ : nullptr; }
  const TailBound& tail() const { return tail_; }
  double unit_lip() const { return unit_lip_; }
  const std::string& label() const { return label_; }
  // True when values come from an inner minimization and carry a small
  // optimizer-dependent error; integration then uses fixed-rule quadrature.
  bool noisy() const { return noisy_; }

  double phi(const Vector& x) const;    // +inf outside an indicator body
  double value(const Vector& x) const;  // e^{-phi}

 private:
  int dim_;
  std::function<double(const Vector&)> phi_;
  std::optional<ConvexBody> body_;
  TailBound tail_;
  double unit_lip_;
  std::string label_;
  bool noisy_ = false;
};

LogConcaveFn gaussian_fn(const Matrix& cov);
LogConcaveFn lp_exp_fn(int n, double p);  // e^{-||x||_p^p}
// One-sided linear tilt phi + max(<z, x>, 0): stays in the class (minimum
// still at 0) but is no longer even.
LogConcaveFn tilt_fn(const LogConcaveFn& f, const Vector& z);

LogConcaveFn delta_out(const LogConcaveFn& f);
LogConcaveFn delta_in(const LogConcaveFn& f);
LogConcaveFn delta_zero(const LogConcaveFn& f);
// (P_H g)(z) = sup { g(B z + w) : w in H-perp }, as a function on H.
LogConcaveFn functional_projection(const LogConcaveFn& f, const Subspace& h);

// rho_{K_p(f)}(x) = (int_0^inf p r^{p-1} f(r x/||x||) dr)^{1/p} / ... with
// the -1 homogeneity handled for non-unit x.
double ball_body_radial(const LogConcaveFn& f, double p, const Vector& x);
ConvexBody ball_body(const LogConcaveFn& f, double p);
// rho_{R_p(f)}(x): boundary of {f >= e^{-(p-1)}} along the ray of x.
double level_body_radial(const LogConcaveFn& f, double p, const Vector& x);

Estimate integral_mc(const LogConcaveFn& f, long samples,
                     const RngStream& rng, bool parallel = true);
Estimate integral_over_subspace(const LogConcaveFn& f, const Subspace& h,
                                long samples, const RngStream& rng,
                                bool parallel = true);

// For convex g on [0, inf) with g(0) = 0: the peak of t^{p-1} e^{-g(t)}
// and its location, which control int_0^inf t^{p-1} e^{-g(t)} dt up to
// factors depending only on p.
struct RayMomentPeak {
  double m_p = 0.0;  // sup_t e^{-g(t)} t^{p-1}
  double t_p = 0.0;  // the maximizer
};
RayMomentPeak ray_moment_peak(const std::function<double(double)>& g,
                              double p);

// {"type":"gaussian","cov":[[...]]}, {"type":"lp_exp","n":n,"p":p},
// {"type":"indicator","body":<body JSON>},
// {"type":"shift_center","inner":<fn JSON>,"shift":[...]}
LogConcaveFn fn_from_json(const nlohmann::json& j,
                          const std::string& path = "");

}  // namespace convexreg
