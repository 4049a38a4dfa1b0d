#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "convexreg/body_json.hpp"
#include "convexreg/logconcave.hpp"
#include "convexreg/quadrature.hpp"

using namespace convexreg;

namespace {
LogConcaveFn std_gaussian(int n) {
  return gaussian_fn(Matrix::Identity(n, n));
}
}  // namespace

TEST_CASE("class invariants on the test family") {
  RngStream rng(301);
  std::vector<LogConcaveFn> fam = {
      std_gaussian(3), lp_exp_fn(3, 1.0), lp_exp_fn(3, 1.5),
      lp_exp_fn(3, 3.0),
      tilt_fn(std_gaussian(3), Vector::Constant(3, 0.7))};
  for (const auto& f : fam) {
    CHECK(f.phi(Vector::Zero(3)) == doctest::Approx(0.0).epsilon(1e-12));
    for (int t = 0; t < 50; ++t) {
      Vector x = rng.gaussian_vector(3), y = rng.gaussian_vector(3);
      CHECK(f.phi(x) >= -1e-12);
      // midpoint convexity
      CHECK(f.phi(0.5 * (x + y)) <= 0.5 * (f.phi(x) + f.phi(y)) + 1e-9);
    }
    // tail certificate on sampled rays
    const TailBound& tb = f.tail();
    for (int t = 0; t < 20; ++t) {
      Vector u = sphere_sample(3, rng);
      for (double r : {tb.rho + 0.5, tb.rho + 2.0, tb.rho + 7.0})
        CHECK(f.value(r * u) <= tb.scale * std::exp(-tb.beta * r) + 1e-12);
    }
  }
}

TEST_CASE("delta operators on gaussians") {
  RngStream rng(302);
  LogConcaveFn g = std_gaussian(3);
  LogConcaveFn dout = delta_out(g);
  LogConcaveFn dzero = delta_zero(g);
  LogConcaveFn din = delta_in(g);
  CHECK(dout.value(Vector::Zero(3)) == doctest::Approx(1.0).epsilon(1e-12));
  for (int t = 0; t < 15; ++t) {
    Vector x = rng.gaussian_vector(3);
    // symmetric input: Delta_out g = g, Delta_in g = g
    CHECK(dout.phi(x) == doctest::Approx(g.phi(x)).epsilon(1e-8));
    CHECK(din.phi(x) == doctest::Approx(g.phi(x)).epsilon(1e-12));
    // Delta_0 e^{-|x|^2/2} = e^{-|x|^2/4}
    CHECK(dzero.phi(x) ==
          doctest::Approx(0.25 * x.squaredNorm()).epsilon(1e-8));
  }
}

TEST_CASE("pointwise order of the delta operators") {
  RngStream rng(303);
  LogConcaveFn f = tilt_fn(std_gaussian(3), Vector::Constant(3, 0.8));
  LogConcaveFn dout = delta_out(f);
  LogConcaveFn din = delta_in(f);
  for (int t = 0; t < 20; ++t) {
    Vector x = rng.gaussian_vector(3);
    double fv = f.value(x);
    CHECK(din.value(x) <= fv + 1e-9);
    CHECK(din.value(x) <= dout.value(x) + 1e-9);
    // the outer regularization is even even when f is not
    CHECK(dout.phi(x) == doctest::Approx(dout.phi(Vector(-x))).epsilon(1e-6));
  }
  // results stay log-concave (midpoint checks through the minimizer)
  for (int t = 0; t < 10; ++t) {
    Vector x = rng.gaussian_vector(3), y = rng.gaussian_vector(3);
    CHECK(dout.phi(0.5 * (x + y)) <=
          0.5 * (dout.phi(x) + dout.phi(y)) + 1e-6);
  }
}

TEST_CASE("indicator mode short-circuits to exact bodies") {
  RngStream rng(304);
  ConvexBody tri = regular_simplex(2);
  LogConcaveFn ind = LogConcaveFn::indicator(tri);
  LogConcaveFn dz = delta_zero(ind);
  LogConcaveFn dout = delta_out(ind);
  LogConcaveFn din = delta_in(ind);
  REQUIRE(dz.is_indicator());
  ConvexBody diff = diff_body(tri);
  ConvexBody inreg = inner_reg(tri);
  for (int t = 0; t < 30; ++t) {
    Vector x = rng.gaussian_vector(2);
    CHECK(dz.body()->gauge(x) == doctest::Approx(diff.gauge(x)).epsilon(1e-9));
    // Delta_out 1_K = 1_{(K-K)/2}
    CHECK(dout.body()->gauge(x) ==
          doctest::Approx(2.0 * diff.gauge(x)).epsilon(1e-9));
    CHECK(din.body()->gauge(x) ==
          doctest::Approx(inreg.gauge(x)).epsilon(1e-9));
  }
  // triangle difference body is the hexagon with 6x the area
  Estimate vd = volume_mc(diff, 20000, rng.derive(1));
  Estimate vt = volume_mc(tri, 20000, rng.derive(2));
  CHECK(std::abs(vd.value / vt.value - 6.0) <
        3 * (vd.se / vt.value + 6.0 * vt.se / vt.value) + 1e-2);
}

TEST_CASE("functional projection") {
  RngStream rng(305);
  Matrix g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rng.normal();
  Matrix cov = g * g.transpose() + Matrix::Identity(3, 3);
  LogConcaveFn f = gaussian_fn(cov);
  Subspace h = haar_subspace(3, 2, rng);
  LogConcaveFn pf = functional_projection(f, h);
  Matrix marg = h.basis().transpose() * cov * h.basis();
  for (int t = 0; t < 15; ++t) {
    Vector z = rng.gaussian_vector(2);
    // sup over the fiber of a gaussian: by the Lagrange conditions the
    // constrained minimum of the quadratic form is z^T (B^T Sigma B)^{-1} z
    double oracle = 0.5 * z.dot(marg.inverse() * z);
    CHECK(pf.phi(z) == doctest::Approx(oracle).epsilon(1e-7));
  }

  // indicator projection matches the body projection
  ConvexBody k = cube(3, 1.0);
  LogConcaveFn pk = functional_projection(LogConcaveFn::indicator(k), h);
  ConvexBody pb = project(k, h);
  for (int t = 0; t < 20; ++t) {
    Vector z = rng.gaussian_vector(2);
    CHECK(pk.body()->gauge(z) == doctest::Approx(pb.gauge(z)).epsilon(1e-9));
  }
}

TEST_CASE("ball body radial closed forms") {
  RngStream rng(306);
  LogConcaveFn g = std_gaussian(3);
  for (double p : {1.0, 2.0, 3.5}) {
    double oracle = std::pow(
        std::pow(2.0, 0.5 * p - 1.0) * p * std::tgamma(0.5 * p), 1.0 / p);
    for (int t = 0; t < 5; ++t) {
      Vector xi = sphere_sample(3, rng);
      CHECK(ball_body_radial(g, p, xi) ==
            doctest::Approx(oracle).epsilon(1e-7));
    }
  }
  // homogeneity of degree -1
  Vector xi = sphere_sample(3, rng);
  CHECK(ball_body_radial(g, 2.0, Vector(2.0 * xi)) ==
        doctest::Approx(0.5 * ball_body_radial(g, 2.0, xi)).epsilon(1e-9));

  // indicator: K_p(1_K) = K for every p
  LogConcaveFn ind = LogConcaveFn::indicator(cube(3, 1.0));
  for (double p : {1.0, 2.0, 5.0})
    for (int t = 0; t < 5; ++t) {
      Vector u = sphere_sample(3, rng);
      CHECK(ball_body_radial(ind, p, u) ==
            doctest::Approx(cube(3, 1.0).radial(u)).epsilon(1e-12));
    }
}

TEST_CASE("ball body as a convex body") {
  RngStream rng(307);
  LogConcaveFn f = lp_exp_fn(2, 1.5);
  ConvexBody k2 = ball_body(f, 2.0);
  for (int t = 0; t < 10; ++t) {
    Vector x = rng.gaussian_vector(2);
    CHECK(k2.gauge(2.0 * x) == doctest::Approx(2.0 * k2.gauge(x)).epsilon(1e-7));
    Vector u = sphere_sample(2, rng);
    double rho = k2.radial(u);
    CHECK(rho >= k2.inner_radius() - 1e-9);
    CHECK(rho <= k2.outer_radius() + 1e-9);
  }
}

TEST_CASE("nested ball bodies") {
  // Gamma(p+1)^{1/p}/Gamma(q+1)^{1/q} K_q <= K_p <= K_q for p < q
  RngStream rng(308);
  double p = 2.0, q = 4.0;
  double c = std::pow(std::tgamma(p + 1.0), 1.0 / p) /
             std::pow(std::tgamma(q + 1.0), 1.0 / q);
  std::vector<LogConcaveFn> fam = {
      std_gaussian(2), lp_exp_fn(2, 1.5),
      tilt_fn(std_gaussian(2), Vector::Constant(2, 0.6))};
  for (const auto& f : fam)
    for (int t = 0; t < 8; ++t) {
      Vector xi = sphere_sample(2, rng);
      double rp = ball_body_radial(f, p, xi);
      double rq = ball_body_radial(f, q, xi);
      CHECK(rp <= rq * (1 + 1e-6));
      CHECK(rp >= c * rq * (1 - 1e-6));
    }
}

TEST_CASE("level bodies") {
  RngStream rng(309);
  LogConcaveFn g = std_gaussian(3);
  for (double p : {1.5, 2.0, 4.0}) {
    Vector xi = sphere_sample(3, rng);
    CHECK(level_body_radial(g, p, xi) ==
          doctest::Approx(std::sqrt(2.0 * (p - 1.0))).epsilon(1e-9));
  }
  // monotone in p
  LogConcaveFn f = lp_exp_fn(2, 3.0);
  Vector xi = sphere_sample(2, rng);
  CHECK(level_body_radial(f, 2.0, xi) <= level_body_radial(f, 3.0, xi) + 1e-12);
  // indicator: R_p(1_K) = K
  LogConcaveFn ind = LogConcaveFn::indicator(cross_polytope(2, 1.0));
  CHECK(level_body_radial(ind, 2.0, xi) ==
        doctest::Approx(cross_polytope(2, 1.0).radial(xi)).epsilon(1e-12));
}

TEST_CASE("ray moment peak quantities") {
  // g(t) = t: stationarity gives t_p = p-1, M_p = e^{-(p-1)} (p-1)^{p-1}
  for (double p : {2.0, 3.0, 5.0}) {
    RayMomentPeak r = ray_moment_peak([](double t) { return t; }, p);
    CHECK(r.t_p == doctest::Approx(p - 1.0).epsilon(1e-6));
    CHECK(r.m_p ==
          doctest::Approx(std::exp(-(p - 1.0)) * std::pow(p - 1.0, p - 1.0))
              .epsilon(1e-6));
  }
  // sandwich M_p t_p / p <= int t^{p-1} e^{-g} <= c M_p t_p / sqrt(p-1)
  std::vector<std::function<double(double)>> gs = {
      [](double t) { return t; }, [](double t) { return t * t; },
      [](double t) { return t + t * t * t; }};
  for (const auto& g : gs)
    for (double p : {2.0, 3.0, 5.0, 10.0}) {
      RayMomentPeak r = ray_moment_peak(g, p);
      TailBound tb{2.0 * r.t_p + p, 0.5, 1e3};
      double integral = quad_1d_halfline(
          [&](double t) {
            return std::pow(t, p - 1.0) * std::exp(-g(t));
          },
          0.0, tb, 1e-9);
      CHECK(integral >= r.m_p * r.t_p / p * (1 - 1e-6));
      // generous absolute constant: the statement leaves it symbolic
      CHECK(integral <= 10.0 * r.m_p * r.t_p / std::sqrt(p - 1.0));
      // bracket g(2 t_p) >= p-1 >= g(t_p)
      CHECK(g(2 * r.t_p) >= p - 1.0 - 1e-6);
      CHECK(g(r.t_p) <= p - 1.0 + 1e-6);
    }
}

TEST_CASE("level and ball bodies against the 1-D quantities") {
  // directional form of the sandwich t_p <= rho_{R_p} <= 2 t_p, p >= 2
  RngStream rng(310);
  std::vector<LogConcaveFn> fam = {std_gaussian(2), lp_exp_fn(2, 3.0)};
  for (const auto& f : fam)
    for (double p : {2.0, 4.0})
      for (int t = 0; t < 5; ++t) {
        Vector xi = sphere_sample(2, rng);
        auto g = [&](double s) { return f.phi(s * xi); };
        RayMomentPeak r = ray_moment_peak(g, p);
        double rho = level_body_radial(f, p, xi);
        CHECK(rho >= r.t_p * (1 - 1e-9));
        CHECK(rho <= 2 * r.t_p * (1 + 1e-9));
      }
}

TEST_CASE("section identity: integral over H equals section volume of K_k") {
  RngStream rng(311);
  const int n = 3, k = 2;
  Subspace h = haar_subspace(n, k, rng);
  LogConcaveFn g = std_gaussian(n);
  // closed form: the restriction of the standard gaussian integrates to
  // (2 pi)^{k/2} over any k-dimensional subspace
  double oracle = std::pow(2 * M_PI, 0.5 * k);
  Estimate lhs = integral_over_subspace(g, h, 400, rng.derive(1));
  CHECK(std::abs(lhs.value - oracle) < 3 * lhs.se + 1e-6);
  Estimate rhs = volume_mc(section(ball_body(g, k), h), 400, rng.derive(2));
  CHECK(std::abs(rhs.value - oracle) < 3 * rhs.se + 1e-4);

  // full-space integral sanity: (2 pi)^{n/2}
  Estimate full = integral_mc(g, 400, rng.derive(3));
  CHECK(std::abs(full.value - std::pow(2 * M_PI, 1.5)) < 3 * full.se + 1e-6);
}

TEST_CASE("function descriptions from json") {
  RngStream rng(312);
  nlohmann::json jg = {{"type", "gaussian"},
                       {"cov", {{1.0, 0.0}, {0.0, 2.0}}}};
  LogConcaveFn f = fn_from_json(jg);
  Vector x(2);
  x << 1.0, 1.0;
  CHECK(f.phi(x) == doctest::Approx(0.5 * (1.0 + 0.5)).epsilon(1e-12));

  nlohmann::json ji = {{"type", "indicator"},
                       {"body", {{"type", "simplex"}, {"n", 2}}}};
  LogConcaveFn ind = fn_from_json(ji);
  REQUIRE(ind.is_indicator());

  nlohmann::json jt = {{"type", "shift_center"},
                       {"inner", {{"type", "lp_exp"}, {"n", 2}, {"p", 2.0}}},
                       {"shift", {0.5, -0.5}}};
  LogConcaveFn tilted = fn_from_json(jt);
  CHECK(tilted.phi(x) == doctest::Approx(2.0 + 0.0).epsilon(1e-12));

  nlohmann::json bad = {{"type", "nope"}};
  CHECK_THROWS_AS(fn_from_json(bad), BodyJsonError);
}
