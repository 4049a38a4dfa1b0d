#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "convexreg/measure.hpp"

using namespace convexreg;

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(unit_ball_volume(3) == doctest::Approx(4 * M_PI / 3).epsilon(1e-12));
  // recursion omega_n = omega_{n-2} * 2 pi / n
  for (int n = 3; n <= 12; ++n)
    CHECK(unit_ball_volume(n) ==
          doctest::Approx(unit_ball_volume(n - 2) * 2 * M_PI / n)
              .epsilon(1e-12));
}

TEST_CASE("mc_mean moments and determinism") {
  RngStream rng(21);
  auto draw = [](RngStream& r) { return r.uniform(); };
  Estimate a = mc_mean(100000, rng, draw, true);
  Estimate b = mc_mean(100000, rng, draw, false);
  CHECK(a.value == b.value);  // bit-identical across serial/parallel
  CHECK(a.se == b.se);
  CHECK(std::abs(a.value - 0.5) < 3 * a.se + 1e-3);
  CHECK(a.se == doctest::Approx(std::sqrt(1.0 / 12 / 100000)).epsilon(0.05));
}

TEST_CASE("vrad and volume closed forms") {
  RngStream rng(22);
  Estimate vb = vrad_mc(ball(4, 1.7), 2000, rng);
  CHECK(vb.value == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(vb.se < 1e-12);

  Estimate vc = volume_mc(cube(2, 1.0), 40000, rng.derive(1));
  CHECK(std::abs(vc.value - 4.0) < 3 * vc.se + 4e-3);

  // regular simplex, edge sqrt(2): vol = sqrt(n+1)/n!
  Estimate vs = volume_mc(regular_simplex(3), 20000, rng.derive(2));
  double oracle = std::sqrt(4.0) / 6.0;
  CHECK(std::abs(vs.value - oracle) < 3 * vs.se + 1e-3);

  Estimate vx = volume_mc(cross_polytope(3, 1.0), 20000, rng.derive(3));
  CHECK(std::abs(vx.value - 8.0 / 6.0) < 3 * vx.se + 1e-3);
}

TEST_CASE("spherical means against closed forms") {
  RngStream rng(23);
  // M*(cube in the plane) = mean of ||u||_1 over the circle = 4/pi
  Estimate m = mean_support(cube(2, 1.0), 60000, rng);
  CHECK(std::abs(m.value - 4.0 / M_PI) < 3 * m.se + 1e-3);
  // M(ball) = 1/r
  Estimate g = mean_gauge(ball(3, 2.0), 2000, rng.derive(1));
  CHECK(g.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hit-and-run moments") {
  RngStream rng(24);
  // cube [-1,1]^2: mean 0, covariance I/3
  auto pts = uniform_sample(cube(2, 1.0), 4000, rng);
  REQUIRE(pts.size() == 4000);
  Vector mean = Vector::Zero(2);
  for (const auto& p : pts) {
    REQUIRE(p.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    mean += p;
  }
  mean /= 4000.0;
  CHECK(mean.cwiseAbs().maxCoeff() < 0.05);

  Vector c;
  Matrix cov = covariance_mc(cube(2, 1.0), 4000, rng.derive(1), &c);
  CHECK(std::abs(cov(0, 0) - 1.0 / 3) < 0.04);
  CHECK(std::abs(cov(1, 1) - 1.0 / 3) < 0.04);
  CHECK(std::abs(cov(0, 1)) < 0.03);

  // ball in R^3: E||x||^2 = n/(n+2) = 3/5
  auto bp = uniform_sample(ball(3, 1.0), 3000, rng.derive(2));
  double r2 = 0;
  for (const auto& p : bp) r2 += p.squaredNorm();
  r2 /= bp.size();
  CHECK(std::abs(r2 - 0.6) < 0.03);

  // polytope-backed sampling stays inside the body
  auto sp = uniform_sample(regular_simplex(2), 200, rng.derive(3));
  ConvexBody s = regular_simplex(2);
  for (const auto& p : sp) CHECK(s.gauge(p) <= 1.0 + 1e-9);
}

TEST_CASE("isotropic normalization whitens a skewed cube") {
  RngStream rng(25);
  Matrix t(2, 2);
  t << 2.0, 0.7, 0.0, 0.5;
  ConvexBody k = linear_image(cube(2, 1.0), t);
  IsotropicResult iso = isotropic_normalize(k, 6000, rng);
  Matrix cov = covariance_mc(iso.body, 6000, rng.derive(9));
  double ratio = cov(0, 0) / cov(1, 1);
  CHECK(std::abs(ratio - 1.0) < 0.2);
  CHECK(std::abs(cov(0, 1)) / std::sqrt(cov(0, 0) * cov(1, 1)) < 0.1);
}

TEST_CASE("santalo point") {
  RngStream rng(26);
  // symmetric body: the Santalo point is the origin
  Vector s = santalo_point(cube(2, 1.0), 4000, rng);
  CHECK(s.norm() < 0.05);
  // translation equivariance: s(K + z) = z for symmetric K
  Vector z(2);
  z << 0.3, -0.2;
  Vector st = santalo_point(translate(cube(2, 1.0), z), 4000, rng.derive(1));
  CHECK((st - z).norm() < 0.05);
  // 1-D style oracle in 2-D: for the simplex the Santalo point is the
  // barycenter (= origin) by symmetry of the regular simplex
  Vector ss = santalo_point(regular_simplex(2), 3000, rng.derive(2));
  CHECK(ss.norm() < 0.05);
}

TEST_CASE("aleksandrov quantities") {
  RngStream rng(27);
  // ball: every projection is a ball, Q_k = 1 with zero variance
  for (int kd : {1, 2}) {
    Estimate q = aleksandrov_q(ball(3, 1.0), kd, 8, 64, rng.derive(kd));
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-9));
  }
  // cube: Q_1 equals the spherical mean of the support function
  Estimate q1 = aleksandrov_q(cube(2, 1.0), 1, 400, 64, rng.derive(10));
  Estimate ms = mean_support(cube(2, 1.0), 40000, rng.derive(11));
  CHECK(std::abs(q1.value - ms.value) < 3 * (q1.se + ms.se) + 1e-3);
  // monotonicity in k on the 3-cube
  Estimate a1 = aleksandrov_q(cube(3, 1.0), 1, 300, 64, rng.derive(12));
  Estimate a2 = aleksandrov_q(cube(3, 1.0), 2, 300, 400, rng.derive(13));
  CHECK(a1.value + 3 * (a1.se + a2.se) >= a2.value);
}

TEST_CASE("phi functional on the ball matches the closed form") {
  RngStream rng(28);
  for (int n : {3, 5}) {
    for (int kd : {1, 2}) {
      Estimate phi =
          phi_functional(ball(n, 1.0), kd, 6, 64, 256, rng.derive(n));
      double oracle = std::pow(unit_ball_volume(n), -1.0 / n) *
                      std::pow(unit_ball_volume(kd), 1.0 / kd);
      CHECK(phi.value == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("estimator determinism across parallel modes") {
  RngStream rng(29);
  ConvexBody k = regular_simplex(3);
  Estimate a = vrad_mc(k, 3000, rng, true);
  Estimate b = vrad_mc(k, 3000, rng, false);
  CHECK(a.value == b.value);
  CHECK(a.se == b.se);
  Estimate qa = aleksandrov_q(cube(3, 1.0), 2, 20, 64, rng.derive(1), true);
  Estimate qb = aleksandrov_q(cube(3, 1.0), 2, 20, 64, rng.derive(1), false);
  CHECK(qa.value == qb.value);
}
