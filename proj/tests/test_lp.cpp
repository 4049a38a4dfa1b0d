#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "convexreg/lp.hpp"
#include "convexreg/rng.hpp"

using namespace convexreg;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("single variable bound") {
  LinearProgram lp;
  lp.c = Vector::Ones(1);
  lp.A = Matrix::Ones(1, 1);
  lp.b = Vector::Ones(1);
  LpSolution s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cube support h(u) = ||u||_1") {
  LinearProgram lp;
  lp.c = Vector(2);
  lp.c << 1, 2;
  lp.lb = Vector::Constant(2, -1.0);
  lp.ub = Vector::Constant(2, 1.0);
  LpSolution s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.value == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("cross-polytope gauge at (0.5, 0.5) is 1") {
  // max s with s*x = sum lambda_i v_i, sum lambda = 1, lambda >= 0;
  // gauge = 1/s. Oracle: ||(0.5,0.5)||_1 = 1.
  Matrix v(4, 2);
  v << 1, 0, -1, 0, 0, 1, 0, -1;
  Vector x(2);
  x << 0.5, 0.5;
  int m = 4, n = 2;
  LinearProgram lp;
  lp.c = Vector::Zero(m + 1);
  lp.c[m] = 1.0;  // maximize s
  lp.E = Matrix::Zero(n + 1, m + 1);
  lp.d = Vector::Zero(n + 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) lp.E(j, i) = v(i, j);
  for (int j = 0; j < n; ++j) lp.E(j, m) = -x[j];
  lp.E.row(n).head(m).setOnes();
  lp.d[n] = 1.0;
  lp.lb = Vector::Zero(m + 1);
  lp.lb[m] = -kInf;
  lp.ub = Vector::Constant(m + 1, kInf);
  LpSolution s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(1.0 / s.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("infeasible and unbounded detection") {
  LinearProgram lp;
  lp.c = Vector::Ones(1);
  lp.A = Matrix(2, 1);
  lp.A << 1, -1;
  lp.b = Vector(2);
  lp.b << 1, -2;  // x <= 1 and x >= 2
  CHECK(lp_solve(lp).status == LpStatus::infeasible);

  LinearProgram lp2;
  lp2.c = Vector::Ones(1);
  lp2.A = Matrix(1, 1);
  lp2.A << -1;
  lp2.b = Vector::Zero(1);  // x >= 0, maximize x
  CHECK(lp_solve(lp2).status == LpStatus::unbounded);
}

TEST_CASE("scaling invariance of the optimum") {
  LinearProgram lp;
  lp.c = Vector(2);
  lp.c << 2, 1;
  lp.A = Matrix(3, 2);
  lp.A << 1, 1, 1, 0, 0, 1;
  lp.b = Vector(3);
  lp.b << 1.5, 1, 1;
  lp.lb = Vector::Zero(2);
  lp.ub = Vector::Constant(2, kInf);
  LpSolution s1 = lp_solve(lp);
  REQUIRE(s1.status == LpStatus::optimal);
  lp.c *= 3.5;
  LpSolution s2 = lp_solve(lp);
  REQUIRE(s2.status == LpStatus::optimal);
  CHECK(s2.value == doctest::Approx(3.5 * s1.value).epsilon(1e-10));
  CHECK((s1.x - s2.x).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("agreement with vertex enumeration on random 2-D instances") {
  RngStream rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    RngStream r = rng.derive(trial);
    const int m = 6;
    Matrix a(m, 2);
    Vector b(m);
    for (int i = 0; i < m; ++i) {
      double th = 2 * M_PI * (i + 0.2 * r.uniform()) / m;
      a(i, 0) = std::cos(th);
      a(i, 1) = std::sin(th);
      b[i] = 0.5 + r.uniform();
    }
    Vector c(2);
    c << r.normal(), r.normal();

    // Oracle: enumerate basic feasible points from constraint pairs.
    double best = -kInf;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        Matrix sys(2, 2);
        sys.row(0) = a.row(i);
        sys.row(1) = a.row(j);
        if (std::abs(sys.determinant()) < 1e-9) continue;
        Vector rhs(2);
        rhs << b[i], b[j];
        Vector x = sys.fullPivLu().solve(rhs);
        if (((a * x - b).array() < 1e-9).all()) best = std::max(best, c.dot(x));
      }

    LinearProgram lp;
    lp.c = c;
    lp.A = a;
    lp.b = b;
    LpSolution s = lp_solve(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == doctest::Approx(best).epsilon(1e-8));
  }
}

TEST_CASE("dual certificate sanity on an equality constrained problem") {
  // max x1 + x2 s.t. x1 + x2 + x3 = 1, x >= 0
  LinearProgram lp;
  lp.c = Vector(3);
  lp.c << 1, 1, 0;
  lp.E = Matrix::Ones(1, 3);
  lp.d = Vector::Ones(1);
  lp.lb = Vector::Zero(3);
  lp.ub = Vector::Constant(3, kInf);
  LpSolution s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-10));
}
