#include "convexreg/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "convexreg/config.hpp"

namespace convexreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Standard form: minimize cs^T y, As y = bs, y >= 0.
struct StandardForm {
  Matrix a;
  Vector b;
  Vector c;
  // Mapping back to original variables: x_j = shift_j + sum of signed ys.
  struct VarMap {
    int pos = -1;   // index of the y representing +x_j (or -1)
    int neg = -1;   // index of the y representing -x_j (free split)
    double shift = 0.0;
    double sign = 1.0;
  };
  std::vector<VarMap> vars;
  std::vector<double> row_sign;  // per standard row, +-1 vs original row
  int n_ineq = 0;                // original inequality rows come first
  double c_offset = 0.0;         // objective constant from bound shifts
};

StandardForm to_standard(const LinearProgram& lp) {
  int n = lp.num_vars();
  int mi = static_cast<int>(lp.b.size());
  int me = static_cast<int>(lp.d.size());
  if ((mi > 0 && lp.A.cols() != n) || (me > 0 && lp.E.cols() != n))
    throw LpError("lp_solve: inconsistent dimensions");
  for (int j = 0; j < n; ++j)
    if (!std::isfinite(lp.c[j])) throw LpError("lp_solve: non-finite objective");

  auto lb = [&](int j) { return lp.lb.size() ? lp.lb[j] : -kInf; };
  auto ub = [&](int j) { return lp.ub.size() ? lp.ub[j] : kInf; };

  StandardForm sf;
  sf.n_ineq = mi;
  sf.vars.resize(n);
  int ny = 0;
  int extra_rows = 0;  // finite upper bounds after a lower-bound shift
  for (int j = 0; j < n; ++j) {
    double l = lb(j), u = ub(j);
    if (l > u) throw LpError("lp_solve: empty variable bound");
    auto& vm = sf.vars[j];
    if (std::isfinite(l)) {
      vm.pos = ny++;
      vm.shift = l;
      vm.sign = 1.0;
      if (std::isfinite(u)) ++extra_rows;
    } else if (std::isfinite(u)) {
      vm.pos = ny++;
      vm.shift = u;
      vm.sign = -1.0;
    } else {
      vm.pos = ny++;
      vm.neg = ny++;
    }
  }
  int m = mi + me + extra_rows;
  int total = ny + mi + extra_rows;  // structural + slacks
  sf.a = Matrix::Zero(m, total);
  sf.b = Vector::Zero(m);
  sf.c = Vector::Zero(total);
  sf.row_sign.assign(m, 1.0);

  auto emit_var = [&](int row, int j, double coeff) {
    const auto& vm = sf.vars[j];
    sf.a(row, vm.pos) += coeff * vm.sign;
    if (vm.neg >= 0) sf.a(row, vm.neg) -= coeff;
    sf.b[row] -= coeff * vm.shift;
  };

  // minimize -c^T x
  for (int j = 0; j < n; ++j) {
    const auto& vm = sf.vars[j];
    sf.c[vm.pos] += -lp.c[j] * vm.sign;
    if (vm.neg >= 0) sf.c[vm.neg] -= -lp.c[j];
    sf.c_offset += lp.c[j] * vm.shift;
  }

  int row = 0;
  for (int i = 0; i < mi; ++i, ++row) {
    sf.b[row] = lp.b[i];
    for (int j = 0; j < n; ++j) emit_var(row, j, lp.A(i, j));
    sf.a(row, ny + i) = 1.0;  // slack
  }
  for (int i = 0; i < me; ++i, ++row) {
    sf.b[row] = lp.d[i];
    for (int j = 0; j < n; ++j) emit_var(row, j, lp.E(i, j));
  }
  int slack = ny + mi;
  for (int j = 0; j < n; ++j) {
    double l = lb(j), u = ub(j);
    if (std::isfinite(l) && std::isfinite(u)) {
      sf.b[row] = u - l;
      sf.a(row, sf.vars[j].pos) = 1.0;
      sf.a(row, slack++) = 1.0;
      ++row;
    }
  }
  for (int i = 0; i < m; ++i) {
    if (sf.b[i] < 0) {
      sf.b[i] = -sf.b[i];
      sf.a.row(i) = -sf.a.row(i);
      sf.row_sign[i] = -1.0;
    }
  }
  return sf;
}

struct SimplexState {
  std::vector<int> basis;
  Vector x_basic;
  Vector duals;
};

// Bland's rule primal simplex on min c^T y, A y = b, y >= 0 with the given
// starting basis. forbid marks columns that may never enter.
LpStatus run_simplex(const Matrix& a, const Vector& b, const Vector& c,
                     std::vector<int>& basis, const std::vector<bool>& forbid,
                     Vector* duals_out) {
  int m = static_cast<int>(a.rows());
  int ncols = static_cast<int>(a.cols());
  double piv_tol = tol().lp_pivot;
  long max_iters = 200L * (m + ncols) + 2000;
  Vector xb, y;
  for (long iter = 0; iter < max_iters; ++iter) {
    Matrix bmat(m, m);
    for (int i = 0; i < m; ++i) bmat.col(i) = a.col(basis[i]);
    Eigen::PartialPivLU<Matrix> lu(bmat);
    xb = lu.solve(b);
    Vector cb(m);
    for (int i = 0; i < m; ++i) cb[i] = c[basis[i]];
    y = lu.transpose().solve(cb);

    int entering = -1;
    for (int j = 0; j < ncols; ++j) {
      if (forbid[j]) continue;
      bool is_basic = false;
      for (int i = 0; i < m; ++i)
        if (basis[i] == j) {
          is_basic = true;
          break;
        }
      if (is_basic) continue;
      double rc = c[j] - a.col(j).dot(y);
      if (rc < -piv_tol) {
        entering = j;
        break;  // Bland: smallest index
      }
    }
    if (entering < 0) {
      if (duals_out) *duals_out = y;
      return LpStatus::optimal;
    }
    Vector dir = lu.solve(a.col(entering));
    int leave_pos = -1;
    double best_ratio = kInf;
    for (int i = 0; i < m; ++i) {
      if (dir[i] > piv_tol) {
        double ratio = std::max(xb[i], 0.0) / dir[i];
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 &&
             (leave_pos < 0 || basis[i] < basis[leave_pos]))) {
          best_ratio = ratio;
          leave_pos = i;
        }
      }
    }
    if (leave_pos < 0) return LpStatus::unbounded;
    basis[leave_pos] = entering;
  }
  throw LpError("lp_solve: iteration budget exceeded (cycling?)");
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
  StandardForm sf = to_standard(lp);
  int m = static_cast<int>(sf.a.rows());
  int ncols = static_cast<int>(sf.a.cols());

  // Phase 1 with one artificial per row.
  Matrix a1(m, ncols + m);
  a1.leftCols(ncols) = sf.a;
  a1.rightCols(m) = Matrix::Identity(m, m);
  Vector c1 = Vector::Zero(ncols + m);
  for (int i = 0; i < m; ++i) c1[ncols + i] = 1.0;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = ncols + i;
  std::vector<bool> forbid1(ncols + m, false);
  LpStatus st = run_simplex(a1, sf.b, c1, basis, forbid1, nullptr);
  if (st != LpStatus::optimal)
    throw LpError("lp_solve: phase 1 did not terminate at an optimum");
  {
    Matrix bmat(m, m);
    for (int i = 0; i < m; ++i) bmat.col(i) = a1.col(basis[i]);
    Vector xb = Eigen::PartialPivLU<Matrix>(bmat).solve(sf.b);
    double art_sum = 0.0;
    for (int i = 0; i < m; ++i)
      if (basis[i] >= ncols) art_sum += std::max(xb[i], 0.0);
    if (art_sum > 1e-7) {
      LpSolution sol;
      sol.status = LpStatus::infeasible;
      return sol;
    }
  }

  // Phase 2: artificials may stay basic at level zero but never enter.
  Vector c2 = Vector::Zero(ncols + m);
  c2.head(ncols) = sf.c;
  std::vector<bool> forbid2(ncols + m, false);
  for (int j = ncols; j < ncols + m; ++j) forbid2[j] = true;
  Vector duals;
  st = run_simplex(a1, sf.b, c2, basis, forbid2, &duals);
  LpSolution sol;
  if (st == LpStatus::unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  // Recover the standard-form point from a fresh factorization.
  Matrix bmat(m, m);
  for (int i = 0; i < m; ++i) bmat.col(i) = a1.col(basis[i]);
  Eigen::PartialPivLU<Matrix> lu(bmat);
  Vector xb = lu.solve(sf.b);
  Vector y_std = Vector::Zero(ncols + m);
  for (int i = 0; i < m; ++i) y_std[basis[i]] = std::max(xb[i], 0.0);
  Vector ys = y_std.head(ncols);

  // Certificates in standard form.
  double cert = tol().lp_certificate;
  double primal_resid = (sf.a * ys - sf.b).cwiseAbs().maxCoeff();
  double obj = sf.c.dot(ys);
  double dual_obj = sf.b.dot(duals);
  if (primal_resid > cert)
    throw LpError("lp_solve: primal feasibility certificate failed");
  for (int j = 0; j < ncols; ++j) {
    double rc = sf.c[j] - sf.a.col(j).dot(duals);
    if (rc < -cert) throw LpError("lp_solve: dual feasibility certificate failed");
    if (std::abs(ys[j] * rc) > cert * (1.0 + std::abs(obj)))
      throw LpError("lp_solve: complementary slackness certificate failed");
  }
  if (std::abs(obj - dual_obj) > cert * (1.0 + std::abs(obj)))
    throw LpError("lp_solve: duality gap certificate failed");

  sol.status = LpStatus::optimal;
  sol.value = -obj + sf.c_offset;  // back to maximization
  int n = lp.num_vars();
  sol.x = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    const auto& vm = sf.vars[j];
    double v = vm.shift + vm.sign * ys[vm.pos];
    if (vm.neg >= 0) v -= ys[vm.neg];
    sol.x[j] = v;
  }
  sol.dual_ineq = Vector::Zero(sf.n_ineq);
  for (int i = 0; i < sf.n_ineq; ++i)
    sol.dual_ineq[i] = -sf.row_sign[i] * duals[i];
  int me = static_cast<int>(lp.d.size());
  sol.dual_eq = Vector::Zero(me);
  for (int i = 0; i < me; ++i)
    sol.dual_eq[i] = -sf.row_sign[sf.n_ineq + i] * duals[sf.n_ineq + i];
  return sol;
}

}  // namespace convexreg
