#include "convexreg/body.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "convexreg/config.hpp"
#include "convexreg/lp.hpp"
#include "convexreg/minimize.hpp"

namespace convexreg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

class BodyImpl {
 public:
  BodyImpl(int dim, double r_in, double r_out, bool symmetric,
           std::string provenance)
      : dim_(dim),
        r_in_(r_in),
        r_out_(r_out),
        symmetric_(symmetric),
        provenance_(std::move(provenance)) {
    if (dim_ < 1) throw BodyError("body: dimension must be positive");
    if (!(r_in_ > 0) || !(r_out_ >= r_in_))
      throw BodyError("body: invalid radius certificates (" + provenance_ +
                      ")");
    if (r_in_ < tol().interior_margin * r_out_)
      throw BodyError("body: origin too close to the boundary (" +
                      provenance_ + ")");
  }
  virtual ~BodyImpl() = default;

  int dim() const { return dim_; }
  double r_in() const { return r_in_; }
  double r_out() const { return r_out_; }
  bool symmetric() const { return symmetric_; }
  const std::string& provenance() const { return provenance_; }

  virtual double support(const Vector& u) const = 0;
  virtual double gauge(const Vector& x) const = 0;

 private:
  int dim_;
  double r_in_;
  double r_out_;
  bool symmetric_;
  std::string provenance_;
};

namespace {

// ---------------------------------------------------------------------------
// LP building blocks shared by the polytope-backed oracles.

// Gauge of conv(rows of v) at x: maximize s subject to
// sum_i lambda_i v_i = s x, sum lambda = 1, lambda >= 0; gauge = 1/s.
double vpoly_gauge_lp(const Matrix& v, const Vector& x) {
  int m = static_cast<int>(v.rows());
  int n = static_cast<int>(v.cols());
  if (x.norm() == 0.0) return 0.0;
  LinearProgram lp;
  lp.c = Vector::Zero(m + 1);
  lp.c[m] = 1.0;
  lp.E = Matrix::Zero(n + 1, m + 1);
  lp.d = Vector::Zero(n + 1);
  lp.E.block(0, 0, n, m) = v.transpose();
  lp.E.col(m).head(n) = -x;
  lp.E.row(n).head(m).setOnes();
  lp.d[n] = 1.0;
  lp.lb = Vector::Zero(m + 1);
  lp.lb[m] = 0.0;
  lp.ub = Vector::Constant(m + 1, kInf);
  LpSolution s = lp_solve(lp);
  if (s.status == LpStatus::unbounded)
    throw BodyError("vpolytope gauge: unbounded dilate (degenerate body)");
  if (s.status != LpStatus::optimal || s.value <= 0)
    throw BodyError("vpolytope gauge: origin not interior");
  return 1.0 / s.value;
}

// Support of {x : rows x <= rhs} in direction u.
double hpoly_support_lp(const Matrix& rows, const Vector& rhs,
                        const Vector& u) {
  LinearProgram lp;
  lp.c = u;
  lp.A = rows;
  lp.b = rhs;
  LpSolution s = lp_solve(lp);
  if (s.status == LpStatus::unbounded)
    throw BodyError("hpolytope support: unbounded (polar degenerate)");
  if (s.status != LpStatus::optimal)
    throw BodyError("hpolytope support: infeasible");
  return s.value;
}

// Gauge of K - K at x for K = {y : rows y <= rhs}: minimize t subject to
// a - b = x, rows a <= t rhs, rows b <= t rhs, t >= 0.
double hpoly_diff_gauge_lp(const Matrix& rows, const Vector& rhs,
                           const Vector& x) {
  int q = static_cast<int>(rows.rows());
  int n = static_cast<int>(rows.cols());
  if (x.norm() == 0.0) return 0.0;
  LinearProgram lp;  // vars: a (n, free), b (n, free), t (>= 0)
  lp.c = Vector::Zero(2 * n + 1);
  lp.c[2 * n] = -1.0;  // the solver maximizes
  lp.A = Matrix::Zero(2 * q, 2 * n + 1);
  lp.b = Vector::Zero(2 * q);
  lp.A.block(0, 0, q, n) = rows;
  lp.A.block(q, n, q, n) = rows;
  lp.A.col(2 * n).head(q) = -rhs;
  lp.A.col(2 * n).tail(q) = -rhs;
  lp.E = Matrix::Zero(n, 2 * n + 1);
  lp.E.block(0, 0, n, n) = Matrix::Identity(n, n);
  lp.E.block(0, n, n, n) = -Matrix::Identity(n, n);
  lp.d = x;
  lp.lb = Vector::Constant(2 * n + 1, -kInf);
  lp.lb[2 * n] = 0.0;
  lp.ub = Vector::Constant(2 * n + 1, kInf);
  LpSolution s = lp_solve(lp);
  if (s.status != LpStatus::optimal)
    throw BodyError("difference gauge: dilate LP not optimal");
  return -s.value;
}

// Support of conv(rows of v) intersected with span(basis), in H-coordinates.
double vpoly_section_support_lp(const Matrix& v, const Matrix& basis,
                                const Vector& z) {
  int m = static_cast<int>(v.rows());
  int n = static_cast<int>(v.cols());
  int k = static_cast<int>(basis.cols());
  LinearProgram lp;  // vars: w (k, free), lambda (m, >= 0)
  lp.c = Vector::Zero(k + m);
  lp.c.head(k) = z;
  lp.E = Matrix::Zero(n + 1, k + m);
  lp.d = Vector::Zero(n + 1);
  lp.E.block(0, 0, n, k) = basis;
  lp.E.block(0, k, n, m) = -v.transpose();
  lp.E.row(n).tail(m).setOnes();
  lp.d[n] = 1.0;
  lp.lb = Vector::Constant(k + m, -kInf);
  lp.lb.tail(m).setZero();
  lp.ub = Vector::Constant(k + m, kInf);
  LpSolution s = lp_solve(lp);
  if (s.status != LpStatus::optimal)
    throw BodyError("section support: subspace misses the body interior");
  return s.value;
}

// Support of {x : rows x <= rhs} intersected with span(basis).
double hpoly_section_support_lp(const Matrix& rows, const Vector& rhs,
                                const Matrix& basis, const Vector& z) {
  LinearProgram lp;
  lp.c = z;
  lp.A = rows * basis;
  lp.b = rhs;
  LpSolution s = lp_solve(lp);
  if (s.status != LpStatus::optimal)
    throw BodyError("hpolytope section support failed");
  return s.value;
}

// Support of conv(V) intersect -conv(V).
double inner_vpoly_support_lp(const Matrix& v, const Vector& u) {
  int m = static_cast<int>(v.rows());
  int n = static_cast<int>(v.cols());
  LinearProgram lp;  // vars: x (n free), lambda (m), mu (m)
  lp.c = Vector::Zero(n + 2 * m);
  lp.c.head(n) = u;
  lp.E = Matrix::Zero(2 * n + 2, n + 2 * m);
  lp.d = Vector::Zero(2 * n + 2);
  lp.E.block(0, 0, n, n) = Matrix::Identity(n, n);
  lp.E.block(0, n, n, m) = -v.transpose();
  lp.E.block(n, 0, n, n) = Matrix::Identity(n, n);
  lp.E.block(n, n + m, n, m) = v.transpose();
  lp.E.row(2 * n).segment(n, m).setOnes();
  lp.E.row(2 * n + 1).tail(m).setOnes();
  lp.d[2 * n] = 1.0;
  lp.d[2 * n + 1] = 1.0;
  lp.lb = Vector::Constant(n + 2 * m, -kInf);
  lp.lb.tail(2 * m).setZero();
  lp.ub = Vector::Constant(n + 2 * m, kInf);
  LpSolution s = lp_solve(lp);
  if (s.status != LpStatus::optimal)
    throw BodyError("inner regularization support failed");
  return s.value;
}

// Support of (conv(V) intersect -conv(V)) intersect span(basis).
double inner_vpoly_section_support_lp(const Matrix& v, const Matrix& basis,
                                      const Vector& z) {
  int m = static_cast<int>(v.rows());
  int n = static_cast<int>(v.cols());
  int k = static_cast<int>(basis.cols());
  LinearProgram lp;  // vars: w (k free), lambda (m), mu (m)
  lp.c = Vector::Zero(k + 2 * m);
  lp.c.head(k) = z;
  lp.E = Matrix::Zero(2 * n + 2, k + 2 * m);
  lp.d = Vector::Zero(2 * n + 2);
  lp.E.block(0, 0, n, k) = basis;
  lp.E.block(0, k, n, m) = -v.transpose();
  lp.E.block(n, 0, n, k) = basis;
  lp.E.block(n, k + m, n, m) = v.transpose();
  lp.E.row(2 * n).segment(k, m).setOnes();
  lp.E.row(2 * n + 1).tail(m).setOnes();
  lp.d[2 * n] = 1.0;
  lp.d[2 * n + 1] = 1.0;
  lp.lb = Vector::Constant(k + 2 * m, -kInf);
  lp.lb.tail(2 * m).setZero();
  lp.ub = Vector::Constant(k + 2 * m, kInf);
  LpSolution s = lp_solve(lp);
  if (s.status != LpStatus::optimal)
    throw BodyError("inner regularization section support failed");
  return s.value;
}

// Gauge of P_H(conv(V) intersect -conv(V)) at z (H-coordinates): minimize t
// over fiber points y = B z + N w with both y and -y in t conv(V).
double inner_vpoly_projection_gauge_lp(const Matrix& v, const Matrix& basis,
                                       const Matrix& complement,
                                       const Vector& z) {
  int m = static_cast<int>(v.rows());
  int n = static_cast<int>(v.cols());
  int q = static_cast<int>(complement.cols());
  if (z.norm() == 0.0) return 0.0;
  // vars: lambda (m), mu (m), w (q free), t
  int nv = 2 * m + q + 1;
  LinearProgram lp;
  lp.c = Vector::Zero(nv);
  lp.c[nv - 1] = -1.0;  // maximize -t
  lp.E = Matrix::Zero(2 * n, nv);
  lp.d = Vector::Zero(2 * n);
  lp.E.block(0, 0, n, m) = v.transpose();
  lp.E.block(0, 2 * m, n, q) = -complement;
  lp.E.block(n, m, n, m) = v.transpose();
  lp.E.block(n, 2 * m, n, q) = complement;
  lp.d.head(n) = basis * z;
  lp.d.tail(n) = -(basis * z);
  lp.A = Matrix::Zero(2, nv);
  lp.A.row(0).head(m).setOnes();
  lp.A.row(1).segment(m, m).setOnes();
  lp.A.col(nv - 1).setConstant(-1.0);
  lp.b = Vector::Zero(2);
  lp.lb = Vector::Constant(nv, -kInf);
  lp.lb.head(2 * m).setZero();
  lp.lb[nv - 1] = 0.0;
  lp.ub = Vector::Constant(nv, kInf);
  LpSolution s = lp_solve(lp);
  if (s.status != LpStatus::optimal)
    throw BodyError("projected inner regularization gauge failed");
  return -s.value;
}

// Certified circumradius bound of {x : rows x <= rhs} from axis supports:
// |x_j| <= max(h(e_j), h(-e_j)).
double hpoly_outer_radius_bound(const Matrix& rows, const Vector& rhs) {
  int n = static_cast<int>(rows.cols());
  double sq = 0.0;
  Vector e = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    double hi = hpoly_support_lp(rows, rhs, e);
    e[j] = -1.0;
    double lo = hpoly_support_lp(rows, rhs, e);
    e[j] = 0.0;
    double m = std::max(std::abs(hi), std::abs(lo));
    sq += m * m;
  }
  return std::sqrt(sq);
}

double lp_norm(const Vector& x, double p) {
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.lpNorm<1>();
  if (p == 2.0) return x.norm();
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

double dual_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

// ---------------------------------------------------------------------------
// Concrete implementations.

class BallImpl final : public BodyImpl {
 public:
  BallImpl(int n, double rho)
      : BodyImpl(n, rho, rho, true, "ball"), rho_(rho) {}
  double support(const Vector& u) const override { return rho_ * u.norm(); }
  double gauge(const Vector& x) const override { return x.norm() / rho_; }
  double radius() const { return rho_; }

 private:
  double rho_;
};

class EllipsoidImpl final : public BodyImpl {
 public:
  explicit EllipsoidImpl(const Matrix& a)
      : BodyImpl(static_cast<int>(a.rows()), radii(a).first, radii(a).second,
                 true, "ellipsoid"),
        a_(a),
        a_inv_(a.inverse()) {}
  double support(const Vector& u) const override {
    return std::sqrt(u.dot(a_inv_ * u));
  }
  double gauge(const Vector& x) const override {
    return std::sqrt(x.dot(a_ * x));
  }
  const Matrix& quad_form() const { return a_; }
  const Matrix& quad_form_inv() const { return a_inv_; }

 private:
  static std::pair<double, double> radii(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.eigenvalues().minCoeff() <= 0)
      throw BodyError("ellipsoid: quadratic form not SPD");
    return {1.0 / std::sqrt(es.eigenvalues().maxCoeff()),
            1.0 / std::sqrt(es.eigenvalues().minCoeff())};
  }
  Matrix a_;
  Matrix a_inv_;
};

class LpBallImpl final : public BodyImpl {
 public:
  LpBallImpl(int n, double p, double scale)
      : BodyImpl(n, inner(n, p, scale), outer(n, p, scale), true, "lp_ball"),
        p_(p),
        q_(dual_exponent(p)),
        scale_(scale) {}
  double support(const Vector& u) const override {
    return scale_ * lp_norm(u, q_);
  }
  double gauge(const Vector& x) const override {
    return lp_norm(x, p_) / scale_;
  }
  double exponent() const { return p_; }
  double scale() const { return scale_; }

 private:
  static double inner(int n, double p, double scale) {
    // min radial = scale / max_{|xi|=1} ||xi||_p
    double maxnorm = (p >= 2.0) ? 1.0 : std::pow(n, 1.0 / p - 0.5);
    return scale / maxnorm;
  }
  static double outer(int n, double p, double scale) {
    double minnorm =
        (p >= 2.0) ? std::pow(n, (std::isinf(p) ? 0.0 : 1.0 / p) - 0.5) : 1.0;
    return scale / minnorm;
  }
  double p_, q_, scale_;
};

class VPolyImpl final : public BodyImpl {
 public:
  VPolyImpl(Matrix v, double r_in, double r_out, bool sym)
      : BodyImpl(static_cast<int>(v.cols()), r_in, r_out, sym, "vpolytope"),
        v_(std::move(v)) {}
  double support(const Vector& u) const override {
    return (v_ * u).maxCoeff();
  }
  double gauge(const Vector& x) const override {
    return vpoly_gauge_lp(v_, x);
  }
  const Matrix& vertices() const { return v_; }

 private:
  Matrix v_;
};

class HPolyImpl final : public BodyImpl {
 public:
  // {x : rows x <= rhs}, rhs > 0 so the origin is interior.
  HPolyImpl(Matrix rows, Vector rhs, bool sym)
      : BodyImpl(static_cast<int>(rows.cols()), chebyshev(rows, rhs),
                 hpoly_outer_radius_bound(rows, rhs), sym, "hpolytope"),
        rows_(std::move(rows)),
        rhs_(std::move(rhs)) {}
  double support(const Vector& u) const override {
    return hpoly_support_lp(rows_, rhs_, u);
  }
  double gauge(const Vector& x) const override {
    double g = 0.0;
    for (int i = 0; i < rows_.rows(); ++i)
      g = std::max(g, rows_.row(i).dot(x) / rhs_[i]);
    return g;
  }
  const Matrix& rows() const { return rows_; }
  const Vector& rhs() const { return rhs_; }

 private:
  static double chebyshev(const Matrix& rows, const Vector& rhs) {
    double r = kInf;
    for (int i = 0; i < rows.rows(); ++i) {
      if (rhs[i] <= 0)
        throw BodyError("hpolytope: origin not interior (rhs <= 0)");
      double nrm = rows.row(i).norm();
      if (nrm > 0) r = std::min(r, rhs[i] / nrm);
    }
    if (!std::isfinite(r)) throw BodyError("hpolytope: no constraints");
    return r;
  }
  Matrix rows_;
  Vector rhs_;
};

class InnerVPolyImpl final : public BodyImpl {
 public:
  InnerVPolyImpl(Matrix v, double r_in, double r_out)
      : BodyImpl(static_cast<int>(v.cols()), r_in, r_out, true,
                 "inner(vpolytope)"),
        v_(std::move(v)) {}
  double support(const Vector& u) const override {
    return inner_vpoly_support_lp(v_, u);
  }
  double gauge(const Vector& x) const override {
    return std::max(vpoly_gauge_lp(v_, x), vpoly_gauge_lp(v_, -x));
  }
  const Matrix& vertices() const { return v_; }

 private:
  Matrix v_;
};

class PolarImpl final : public BodyImpl {
 public:
  explicit PolarImpl(std::shared_ptr<const BodyImpl> inner)
      : BodyImpl(inner->dim(), 1.0 / inner->r_out(), 1.0 / inner->r_in(),
                 inner->symmetric(), "polar(" + inner->provenance() + ")"),
        inner_(std::move(inner)) {}
  double support(const Vector& u) const override { return inner_->gauge(u); }
  double gauge(const Vector& x) const override { return inner_->support(x); }
  const std::shared_ptr<const BodyImpl>& inner() const { return inner_; }

 private:
  std::shared_ptr<const BodyImpl> inner_;
};

class LinearImageImpl final : public BodyImpl {
 public:
  LinearImageImpl(std::shared_ptr<const BodyImpl> inner, const Matrix& t)
      : BodyImpl(inner->dim(), inner->r_in() * smin(t),
                 inner->r_out() * smax(t), inner->symmetric(),
                 "linear(" + inner->provenance() + ")"),
        inner_(std::move(inner)),
        t_(t),
        t_inv_(invert(t)) {}
  double support(const Vector& u) const override {
    return inner_->support(t_.transpose() * u);
  }
  double gauge(const Vector& x) const override {
    return inner_->gauge(t_inv_ * x);
  }

 private:
  static Matrix invert(const Matrix& t) {
    Eigen::PartialPivLU<Matrix> lu(t);
    Matrix inv = lu.inverse();
    if (!inv.allFinite() || (t * inv - Matrix::Identity(t.rows(), t.cols()))
                                    .cwiseAbs()
                                    .maxCoeff() > 1e-6)
      throw BodyError("linear_image: singular map");
    return inv;
  }
  static double smin(const Matrix& t) {
    return t.jacobiSvd().singularValues().minCoeff();
  }
  static double smax(const Matrix& t) {
    return t.jacobiSvd().singularValues().maxCoeff();
  }
  std::shared_ptr<const BodyImpl> inner_;
  Matrix t_;
  Matrix t_inv_;
};

class TranslateImpl final : public BodyImpl {
 public:
  TranslateImpl(std::shared_ptr<const BodyImpl> inner, Vector z)
      : BodyImpl(inner->dim(), inner->r_in() - z.norm(),
                 inner->r_out() + z.norm(), false,
                 "translate(" + inner->provenance() + ")"),
        inner_(std::move(inner)),
        z_(std::move(z)) {}
  double support(const Vector& u) const override {
    return inner_->support(u) + z_.dot(u);
  }
  const std::shared_ptr<const BodyImpl>& inner() const { return inner_; }
  double gauge(const Vector& x) const override {
    // x in t(K+z)  <=>  p_K(x - t z) <= t ; the crossing is unique.
    auto excess = [&](double t) { return inner_->gauge(x - t * z_) - t; };
    if (x.norm() == 0.0) return 0.0;
    double hi = 1.0;
    int guard = 0;
    while (excess(hi) > 0) {
      hi *= 2.0;
      if (++guard > 200)
        throw BodyError("translate gauge: no finite dilate found");
    }
    double lo = 0.0;
    for (int i = 0; i < 100; ++i) {
      double mid = 0.5 * (lo + hi);
      (excess(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  std::shared_ptr<const BodyImpl> inner_;
  Vector z_;
};

// Generic conv(K, -K): support is exact, gauge is the inf-convolution of
// the gauges of K and -K, evaluated by convex descent.
class OuterGenericImpl final : public BodyImpl {
 public:
  explicit OuterGenericImpl(std::shared_ptr<const BodyImpl> inner)
      : BodyImpl(inner->dim(), inner->r_in(), inner->r_out(), true,
                 "outer(" + inner->provenance() + ")"),
        inner_(std::move(inner)) {}
  double support(const Vector& u) const override {
    return std::max(inner_->support(u), inner_->support(-u));
  }
  double gauge(const Vector& x) const override {
    auto f = [&](const Vector& y) {
      return inner_->gauge(y) + inner_->gauge(y - x);
    };
    MinimizeResult r = minimize_convex(
        f, {x, Vector::Zero(x.size()), Vector(0.5 * x)}, tol().minimizer_obj);
    if (!r.converged) throw BodyError("outer gauge: minimization failed");
    return r.value;
  }

 private:
  std::shared_ptr<const BodyImpl> inner_;
};

class InnerGenericImpl final : public BodyImpl {
 public:
  explicit InnerGenericImpl(std::shared_ptr<const BodyImpl> inner)
      : BodyImpl(inner->dim(), inner->r_in(), inner->r_out(), true,
                 "inner(" + inner->provenance() + ")"),
        inner_(std::move(inner)) {}
  double support(const Vector& u) const override {
    auto f = [&](const Vector& w) {
      return inner_->support(w) + inner_->support(w - u);
    };
    MinimizeResult r = minimize_convex(
        f, {u, Vector::Zero(u.size()), Vector(0.5 * u)}, tol().minimizer_obj);
    if (!r.converged) throw BodyError("inner support: minimization failed");
    return r.value;
  }
  double gauge(const Vector& x) const override {
    return std::max(inner_->gauge(x), inner_->gauge(-x));
  }

 private:
  std::shared_ptr<const BodyImpl> inner_;
};

// K - K for non-polytope operands.
class DiffGenericImpl final : public BodyImpl {
 public:
  explicit DiffGenericImpl(std::shared_ptr<const BodyImpl> inner)
      : BodyImpl(inner->dim(), 2 * inner->r_in(), 2 * inner->r_out(), true,
                 "diff(" + inner->provenance() + ")"),
        inner_(std::move(inner)) {}
  double support(const Vector& u) const override {
    return inner_->support(u) + inner_->support(-u);
  }
  double gauge(const Vector& x) const override {
    if (x.norm() == 0.0) return 0.0;
    // min_y max(p(y), p(y-x)) = max over lambda in [0,1] of
    // min_y [lambda p(y) + (1-lambda) p(y-x)]: the inner problem avoids the
    // kink that stalls direct descent on the max.
    auto inner_min = [&](double lam) {
      auto f = [&](const Vector& y) {
        return lam * inner_->gauge(y) + (1.0 - lam) * inner_->gauge(y - x);
      };
      MinimizeResult r =
          minimize_convex(f, {Vector(0.5 * x)}, tol().minimizer_obj);
      if (!r.converged) throw BodyError("diff gauge: minimization failed");
      return r.value;
    };
    double lam =
        golden_section_min([&](double l) { return -inner_min(l); }, 0.0, 1.0,
                           1e-6);
    return inner_min(lam);
  }

 private:
  std::shared_ptr<const BodyImpl> inner_;
};

// Section re-based to H-coordinates. The gauge delegates to the ambient
// gauge; the support picks an LP route for polytope-backed operands and a
// fiber minimization otherwise.
class SectionImpl final : public BodyImpl {
 public:
  SectionImpl(std::shared_ptr<const BodyImpl> inner,
              std::shared_ptr<const BodyImpl> support_source,
              const Subspace& h)
      : BodyImpl(h.dim(), inner->r_in(), inner->r_out(), inner->symmetric(),
                 "section(" + inner->provenance() + ")"),
        inner_(std::move(inner)),
        support_source_(std::move(support_source)),
        basis_(h.basis()),
        complement_(h.complement()) {}
  double gauge(const Vector& z) const override {
    return inner_->gauge(basis_ * z);
  }
  double support(const Vector& z) const override {
    if (auto* vp = dynamic_cast<const VPolyImpl*>(support_source_.get()))
      return vpoly_section_support_lp(vp->vertices(), basis_, z);
    if (auto* hp = dynamic_cast<const HPolyImpl*>(support_source_.get()))
      return hpoly_section_support_lp(hp->rows(), hp->rhs(), basis_, z);
    if (auto* iv = dynamic_cast<const InnerVPolyImpl*>(support_source_.get()))
      return inner_vpoly_section_support_lp(iv->vertices(), basis_, z);
    if (auto* pp = dynamic_cast<const PolarImpl*>(support_source_.get()))
      if (auto* iv = dynamic_cast<const InnerVPolyImpl*>(pp->inner().get()))
        // h_{(K_in)° cap H} is the gauge of P_H(K_in): one combined LP.
        return inner_vpoly_projection_gauge_lp(iv->vertices(), basis_,
                                               complement_, z);
    // h_{K cap H}(z) = min over the fiber of h_K(Bz + Nw).
    Vector lifted = basis_ * z;
    auto f = [&](const Vector& w) {
      return support_source_->support(lifted + complement_ * w);
    };
    int nc = static_cast<int>(complement_.cols());
    MinimizeResult r =
        minimize_convex(f, {Vector::Zero(nc)}, tol().minimizer_obj);
    if (!r.converged) throw BodyError("section support: minimization failed");
    return r.value;
  }

 private:
  std::shared_ptr<const BodyImpl> inner_;
  std::shared_ptr<const BodyImpl> support_source_;
  Matrix basis_;
  Matrix complement_;
};

// Orthogonal projection onto H, in H-coordinates. The support delegates to
// the ambient support; the gauge is the support of the polar's section,
// which carries its own exact-route dispatch.
class ProjectionImpl final : public BodyImpl {
 public:
  ProjectionImpl(std::shared_ptr<const BodyImpl> inner,
                 std::shared_ptr<const BodyImpl> polar_section,
                 const Subspace& h)
      : BodyImpl(h.dim(), inner->r_in(), inner->r_out(), inner->symmetric(),
                 "project(" + inner->provenance() + ")"),
        inner_(std::move(inner)),
        polar_section_(std::move(polar_section)),
        basis_(h.basis()) {}
  double support(const Vector& z) const override {
    return inner_->support(basis_ * z);
  }
  double gauge(const Vector& z) const override {
    return polar_section_->support(z);
  }

 private:
  std::shared_ptr<const BodyImpl> inner_;
  std::shared_ptr<const BodyImpl> polar_section_;
  Matrix basis_;
};

// ---------------------------------------------------------------------------
// Construction helpers.

bool vertex_set_symmetric(const Matrix& v) {
  int m = static_cast<int>(v.rows());
  for (int i = 0; i < m; ++i) {
    bool found = false;
    for (int j = 0; j < m; ++j)
      if ((v.row(i) + v.row(j)).norm() < 1e-9 * (1.0 + v.row(i).norm())) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

std::shared_ptr<const VPolyImpl> make_vpoly(const Matrix& v) {
  int m = static_cast<int>(v.rows());
  int n = static_cast<int>(v.cols());
  if (m < n + 1)
    throw BodyError("vpolytope: need at least n+1 vertices");
  if (!v.allFinite()) throw BodyError("vpolytope: non-finite vertex");
  Matrix centered = v.bottomRows(m - 1).rowwise() - v.row(0);
  if (centered.jacobiSvd().singularValues().minCoeff() < 1e-10)
    throw BodyError("vpolytope: affine hull is not full dimensional");
  // r_in via the polar: r_in(K) = 1 / circumradius(K°), K° = {y : V y <= 1}.
  double r_out = v.rowwise().norm().maxCoeff();
  double polar_r_out = hpoly_outer_radius_bound(v, Vector::Ones(m));
  double r_in = 1.0 / polar_r_out;
  return std::make_shared<VPolyImpl>(v, r_in, r_out, vertex_set_symmetric(v));
}

Matrix lp_ball_vertices(int n, double p, double scale) {
  if (p == 1.0) {
    Matrix v = Matrix::Zero(2 * n, n);
    for (int i = 0; i < n; ++i) {
      v(2 * i, i) = scale;
      v(2 * i + 1, i) = -scale;
    }
    return v;
  }
  if (std::isinf(p)) {
    if (n > 14) throw BodyError("cube vertex expansion too large");
    int m = 1 << n;
    Matrix v(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) v(i, j) = (i >> j & 1) ? scale : -scale;
    return v;
  }
  throw BodyError("lp_ball: no vertex form for this exponent");
}

// If k has a polytope-realizable impl whose sections/projections should go
// through LP routes, return that realization; otherwise k's own impl.
std::shared_ptr<const BodyImpl> lp_backed(
    const std::shared_ptr<const BodyImpl>& impl) {
  if (auto* lb = dynamic_cast<const LpBallImpl*>(impl.get())) {
    if (lb->exponent() == 1.0 || std::isinf(lb->exponent()))
      return make_vpoly(lp_ball_vertices(impl->dim(), lb->exponent(),
                                         lb->scale()));
  }
  return impl;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public surface.

ConvexBody::ConvexBody(std::shared_ptr<const BodyImpl> impl)
    : impl_(std::move(impl)) {
  if (!impl_) throw BodyError("null body");
}
int ConvexBody::dim() const { return impl_->dim(); }
double ConvexBody::support(const Vector& u) const {
  if (u.size() != impl_->dim()) throw BodyError("support: dimension mismatch");
  return impl_->support(u);
}
double ConvexBody::gauge(const Vector& x) const {
  if (x.size() != impl_->dim()) throw BodyError("gauge: dimension mismatch");
  return impl_->gauge(x);
}
double ConvexBody::radial(const Vector& x) const { return 1.0 / gauge(x); }
double ConvexBody::inner_radius() const { return impl_->r_in(); }
double ConvexBody::outer_radius() const { return impl_->r_out(); }
bool ConvexBody::symmetric() const { return impl_->symmetric(); }
std::string ConvexBody::provenance() const { return impl_->provenance(); }

ConvexBody ball(int n, double radius) {
  if (!(radius > 0)) throw BodyError("ball: radius must be positive");
  return ConvexBody(std::make_shared<BallImpl>(n, radius));
}

ConvexBody ellipsoid(const Matrix& a) {
  return ConvexBody(std::make_shared<EllipsoidImpl>(a));
}

ConvexBody lp_ball(int n, double p, double scale) {
  if (!(p >= 1.0)) throw BodyError("lp_ball: exponent must be >= 1");
  if (!(scale > 0)) throw BodyError("lp_ball: scale must be positive");
  return ConvexBody(std::make_shared<LpBallImpl>(n, p, scale));
}

ConvexBody cube(int n, double half_side) {
  return lp_ball(n, kInf, half_side);
}

ConvexBody cross_polytope(int n, double scale) {
  return lp_ball(n, 1.0, scale);
}

ConvexBody vpolytope(const Matrix& vertices) {
  return ConvexBody(make_vpoly(vertices));
}

Matrix regular_simplex_vertices(int n) {
  if (n < 1) throw BodyError("regular_simplex: n must be positive");
  int m = n + 1;
  // Orthonormal basis of the hyperplane orthogonal to (1,...,1) in R^{n+1}.
  Matrix a = Matrix::Zero(m, m);
  a.col(0).setConstant(1.0 / std::sqrt(double(m)));
  for (int j = 1; j < m; ++j) a(j - 1, j) = 1.0;
  auto [q, r] = qr(a);
  Matrix basis = q.rightCols(n);  // (n+1) x n
  Matrix centered = Matrix::Identity(m, m).array() - 1.0 / m;
  return centered * basis;  // rows are the vertices
}

ConvexBody regular_simplex(int n) {
  return vpolytope(regular_simplex_vertices(n));
}

Subspace simplex_sharp_subspace(int n, int k) {
  if (k < 1 || k > n - 1)
    throw BodyError("simplex_sharp_subspace: require 1 <= k <= n-1");
  Matrix v = regular_simplex_vertices(n);
  Matrix span(n, k);
  for (int j = 0; j < k; ++j) span.col(j) = v.row(j).transpose();
  Subspace h = Subspace::from_span(span);
  // The average of the remaining vertices must already lie in the span.
  Vector w = Vector::Zero(n);
  for (int i = k; i < n + 1; ++i) w += v.row(i).transpose();
  w /= double(n + 1 - k);
  Vector resid = w - h.basis() * (h.basis().transpose() * w);
  if (resid.norm() > 1e-9)
    throw BodyError("simplex_sharp_subspace: construction residual too large");
  return h;
}

ConvexBody polar(const ConvexBody& k) {
  const auto& impl = k.impl();
  if (auto* b = dynamic_cast<const BallImpl*>(impl.get()))
    return ball(k.dim(), 1.0 / b->radius());
  if (auto* e = dynamic_cast<const EllipsoidImpl*>(impl.get()))
    return ellipsoid(e->quad_form_inv());
  if (auto* lb = dynamic_cast<const LpBallImpl*>(impl.get()))
    return lp_ball(k.dim(), dual_exponent(lb->exponent()), 1.0 / lb->scale());
  if (auto* vp = dynamic_cast<const VPolyImpl*>(impl.get()))
    return ConvexBody(std::make_shared<HPolyImpl>(
        vp->vertices(), Vector::Ones(vp->vertices().rows()),
        vp->symmetric()));
  if (auto* hp = dynamic_cast<const HPolyImpl*>(impl.get())) {
    Matrix v = hp->rows();
    for (int i = 0; i < v.rows(); ++i) v.row(i) /= hp->rhs()[i];
    return ConvexBody(make_vpoly(v));
  }
  if (auto* p = dynamic_cast<const PolarImpl*>(impl.get()))
    return ConvexBody(p->inner());
  return ConvexBody(std::make_shared<PolarImpl>(impl));
}

ConvexBody outer_reg(const ConvexBody& k) {
  const auto& impl = k.impl();
  if (k.symmetric()) return k;
  if (auto* vp = dynamic_cast<const VPolyImpl*>(impl.get())) {
    const Matrix& v = vp->vertices();
    Matrix both(2 * v.rows(), v.cols());
    both << v, -v;
    return vpolytope(both);
  }
  if (dynamic_cast<const HPolyImpl*>(impl.get()))
    return polar(inner_reg(polar(k)));
  return ConvexBody(std::make_shared<OuterGenericImpl>(impl));
}

ConvexBody inner_reg(const ConvexBody& k) {
  const auto& impl = k.impl();
  if (k.symmetric()) return k;
  if (auto* vp = dynamic_cast<const VPolyImpl*>(impl.get()))
    return ConvexBody(std::make_shared<InnerVPolyImpl>(
        vp->vertices(), vp->r_in(), vp->r_out()));
  if (auto* hp = dynamic_cast<const HPolyImpl*>(impl.get())) {
    Matrix rows(2 * hp->rows().rows(), hp->rows().cols());
    rows << hp->rows(), -hp->rows();
    Vector rhs(2 * hp->rhs().size());
    rhs << hp->rhs(), hp->rhs();
    return ConvexBody(std::make_shared<HPolyImpl>(rows, rhs, true));
  }
  return ConvexBody(std::make_shared<InnerGenericImpl>(impl));
}

ConvexBody section(const ConvexBody& k, const Subspace& h) {
  if (h.ambient_dim() != k.dim())
    throw BodyError("section: subspace ambient dimension mismatch");
  const auto& impl = k.impl();
  if (auto* b = dynamic_cast<const BallImpl*>(impl.get()))
    return ball(h.dim(), b->radius());
  if (auto* e = dynamic_cast<const EllipsoidImpl*>(impl.get()))
    return ellipsoid(h.basis().transpose() * e->quad_form() * h.basis());
  return ConvexBody(
      std::make_shared<SectionImpl>(impl, lp_backed(impl), h));
}

ConvexBody project(const ConvexBody& k, const Subspace& h) {
  if (h.ambient_dim() != k.dim())
    throw BodyError("project: subspace ambient dimension mismatch");
  const auto& impl = k.impl();
  if (auto* b = dynamic_cast<const BallImpl*>(impl.get()))
    return ball(h.dim(), b->radius());
  if (auto* e = dynamic_cast<const EllipsoidImpl*>(impl.get())) {
    Matrix m = h.basis().transpose() * e->quad_form_inv() * h.basis();
    return ellipsoid(m.inverse());
  }
  std::shared_ptr<const BodyImpl> backed = lp_backed(impl);
  ConvexBody polar_section =
      section(polar(ConvexBody(backed)), h);
  return ConvexBody(
      std::make_shared<ProjectionImpl>(impl, polar_section.impl(), h));
}

ConvexBody linear_image(const ConvexBody& k, const Matrix& t) {
  if (t.rows() != k.dim() || t.cols() != k.dim())
    throw BodyError("linear_image: map dimension mismatch");
  const auto& impl = k.impl();
  if (auto* vp = dynamic_cast<const VPolyImpl*>(impl.get()))
    return vpolytope(vp->vertices() * t.transpose());
  if (auto* b = dynamic_cast<const BallImpl*>(impl.get())) {
    Matrix tt = (t * t.transpose()) * (b->radius() * b->radius());
    return ellipsoid(tt.inverse());
  }
  if (auto* e = dynamic_cast<const EllipsoidImpl*>(impl.get())) {
    Matrix tinv = t.inverse();
    return ellipsoid(tinv.transpose() * e->quad_form() * tinv);
  }
  return ConvexBody(std::make_shared<LinearImageImpl>(impl, t));
}

ConvexBody translate(const ConvexBody& k, const Vector& z) {
  if (z.size() != k.dim()) throw BodyError("translate: dimension mismatch");
  const auto& impl = k.impl();
  if (auto* vp = dynamic_cast<const VPolyImpl*>(impl.get()))
    return vpolytope(vp->vertices().rowwise() + z.transpose());
  if (auto* hp = dynamic_cast<const HPolyImpl*>(impl.get()))
    // {x : R x <= r} + z = {x : R x <= r + R z}, with the inradius
    // certificate recomputed instead of the crude r_in - |z| bound
    return ConvexBody(std::make_shared<HPolyImpl>(
        hp->rows(), Vector(hp->rhs() + hp->rows() * z), false));
  return ConvexBody(std::make_shared<TranslateImpl>(impl, z));
}

ConvexBody diff_body(const ConvexBody& k) {
  // (K + z) - (K + z) = K - K: strip translates first
  if (auto* tr = dynamic_cast<const TranslateImpl*>(k.impl().get()))
    return diff_body(ConvexBody(tr->inner()));
  const auto& impl = k.impl();
  if (k.symmetric())
    return linear_image(k, 2.0 * Matrix::Identity(k.dim(), k.dim()));
  if (auto* vp = dynamic_cast<const VPolyImpl*>(impl.get())) {
    // vertex route: conv{v_i - v_j}, duplicates dropped. The radius
    // certificates carry over (K - K contains 2 r_in B and sits inside
    // 2 r_out B), so the generic certificate LPs — degenerate on the m^2
    // near-duplicate points — are skipped.
    const Matrix& v = vp->vertices();
    int m = static_cast<int>(v.rows());
    std::vector<Vector> rows;
    rows.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Vector d = v.row(i) - v.row(j);
        bool dup = false;
        for (const Vector& w : rows)
          if ((w - d).lpNorm<Eigen::Infinity>() <= 1e-12) {
            dup = true;
            break;
          }
        if (!dup) rows.push_back(std::move(d));
      }
    Matrix d(rows.size(), v.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) d.row(i) = rows[i];
    return ConvexBody(std::make_shared<VPolyImpl>(
        std::move(d), 2.0 * k.inner_radius(), 2.0 * k.outer_radius(), true));
  }
  // inequality descriptions admit an exact LP dilate: K - K gauge by the
  // two-copy program, support by h(u) + h(-u)
  Matrix rows;
  Vector rhs;
  bool hpoly_like = false;
  if (auto* hp = dynamic_cast<const HPolyImpl*>(impl.get())) {
    rows = hp->rows();
    rhs = hp->rhs();
    hpoly_like = true;
  } else if (auto* pp = dynamic_cast<const PolarImpl*>(impl.get())) {
    if (auto* vp = dynamic_cast<const VPolyImpl*>(pp->inner().get())) {
      rows = vp->vertices();
      rhs = Vector::Ones(rows.rows());
      hpoly_like = true;
    }
  }
  if (hpoly_like) {
    ConvexBody base = k;
    auto gauge = [rows, rhs](const Vector& x) {
      return hpoly_diff_gauge_lp(rows, rhs, x);
    };
    auto support = [base](const Vector& u) {
      return base.support(u) + base.support(-u);
    };
    return oracle_body(k.dim(), gauge, support, 2.0 * k.inner_radius(),
                       2.0 * k.outer_radius(), true,
                       "diff(" + k.provenance() + ")");
  }
  return ConvexBody(std::make_shared<DiffGenericImpl>(impl));
}

const Matrix* vpolytope_vertices(const ConvexBody& k) {
  if (auto* vp = dynamic_cast<const VPolyImpl*>(k.impl().get()))
    return &vp->vertices();
  return nullptr;
}

namespace {

class OracleBodyImpl final : public BodyImpl {
 public:
  OracleBodyImpl(int n, std::function<double(const Vector&)> gauge,
                 std::function<double(const Vector&)> support, double r_in,
                 double r_out, bool sym, std::string tag)
      : BodyImpl(n, r_in, r_out, sym, std::move(tag)),
        gauge_(std::move(gauge)),
        support_(std::move(support)) {}
  double support(const Vector& u) const override {
    if (!support_)
      throw BodyError("oracle body '" + provenance() +
                      "': no support oracle");
    return support_(u);
  }
  double gauge(const Vector& x) const override { return gauge_(x); }

 private:
  std::function<double(const Vector&)> gauge_;
  std::function<double(const Vector&)> support_;
};

double vpoly_chord_end(const Matrix& v, const Vector& x, const Vector& u) {
  int m = static_cast<int>(v.rows());
  int n = static_cast<int>(v.cols());
  LinearProgram lp;  // vars: lambda (m, >= 0), t (free); x + t u = sum lambda v
  lp.c = Vector::Zero(m + 1);
  lp.c[m] = 1.0;
  lp.E = Matrix::Zero(n + 1, m + 1);
  lp.d = Vector::Zero(n + 1);
  lp.E.block(0, 0, n, m) = v.transpose();
  lp.E.col(m).head(n) = -u;
  lp.E.row(n).head(m).setOnes();
  lp.d.head(n) = x;
  lp.d[n] = 1.0;
  lp.lb = Vector::Zero(m + 1);
  lp.lb[m] = -kInf;
  lp.ub = Vector::Constant(m + 1, kInf);
  LpSolution s = lp_solve(lp);
  if (s.status != LpStatus::optimal)
    throw BodyError("chord: endpoint LP failed (point outside the body?)");
  return s.value;
}

}  // namespace

ConvexBody oracle_body(int n, std::function<double(const Vector&)> gauge,
                       std::function<double(const Vector&)> support,
                       double r_in, double r_out, bool symmetric,
                       std::string tag) {
  return ConvexBody(std::make_shared<OracleBodyImpl>(
      n, std::move(gauge), std::move(support), r_in, r_out, symmetric,
      std::move(tag)));
}

std::pair<double, double> chord(const ConvexBody& k, const Vector& x,
                                const Vector& u) {
  const BodyImpl* impl = k.impl().get();
  if (auto* hp = dynamic_cast<const HPolyImpl*>(impl)) {
    double lo = -kInf, hi = kInf;
    for (int i = 0; i < hp->rows().rows(); ++i) {
      double a = hp->rows().row(i).dot(u);
      double s = hp->rhs()[i] - hp->rows().row(i).dot(x);
      if (std::abs(a) < 1e-14) {
        if (s < 0) throw BodyError("chord: point outside the body");
      } else if (a > 0) {
        hi = std::min(hi, s / a);
      } else {
        lo = std::max(lo, s / a);
      }
    }
    return {lo, hi};
  }
  if (auto* vp = dynamic_cast<const VPolyImpl*>(impl))
    return {-vpoly_chord_end(vp->vertices(), x, Vector(-u)),
            vpoly_chord_end(vp->vertices(), x, u)};
  auto quadratic_ends = [&](const Matrix& a) -> std::pair<double, double> {
    double qa = u.dot(a * u);
    double qb = x.dot(a * u);
    double qc = x.dot(a * x) - 1.0;
    double disc = qb * qb - qa * qc;
    if (disc < 0) throw BodyError("chord: point outside the ellipsoid");
    double root = std::sqrt(disc);
    return {(-qb - root) / qa, (-qb + root) / qa};
  };
  if (auto* b = dynamic_cast<const BallImpl*>(impl))
    return quadratic_ends(Matrix::Identity(k.dim(), k.dim()) /
                          (b->radius() * b->radius()));
  if (auto* e = dynamic_cast<const EllipsoidImpl*>(impl))
    return quadratic_ends(e->quad_form());
  // bisection on the (convex) gauge along the line
  auto end = [&](double sign) {
    Vector dir = sign * u;
    double lo = 0.0;
    double hi = (k.outer_radius() + x.norm()) / dir.norm() + 1.0;
    for (int i = 0; i < 60; ++i) {
      double mid = 0.5 * (lo + hi);
      (k.gauge(x + mid * dir) <= 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return {-end(-1.0), end(1.0)};
}

}  // namespace convexreg
