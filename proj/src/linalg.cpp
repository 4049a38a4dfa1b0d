#include "convexreg/linalg.hpp"

#include <cmath>

#include "convexreg/config.hpp"

namespace convexreg {

Matrix chol(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols())
    throw NumericsError("chol: matrix not square");
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw NumericsError("chol: matrix not SPD");
  Matrix l = llt.matrixL();
  double resid = (l * l.transpose() - sigma).norm();
  if (resid > tol().decomposition * std::max(1.0, sigma.norm()))
    throw NumericsError("chol: reconstruction residual too large");
  return l;
}

std::pair<Matrix, Matrix> qr(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> f(a);
  Matrix q = f.householderQ() * Matrix::Identity(a.rows(), a.cols());
  Matrix r = f.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  // Fix signs so R has a nonnegative diagonal; needed for Haar uniqueness.
  for (int j = 0; j < r.rows(); ++j) {
    if (r(j, j) < 0) {
      r.row(j) = -r.row(j);
      q.col(j) = -q.col(j);
    }
  }
  double resid = (q * r - a).norm();
  if (resid > tol().decomposition * std::max(1.0, a.norm()))
    throw NumericsError("qr: reconstruction residual too large");
  return {q, r};
}

Vector solve_spd(const Matrix& sigma, const Vector& b) {
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw NumericsError("solve_spd: matrix not SPD");
  return llt.solve(b);
}

Subspace::Subspace(Matrix basis) : basis_(std::move(basis)) {
  int n = static_cast<int>(basis_.rows());
  int k = static_cast<int>(basis_.cols());
  if (k < 1 || k > n - 1)
    throw NumericsError("Subspace: require 1 <= k <= n-1");
  Matrix gram = basis_.transpose() * basis_;
  if ((gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() >
      tol().orthonormality)
    throw NumericsError("Subspace: basis not orthonormal");
}

Subspace Subspace::from_span(const Matrix& span) {
  auto [q, r] = qr(span);
  for (int j = 0; j < r.cols(); ++j)
    if (std::abs(r(j, j)) < 1e-10)
      throw NumericsError("Subspace: spanning set is rank deficient");
  return Subspace(q);
}

Matrix Subspace::complement() const {
  int n = ambient_dim();
  int k = dim();
  Eigen::HouseholderQR<Matrix> f(basis_);
  Matrix full = f.householderQ() * Matrix::Identity(n, n);
  return full.rightCols(n - k);
}

Subspace haar_subspace(int n, int k, RngStream& rng) {
  if (k < 1 || k > n - 1)
    throw NumericsError("haar_subspace: require 1 <= k <= n-1");
  Matrix g(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
  auto [q, r] = qr(g);
  return Subspace(q);
}

Vector sphere_sample(int n, RngStream& rng) {
  while (true) {
    Vector g = rng.gaussian_vector(n);
    double norm = g.norm();
    if (norm > 1e-12) return g / norm;
  }
}

}  // namespace convexreg
