#pragma once

#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "convexreg/rng.hpp"

namespace convexreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lower-triangular Cholesky factor; throws NumericsError when the input is
// not SPD or the reconstruction residual exceeds tolerance.
Matrix chol(const Matrix& sigma);

// Thin QR with R having a nonnegative diagonal. ||QR - A|| <= 1e-10 ||A||.
std::pair<Matrix, Matrix> qr(const Matrix& a);

Vector solve_spd(const Matrix& sigma, const Vector& b);

// Orthonormal basis of a k-dimensional linear subspace of R^n, stored as the
// columns of an n x k matrix.
class Subspace {
 public:
  Subspace(Matrix basis);  // validates orthonormality

  // Orthonormalizes the columns of `span` (must have rank k).
  static Subspace from_span(const Matrix& span);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

  // Orthonormal basis of the orthogonal complement, n x (n-k).
  Matrix complement() const;

  Vector lift(const Vector& z) const { return basis_ * z; }
  Vector project_coords(const Vector& x) const {
    return basis_.transpose() * x;
  }

 private:
  Matrix basis_;
};

// Q-factor of an n x k standard Gaussian matrix; Haar-distributed on the
// Grassmannian. Requires 1 <= k <= n-1.
Subspace haar_subspace(int n, int k, RngStream& rng);

// Uniform point on S^{n-1}.
Vector sphere_sample(int n, RngStream& rng);

}  // namespace convexreg
