#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "convexreg/linalg.hpp"

namespace convexreg {

struct BodyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class BodyImpl;

// Immutable convex body given by support and gauge oracles, with certified
// radius bounds r_in * B <= K <= r_out * B. Values are cheap to copy and
// safe to share across workers.
class ConvexBody {
 public:
  explicit ConvexBody(std::shared_ptr<const BodyImpl> impl);

  int dim() const;
  double support(const Vector& u) const;
  double gauge(const Vector& x) const;
  double radial(const Vector& x) const;  // 1 / gauge
  double inner_radius() const;
  double outer_radius() const;
  bool symmetric() const;
  std::string provenance() const;

  const std::shared_ptr<const BodyImpl>& impl() const { return impl_; }

 private:
  std::shared_ptr<const BodyImpl> impl_;
};

// Concrete bodies.
ConvexBody ball(int n, double radius);
ConvexBody ellipsoid(const Matrix& a);  // {x : x^T A x <= 1}, A SPD
ConvexBody lp_ball(int n, double p, double scale);
ConvexBody cube(int n, double half_side);
ConvexBody cross_polytope(int n, double scale);
// Rows of `vertices` are the points; requires full affine hull and the
// origin strictly interior.
ConvexBody vpolytope(const Matrix& vertices);

// Regular simplex with edge length sqrt(2) and barycenter at the origin.
ConvexBody regular_simplex(int n);
Matrix regular_simplex_vertices(int n);
// Span of k vertices together with the average of the rest (which already
// lies in that span), orthonormalized.
Subspace simplex_sharp_subspace(int n, int k);

// Constructors of derived bodies. Each picks an exact LP-backed route when
// the operand is vertex- or facet-backed and falls back to convex
// minimization oracles otherwise.
ConvexBody polar(const ConvexBody& k);
ConvexBody outer_reg(const ConvexBody& k);   // conv(K, -K)
ConvexBody inner_reg(const ConvexBody& k);   // K intersect -K
ConvexBody section(const ConvexBody& k, const Subspace& h);
ConvexBody project(const ConvexBody& k, const Subspace& h);
ConvexBody linear_image(const ConvexBody& k, const Matrix& t);
ConvexBody translate(const ConvexBody& k, const Vector& z);
ConvexBody diff_body(const ConvexBody& k);   // K - K

// Vertex backing when the body is a V-polytope, else nullptr.
const Matrix* vpolytope_vertices(const ConvexBody& k);

// The range of t with x + t u in K, for x interior and u != 0. Closed forms
// or LPs where the backing allows, bisection on the gauge otherwise.
std::pair<double, double> chord(const ConvexBody& k, const Vector& x,
                                const Vector& u);

// Body backed by a black-box gauge oracle with caller-certified radii.
// The support oracle is optional; if absent, support() throws BodyError.
ConvexBody oracle_body(int n, std::function<double(const Vector&)> gauge,
                       std::function<double(const Vector&)> support,
                       double r_in, double r_out, bool symmetric,
                       std::string tag);

}  // namespace convexreg
