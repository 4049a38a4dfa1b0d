#pragma once

#include <functional>
#include <vector>

#include "convexreg/body.hpp"
#include "convexreg/rng.hpp"

namespace convexreg {

// Monte Carlo scalar with full provenance.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
  long samples = 0;
};

double unit_ball_volume(int n);

// Mean of draw(stream) over `samples` draws, batched so that the OpenMP and
// serial paths produce bit-identical results. Batch b draws from
// rng.derive(b); batch results are reduced in fixed order.
Estimate mc_mean(long samples, const RngStream& rng,
                 const std::function<double(RngStream&)>& draw,
                 bool parallel = true);

// Mean over uniform sphere directions.
Estimate sphere_mean(int n, long samples, const RngStream& rng,
                     const std::function<double(const Vector&)>& g,
                     bool parallel = true);

// vrad(K) = (vol(K)/omega_n)^{1/n} via the radial moment
// E[rho^n]^{1/n}; standard error by the delta method.
Estimate vrad_mc(const ConvexBody& k, long samples, const RngStream& rng,
                 bool parallel = true);
Estimate volume_mc(const ConvexBody& k, long samples, const RngStream& rng,
                   bool parallel = true);

// M*(K): spherical mean of the support function.
Estimate mean_support(const ConvexBody& k, long samples, const RngStream& rng,
                      bool parallel = true);
// M(K): spherical mean of the gauge.
Estimate mean_gauge(const ConvexBody& k, long samples, const RngStream& rng,
                    bool parallel = true);

// Uniform samples from K by hit-and-run with exact chord endpoints.
// Burn-in 10 n^2 steps, thinning n.
std::vector<Vector> uniform_sample(const ConvexBody& k, int count,
                                   const RngStream& rng);

Vector barycenter_mc(const ConvexBody& k, int count, const RngStream& rng);
Matrix covariance_mc(const ConvexBody& k, int count, const RngStream& rng,
                     Vector* center = nullptr);

// Affine image with barycenter ~0 and covariance ~lambda I (two-pass moment
// whitening); the transform and measured scale are returned for provenance.
struct IsotropicResult {
  ConvexBody body;
  Vector center;
  Matrix transform;
};
IsotropicResult isotropic_normalize(const ConvexBody& k, int samples,
                                    const RngStream& rng);

// Santalo point: the z minimizing vol((K - z)°), found by minimizing the
// smooth convex functional sum_i (h_K(u_i) - <z, u_i>)^{-n} over a fixed set
// of sampled directions (common random numbers keep the objective
// deterministic).
Vector santalo_point(const ConvexBody& k, int directions,
                     const RngStream& rng);

// Q_k(C) = ((1/omega_k) E_H vol_k(P_H C))^{1/k} over Haar k-subspaces.
Estimate aleksandrov_q(const ConvexBody& c, int kdim, int subspaces,
                       long samples_per_subspace, const RngStream& rng,
                       bool parallel = true);

// Phi_k(C) = vol_n(C)^{-1/n} (E_H vol_k(P_H C)^{-n})^{-1/(kn)}.
Estimate phi_functional(const ConvexBody& c, int kdim, int subspaces,
                        long samples_per_subspace, long volume_samples,
                        const RngStream& rng, bool parallel = true);

}  // namespace convexreg
