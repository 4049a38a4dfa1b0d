#pragma once

namespace convexreg {

// Central tolerance record. Every module reads its thresholds from here so
// that acceptance tuning has a single knob.
struct Tolerances {
  double oracle_identity = 1e-9;    // pointwise gauge/support identities
  double decomposition = 1e-10;     // QR / Cholesky reconstruction residuals
  double orthonormality = 1e-12;    // subspace basis B^T B - I
  double lp_pivot = 1e-10;          // simplex pivot threshold
  double lp_certificate = 1e-9;     // feasibility / slackness / duality gap
  double quadrature_rel = 1e-10;    // default quad_1d relative error
  double root_find = 1e-10;         // |g(x)-target| <= tol*(1+|target|)
  double minimizer_obj = 1e-9;      // convex descent objective tolerance
  double radial_rel = 1e-7;         // K_p radial quadrature
  double interior_margin = 1e-8;    // r_in >= margin * R_out required
  double ineq_rel_eps = 1e-3;       // relative slack on top of 3*sigma
  double sigma_slack = 3.0;         // MC inequality slack in standard errors
  double calib_headroom = 1.25;     // calibrated constants asserted with 25%
};

inline const Tolerances& tol() {
  static Tolerances t;
  return t;
}

}  // namespace convexreg
