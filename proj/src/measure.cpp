#include "convexreg/measure.hpp"

#include <cmath>
#include <limits>

#include "convexreg/linalg.hpp"
#include "convexreg/minimize.hpp"

namespace convexreg {

namespace {
constexpr long kBatch = 512;
}

double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

Estimate mc_mean(long samples, const RngStream& rng,
                 const std::function<double(RngStream&)>& draw,
                 bool parallel) {
  if (samples < 2) throw NumericsError("mc_mean: need at least 2 samples");
  long batches = (samples + kBatch - 1) / kBatch;
  std::vector<double> sums(batches, 0.0), sqs(batches, 0.0);

  auto run_batch = [&](long b) {
    RngStream stream = rng.derive(b);
    long lo = b * kBatch;
    long hi = std::min(samples, lo + kBatch);
    double s = 0.0, s2 = 0.0;
    for (long i = lo; i < hi; ++i) {
      double v = draw(stream);
      s += v;
      s2 += v * v;
    }
    sums[b] = s;
    sqs[b] = s2;
  };

  if (parallel) {
    // exceptions cannot unwind out of the parallel region: capture the
    // first one and rethrow after the join
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < batches; ++b) {
      try {
        run_batch(b);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (long b = 0; b < batches; ++b) run_batch(b);
  }

  // fixed-order reduction: identical bits on both paths
  double sum = 0.0, sq = 0.0;
  for (long b = 0; b < batches; ++b) {
    sum += sums[b];
    sq += sqs[b];
  }
  Estimate e;
  e.samples = samples;
  e.value = sum / samples;
  double var = (sq - samples * e.value * e.value) / (samples - 1);
  e.se = std::sqrt(std::max(var, 0.0) / samples);
  return e;
}

Estimate sphere_mean(int n, long samples, const RngStream& rng,
                     const std::function<double(const Vector&)>& g,
                     bool parallel) {
  return mc_mean(
      samples, rng,
      [&](RngStream& r) { return g(sphere_sample(n, r)); }, parallel);
}

Estimate vrad_mc(const ConvexBody& k, long samples, const RngStream& rng,
                 bool parallel) {
  int n = k.dim();
  Estimate m = sphere_mean(
      n, samples, rng,
      [&](const Vector& u) { return std::pow(k.radial(u), n); }, parallel);
  Estimate e;
  e.samples = m.samples;
  e.value = std::pow(m.value, 1.0 / n);
  e.se = e.value * m.se / (n * m.value);
  return e;
}

Estimate volume_mc(const ConvexBody& k, long samples, const RngStream& rng,
                   bool parallel) {
  int n = k.dim();
  double wn = unit_ball_volume(n);
  Estimate m = sphere_mean(
      n, samples, rng,
      [&](const Vector& u) { return std::pow(k.radial(u), n); }, parallel);
  Estimate e{wn * m.value, wn * m.se, m.samples};
  return e;
}

Estimate mean_support(const ConvexBody& k, long samples, const RngStream& rng,
                      bool parallel) {
  return sphere_mean(
      k.dim(), samples, rng, [&](const Vector& u) { return k.support(u); },
      parallel);
}

Estimate mean_gauge(const ConvexBody& k, long samples, const RngStream& rng,
                    bool parallel) {
  return sphere_mean(
      k.dim(), samples, rng, [&](const Vector& u) { return k.gauge(u); },
      parallel);
}

std::vector<Vector> uniform_sample(const ConvexBody& k, int count,
                                   const RngStream& rng) {
  int n = k.dim();
  RngStream r = rng;
  Vector x = Vector::Zero(n);
  long burn = 10L * n * n;
  int thin = n;
  std::vector<Vector> out;
  out.reserve(count);
  long steps = burn + static_cast<long>(count) * thin;
  for (long s = 0; s < steps; ++s) {
    Vector u = sphere_sample(n, r);
    auto [lo, hi] = chord(k, x, u);
    double t = lo + (hi - lo) * r.uniform();
    x += t * u;
    if (s >= burn && (s - burn) % thin == thin - 1) out.push_back(x);
  }
  return out;
}

Vector barycenter_mc(const ConvexBody& k, int count, const RngStream& rng) {
  std::vector<Vector> pts = uniform_sample(k, count, rng);
  Vector c = Vector::Zero(k.dim());
  for (const Vector& p : pts) c += p;
  return c / double(pts.size());
}

Matrix covariance_mc(const ConvexBody& k, int count, const RngStream& rng,
                     Vector* center) {
  std::vector<Vector> pts = uniform_sample(k, count, rng);
  int n = k.dim();
  Vector c = Vector::Zero(n);
  for (const Vector& p : pts) c += p;
  c /= double(pts.size());
  Matrix cov = Matrix::Zero(n, n);
  for (const Vector& p : pts) cov += (p - c) * (p - c).transpose();
  cov /= double(pts.size() - 1);
  if (center) *center = c;
  return cov;
}

IsotropicResult isotropic_normalize(const ConvexBody& k, int samples,
                                    const RngStream& rng) {
  Vector c;
  Matrix cov = covariance_mc(k, samples, rng, &c);
  Matrix l = chol(cov);
  Matrix w = l.triangularView<Eigen::Lower>()
                 .solve(Matrix::Identity(k.dim(), k.dim()));
  IsotropicResult res{linear_image(translate(k, -c), w), c, w};
  return res;
}

Vector santalo_point(const ConvexBody& k, int directions,
                     const RngStream& rng) {
  int n = k.dim();
  RngStream r = rng;
  Matrix u(directions, n);
  Vector h(directions);
  for (int i = 0; i < directions; ++i) {
    Vector dir = sphere_sample(n, r);
    u.row(i) = dir.transpose();
    h[i] = k.support(dir);
  }
  auto objective = [&](const Vector& z) {
    Vector margin = h - u * z;
    if (margin.minCoeff() <= 1e-9)
      return std::numeric_limits<double>::max();
    double s = 0.0;
    for (int i = 0; i < directions; ++i) s += std::pow(margin[i], -n);
    return s;
  };
  MinimizeResult mr =
      minimize_convex(objective, {Vector::Zero(n)}, 1e-12);
  if (!mr.converged)
    throw NumericsError("santalo_point: minimization did not converge");
  // The sampled halfspaces circumscribe K, so a sparse direction set can
  // leave the minimizer slightly outside the body; pull it back along the
  // segment to the origin so translating by it keeps 0 interior.
  Vector z = mr.x;
  double g = k.gauge(z);
  if (g >= 0.95) z *= 0.95 / g;
  return z;
}

Estimate aleksandrov_q(const ConvexBody& c, int kdim, int subspaces,
                       long samples_per_subspace, const RngStream& rng,
                       bool parallel) {
  int n = c.dim();
  double wk = unit_ball_volume(kdim);
  std::vector<double> vols(subspaces);
  auto one = [&](int j) {
    RngStream hs = rng.derive(2 * j);
    Subspace h = haar_subspace(n, kdim, hs);
    ConvexBody p = project(c, h);
    Estimate v =
        volume_mc(p, samples_per_subspace, rng.derive(2 * j + 1), false);
    vols[j] = v.value;
  };
  if (parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < subspaces; ++j) {
      try {
        one(j);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (int j = 0; j < subspaces; ++j) one(j);
  }
  double sum = 0.0, sq = 0.0;
  for (int j = 0; j < subspaces; ++j) {
    sum += vols[j];
    sq += vols[j] * vols[j];
  }
  double m = sum / subspaces;
  double var = (sq - subspaces * m * m) / std::max(subspaces - 1, 1);
  double se_m = std::sqrt(std::max(var, 0.0) / subspaces);
  Estimate e;
  e.samples = static_cast<long>(subspaces) * samples_per_subspace;
  e.value = std::pow(m / wk, 1.0 / kdim);
  e.se = e.value * se_m / (kdim * m);
  return e;
}

Estimate phi_functional(const ConvexBody& c, int kdim, int subspaces,
                        long samples_per_subspace, long volume_samples,
                        const RngStream& rng, bool parallel) {
  int n = c.dim();
  std::vector<double> terms(subspaces);
  auto one = [&](int j) {
    RngStream hs = rng.derive(2 * j);
    Subspace h = haar_subspace(n, kdim, hs);
    ConvexBody p = project(c, h);
    Estimate v =
        volume_mc(p, samples_per_subspace, rng.derive(2 * j + 1), false);
    terms[j] = std::exp(-double(n) * std::log(v.value));
  };
  if (parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < subspaces; ++j) {
      try {
        one(j);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (int j = 0; j < subspaces; ++j) one(j);
  }
  double sum = 0.0, sq = 0.0;
  for (int j = 0; j < subspaces; ++j) {
    sum += terms[j];
    sq += terms[j] * terms[j];
  }
  double b = sum / subspaces;
  double var = (sq - subspaces * b * b) / std::max(subspaces - 1, 1);
  double se_b = std::sqrt(std::max(var, 0.0) / subspaces);

  Estimate vol = volume_mc(c, volume_samples, rng.derive(-1), parallel);
  Estimate e;
  e.samples = static_cast<long>(subspaces) * samples_per_subspace;
  e.value = std::pow(vol.value, -1.0 / n) * std::pow(b, -1.0 / (kdim * n));
  double rel = std::sqrt(std::pow(vol.se / (n * vol.value), 2) +
                         std::pow(se_b / (kdim * n * b), 2));
  e.se = e.value * rel;
  return e;
}

}  // namespace convexreg
