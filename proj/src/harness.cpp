#include "convexreg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "convexreg/body_json.hpp"
#include "convexreg/logconcave.hpp"

namespace convexreg {

namespace {

constexpr double kRelSlack = 1e-3;  // on top of the 3 sigma slack

// lhs <= rhs up to Monte Carlo noise: fails only beyond 3 sigma AND beyond
// the relative epsilon, so noise cannot produce false alarms.
bool leq_ok(double lhs, double rhs, double sigma) {
  return lhs <= rhs + 3.0 * sigma + kRelSlack * std::max(1.0, std::abs(rhs));
}

const char* pf(bool ok) { return ok ? "pass" : "fail"; }

double ln3(int n) { return std::pow(std::log(n + 1.0), 3); }

double binomial(int a, int b) {
  return std::exp(std::lgamma(a + 1.0) - std::lgamma(b + 1.0) -
                  std::lgamma(a - b + 1.0));
}

// ---------------------------------------------------------------------------
// Corpus.

struct CorpusItem {
  std::string label;
  ConvexBody body;
};

Matrix cube_vertices(int n) {
  int m = 1 << n;
  Matrix v(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) v(i, j) = (i >> j) & 1 ? 1.0 : -1.0;
  return v;
}

// Gaussian vertices recentered at their mean; regenerated until the hull is
// full dimensional with the origin strictly inside.
ConvexBody random_vpoly(int n, RngStream& rng) {
  int m = 2 * n + static_cast<int>(rng.uniform() * (2 * n + 1));
  for (int attempt = 0; attempt < 50; ++attempt) {
    Matrix v(m, n);
    for (int i = 0; i < m; ++i) v.row(i) = rng.gaussian_vector(n).transpose();
    v.rowwise() -= v.colwise().mean();
    try {
      return vpolytope(v);
    } catch (const BodyError&) {
      continue;
    }
  }
  throw HarnessError("corpus: could not generate a random polytope");
}

std::vector<CorpusItem> build_corpus(const ExperimentConfig& cfg, int n,
                                     const RngStream& base) {
  RngStream rng = base.derive(1000 + n);
  std::vector<CorpusItem> items;
  auto tag = [n](const char* s) { return std::string(s) + std::to_string(n); };
  items.push_back({tag("ball"), ball(n, 1.0)});
  items.push_back({tag("cube"), cube(n, 1.0)});
  items.push_back({tag("cross"), cross_polytope(n, 1.0)});
  items.push_back({tag("simplex"), regular_simplex(n)});
  ConvexBody va = random_vpoly(n, rng);
  items.push_back({tag("vpolyA"), va});
  items.push_back({tag("vpolyB"), random_vpoly(n, rng)});
  items.push_back({tag("polarA"), polar(va)});
  // Affine perturbation of the cube, then a translate to break symmetry.
  // The vertex list is 2^n rows, so the pair is kept out of the corpus for
  // n >= 7 where every oracle call would pay a 128+-column LP.
  if (n <= 6) {
    Matrix a;
    do {
      a = Matrix::Identity(n, n);
      for (int i = 0; i < n; ++i)
        a.row(i) += 0.25 * rng.gaussian_vector(n).transpose();
    } while (std::abs(a.determinant()) < 0.1);
    ConvexBody affcube = vpolytope(cube_vertices(n) * a.transpose());
    items.push_back({tag("affcube"), affcube});
    // clamp the shift inside the certified inradius so the origin stays
    // strictly interior (gauge oracles require it)
    Vector shift = 0.2 * rng.gaussian_vector(n);
    double lim = 0.4 * affcube.inner_radius();
    if (shift.norm() > lim) shift *= lim / shift.norm();
    items.push_back({tag("skewcube"), translate(affcube, shift)});
  }
  for (std::size_t i = 0; i < cfg.corpus.size(); ++i) {
    const nlohmann::json& j = cfg.corpus[i];
    ConvexBody b = body_from_json(j.contains("body") ? j.at("body") : j);
    if (b.dim() != n) continue;
    std::string label = j.value("label", "corpus" + std::to_string(i));
    items.push_back({label + "_" + std::to_string(n), b});
  }
  return items;
}

// ---------------------------------------------------------------------------
// Row plumbing.

long now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void add_row(SuiteResult& out, const std::string& id, int n, int k,
             const std::string& body, std::uint64_t seed,
             const std::function<void(InequalityRecord&)>& fill) {
  InequalityRecord rec;
  rec.suite = out.name;
  rec.inequality_id = id;
  rec.n = n;
  rec.k = k;
  rec.body = body;
  rec.seed = seed;
  long t0 = now_ms();
  try {
    fill(rec);
  } catch (const std::exception& e) {
    rec.status = std::string("error:") + e.what();
  }
  rec.ms = now_ms() - t0;
  out.rows.push_back(std::move(rec));
}

// Fill a record asserting lhs <= rhs.
void fill_leq(InequalityRecord& rec, const Estimate& lhs, const Estimate& rhs,
              double cal = 0.0) {
  rec.lhs = lhs.value;
  rec.lhs_se = lhs.se;
  rec.rhs = rhs.value;
  rec.rhs_se = rhs.se;
  rec.ratio = rhs.value != 0.0 ? lhs.value / rhs.value : 0.0;
  rec.const_calibrated = cal;
  rec.status = pf(leq_ok(lhs.value, rhs.value, lhs.se + rhs.se));
}

Estimate exact(double v) { return {v, 0.0, 0}; }

// ---------------------------------------------------------------------------
// Suite: duality. Pointwise oracle identities of the regularization /
// polarity calculus, checked at random directions.

void duality_rows(SuiteResult& out, const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed, 11);
  for (int n : cfg.dims) {
    auto corpus = build_corpus(cfg, n, rng);
    for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
      const CorpusItem& item = corpus[ci];
      RngStream r = rng.derive(ci);
      auto identity_row = [&](const std::string& id, const ConvexBody& a,
                              const ConvexBody& b) {
        add_row(out, id, n, 0, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  RngStream rr = r;
                  double dev = 0.0;
                  for (int t = 0; t < cfg.direction_checks; ++t) {
                    Vector x = rr.gaussian_vector(n);
                    double ga = a.gauge(x), gb = b.gauge(x);
                    dev = std::max(dev, std::abs(ga - gb) / (1.0 + gb));
                    double ha = a.support(x), hb = b.support(x);
                    dev = std::max(dev, std::abs(ha - hb) / (1.0 + hb));
                  }
                  fill_leq(rec, exact(dev), exact(1e-9));
                });
      };
      identity_row("duality_out", polar(outer_reg(item.body)),
                   inner_reg(polar(item.body)));
      identity_row("duality_in", polar(inner_reg(item.body)),
                   outer_reg(polar(item.body)));
    }
  }
}

// ---------------------------------------------------------------------------
// Suite: classics. Polytope and duality volume inequalities plus the spherical-mean
// comparisons, with exact oracles where small dimensions allow them.

// max_x vol_k(K cap (x + H))^{1/k}: centered offset grid of 5^min(n,3)
// points scaled by r_out/2, refined by 20 random local steps.
double max_section_vrad(const ConvexBody& k, const Subspace& h,
                        const Vector& center, long samples, RngStream rng) {
  int n = k.dim(), kd = h.dim();
  int d = std::min(n, 3);
  double scale = k.outer_radius() / 2.0;
  double best = 0.0;
  Vector best_x = center;
  long counter = 0;
  auto value_at = [&](const Vector& x) {
    try {
      ConvexBody slice = section(translate(k, Vector(-x)), h);
      double v = volume_mc(slice, samples, rng.derive(counter++)).value;
      return v > 0 ? std::pow(v, 1.0 / kd) : 0.0;
    } catch (const BodyError&) {
      return 0.0;
    }
  };
  std::vector<double> steps = {-1.0, -0.5, 0.0, 0.5, 1.0};
  int total = 1;
  for (int i = 0; i < d; ++i) total *= 5;
  for (int idx = 0; idx < total; ++idx) {
    Vector x = center;
    int rest = idx;
    for (int i = 0; i < d; ++i) {
      x[i] += steps[rest % 5] * scale;
      rest /= 5;
    }
    double v = value_at(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  for (int step = 0; step < 20; ++step) {
    Vector x = best_x + 0.1 * k.outer_radius() * rng.gaussian_vector(n);
    double v = value_at(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return best;
}

struct RudelsonSample {
  double diffsec = 0.0, maxsec = 0.0, factor = 1.0;
};

RudelsonSample rudelson_measure(const ConvexBody& kc, int n, int k,
                                long samples, RngStream r) {
  RngStream hr = r.derive(0);
  Subspace h = haar_subspace(n, k, hr);
  RudelsonSample s;
  double vd = volume_mc(section(diff_body(kc), h), samples, r.derive(1)).value;
  s.diffsec = std::pow(vd, 1.0 / k);
  s.maxsec =
      max_section_vrad(kc, h, Vector::Zero(n), samples / 2, r.derive(2));
  s.factor = std::min(std::sqrt(double(k)), double(n) / k);
  return s;
}

// Calibration pass: the absolute constant in Rudelson's inequality is fit as
// the max observed ratio on a separately seeded corpus.
double calibrate_rudelson(const ExperimentConfig& cfg, const RngStream& rng) {
  double c = 0.0;
  for (int n : cfg.dims) {
    if (n < 3 || n > 4) continue;
    auto corpus = build_corpus(cfg, n, rng);
    for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
      const CorpusItem& item = corpus[ci];
      if (item.body.symmetric() || item.label.rfind("simplex", 0) != 0)
        continue;
      int k = n / 2;
      RudelsonSample s = rudelson_measure(item.body, n, k,
                                          cfg.radial_samples, rng.derive(ci));
      if (s.maxsec > 0) c = std::max(c, s.diffsec / (s.factor * s.maxsec));
    }
  }
  return c > 0 ? c : 1.0;
}

void classics_rows(SuiteResult& out, const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed, 13);
  RngStream cal_rng(cfg.seed ^ 0x5bd1e995u, 14);
  double rud_c = calibrate_rudelson(cfg, cal_rng);
  for (int n : cfg.dims) {
    if (n > 6) continue;
    auto corpus = build_corpus(cfg, n, rng);
    for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
      const CorpusItem& item = corpus[ci];
      const ConvexBody& k = item.body;
      RngStream r = rng.derive(100 * n + ci);
      // center once; reused by the barycenter-hypothesis inequalities
      std::optional<ConvexBody> kc_opt;
      Estimate vol;
      try {
        Vector bc =
            k.symmetric()
                ? Vector(Vector::Zero(n))
                : barycenter_mc(k, cfg.barycenter_samples, r.derive(0));
        kc_opt = k.symmetric() ? k : translate(k, Vector(-bc));
        vol = volume_mc(*kc_opt, cfg.volume_samples, r.derive(1));
      } catch (const std::exception& e) {
        std::string reason = e.what();
        add_row(out, "centering", n, 0, item.label, cfg.seed,
                [&](InequalityRecord&) -> void {
                  throw HarnessError(reason);
                });
        continue;
      }
      const ConvexBody& kc = *kc_opt;

      add_row(out, "rogers_shephard", n, 0, item.label, cfg.seed,
              [&](InequalityRecord& rec) {
                Estimate vd =
                    volume_mc(diff_body(kc), cfg.volume_samples, r.derive(2));
                double ratio = vd.value / vol.value;
                double sig =
                    ratio * (vd.se / vd.value + vol.se / vol.value);
                rec.lhs = ratio;
                rec.lhs_se = sig;
                rec.rhs = binomial(2 * n, n);
                rec.ratio = ratio / rec.rhs;
                rec.status = pf(leq_ok(std::pow(2.0, n), ratio, sig) &&
                                leq_ok(ratio, rec.rhs, sig));
              });
      if (!k.symmetric()) {
        add_row(out, "milman_pajor_in", n, 0, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  Estimate vi = volume_mc(inner_reg(kc), cfg.volume_samples,
                                          r.derive(3));
                  fill_leq(rec,
                           {std::pow(2.0, -n) * vol.value,
                            std::pow(2.0, -n) * vol.se, vol.samples},
                           vi);
                });
        add_row(out, "milman_pajor_out", n, 0, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  Estimate vo = volume_mc(outer_reg(k), cfg.volume_samples,
                                          r.derive(4));
                  Estimate vk = volume_mc(k, cfg.volume_samples, r.derive(5));
                  fill_leq(rec, vo,
                           {std::pow(2.0, n) * vk.value,
                            std::pow(2.0, n) * vk.se, vk.samples});
                });
      }
      add_row(out, "blaschke_santalo", n, 0, item.label, cfg.seed,
              [&](InequalityRecord& rec) {
                ConvexBody ks =
                    k.symmetric()
                        ? k
                        : translate(k, Vector(-santalo_point(
                                           k, cfg.santalo_directions,
                                           r.derive(6))));
                Estimate v1 = volume_mc(ks, cfg.volume_samples, r.derive(7));
                Estimate v2 =
                    volume_mc(polar(ks), cfg.volume_samples, r.derive(8));
                double wn = unit_ball_volume(n);
                double prod = v1.value * v2.value / (wn * wn);
                double sig = prod * (v1.se / v1.value + v2.se / v2.value);
                rec.lhs = prod;
                rec.lhs_se = sig;
                rec.rhs = 1.0;
                rec.ratio = prod;
                rec.status = pf(leq_ok(prod, 1.0, sig));
                // stash the product for the companion lower bound
                rec.const_calibrated = sig;
              });
      {
        const InequalityRecord& bs = out.rows.back();
        add_row(out, "bourgain_milman", n, 0, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  if (bs.status.rfind("error", 0) == 0)
                    throw HarnessError("santalo product unavailable");
                  fill_leq(rec, exact(std::pow(0.2, n)),
                           {bs.lhs, bs.const_calibrated, 0});
                });
      }
      for (int kk : cfg.ks) {
        if (kk < 1 || kk >= n) continue;
        for (int j = 0; j < std::min(cfg.haar_draws, 3); ++j) {
          RngStream hr = r.derive(10 + 10 * kk + j);
          Subspace h = haar_subspace(n, kk, hr);
          Subspace hperp = Subspace(h.complement());
          add_row(out, "spingarn", n, kk, item.label, cfg.seed,
                  [&](InequalityRecord& rec) {
                    Estimate vp = volume_mc(project(kc, h),
                                            cfg.radial_samples, hr.derive(1));
                    Estimate vs = volume_mc(section(kc, hperp),
                                            cfg.radial_samples, hr.derive(2));
                    double prod = vp.value * vs.value;
                    double sig =
                        prod * (vp.se / vp.value + vs.se / vs.value +
                                vol.se / vol.value);
                    rec.lhs = prod;
                    rec.lhs_se = sig;
                    rec.rhs = binomial(n, kk) * vol.value;
                    rec.rhs_se = binomial(n, kk) * vol.se;
                    rec.ratio = prod / rec.rhs;
                    rec.status = pf(leq_ok(vol.value, prod, sig) &&
                                    leq_ok(prod, rec.rhs, sig));
                  });
        }
      }
      add_row(out, "m_times_mstar", n, 0, item.label, cfg.seed,
              [&](InequalityRecord& rec) {
                Estimate m = mean_gauge(k, cfg.radial_samples, r.derive(20));
                Estimate ms =
                    mean_support(k, cfg.radial_samples, r.derive(20));
                double prod = m.value * ms.value;
                double sig = prod * (m.se / m.value + ms.se / ms.value);
                fill_leq(rec, exact(1.0), {prod, sig, m.samples});
              });
      if (!k.symmetric()) {
        add_row(out, "mstar_out", n, 0, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  Estimate a = mean_support(outer_reg(k), cfg.radial_samples,
                                            r.derive(21));
                  Estimate b =
                      mean_support(k, cfg.radial_samples, r.derive(21));
                  fill_leq(rec, a, {2.0 * b.value, 2.0 * b.se, b.samples});
                });
        add_row(out, "m_in", n, 0, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  Estimate a = mean_gauge(inner_reg(k), cfg.radial_samples,
                                          r.derive(22));
                  Estimate b = mean_gauge(k, cfg.radial_samples, r.derive(22));
                  fill_leq(rec, a, {2.0 * b.value, 2.0 * b.se, b.samples});
                });
        add_row(out, "m_out_monotone", n, 0, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  Estimate a = mean_gauge(outer_reg(k), cfg.radial_samples,
                                          r.derive(23));
                  Estimate b = mean_gauge(k, cfg.radial_samples, r.derive(23));
                  fill_leq(rec, a, b);
                });
      }
      if (item.label.rfind("cube", 0) == 0 && n <= 4)
        add_row(out, "santalo_cube_exact", n, 0, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  Estimate v1 = volume_mc(k, cfg.volume_samples, r.derive(30));
                  Estimate v2 = volume_mc(polar(k), cfg.volume_samples,
                                          r.derive(31));
                  double prod = v1.value * v2.value;
                  double sig =
                      prod * (v1.se / v1.value + v2.se / v2.value);
                  double oracle =
                      std::pow(2.0, n) * std::pow(2.0, n) / std::tgamma(n + 1.0);
                  rec.lhs = prod;
                  rec.lhs_se = sig;
                  rec.rhs = oracle;
                  rec.ratio = prod / oracle;
                  rec.status = pf(std::abs(prod - oracle) <=
                                  3.0 * sig + kRelSlack * oracle);
                });
      if (item.label.rfind("simplex", 0) == 0 && n == 2)
        add_row(out, "triangle_diff_exact", n, 0, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  Estimate vd = volume_mc(diff_body(kc), cfg.volume_samples,
                                          r.derive(32));
                  double ratio = vd.value / vol.value;
                  double sig =
                      ratio * (vd.se / vd.value + vol.se / vol.value);
                  rec.lhs = ratio;
                  rec.lhs_se = sig;
                  rec.rhs = 6.0;
                  rec.ratio = ratio / 6.0;
                  rec.status =
                      pf(std::abs(ratio - 6.0) <= 3.0 * sig + kRelSlack * 6.0);
                });
      if (!k.symmetric() && n >= 3 && n <= 4 &&
          item.label.rfind("simplex", 0) == 0) {
        int kk = n / 2;
        add_row(out, "fradelizi", n, kk, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  RngStream hr = r.derive(40);
                  Subspace h = haar_subspace(n, kk, hr);
                  double maxsec = max_section_vrad(
                      kc, h, Vector::Zero(n), cfg.radial_samples, r.derive(41));
                  Estimate bar_sec = volume_mc(section(kc, h),
                                               cfg.radial_samples, r.derive(42));
                  double barv = std::pow(bar_sec.value, 1.0 / kk);
                  double sig = barv * bar_sec.se / bar_sec.value / kk +
                               0.05 * maxsec;  // grid-search noise allowance
                  fill_leq(rec, {maxsec, 0.05 * maxsec, 0},
                           {(n + 1.0) / (kk + 1.0) * barv, sig, 0});
                });
        add_row(out, "rudelson", n, kk, item.label, cfg.seed,
                [&](InequalityRecord& rec) {
                  RudelsonSample s = rudelson_measure(
                      kc, n, kk, cfg.radial_samples, r.derive(43));
                  fill_leq(rec, {s.diffsec, 0.05 * s.diffsec, 0},
                           {1.25 * rud_c * s.factor * s.maxsec,
                            0.05 * s.maxsec, 0},
                           rud_c);
                });
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Theorem suites: projection / section comparisons of the regularizations
// over random subspaces, with calibrated constants.

enum class ThmKind { projections, sections, bs_weak };

struct ThmSample {
  double normalized = 0.0;  // ratio divided by (n/k) ln(n+1)^3
  double raw_lhs = 0.0, raw_rhs = 0.0, se = 0.0;
};

ThmSample theorem_measure(ThmKind kind, const ConvexBody& kc, int n, int k,
                          long samples, RngStream r) {
  RngStream hr = r.derive(0);
  Subspace h = haar_subspace(n, k, hr);
  Estimate a, b;
  switch (kind) {
    case ThmKind::projections:
      a = vrad_mc(project(outer_reg(kc), h), samples, r.derive(1));
      b = vrad_mc(project(inner_reg(kc), h), samples, r.derive(1));
      break;
    case ThmKind::sections:
      a = vrad_mc(section(outer_reg(kc), h), samples, r.derive(1));
      b = vrad_mc(section(inner_reg(kc), h), samples, r.derive(1));
      break;
    case ThmKind::bs_weak: {
      a = vrad_mc(project(kc, h), samples, r.derive(1));
      Estimate bp = vrad_mc(section(polar(kc), h), samples, r.derive(2));
      // the product plays the role of the ratio against 1
      a = {a.value * bp.value,
           a.value * bp.value *
               (a.se / a.value + bp.se / bp.value),
           a.samples};
      b = exact(1.0);
      break;
    }
  }
  ThmSample s;
  s.raw_lhs = a.value;
  s.raw_rhs = b.value;
  double ratio = a.value / b.value;
  s.se = ratio * (a.se / std::max(a.value, 1e-300) +
                  b.se / std::max(b.value, 1e-300));
  s.normalized = ratio / ((double(n) / k) * ln3(n));
  return s;
}

struct ThmCase {
  std::string body;
  std::string norm;  // "bar" or "santalo" hypothesis
  ConvexBody kc;
  int n = 0;
};

std::vector<ThmCase> theorem_cases(const ExperimentConfig& cfg, int n,
                                   const RngStream& rng) {
  std::vector<ThmCase> cases;
  auto corpus = build_corpus(cfg, n, rng);
  for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
    const CorpusItem& item = corpus[ci];
    RngStream r = rng.derive(500 + ci);
    if (item.body.symmetric()) {
      // centered already; keep one representative to bound the row count
      if (item.label.rfind("ball", 0) == 0 ||
          item.label.rfind("affcube", 0) == 0)
        cases.push_back({item.label, "bar", item.body, n});
      continue;
    }
    try {
      Vector bc =
          barycenter_mc(item.body, cfg.barycenter_samples, r.derive(0));
      cases.push_back(
          {item.label, "bar", translate(item.body, Vector(-bc)), n});
      Vector sp =
          santalo_point(item.body, cfg.santalo_directions, r.derive(1));
      cases.push_back(
          {item.label, "santalo", translate(item.body, Vector(-sp)), n});
    } catch (const std::exception&) {
      // a body whose centering fails is skipped, never fatal
      continue;
    }
  }
  return cases;
}

std::vector<ThmSample> theorem_samples(
    ThmKind kind, const ExperimentConfig& cfg,
    const std::map<int, std::vector<ThmCase>>& cases_by_n,
    const RngStream& rng, std::vector<InequalityRecord>* rows,
    const std::string& suite, std::uint64_t seed, double cal) {
  std::vector<ThmSample> all;
  for (int n : cfg.dims) {
    const auto& cases = cases_by_n.at(n);
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
      const ThmCase& c = cases[ci];
      for (int k : cfg.ks) {
        if (k < 1 || k >= n) continue;
        for (int j = 0; j < cfg.haar_draws; ++j) {
          RngStream r = rng.derive(((n * 64 + ci) * 16 + k) * 16 + j);
          if (!rows) {
            try {
              all.push_back(
                  theorem_measure(kind, c.kc, n, k, cfg.radial_samples, r));
            } catch (const std::exception&) {
            }
            continue;
          }
          InequalityRecord rec;
          rec.suite = suite;
          rec.inequality_id = c.norm == "santalo" ? "ratio_santalo_centered"
                                                  : "ratio_bar_centered";
          rec.n = n;
          rec.k = k;
          rec.body = c.body;
          rec.seed = seed;
          long t0 = now_ms();
          try {
            ThmSample s =
                theorem_measure(kind, c.kc, n, k, cfg.radial_samples, r);
            all.push_back(s);
            rec.lhs = s.raw_lhs;
            rec.lhs_se = s.se * (s.raw_rhs / std::max(s.raw_lhs, 1e-300));
            rec.rhs = 1.25 * cal * (double(n) / k) * ln3(n) * s.raw_rhs;
            rec.ratio = s.normalized;
            rec.const_calibrated = cal;
            rec.status = pf(leq_ok(s.normalized, 1.25 * cal,
                                   s.se / ((double(n) / k) * ln3(n))));
          } catch (const std::exception& e) {
            rec.status = std::string("error:") + e.what();
          }
          rec.ms = now_ms() - t0;
          rows->push_back(std::move(rec));
        }
      }
    }
  }
  return all;
}

void theorem_rows(SuiteResult& out, ThmKind kind,
                  const ExperimentConfig& cfg) {
  // One case list (corpus + centering) shared by both passes; the
  // calibration pass differs only in its measurement seeds, so the 25%
  // headroom covers subspace and Monte Carlo variation, not a fresh corpus.
  RngStream case_rng(cfg.seed ^ 0x94d049bbu, 61 + int(kind));
  std::map<int, std::vector<ThmCase>> cases;
  for (int n : cfg.dims) cases[n] = theorem_cases(cfg, n, case_rng);
  RngStream cal_rng(cfg.seed ^ 0x9e3779b9u, 21 + int(kind));
  std::vector<ThmSample> cal_samples = theorem_samples(
      kind, cfg, cases, cal_rng, nullptr, out.name, cfg.seed, 0.0);
  double cal = 0.0;
  for (const ThmSample& s : cal_samples) cal = std::max(cal, s.normalized);
  if (cal <= 0.0) cal = 1.0;
  RngStream rng(cfg.seed, 31 + int(kind));
  theorem_samples(kind, cfg, cases, rng, &out.rows, out.name, cfg.seed, cal);
}

// ---------------------------------------------------------------------------
// Suite: simplex_sharp. The subspaces spanned by k vertices of the regular
// simplex realize the n/k growth of the projection-section product.

void simplex_sharp_rows(SuiteResult& out, const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed, 41);
  RngStream cal_rng(cfg.seed ^ 0x85ebca6bu, 42);
  auto product = [&](int n, int k, const RngStream& r) {
    ConvexBody s = regular_simplex(n);
    Subspace h = simplex_sharp_subspace(n, k);
    Estimate a = vrad_mc(project(polar(s), h), cfg.radial_samples, r.derive(1));
    Estimate b = vrad_mc(section(s, h), cfg.radial_samples, r.derive(2));
    double prod = a.value * b.value;
    double sig = prod * (a.se / a.value + b.se / b.value);
    return Estimate{prod, sig, a.samples};
  };
  // calibration fixes a single c-hat = min of the products against n/k
  double chat = std::numeric_limits<double>::infinity();
  for (int n : cfg.dims) {
    if (n < 3) continue;
    for (int k = 1; k < n; ++k) {
      Estimate p = product(n, k, cal_rng.derive(n * 32 + k));
      chat = std::min(chat, p.value / (double(n) / k));
    }
  }
  if (!std::isfinite(chat) || chat <= 0) chat = 1e-6;
  for (int n : cfg.dims) {
    if (n < 3) continue;
    for (int k = 1; k < n; ++k)
      add_row(out, "simplex_product_lower", n, k, "simplex", cfg.seed,
              [&](InequalityRecord& rec) {
                Estimate p = product(n, k, rng.derive(n * 32 + k));
                // lower bound with 25% headroom on the calibrated constant
                fill_leq(rec, {chat / 1.25 * (double(n) / k), 0.0, 0}, p,
                         chat);
                rec.ratio = p.value / (double(n) / k);
              });
  }
}

// ---------------------------------------------------------------------------
// Suite: random_subspace. Distribution of vrad(K_out cap H)/vrad(K_in cap H)
// over Haar subspaces for isotropic bodies, reported at the 1 - e^{-k}
// quantile.

struct QuantileResult {
  double quantile = 0.0, se = 0.0, median = 0.0;
};

QuantileResult subspace_quantile(const ConvexBody& kc, int n, int k, int draws,
                                 long samples, const RngStream& rng) {
  ConvexBody ko = outer_reg(kc), ki = inner_reg(kc);
  std::vector<std::pair<double, double>> ratios;  // value, se
  for (int j = 0; j < draws; ++j) {
    RngStream r = rng.derive(j);
    RngStream hr = r.derive(0);
    Subspace h = haar_subspace(n, k, hr);
    Estimate a = vrad_mc(section(ko, h), samples, r.derive(1));
    Estimate b = vrad_mc(section(ki, h), samples, r.derive(1));
    double ratio = a.value / b.value;
    ratios.push_back({ratio, ratio * (a.se / a.value + b.se / b.value)});
  }
  std::sort(ratios.begin(), ratios.end());
  double p = 1.0 - std::exp(-double(k));
  std::size_t idx = std::min(
      ratios.size() - 1,
      static_cast<std::size_t>(std::ceil(p * ratios.size())) - 1);
  QuantileResult q;
  q.quantile = ratios[idx].first;
  q.se = ratios[idx].second;
  q.median = ratios[ratios.size() / 2].first;
  return q;
}

void random_subspace_rows(SuiteResult& out, const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed, 51);
  int n = 6;
  std::vector<CorpusItem> bodies;
  bodies.push_back({"cube6", cube(6, 1.0)});
  for (int i = 0; i < 2; ++i) {
    RngStream r = rng.derive(900 + i);
    ConvexBody raw = random_vpoly(n, r);
    IsotropicResult iso =
        isotropic_normalize(raw, cfg.barycenter_samples * 4, r.derive(1));
    bodies.push_back({"isopolyA6" + std::string(i ? "b" : "a"), iso.body});
  }
  for (std::size_t bi = 0; bi < bodies.size(); ++bi) {
    for (int k : cfg.ks) {
      if (k < 1 || k >= n) continue;
      RngStream r = rng.derive(100 * bi + k);
      add_row(out, "quantile_1_minus_exp_minus_k", n, k, bodies[bi].label,
              cfg.seed, [&](InequalityRecord& rec) {
                QuantileResult q = subspace_quantile(
                    bodies[bi].body, n, k, cfg.quantile_subspaces,
                    cfg.radial_samples / 4, r.derive(0));
                // the distributional content is informational; the assertion
                // is finiteness and ratio >= 1 up to noise
                rec.lhs = 1.0;
                rec.rhs = q.quantile;
                rec.rhs_se = q.se;
                rec.ratio = q.quantile;
                rec.const_calibrated = q.median;
                rec.status = pf(std::isfinite(q.quantile) &&
                                leq_ok(1.0, q.quantile, q.se));
              });
      add_row(out, "quantile_budget_stability", n, k, bodies[bi].label,
              cfg.seed, [&](InequalityRecord& rec) {
                QuantileResult q1 = subspace_quantile(
                    bodies[bi].body, n, k, cfg.quantile_subspaces,
                    cfg.radial_samples / 4, r.derive(0));
                QuantileResult q2 = subspace_quantile(
                    bodies[bi].body, n, k, cfg.quantile_subspaces,
                    cfg.radial_samples / 2, r.derive(1));
                rec.lhs = q1.quantile;
                rec.lhs_se = q1.se;
                rec.rhs = q2.quantile;
                rec.rhs_se = q2.se;
                rec.ratio = q1.quantile / q2.quantile;
                rec.status = pf(std::abs(q1.quantile - q2.quantile) <=
                                3.0 * (q1.se + q2.se) +
                                    0.05 * std::max(q1.quantile, q2.quantile));
              });
    }
  }
}

// ---------------------------------------------------------------------------
// Suite: aleksandrov_phi. Monotone projection means and the
// Paouris-Pivovarov functional.

void aleksandrov_phi_rows(SuiteResult& out, const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed, 61);
  for (int n : cfg.dims) {
    if (n < 4 || n > 5) continue;
    std::vector<CorpusItem> bodies = {
        {"ball" + std::to_string(n), ball(n, 1.0)},
        {"cube" + std::to_string(n), cube(n, 1.0)}};
    for (std::size_t bi = 0; bi < bodies.size(); ++bi) {
      const ConvexBody& k = bodies[bi].body;
      RngStream r = rng.derive(10 * n + bi);
      std::vector<Estimate> q(n);
      for (int kk = 1; kk <= std::min(3, n - 1); ++kk)
        q[kk] = aleksandrov_q(k, kk, cfg.haar_draws * 4, cfg.radial_samples,
                              r.derive(kk));
      for (int kk = 1; kk + 1 <= std::min(3, n - 1); ++kk)
        add_row(out, "aleksandrov_monotone", n, kk, bodies[bi].label,
                cfg.seed, [&](InequalityRecord& rec) {
                  fill_leq(rec, q[kk + 1], q[kk]);
                });
      add_row(out, "aleksandrov_q1_is_mstar", n, 1, bodies[bi].label,
              cfg.seed, [&](InequalityRecord& rec) {
                Estimate ms = mean_support(k, cfg.radial_samples * 4,
                                           r.derive(7));
                rec.lhs = q[1].value;
                rec.lhs_se = q[1].se;
                rec.rhs = ms.value;
                rec.rhs_se = ms.se;
                rec.ratio = q[1].value / ms.value;
                rec.status = pf(std::abs(q[1].value - ms.value) <=
                                3.0 * (q[1].se + ms.se) +
                                    kRelSlack * ms.value);
              });
    }
    for (int kk : {1, 2})
      add_row(out, "phi_cube_vs_ball", n, kk, "cube_vs_ball", cfg.seed,
              [&](InequalityRecord& rec) {
                RngStream r = rng.derive(700 + 10 * n + kk);
                Estimate pc =
                    phi_functional(cube(n, 1.0), kk, cfg.haar_draws * 2,
                                   cfg.radial_samples, cfg.volume_samples,
                                   r.derive(0));
                Estimate pb =
                    phi_functional(ball(n, 1.0), kk, cfg.haar_draws * 2,
                                   cfg.radial_samples, cfg.volume_samples,
                                   r.derive(1));
                fill_leq(rec, pb, pc);
              });
  }
}

// ---------------------------------------------------------------------------
// Suite: functional. The log-concave calculus battery.

std::vector<std::pair<std::string, LogConcaveFn>> functional_corpus(int n) {
  Matrix cov = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i) cov(i, i) = 1.0 + 0.5 * i;
  LogConcaveFn aniso = gaussian_fn(cov);
  std::vector<std::pair<std::string, LogConcaveFn>> fam;
  fam.push_back({"gauss_iso", gaussian_fn(Matrix::Identity(n, n))});
  fam.push_back({"gauss_aniso", aniso});
  fam.push_back({"lp_exp_1.5", lp_exp_fn(n, 1.5)});
  fam.push_back({"gauss_tilt", tilt_fn(aniso, Vector::Constant(n, 0.6))});
  return fam;
}

// (int_H f)^{1/k} with a guard for vanishing estimates.
Estimate h_integral_root(const LogConcaveFn& f, const Subspace& h,
                         long directions, const RngStream& rng) {
  Estimate e = integral_over_subspace(f, h, directions, rng);
  int k = h.dim();
  double v = std::pow(e.value, 1.0 / k);
  return {v, v * e.se / (k * e.value), e.samples};
}

void functional_rows(SuiteResult& out, const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed, 71);
  const int n = 3;

  add_row(out, "kp_indicator_identity", n, 0, "cube_and_simplex", cfg.seed,
          [&](InequalityRecord& rec) {
            RngStream r = rng.derive(1);
            double dev = 0.0;
            for (const ConvexBody& k :
                 {cube(n, 1.0), regular_simplex(n)}) {
              LogConcaveFn ind = LogConcaveFn::indicator(k);
              for (double p : {1.0, 2.0, 5.0})
                for (int t = 0; t < 16; ++t) {
                  Vector u = sphere_sample(n, r);
                  dev = std::max(dev, std::abs(ball_body_radial(ind, p, u) -
                                               k.radial(u)));
                }
            }
            fill_leq(rec, exact(dev), exact(1e-8));
          });

  add_row(out, "gauss_delta_out_fixed_point", n, 0, "gauss_iso", cfg.seed,
          [&](InequalityRecord& rec) {
            RngStream r = rng.derive(2);
            LogConcaveFn g = gaussian_fn(Matrix::Identity(n, n));
            LogConcaveFn dg = delta_out(g);
            double dev = 0.0;
            for (int t = 0; t < 16; ++t) {
              Vector x = r.gaussian_vector(n);
              dev = std::max(dev, std::abs(dg.value(x) - g.value(x)));
            }
            fill_leq(rec, exact(dev), exact(1e-8));
          });

  add_row(out, "gauss_level_radius", n, 0, "gauss_iso", cfg.seed,
          [&](InequalityRecord& rec) {
            RngStream r = rng.derive(3);
            LogConcaveFn g = gaussian_fn(Matrix::Identity(n, n));
            double dev = 0.0;
            for (double p : {1.5, 2.0, 4.0})
              for (int t = 0; t < 8; ++t) {
                Vector u = sphere_sample(n, r);
                dev = std::max(dev,
                               std::abs(level_body_radial(g, p, u) -
                                        std::sqrt(2.0 * (p - 1.0))));
              }
            fill_leq(rec, exact(dev), exact(1e-9));
          });

  {
    std::vector<std::pair<std::string, std::function<double(double)>>> gs = {
        {"g=t", [](double t) { return t; }},
        {"g=t^2", [](double t) { return t * t; }},
        {"g=t+t^3", [](double t) { return t + t * t * t; }}};
    for (const auto& [glabel, g] : gs)
      for (double p : {2.0, 3.0, 5.0, 10.0})
        add_row(out, "lemma_1d_sandwich", n, int(p), glabel, cfg.seed,
                [&](InequalityRecord& rec) {
                  RayMomentPeak lr = ray_moment_peak(g, p);
                  TailBound tb{2.0 * lr.t_p + p, 0.5, 1e3};
                  double integral = quad_1d_halfline(
                      [&](double t) {
                        return std::pow(t, p - 1.0) * std::exp(-g(t));
                      },
                      0.0, tb, 1e-9);
                  double lo = lr.m_p * lr.t_p / p;
                  double hi = 10.0 * lr.m_p * lr.t_p / std::sqrt(p - 1.0);
                  rec.lhs = integral;
                  rec.rhs = hi;
                  rec.ratio = integral / hi;
                  rec.const_calibrated = 10.0;
                  bool bracket = g(2 * lr.t_p) >= p - 1.0 - 1e-9 &&
                                 g(lr.t_p) <= p - 1.0 + 1e-9;
                  rec.status = pf(integral >= lo * (1 - 1e-9) &&
                                  integral <= hi && bracket);
                });
  }

  add_row(out, "kp_nesting_band", 2, 0, "family", cfg.seed,
          [&](InequalityRecord& rec) {
            RngStream r = rng.derive(4);
            double p = 2.0, q = 4.0;
            double c = std::pow(std::tgamma(p + 1.0), 1.0 / p) /
                       std::pow(std::tgamma(q + 1.0), 1.0 / q);
            double worst = 0.0;
            for (const auto& [label, f] : functional_corpus(2))
              for (int t = 0; t < 8; ++t) {
                Vector u = sphere_sample(2, r);
                double rp = ball_body_radial(f, p, u);
                double rq = ball_body_radial(f, q, u);
                worst = std::max(worst, rp / rq - 1.0);
                worst = std::max(worst, c - rp / rq);
              }
            fill_leq(rec, exact(worst), exact(1e-6), c);
          });

  for (const auto& [label, f] : functional_corpus(2))
    add_row(out, "level_vs_1d_maximizer", 2, 0, label, cfg.seed,
            [&, fl = f](InequalityRecord& rec) {
              RngStream r = rng.derive(5);
              double worst = 0.0;
              for (double p : {2.0, 4.0})
                for (int t = 0; t < 6; ++t) {
                  Vector u = sphere_sample(2, r);
                  auto g1 = [&](double s) { return fl.phi(s * u); };
                  RayMomentPeak lr = ray_moment_peak(g1, p);
                  double rho = level_body_radial(fl, p, u);
                  worst = std::max(worst, lr.t_p / rho - 1.0);
                  worst = std::max(worst, rho / (2.0 * lr.t_p) - 1.0);
                }
              fill_leq(rec, exact(worst), exact(1e-6));
            });

  {
    // ball bodies of the outer regularization against the regularized ball
    // bodies: two-sided band calibrated with 25% headroom
    auto measure = [&](const RngStream& r, double* lo, double* hi) {
      RngStream rr = r;
      LogConcaveFn f = tilt_fn(gaussian_fn(Matrix::Identity(2, 2)),
                               Vector::Constant(2, 0.7));
      *lo = std::numeric_limits<double>::infinity();
      *hi = 0.0;
      for (double p : {2.0, 3.0}) {
        LogConcaveFn df = delta_out(f);
        ConvexBody reg = outer_reg(ball_body(f, p));
        for (int t = 0; t < 6; ++t) {
          Vector u = sphere_sample(2, rr);
          double ratio = ball_body_radial(df, p, u) / reg.radial(u);
          *lo = std::min(*lo, ratio);
          *hi = std::max(*hi, ratio);
        }
      }
    };
    add_row(out, "kp_delta_out_band", 2, 0, "gauss_tilt", cfg.seed,
            [&](InequalityRecord& rec) {
              double clo, chi;
              measure(RngStream(cfg.seed ^ 0xc2b2ae35u, 72), &clo, &chi);
              double lo, hi;
              measure(rng.derive(6), &lo, &hi);
              rec.lhs = lo;
              rec.rhs = hi;
              rec.ratio = hi / lo;
              rec.const_calibrated = chi;
              rec.status = pf(lo >= clo / 1.25 && hi <= chi * 1.25);
            });
  }

  // subspace-integral comparisons of the delta operators
  {
    auto thm_ratios = [&](const RngStream& base, double* up_max,
                          double* low_min, double* d0_low_min,
                          double* d0_up_max) {
      *up_max = 0.0;
      *d0_up_max = 0.0;
      *low_min = std::numeric_limits<double>::infinity();
      *d0_low_min = *low_min;
      long idx = 0;
      for (const auto& [label, f] : functional_corpus(n)) {
        if (label == "gauss_iso") continue;
        for (int k : {1, 2}) {
          RngStream r = base.derive(idx++);
          RngStream hr = r.derive(0);
          Subspace h = haar_subspace(n, k, hr);
          Estimate io = h_integral_root(delta_out(f), h,
                                        cfg.functional_directions, r.derive(1));
          Estimate ii = h_integral_root(delta_in(f), h,
                                        cfg.functional_directions, r.derive(2));
          Estimate iff = h_integral_root(f, h, cfg.functional_directions,
                                         r.derive(3));
          Estimate iz = h_integral_root(delta_zero(f), h,
                                        cfg.functional_directions, r.derive(4));
          double norm = std::pow(double(n) / k, 2) * ln3(n);
          *up_max = std::max(*up_max, io.value / ii.value / norm);
          *low_min = std::min(*low_min, io.value / iff.value);
          *d0_low_min = std::min(*d0_low_min, iz.value / iff.value);
          double rfac = std::max(std::sqrt(double(k)), double(n) / k);
          *d0_up_max = std::max(*d0_up_max, iz.value / (rfac * iff.value));
        }
      }
    };
    add_row(out, "delta_subspace_integrals", n, 0, "family", cfg.seed,
            [&](InequalityRecord& rec) {
              double cu, cl, dzl, dzu;
              thm_ratios(RngStream(cfg.seed ^ 0x27d4eb2fu, 73), &cu, &cl,
                         &dzl, &dzu);
              double eu, el, ezl, ezu;
              thm_ratios(rng.derive(7), &eu, &el, &ezl, &ezu);
              rec.lhs = eu;
              rec.rhs = 1.25 * cu;
              rec.ratio = eu / cu;
              rec.const_calibrated = cu;
              bool ok = eu <= 1.25 * cu && el >= cl / 1.25 &&
                        ezl >= dzl / 1.25 && ezu <= 1.25 * dzu && el > 0 &&
                        ezl > 0;
              rec.status = pf(ok);
            });
  }

  // projections of the delta operators (k = 1 fibers keep the nested
  // minimizations cheap); indicators cross-check the exact body routes
  add_row(out, "projection_indicator_cross_check", n, 2, "cube", cfg.seed,
          [&](InequalityRecord& rec) {
            RngStream r = rng.derive(8);
            RngStream hr = r.derive(0);
            Subspace h = haar_subspace(n, 2, hr);
            ConvexBody k = cube(n, 1.0);
            LogConcaveFn ind = LogConcaveFn::indicator(k);
            LogConcaveFn po = functional_projection(delta_out(ind), h);
            LogConcaveFn pi = functional_projection(delta_in(ind), h);
            ConvexBody ko = project(diff_body(k), h);
            ConvexBody ki = project(inner_reg(k), h);
            double dev = 0.0;
            for (int t = 0; t < 24; ++t) {
              Vector z = r.gaussian_vector(2);
              dev = std::max(dev, std::abs(po.body()->gauge(z) -
                                           2.0 * ko.gauge(z)));
              dev = std::max(dev,
                             std::abs(pi.body()->gauge(z) - ki.gauge(z)));
            }
            fill_leq(rec, exact(dev), exact(1e-6));
          });

  {
    auto measure = [&](const RngStream& base) {
      RngStream r = base;
      LogConcaveFn f = tilt_fn(gaussian_fn(Matrix::Identity(2, 2)),
                               Vector::Constant(2, 0.8));
      RngStream hr = r.derive(0);
      Subspace h = haar_subspace(2, 1, hr);
      // the projected functions live on R^1: integrate the line directly.
      // every evaluation runs a fiber minimization over an inner
      // minimization, so a coarse fixed rule keeps the cost bounded.
      auto line_integral = [](const LogConcaveFn& pf) {
        const TailBound& t = pf.tail();
        TailBound qt{t.rho, 0.5 * t.beta, t.scale};
        Vector e = Vector::Ones(1);
        auto half = [&](double sgn) {
          return quad_1d_halfline_fixed(
              [&](double s) { return pf.value(s * sgn * e); }, 0.0, qt, 10);
        };
        return half(1.0) + half(-1.0);
      };
      double po = line_integral(functional_projection(delta_out(f), h));
      double pi = line_integral(functional_projection(delta_in(f), h));
      return po / pi;
    };
    add_row(out, "projection_delta_ratio", 2, 1, "gauss_tilt", cfg.seed,
            [&](InequalityRecord& rec) {
              double cal = measure(RngStream(cfg.seed ^ 0x165667b1u, 74));
              double v = measure(rng.derive(9));
              rec.lhs = v;
              rec.rhs = 1.25 * cal * std::pow(2.0, 2) * ln3(2);
              rec.ratio = v / cal;
              rec.const_calibrated = cal;
              rec.status = pf(v > 0 && v <= rec.rhs);
            });
  }

  add_row(out, "gauss_section_identity", n, 2, "gauss_iso", cfg.seed,
          [&](InequalityRecord& rec) {
            RngStream r = rng.derive(10);
            RngStream hr = r.derive(0);
            Subspace h = haar_subspace(n, 2, hr);
            LogConcaveFn g = gaussian_fn(Matrix::Identity(n, n));
            Estimate lhs = integral_over_subspace(
                g, h, cfg.functional_directions * 4, r.derive(1));
            Estimate rhs = volume_mc(section(ball_body(g, 2), h),
                                     cfg.functional_directions * 4,
                                     r.derive(2));
            rec.lhs = lhs.value;
            rec.lhs_se = lhs.se;
            rec.rhs = rhs.value;
            rec.rhs_se = rhs.se;
            rec.ratio = lhs.value / rhs.value;
            rec.status = pf(std::abs(lhs.value - rhs.value) <=
                            3.0 * (lhs.se + rhs.se) + kRelSlack * rhs.value);
          });
}

// ---------------------------------------------------------------------------
// Report plumbing.

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> suites = {
      "duality",          "classics",      "theorem_projections",
      "theorem_sections", "bs_weak",       "simplex_sharp",
      "random_subspace",  "aleksandrov_phi", "functional"};
  return suites;
}

int SuiteResult::passes() const {
  int c = 0;
  for (const auto& r : rows) c += r.status == "pass";
  return c;
}

int SuiteResult::failures() const {
  int c = 0;
  for (const auto& r : rows)
    c += r.status != "pass" && r.status != "info";
  return c;
}

SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg) {
  SuiteResult out;
  out.name = name;
  if (name == "duality")
    duality_rows(out, cfg);
  else if (name == "classics")
    classics_rows(out, cfg);
  else if (name == "theorem_projections")
    theorem_rows(out, ThmKind::projections, cfg);
  else if (name == "theorem_sections")
    theorem_rows(out, ThmKind::sections, cfg);
  else if (name == "bs_weak")
    theorem_rows(out, ThmKind::bs_weak, cfg);
  else if (name == "simplex_sharp")
    simplex_sharp_rows(out, cfg);
  else if (name == "random_subspace")
    random_subspace_rows(out, cfg);
  else if (name == "aleksandrov_phi")
    aleksandrov_phi_rows(out, cfg);
  else if (name == "functional")
    functional_rows(out, cfg);
  else
    throw HarnessError("unknown suite: " + name);
  return out;
}

std::string to_csv(const SuiteResult& result) {
  std::ostringstream os;
  os << "suite,inequality_id,n,k,body,seed,lhs,lhs_se,rhs,rhs_se,ratio,"
        "const_calibrated,status,ms\n";
  for (const auto& r : result.rows) {
    std::string status = r.status;
    for (char& c : status)
      if (c == ',' || c == '\n') c = ';';
    os << r.suite << ',' << r.inequality_id << ',' << r.n << ',' << r.k << ','
       << r.body << ',' << r.seed << ',' << fmt(r.lhs) << ',' << fmt(r.lhs_se)
       << ',' << fmt(r.rhs) << ',' << fmt(r.rhs_se) << ',' << fmt(r.ratio)
       << ',' << fmt(r.const_calibrated) << ',' << status << ',' << r.ms
       << '\n';
  }
  return os.str();
}

nlohmann::json summary_json(const ExperimentConfig& cfg,
                            const std::vector<SuiteResult>& results) {
  nlohmann::json suites = nlohmann::json::object();
  int total = 0, failed = 0;
  for (const auto& s : results) {
    double worst = 0.0;
    nlohmann::json constants = nlohmann::json::object();
    for (const auto& r : s.rows) {
      worst = std::max(worst, r.ratio);
      if (r.const_calibrated != 0.0)
        constants[r.inequality_id] = r.const_calibrated;
    }
    suites[s.name] = {{"rows", s.rows.size()},
                      {"pass", s.passes()},
                      {"fail", s.failures()},
                      {"worst_ratio", worst},
                      {"calibrated_constants", constants}};
    total += static_cast<int>(s.rows.size());
    failed += s.failures();
  }
  return {{"seed", cfg.seed},
          {"config", cfg.to_json()},
          {"suites", suites},
          {"total_rows", total},
          {"failed_rows", failed}};
}

int run_all(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::string> selected =
      cfg.suites.empty() ? known_suites() : cfg.suites;
  std::filesystem::create_directories(cfg.out_dir);
  std::vector<SuiteResult> results;
  for (const std::string& name : selected) {
    results.push_back(run_suite(name, cfg));
    std::ofstream csv(std::filesystem::path(cfg.out_dir) / (name + ".csv"));
    csv << to_csv(results.back());
  }
  std::ofstream js(std::filesystem::path(cfg.out_dir) / "summary.json");
  js << summary_json(cfg, results).dump(2) << "\n";
  int failed = 0;
  for (const auto& s : results) failed += s.failures();
  return failed == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Config.

namespace {
long env_override(const char* name, long fallback) {
  const char* v = std::getenv(name);
  if (!v) return fallback;
  char* end = nullptr;
  long parsed = std::strtol(v, &end, 10);
  if (end == v || parsed <= 0)
    throw HarnessError(std::string("invalid ") + name + ": " + v);
  return parsed;
}
}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (!j.is_object()) throw HarnessError("config: expected an object");
  if (!j.contains("seed"))
    throw HarnessError("config: explicit \"seed\" is required");
  cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("suites"))
    cfg.suites = j.at("suites").get<std::vector<std::string>>();
  if (j.contains("dims")) cfg.dims = j.at("dims").get<std::vector<int>>();
  if (j.contains("ks")) cfg.ks = j.at("ks").get<std::vector<int>>();
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("budget")) {
    const auto& b = j.at("budget");
    cfg.radial_samples = b.value("radial", cfg.radial_samples);
    cfg.volume_samples = b.value("volume", cfg.volume_samples);
    cfg.barycenter_samples = b.value("barycenter", cfg.barycenter_samples);
    cfg.santalo_directions = b.value("santalo", cfg.santalo_directions);
    cfg.haar_draws = b.value("haar", cfg.haar_draws);
    cfg.quantile_subspaces =
        b.value("quantile_subspaces", cfg.quantile_subspaces);
    cfg.direction_checks = b.value("directions", cfg.direction_checks);
    cfg.functional_directions =
        b.value("functional_directions", cfg.functional_directions);
  }
  if (j.contains("corpus"))
    cfg.corpus = j.at("corpus").get<std::vector<nlohmann::json>>();
  cfg.radial_samples = env_override("CONVEXREG_RADIAL", cfg.radial_samples);
  cfg.volume_samples = env_override("CONVEXREG_VOLUME", cfg.volume_samples);
  cfg.haar_draws =
      static_cast<int>(env_override("CONVEXREG_HAAR", cfg.haar_draws));
  cfg.quantile_subspaces = static_cast<int>(
      env_override("CONVEXREG_QUANTILE_SUBSPACES", cfg.quantile_subspaces));
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"suites", suites},
          {"dims", dims},
          {"ks", ks},
          {"seed", seed},
          {"out", out_dir},
          {"budget",
           {{"radial", radial_samples},
            {"volume", volume_samples},
            {"barycenter", barycenter_samples},
            {"santalo", santalo_directions},
            {"haar", haar_draws},
            {"quantile_subspaces", quantile_subspaces},
            {"directions", direction_checks},
            {"functional_directions", functional_directions}}},
          {"corpus", corpus}};
}

void ExperimentConfig::validate() const {
  for (int n : dims)
    if (n < 2 || n > 10)
      throw HarnessError("config.dims: dimensions must lie in [2, 10]");
  if (dims.empty()) throw HarnessError("config.dims: empty");
  for (int k : ks)
    if (k < 1) throw HarnessError("config.ks: k must be >= 1");
  if (ks.empty()) throw HarnessError("config.ks: empty");
  if (radial_samples <= 0 || volume_samples <= 0 || barycenter_samples <= 0 ||
      haar_draws <= 0 || quantile_subspaces <= 0 || direction_checks <= 0 ||
      functional_directions <= 0 || santalo_directions <= 0)
    throw HarnessError("config.budget: all budgets must be positive");
  for (const std::string& s : suites) {
    const auto& ks_ = known_suites();
    if (std::find(ks_.begin(), ks_.end(), s) == ks_.end())
      throw HarnessError("config.suites: unknown suite \"" + s + "\"");
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      ConvexBody b =
          body_from_json(corpus[i].contains("body") ? corpus[i].at("body")
                                                    : corpus[i]);
      (void)b;
    } catch (const std::exception& e) {
      throw HarnessError("config.corpus[" + std::to_string(i) +
                         "]: " + e.what());
    }
  }
}

}  // namespace convexreg
