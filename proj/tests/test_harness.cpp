#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <regex>
#include <sstream>

#include "convexreg/harness.hpp"

using namespace convexreg;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.seed = 7;
  cfg.dims = {2, 3};
  cfg.ks = {1};
  cfg.radial_samples = 400;
  cfg.volume_samples = 800;
  cfg.barycenter_samples = 80;
  cfg.santalo_directions = 64;
  cfg.haar_draws = 2;
  cfg.quantile_subspaces = 24;
  cfg.direction_checks = 60;
  cfg.functional_directions = 12;
  return cfg;
}

// The trailing ms column is wall-clock; everything before it is the
// deterministic payload.
std::string strip_ms(const std::string& csv) {
  static const std::regex tail(",[0-9]+\n");
  return std::regex_replace(csv, tail, ",-\n");
}

}  // namespace

TEST_CASE("config json round trip and validation") {
  nlohmann::json j = {{"seed", 42},
                      {"dims", {2, 3}},
                      {"ks", {1, 2}},
                      {"budget", {{"radial", 500}, {"haar", 3}}},
                      {"out", "/tmp/reports"}};
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.seed == 42);
  CHECK(cfg.radial_samples == 500);
  CHECK(cfg.haar_draws == 3);
  CHECK(cfg.volume_samples == 6000);  // default preserved
  cfg.validate();

  // seeds are explicit, never implicit
  nlohmann::json noseed = {{"dims", {2}}};
  CHECK_THROWS_AS(ExperimentConfig::from_json(noseed), HarnessError);

  ExperimentConfig bad = cfg;
  bad.dims = {1};
  CHECK_THROWS_AS(bad.validate(), HarnessError);
  bad = cfg;
  bad.suites = {"nonexistent"};
  CHECK_THROWS_AS(bad.validate(), HarnessError);
  bad = cfg;
  bad.corpus = {nlohmann::json{{"type", "mystery"}}};
  CHECK_THROWS_AS(bad.validate(), HarnessError);
  bad = cfg;
  bad.corpus = {nlohmann::json{
      {"label", "tiny"},
      {"type", "lp_ball"}, {"n", 2}, {"p", 1.5}, {"scale", 1.0}}};
  bad.validate();
}

TEST_CASE("duality suite passes and is deterministic") {
  ExperimentConfig cfg = tiny_config();
  SuiteResult a = run_suite("duality", cfg);
  REQUIRE(!a.rows.empty());
  for (const auto& r : a.rows) {
    CAPTURE(r.body);
    CAPTURE(r.inequality_id);
    CHECK(r.status == "pass");
  }
  SuiteResult b = run_suite("duality", cfg);
  CHECK(strip_ms(to_csv(a)) == strip_ms(to_csv(b)));

  // a different seed moves the random corpus and directions
  ExperimentConfig cfg2 = cfg;
  cfg2.seed = 8;
  SuiteResult c = run_suite("duality", cfg2);
  CHECK(strip_ms(to_csv(a)) != strip_ms(to_csv(c)));
}

TEST_CASE("csv shape") {
  ExperimentConfig cfg = tiny_config();
  cfg.dims = {2};
  SuiteResult s = run_suite("simplex_sharp", cfg);
  // n = 2 is below the suite's range: empty but well-formed
  std::string csv = to_csv(s);
  CHECK(csv.substr(0, 5) == "suite");
  cfg.dims = {3};
  s = run_suite("simplex_sharp", cfg);
  REQUIRE(s.rows.size() == 2);  // k = 1, 2
  for (const auto& r : s.rows) {
    CHECK(r.status == "pass");
    CHECK(r.ratio > 0.0);
  }
  std::istringstream is(to_csv(s));
  std::string header;
  std::getline(is, header);
  CHECK(header ==
        "suite,inequality_id,n,k,body,seed,lhs,lhs_se,rhs,rhs_se,ratio,"
        "const_calibrated,status,ms");
  std::string row;
  std::getline(is, row);
  CHECK(std::count(row.begin(), row.end(), ',') == 13);
}

TEST_CASE("classics suite at desk scale") {
  ExperimentConfig cfg = tiny_config();
  cfg.dims = {2};
  SuiteResult s = run_suite("classics", cfg);
  REQUIRE(!s.rows.empty());
  int fails = 0;
  for (const auto& r : s.rows) {
    CAPTURE(r.inequality_id);
    CAPTURE(r.body);
    CAPTURE(r.lhs);
    CAPTURE(r.rhs);
    if (r.status != "pass") ++fails;
  }
  CHECK(fails == 0);
  bool found_triangle = false;
  for (const auto& r : s.rows)
    if (r.inequality_id == "triangle_diff_exact") {
      found_triangle = true;
      CHECK(r.ratio == doctest::Approx(1.0).epsilon(0.05));
    }
  CHECK(found_triangle);
}

TEST_CASE("theorem suite emits calibrated rows") {
  ExperimentConfig cfg = tiny_config();
  cfg.dims = {3};
  cfg.haar_draws = 2;
  SuiteResult s = run_suite("theorem_sections", cfg);
  REQUIRE(!s.rows.empty());
  for (const auto& r : s.rows) {
    CAPTURE(r.body);
    CHECK(r.status == "pass");
    CHECK(r.const_calibrated > 0.0);
    if (r.body.rfind("ball", 0) == 0) {
      // the regularizations of the ball coincide: raw ratio exactly 1
      double raw = r.ratio * (double(r.n) / r.k) *
                   std::pow(std::log(r.n + 1.0), 3);
      CHECK(raw == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("unknown suite is a typed error") {
  CHECK_THROWS_AS(run_suite("nope", tiny_config()), HarnessError);
}
