#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "convexreg/body.hpp"
#include "convexreg/measure.hpp"

namespace convexreg {

struct HarnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Experiment driver configuration. Budgets are deliberately explicit (no
// wall-clock or hardware defaults) so a config + seed pins the output.
struct ExperimentConfig {
  std::vector<std::string> suites;  // empty = all known suites
  std::vector<int> dims = {2, 3, 4, 5, 6};
  std::vector<int> ks = {1, 2, 3};
  std::uint64_t seed = 1;
  std::string out_dir = "reports";

  // Monte Carlo budgets.
  long radial_samples = 2000;    // vrad / section-volume estimates
  long volume_samples = 6000;    // full-dimensional volume estimates
  int barycenter_samples = 200;  // hit-and-run points for centering
  int santalo_directions = 128;
  int haar_draws = 6;              // subspaces per (body, k)
  int quantile_subspaces = 200;    // distributional suite
  int direction_checks = 500;      // pointwise identity checks
  long functional_directions = 48; // spherical directions per H-integral

  // Extra corpus entries (body JSON, optional "label"); the built-in corpus
  // is always generated.
  std::vector<nlohmann::json> corpus;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // throws HarnessError with a field path
};

// One evaluated inequality instance. `status` is "pass", "fail", "info"
// (distributional / diagnostic rows that carry no assertion), or
// "error:<reason>".
struct InequalityRecord {
  std::string suite;
  std::string inequality_id;
  int n = 0;
  int k = 0;
  std::string body;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double lhs_se = 0.0;
  double rhs = 0.0;
  double rhs_se = 0.0;
  double ratio = 0.0;
  double const_calibrated = 0.0;
  std::string status;
  long ms = 0;
};

struct SuiteResult {
  std::string name;
  std::vector<InequalityRecord> rows;
  int passes() const;
  int failures() const;  // fail + error rows
};

const std::vector<std::string>& known_suites();

SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg);

// CSV with the fixed column order
// suite,inequality_id,n,k,body,seed,lhs,lhs_se,rhs,rhs_se,ratio,
// const_calibrated,status,ms. Everything except the trailing ms column is a
// pure function of (config, seed).
std::string to_csv(const SuiteResult& result);
nlohmann::json summary_json(const ExperimentConfig& cfg,
                            const std::vector<SuiteResult>& results);

// Runs the selected suites, writes <out>/<suite>.csv and <out>/summary.json.
// Returns 0 iff no row failed or errored.
int run_all(const ExperimentConfig& cfg);

}  // namespace convexreg
