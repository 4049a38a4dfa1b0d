// convexreg: experiment driver CLI.
//
//   convexreg run --config cfg.json --seed 42 --out reports [--suite name]
//                 [--jobs n]
//   convexreg validate --config cfg.json
//   convexreg body-info body.json
//
// `run` exits 0 iff every evaluated row passed; `validate` exits 0 iff the
// config parses and validates.

#include <cstdint>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "convexreg/body_json.hpp"
#include "convexreg/harness.hpp"
#include "convexreg/measure.hpp"

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return j;
}

int cmd_run(const std::string& config_path, std::uint64_t seed, bool has_seed,
            const std::string& out, const std::string& suite, int jobs) {
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
  convexreg::ExperimentConfig cfg =
      convexreg::ExperimentConfig::from_json(load_json(config_path));
  if (has_seed) cfg.seed = seed;
  if (!out.empty()) cfg.out_dir = out;
  if (!suite.empty()) cfg.suites = {suite};
  cfg.validate();
  return convexreg::run_all(cfg);
}

int cmd_validate(const std::string& config_path) {
  convexreg::ExperimentConfig cfg =
      convexreg::ExperimentConfig::from_json(load_json(config_path));
  cfg.validate();
  std::cout << "ok: " << config_path << "\n" << cfg.to_json().dump(2) << "\n";
  return 0;
}

int cmd_body_info(const std::string& body_path) {
  convexreg::ConvexBody k =
      convexreg::body_from_json(load_json(body_path), body_path);
  std::cout << "body:        " << k.provenance() << "\n";
  std::cout << "dim:         " << k.dim() << "\n";
  std::cout << "symmetric:   " << (k.symmetric() ? "yes" : "no") << "\n";
  std::cout << "inner radius " << k.inner_radius() << " (certified)\n";
  std::cout << "outer radius " << k.outer_radius() << " (certified)\n";
  convexreg::Vector bar =
      convexreg::barycenter_mc(k, 400, convexreg::RngStream(1, 0));
  std::cout << "barycenter ~ [";
  for (int i = 0; i < bar.size(); ++i)
    std::cout << (i ? ", " : "") << bar[i];
  std::cout << "]  (hit-and-run estimate, seed 1)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oracle-based convex geometry toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite, body_path;
  std::uint64_t seed = 0;
  int jobs = 0;

  CLI::App* run = app.add_subcommand("run", "run experiment suites");
  run->add_option("--config", config_path, "config JSON path")->required();
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "overrides the config seed");
  run->add_option("--out", out_dir, "report directory");
  run->add_option("--suite", suite, "run a single suite");
  run->add_option("--jobs", jobs, "worker thread count");

  CLI::App* validate = app.add_subcommand("validate", "check a config");
  validate->add_option("--config", config_path, "config JSON path")
      ->required();

  CLI::App* info =
      app.add_subcommand("body-info", "print a body's certificates");
  info->add_option("body", body_path, "body JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, seed, seed_opt->count() > 0, out_dir, suite,
                     jobs);
    if (validate->parsed()) return cmd_validate(config_path);
    if (info->parsed()) return cmd_body_info(body_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
