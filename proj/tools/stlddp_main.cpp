// Copyright 2026 The stlddp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Exit codes: 0 when every run's certificate reads
// Satisfied (for monitor: the signal satisfies the specification), 2 when
// synthesis or monitoring finished but could not certify satisfaction, 1 on
// any error. STLDDP_OUT_DIR, when set, overrides the output directory of
// every subcommand.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stlddp/scenario.hpp"

#ifndef STLDDP_SCENARIO_DIR
#define STLDDP_SCENARIO_DIR "scenarios"
#endif

namespace {

constexpr int kExitSatisfied = 0;
constexpr int kExitError = 1;
constexpr int kExitNotCertified = 2;

std::string resolve_out_dir(const std::string& requested) {
  if (const char* env = std::getenv("STLDDP_OUT_DIR"); env && *env) {
    return env;
  }
  return requested;
}

std::vector<std::string> bundled_scenarios(const std::string& dir) {
  std::vector<std::string> paths;
  for (const char* name : {"reach_avoid.json", "either_or.json",
                           "arm_reach.json"}) {
    paths.push_back((std::filesystem::path(dir) / name).string());
  }
  return paths;
}

int cmd_run(const std::string& scenario_path,
            const std::optional<std::uint64_t>& seed,
            const std::optional<double>& k1, const std::optional<double>& k2,
            const std::optional<int>& max_iters,
            const std::optional<int>& retries, const std::string& out_opt) {
  stlddp::Scenario scenario = stlddp::load_scenario(scenario_path);
  if (k1) scenario.smoothing.k1 = *k1;
  if (k2) scenario.smoothing.k2 = *k2;
  scenario.smoothing.validate();
  if (max_iters) {
    scenario.solver.max_iterations = *max_iters;
    scenario.solver.validate();
  }
  if (retries) {
    if (*retries < 0) throw stlddp::ConfigError("--retries must be >= 0");
    scenario.retries = *retries;
  }

  const std::filesystem::path out_dir = resolve_out_dir(out_opt);
  const std::vector<stlddp::RunReport> reports =
      stlddp::run_scenario(scenario, seed);

  stlddp::write_regions_csv(
      (out_dir / (scenario.name + "_regions.csv")).string(),
      scenario.predicates);

  bool all_satisfied = true;
  for (const stlddp::RunReport& report : reports) {
    const std::string stem =
        scenario.name + "_run" + std::to_string(report.run_index);
    stlddp::write_trajectory_csv((out_dir / (stem + ".csv")).string(),
                                 report.trajectory,
                                 report.certificate.margins);
    stlddp::write_plot_csv((out_dir / (stem + "_plot.csv")).string(),
                           report.trajectory);
    stlddp::write_report_json((out_dir / (stem + ".json")).string(), scenario,
                              report);

    std::cout << scenario.name << " run " << report.run_index << ": "
              << (report.satisfied ? "Satisfied" : "NotCertified")
              << "  exact_robustness=" << report.certificate.exact_rho
              << "  iterations=" << report.iterations
              << "  retries_used=" << report.retries_used << "  k1="
              << report.k1 << "  wall_ms=" << report.wall_ms << '\n';
    all_satisfied = all_satisfied && report.satisfied;
  }
  std::cout << "artifacts written to " << out_dir.string() << '\n';
  return all_satisfied ? kExitSatisfied : kExitNotCertified;
}

int cmd_bench(const std::string& out_dir_arg, const std::string& scenario_dir,
              int seeds) {
  const std::string out_dir = resolve_out_dir(out_dir_arg);
  const std::vector<stlddp::BenchRow> rows = stlddp::run_benchmark_suite(
      bundled_scenarios(scenario_dir), out_dir, seeds);

  std::cout << "scenario            method       runs ok   median_ms  "
               "median_iters\n";
  for (const stlddp::BenchRow& row : rows) {
    std::printf("%-19s %-12s %4d %3d %11.2f %13.1f", row.scenario.c_str(),
                row.method.c_str(), row.runs, row.successes, row.median_ms,
                row.median_iterations);
    if (std::isfinite(row.reference_gap)) {
      std::printf("  gap=%.3g", row.reference_gap);
    }
    std::printf("\n");
  }
  std::cout << "summary written to " << out_dir << '\n';
  return kExitSatisfied;
}

int cmd_monitor(const std::string& signal_path, const std::string& spec_path,
                const std::optional<double>& k1,
                const std::optional<double>& k2) {
  stlddp::SpecBundle bundle = stlddp::load_spec_bundle(spec_path);
  if (k1) bundle.smoothing.k1 = *k1;
  if (k2) bundle.smoothing.k2 = *k2;
  bundle.smoothing.validate();

  int output_dim = 0;
  for (const auto& [name, pred] : bundle.predicates) {
    output_dim = pred.output_dim();
    break;
  }
  const stlddp::Signal signal =
      stlddp::load_signal_csv(signal_path, output_dim);
  const stlddp::MonitorResult result = stlddp::monitor_signal(bundle, signal);

  std::printf("exact_robustness %.17g\n", result.exact_rho);
  std::printf("verdict %s\n", result.verdict.c_str());
  std::printf("t,margin,active\n");
  for (size_t t = 0; t < result.margins.size(); ++t) {
    std::printf("%zu,%.17g,%d\n", t, result.margins[t],
                result.active[t] ? 1 : 0);
  }
  return result.verdict == "satisfied" ? kExitSatisfied : kExitNotCertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Synthesizes dynamically feasible trajectories that satisfy signal "
      "temporal logic specifications, by compiling the specification into "
      "smooth per-timestep running costs and optimizing them with an "
      "iterated linear-quadratic solver.\n"
      "Environment: STLDDP_OUT_DIR overrides the output directory."};
  app.require_subcommand(1);

  std::string scenario_path, signal_path, spec_path;
  std::string out_dir = "out";
  std::string bench_out;
  std::string scenario_dir = STLDDP_SCENARIO_DIR;
  std::optional<std::uint64_t> seed;
  std::optional<double> k1, k2;
  std::optional<int> max_iters, retries;
  int bench_seeds = 20;

  CLI::App* run = app.add_subcommand(
      "run", "Synthesize a trajectory for a scenario file");
  run->add_option("scenario", scenario_path, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "override the initialization seed");
  run->add_option("--k1", k1, "override the min-smoothing sharpness");
  run->add_option("--k2", k2, "override the max-smoothing sharpness");
  run->add_option("--max-iters", max_iters, "override the iteration budget");
  run->add_option("--retries", retries, "override the retry budget");
  run->add_option("--out", out_dir, "output directory (default: out)");

  CLI::App* bench = app.add_subcommand(
      "bench", "Run the bundled benchmark suite");
  bench->add_option("out_dir", bench_out, "directory for summary files")
      ->required();
  bench->add_option("--scenarios", scenario_dir,
                    "directory holding the bundled scenario files");
  bench->add_option("--seeds", bench_seeds,
                    "seed count for randomly initialized scenarios")
      ->check(CLI::PositiveNumber);

  CLI::App* monitor = app.add_subcommand(
      "monitor", "Evaluate a recorded signal against a specification");
  monitor->add_option("signal", signal_path, "signal CSV file")
      ->required()
      ->check(CLI::ExistingFile);
  monitor->add_option("--spec", spec_path,
                      "JSON file with predicates, spec text, and horizon")
      ->required()
      ->check(CLI::ExistingFile);
  monitor->add_option("--k1", k1, "override the min-smoothing sharpness");
  monitor->add_option("--k2", k2, "override the max-smoothing sharpness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitSatisfied : kExitError;
  }

  try {
    if (run->parsed()) {
      return cmd_run(scenario_path, seed, k1, k2, max_iters, retries, out_dir);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_out, scenario_dir, bench_seeds);
    }
    return cmd_monitor(signal_path, spec_path, k1, k2);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
