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

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stlddp/ddp.hpp"
#include "stlddp/planar_arm.hpp"

namespace stlddp {

// How the initial control sequence is produced.
struct InitPolicy {
  enum class Kind { RandomUniform, GravityCompensation, Zeros, File };
  Kind kind = Kind::RandomUniform;
  double lo = -1.0;
  double hi = 1.0;
  std::uint64_t seed = 0;
  std::string path;  // trajectory CSV, Kind::File only
};

// Everything one synthesis problem needs, as loaded from a scenario JSON
// file. x0s may hold several initial states; each gets its own run.
struct Scenario {
  std::string name;
  std::shared_ptr<DynamicsModel> model;
  std::optional<PlanarArmParams> arm_params;  // set when model is the arm
  PredicateTable predicates;
  std::string spec_text;
  int horizon = 1;
  std::vector<VectorXd> x0s;
  SmoothParams smoothing;
  SolverConfig solver;
  InitPolicy init;
  int retries = 2;
  double k_escalation = 10.0;
  double control_penalty = 0.0;

  Specification specification() const {
    return parse_spec(spec_text, horizon, predicates);
  }
};

Scenario load_scenario(const std::string& path);

// Outcome of one initial state's synthesis, retries included.
struct RunReport {
  std::string scenario_name;
  int run_index = 0;
  bool satisfied = false;
  SoundnessReport certificate;
  int iterations = 0;
  bool converged = false;
  int retries_used = 0;
  std::uint64_t seed = 0;
  double k1 = 10.0;
  double k2 = 10.0;
  double wall_ms = 0.0;
  std::vector<double> cost_history;
  Trajectory trajectory;
};

// Initial control sequence for one run under the given policy.
std::vector<VectorXd> make_initial_controls(const Scenario& s,
                                            const VectorXd& x0,
                                            const InitPolicy& policy);

// Synthesis with the retry ladder: the base attempt, then alternating
// sharper smoothing (k1, k2 scaled by k_escalation, warm-started from the
// best trajectory so far) and fresh random initial guesses, until the
// certificate reads Satisfied or the budget runs out. Returns the first
// satisfied attempt, or failing that the attempt with the largest exact
// robustness.
RunReport run_single(const Scenario& s, const VectorXd& x0, int run_index,
                     std::optional<std::uint64_t> seed_override = {});

std::vector<RunReport> run_scenario(
    const Scenario& s, std::optional<std::uint64_t> seed_override = {});

// Writers. All files are UTF-8 with LF line endings; numbers are printed
// with enough digits to round-trip doubles exactly.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<double>& margins);
void write_plot_csv(const std::string& path, const Trajectory& traj);
void write_regions_csv(const std::string& path, const PredicateTable& preds);
void write_report_json(const std::string& path, const Scenario& s,
                       const RunReport& report);

// Controls reloaded from a trajectory CSV written by write_trajectory_csv
// (the u_* columns), for the file init policy and round-trip re-solves.
std::vector<VectorXd> load_controls_csv(const std::string& path,
                                        int control_dim, int horizon);

// Offline monitoring: predicates + spec text + horizon (+ optional k1/k2),
// read from a scenario file or a reduced file with just those keys.
struct SpecBundle {
  PredicateTable predicates;
  std::string spec_text;
  int horizon = 1;
  SmoothParams smoothing;

  Specification specification() const {
    return parse_spec(spec_text, horizon, predicates);
  }
};

SpecBundle load_spec_bundle(const std::string& path);

// Signal CSV: either bare columns matching the output dimension, or a
// headered file whose y_* columns are taken (so the artifact's own
// trajectory CSVs monitor directly).
Signal load_signal_csv(const std::string& path, int output_dim);

struct MonitorResult {
  double exact_rho = 0.0;
  // "satisfied" (rho > 0), "violated" (rho < 0), or "undefined" (rho == 0).
  std::string verdict;
  std::vector<double> margins;
  std::vector<bool> active;
};

MonitorResult monitor_signal(const SpecBundle& bundle, const Signal& signal);

// Benchmark suite: every scenario solved by both optimizers over a fixed
// seed set (non-random init policies run once per initial state), plus a
// linear-quadratic validation row checked against an independent Riccati
// recursion. Writes summary.csv and summary.json into out_dir.
struct BenchRow {
  std::string scenario;
  std::string method;  // "ddp" or "first_order"
  int runs = 0;
  int successes = 0;
  double median_ms = 0.0;
  double median_iterations = 0.0;
  // LQR row only: relative gap between the achieved and the Riccati-optimal
  // cost; NaN elsewhere.
  double reference_gap = std::numeric_limits<double>::quiet_NaN();
};

std::vector<BenchRow> run_benchmark_suite(
    const std::vector<std::string>& scenario_paths, const std::string& out_dir,
    int seeds = 20, int baseline_iteration_cap = 30);

}  // namespace stlddp
