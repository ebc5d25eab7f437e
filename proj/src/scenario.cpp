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

#include "stlddp/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace stlddp {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

namespace {

const json& need(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(ctx + ": missing key '" + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& ctx) {
  if (!j.is_number()) throw ConfigError(ctx + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& ctx) {
  if (!j.is_number_integer()) throw ConfigError(ctx + " must be an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& ctx) {
  if (!j.is_string()) throw ConfigError(ctx + " must be a string");
  return j.get<std::string>();
}

double opt_number(const json& j, const char* key, double fallback,
                  const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return as_number(j.at(key), ctx + "." + key);
}

int opt_int(const json& j, const char* key, int fallback,
            const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return as_int(j.at(key), ctx + "." + key);
}

VectorXd as_vector(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(ctx + " must be a non-empty array of numbers");
  }
  VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v[static_cast<int>(i)] = as_number(j[i], ctx + "[" + std::to_string(i) + "]");
  }
  return v;
}

// Box bounds accept null for an unconstrained side.
VectorXd as_bound_vector(const json& j, double sign, const std::string& ctx) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(ctx + " must be a non-empty array");
  }
  VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    if (e.is_null()) {
      v[static_cast<int>(i)] = sign * std::numeric_limits<double>::infinity();
    } else {
      v[static_cast<int>(i)] = as_number(e, ctx + "[" + std::to_string(i) + "]");
    }
  }
  return v;
}

Predicate parse_predicate(const std::string& name, const json& j,
                          const std::optional<PlanarArmParams>& arm) {
  const std::string ctx = "predicates." + name;
  const std::string kind = as_string(need(j, "kind", ctx), ctx + ".kind");
  if (kind == "affine") {
    return Predicate::affine(name, as_vector(need(j, "a", ctx), ctx + ".a"),
                             as_number(need(j, "b", ctx), ctx + ".b"));
  }
  if (kind == "ball") {
    const double radius = as_number(need(j, "radius", ctx), ctx + ".radius");
    const double epsilon = opt_number(j, "epsilon", 1e-3, ctx);
    VectorXd center;
    if (j.contains("center")) {
      center = as_vector(j.at("center"), ctx + ".center");
    } else if (j.contains("ik_target")) {
      if (!arm) {
        throw ConfigError(ctx + ".ik_target requires the planar_arm model");
      }
      const VectorXd target = as_vector(j.at("ik_target"), ctx + ".ik_target");
      if (target.size() != 2) {
        throw ConfigError(ctx + ".ik_target must have 2 entries");
      }
      Eigen::Vector3d seed = Eigen::Vector3d::Zero();
      if (j.contains("ik_seed")) {
        const VectorXd s = as_vector(j.at("ik_seed"), ctx + ".ik_seed");
        if (s.size() != 3) throw ConfigError(ctx + ".ik_seed must have 3 entries");
        seed = s;
      }
      const auto q = solve_ik_2d(*arm, Eigen::Vector2d(target[0], target[1]),
                                 seed);
      if (!q) {
        throw ConfigError(ctx + ": inverse kinematics found no configuration "
                          "within tolerance of the target");
      }
      center = *q;
    } else {
      throw ConfigError(ctx + ": ball needs 'center' or 'ik_target'");
    }
    return Predicate::ball(name, std::move(center), radius, epsilon);
  }
  if (kind == "box") {
    return Predicate::box(
        name, as_bound_vector(need(j, "lower", ctx), -1.0, ctx + ".lower"),
        as_bound_vector(need(j, "upper", ctx), +1.0, ctx + ".upper"));
  }
  throw ConfigError(ctx + ".kind must be one of affine, ball, box");
}

std::shared_ptr<DynamicsModel> parse_model(
    const json& j, std::optional<PlanarArmParams>& arm_out) {
  const std::string ctx = "model";
  const std::string name = as_string(need(j, "name", ctx), "model.name");
  const double dt = as_number(need(j, "dt", ctx), "model.dt");
  if (name == "single_integrator") {
    return single_integrator(dt, opt_int(j, "dim", 2, ctx));
  }
  if (name == "double_integrator") {
    return double_integrator(dt, opt_int(j, "dim", 2, ctx));
  }
  if (name == "planar_arm") {
    PlanarArmParams params;
    if (j.contains("params")) {
      const json& p = j.at("params");
      const std::string pctx = "model.params";
      if (p.contains("lengths"))
        params.lengths = as_vector(p.at("lengths"), pctx + ".lengths");
      if (p.contains("masses"))
        params.masses = as_vector(p.at("masses"), pctx + ".masses");
      if (p.contains("com_offsets"))
        params.com_offsets = as_vector(p.at("com_offsets"), pctx + ".com_offsets");
      params.inertias =
          PlanarArmParams::rod_inertias(params.masses, params.lengths);
      if (p.contains("inertias"))
        params.inertias = as_vector(p.at("inertias"), pctx + ".inertias");
      params.gravity = opt_number(p, "gravity", params.gravity, pctx);
      if (params.lengths.size() != 3 || params.masses.size() != 3 ||
          params.com_offsets.size() != 3 || params.inertias.size() != 3) {
        throw ConfigError("model.params vectors must have 3 entries");
      }
    }
    arm_out = params;
    return planar_arm(params, dt);
  }
  throw ConfigError(
      "model.name must be single_integrator, double_integrator, or planar_arm");
}

SolverConfig parse_solver(const json& root) {
  SolverConfig config;
  if (!root.contains("solver")) return config;
  const json& j = root.at("solver");
  const std::string ctx = "solver";
  config.max_iterations = opt_int(j, "max_iterations", config.max_iterations, ctx);
  config.cost_tolerance =
      opt_number(j, "cost_tolerance", config.cost_tolerance, ctx);
  config.min_accept_ratio =
      opt_number(j, "min_accept_ratio", config.min_accept_ratio, ctx);
  config.reg_init = opt_number(j, "reg_init", config.reg_init, ctx);
  config.reg_min = opt_number(j, "reg_min", config.reg_min, ctx);
  config.reg_max = opt_number(j, "reg_max", config.reg_max, ctx);
  config.reg_scale = opt_number(j, "reg_scale", config.reg_scale, ctx);
  config.fd_step = opt_number(j, "fd_step", config.fd_step, ctx);
  if (j.contains("derivative_mode")) {
    const std::string mode =
        as_string(j.at("derivative_mode"), "solver.derivative_mode");
    if (mode == "finite_difference") {
      config.derivative_mode = SolverConfig::DerivativeMode::FiniteDifference;
    } else if (mode == "analytic") {
      config.derivative_mode = SolverConfig::DerivativeMode::AnalyticIfAvailable;
    } else {
      throw ConfigError("solver.derivative_mode must be 'analytic' or "
                        "'finite_difference'");
    }
  }
  if (j.contains("parallelism")) {
    const std::string par = as_string(j.at("parallelism"), "solver.parallelism");
    if (par == "serial") {
      config.parallelism = Parallelism::Serial;
    } else if (par == "openmp") {
      config.parallelism = Parallelism::OpenMp;
    } else {
      throw ConfigError("solver.parallelism must be 'serial' or 'openmp'");
    }
  }
  config.validate();
  return config;
}

InitPolicy parse_init(const json& root) {
  InitPolicy init;
  if (!root.contains("init")) return init;
  const json& j = root.at("init");
  const std::string policy = as_string(need(j, "policy", "init"), "init.policy");
  if (policy == "random_uniform") {
    init.kind = InitPolicy::Kind::RandomUniform;
    init.lo = opt_number(j, "lo", -1.0, "init");
    init.hi = opt_number(j, "hi", 1.0, "init");
    if (!(init.lo < init.hi)) throw ConfigError("init.lo must be < init.hi");
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
        throw ConfigError("init.seed must be an integer");
      }
      init.seed = j.at("seed").get<std::uint64_t>();
    }
  } else if (policy == "gravity_compensation") {
    init.kind = InitPolicy::Kind::GravityCompensation;
  } else if (policy == "zeros") {
    init.kind = InitPolicy::Kind::Zeros;
  } else if (policy == "file") {
    init.kind = InitPolicy::Kind::File;
    init.path = as_string(need(j, "path", "init"), "init.path");
  } else {
    throw ConfigError("init.policy must be one of random_uniform, "
                      "gravity_compensation, zeros, file");
  }
  return init;
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario file '" + path + "' is not valid JSON: " +
                      e.what());
  }
  return j;
}

PredicateTable parse_predicates(const json& root,
                                const std::optional<PlanarArmParams>& arm) {
  PredicateTable predicates;
  const json& preds = need(root, "predicates", "scenario");
  if (!preds.is_object() || preds.empty()) {
    throw ConfigError("predicates must be a non-empty object");
  }
  for (auto it = preds.begin(); it != preds.end(); ++it) {
    predicates.emplace(it.key(), parse_predicate(it.key(), it.value(), arm));
  }
  return predicates;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenario loading
// ---------------------------------------------------------------------------

Scenario load_scenario(const std::string& path) {
  const json root = parse_file(path);

  Scenario s;
  s.name = root.contains("name")
               ? as_string(root.at("name"), "name")
               : std::filesystem::path(path).stem().string();
  s.model = parse_model(need(root, "model", "scenario"), s.arm_params);
  s.predicates = parse_predicates(root, s.arm_params);
  s.spec_text = as_string(need(root, "spec", "scenario"), "spec");
  s.horizon = as_int(need(root, "horizon", "scenario"), "horizon");
  if (s.horizon < 1) throw ConfigError("horizon must be >= 1");

  const json& x0 = need(root, "x0", "scenario");
  if (!x0.is_array() || x0.empty()) {
    throw ConfigError("x0 must be a non-empty array");
  }
  if (x0.front().is_array()) {
    for (size_t i = 0; i < x0.size(); ++i) {
      s.x0s.push_back(as_vector(x0[i], "x0[" + std::to_string(i) + "]"));
    }
  } else {
    s.x0s.push_back(as_vector(x0, "x0"));
  }
  for (const auto& state : s.x0s) {
    if (state.size() != s.model->state_dim()) {
      throw ConfigError("x0 length " + std::to_string(state.size()) +
                        " does not match the model state dimension " +
                        std::to_string(s.model->state_dim()));
    }
  }

  s.smoothing.k1 = opt_number(root, "k1", 10.0, "scenario");
  s.smoothing.k2 = opt_number(root, "k2", 10.0, "scenario");
  s.smoothing.validate();
  s.solver = parse_solver(root);
  s.init = parse_init(root);
  if (s.init.kind == InitPolicy::Kind::GravityCompensation && !s.arm_params) {
    throw ConfigError(
        "init.policy gravity_compensation requires the planar_arm model");
  }
  s.retries = opt_int(root, "retries", 2, "scenario");
  if (s.retries < 0) throw ConfigError("retries must be >= 0");
  s.k_escalation = opt_number(root, "k_escalation", 10.0, "scenario");
  if (!(s.k_escalation > 1.0)) throw ConfigError("k_escalation must exceed 1");
  s.control_penalty = opt_number(root, "control_penalty", 0.0, "scenario");
  if (s.control_penalty < 0.0) {
    throw ConfigError("control_penalty must be >= 0");
  }

  for (const auto& [pname, pred] : s.predicates) {
    if (pred.output_dim() != s.model->output_dim()) {
      throw ConfigError("predicate '" + pname + "' expects dimension " +
                        std::to_string(pred.output_dim()) +
                        ", model output has " +
                        std::to_string(s.model->output_dim()));
    }
  }
  s.specification();  // surfaces syntax/fragment/horizon problems right away
  return s;
}

// ---------------------------------------------------------------------------
// Initial controls
// ---------------------------------------------------------------------------

std::vector<VectorXd> make_initial_controls(const Scenario& s,
                                            const VectorXd& x0,
                                            const InitPolicy& policy) {
  const int T = s.horizon;
  const int m = s.model->control_dim();
  std::vector<VectorXd> U(T + 1, VectorXd::Zero(m));
  switch (policy.kind) {
    case InitPolicy::Kind::Zeros:
      return U;
    case InitPolicy::Kind::RandomUniform: {
      std::mt19937_64 rng(policy.seed);
      std::uniform_real_distribution<double> dist(policy.lo, policy.hi);
      for (int t = 0; t <= T; ++t) {
        for (int j = 0; j < m; ++j) U[t][j] = dist(rng);
      }
      return U;
    }
    case InitPolicy::Kind::GravityCompensation: {
      if (!s.arm_params) {
        throw ConfigError(
            "gravity_compensation init requires the planar_arm model");
      }
      VectorXd x = x0;
      for (int t = 0; t <= T; ++t) {
        U[t] = gravity_torque(*s.arm_params, x.head<3>());
        if (t < T) x = s.model->step(x, U[t]);
      }
      return U;
    }
    case InitPolicy::Kind::File:
      return load_controls_csv(policy.path, m, T);
  }
  throw Error("unknown init policy");
}

// ---------------------------------------------------------------------------
// Runs with the retry ladder
// ---------------------------------------------------------------------------

RunReport run_single(const Scenario& s, const VectorXd& x0, int run_index,
                     std::optional<std::uint64_t> seed_override) {
  const auto t_start = std::chrono::steady_clock::now();
  const Specification spec = s.specification();
  const RunningCostTable table = compile(spec);
  const std::uint64_t base_seed = seed_override.value_or(s.init.seed);

  RunReport best;
  best.scenario_name = s.name;
  best.run_index = run_index;
  bool have_best = false;
  std::vector<VectorXd> warm;
  int fresh_draws = 0;
  std::exception_ptr last_error = nullptr;

  for (int attempt = 0; attempt <= s.retries; ++attempt) {
    SmoothParams params = s.smoothing;
    std::vector<VectorXd> U0;
    std::uint64_t seed_used = base_seed;
    try {
      if (attempt == 0) {
        InitPolicy p = s.init;
        p.seed = base_seed;
        U0 = make_initial_controls(s, x0, p);
      } else if (attempt % 2 == 1 && !warm.empty()) {
        // Sharper smoothing, warm-started from the best trajectory so far.
        const double factor = std::pow(s.k_escalation, (attempt + 1) / 2);
        params.k1 *= factor;
        params.k2 *= factor;
        U0 = warm;
      } else {
        InitPolicy p;
        p.kind = InitPolicy::Kind::RandomUniform;
        if (s.init.kind == InitPolicy::Kind::RandomUniform) {
          p.lo = s.init.lo;
          p.hi = s.init.hi;
        }
        p.seed = base_seed + 1000003ull * static_cast<std::uint64_t>(++fresh_draws);
        seed_used = p.seed;
        U0 = make_initial_controls(s, x0, p);
      }

      SolveResult r =
          solve(*s.model, table, x0, U0, s.solver, params, s.control_penalty);

      RunReport rep;
      rep.scenario_name = s.name;
      rep.run_index = run_index;
      rep.certificate = std::move(*r.certificate);
      rep.satisfied = rep.certificate.verdict == Verdict::Satisfied;
      rep.iterations = r.iterations;
      rep.converged = r.converged;
      rep.retries_used = attempt;
      rep.seed = seed_used;
      rep.k1 = params.k1;
      rep.k2 = params.k2;
      rep.cost_history = std::move(r.cost_history);
      rep.trajectory = std::move(r.trajectory);

      const bool better =
          !have_best || (rep.satisfied && !best.satisfied) ||
          (rep.satisfied == best.satisfied &&
           rep.certificate.exact_rho > best.certificate.exact_rho);
      if (better) {
        best = std::move(rep);
        warm = best.trajectory.U;
        have_best = true;
      } else {
        best.retries_used = attempt;
      }
      if (best.satisfied) break;
    } catch (const Error&) {
      last_error = std::current_exception();
    }
  }
  if (!have_best) {
    if (last_error) std::rethrow_exception(last_error);
    throw Error("no synthesis attempt produced a trajectory");
  }

  best.wall_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t_start)
                     .count();
  return best;
}

std::vector<RunReport> run_scenario(const Scenario& s,
                                    std::optional<std::uint64_t> seed_override) {
  std::vector<RunReport> reports;
  reports.reserve(s.x0s.size());
  for (size_t i = 0; i < s.x0s.size(); ++i) {
    reports.push_back(
        run_single(s, s.x0s[i], static_cast<int>(i), seed_override));
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<double>& margins) {
  if (traj.X.empty() || margins.size() != traj.X.size()) {
    throw LengthMismatchError("trajectory and margins disagree in length");
  }
  std::ofstream out = open_out(path);
  const int n = static_cast<int>(traj.X[0].size());
  const int m = static_cast<int>(traj.U[0].size());
  const int p = static_cast<int>(traj.Y[0].size());
  out << "t";
  for (int i = 0; i < n; ++i) out << ",x_" << i;
  for (int i = 0; i < m; ++i) out << ",u_" << i;
  for (int i = 0; i < p; ++i) out << ",y_" << i;
  out << ",margin\n";
  for (size_t t = 0; t < traj.X.size(); ++t) {
    out << t;
    for (int i = 0; i < n; ++i) out << ',' << fmt(traj.X[t][i]);
    for (int i = 0; i < m; ++i) out << ',' << fmt(traj.U[t][i]);
    for (int i = 0; i < p; ++i) out << ',' << fmt(traj.Y[t][i]);
    out << ',' << fmt(margins[t]) << '\n';
  }
}

void write_plot_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  const int p = static_cast<int>(traj.Y[0].size());
  out << "t";
  for (int i = 0; i < p; ++i) out << ",y_" << i;
  out << '\n';
  for (size_t t = 0; t < traj.Y.size(); ++t) {
    out << t;
    for (int i = 0; i < p; ++i) out << ',' << fmt(traj.Y[t][i]);
    out << '\n';
  }
}

void write_regions_csv(const std::string& path, const PredicateTable& preds) {
  std::ofstream out = open_out(path);
  out << "name,kind,p0,p1,p2,p3,p4,p5\n";
  for (const auto& [name, pred] : preds) {
    std::vector<double> params;
    const char* kind = "";
    switch (pred.kind) {
      case PredicateKind::Affine:
        kind = "affine";
        for (int i = 0; i < pred.a.size(); ++i) params.push_back(pred.a[i]);
        params.push_back(pred.b);
        break;
      case PredicateKind::Ball:
        kind = "ball";
        for (int i = 0; i < pred.center.size(); ++i)
          params.push_back(pred.center[i]);
        params.push_back(pred.radius);
        break;
      case PredicateKind::Box:
        kind = "box";
        for (int i = 0; i < pred.lower.size(); ++i)
          params.push_back(pred.lower[i]);
        for (int i = 0; i < pred.upper.size(); ++i)
          params.push_back(pred.upper[i]);
        break;
    }
    out << name << ',' << kind;
    for (size_t i = 0; i < 6; ++i) {
      out << ',';
      if (i < params.size()) out << fmt(params[i]);
    }
    out << '\n';
  }
}

void write_report_json(const std::string& path, const Scenario& s,
                       const RunReport& report) {
  json j;
  j["scenario"] = report.scenario_name;
  j["run_index"] = report.run_index;
  j["spec"] = s.spec_text;
  j["horizon"] = s.horizon;
  j["verdict"] = report.satisfied ? "satisfied" : "not_certified";
  j["exact_robustness"] = report.certificate.exact_rho;
  j["margins"] = report.certificate.margins;
  std::vector<int> active(report.certificate.active.begin(),
                          report.certificate.active.end());
  j["active"] = active;
  j["first_violation"] = report.certificate.first_violation;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["retries_used"] = report.retries_used;
  j["seed"] = report.seed;
  j["k1"] = report.k1;
  j["k2"] = report.k2;
  j["control_penalty"] = s.control_penalty;
  j["wall_ms"] = report.wall_ms;
  j["cost_history"] = report.cost_history;
  j["conventions"] = {
      {"switching_time", "end of each eventually/until window"},
      {"target_weight", "max(1, t2 - t1), floored so zero-width windows keep "
                        "an incentive"},
      {"certificate", "strict negativity of every active running-cost margin"}};

  // Per-timestep term diagnostics on the final trajectory.
  const RunningCostTable table = compile(s.specification());
  SmoothParams params = s.smoothing;
  params.k1 = report.k1;
  params.k2 = report.k2;
  json diag = json::array();
  for (int t = 0; t <= table.horizon(); ++t) {
    if (table.terms[t].empty()) continue;
    json entry;
    entry["t"] = t;
    json terms = json::array();
    for (const TermDiagnostic& d :
         diagnose_timestep(table, t, report.trajectory.Y[t], params)) {
      terms.push_back({{"source", d.source},
                       {"smooth_robustness", d.smooth_robustness},
                       {"weighted_cost", d.weighted_cost}});
    }
    entry["terms"] = std::move(terms);
    diag.push_back(std::move(entry));
  }
  j["diagnostics"] = std::move(diag);

  if (report.satisfied) {
    if (!(report.certificate.exact_rho > 0.0)) {
      throw Error("internal certificate inconsistency: satisfied verdict "
                  "with nonpositive exact robustness");
    }
    for (size_t t = 0; t < report.certificate.margins.size(); ++t) {
      if (report.certificate.active[t] &&
          !(report.certificate.margins[t] < 0.0)) {
        throw Error("internal certificate inconsistency: satisfied verdict "
                    "with a nonnegative running-cost margin");
      }
    }
  }

  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// CSV readers
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

bool try_parse_double(const std::string& text, double& out) {
  const char* begin = text.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

double parse_double(const std::string& text, int row, const std::string& what) {
  double v;
  if (!try_parse_double(text, v)) {
    throw ParseError("cannot parse " + what + " value '" + text + "'", row);
  }
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::vector<VectorXd> load_controls_csv(const std::string& path,
                                        int control_dim, int horizon) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ParseError("empty trajectory file", 1);
  const std::vector<std::string> header = split_csv_line(lines.front());

  std::vector<int> cols(control_dim, -1);
  for (size_t c = 0; c < header.size(); ++c) {
    for (int j = 0; j < control_dim; ++j) {
      if (header[c] == "u_" + std::to_string(j)) cols[j] = static_cast<int>(c);
    }
  }
  for (int j = 0; j < control_dim; ++j) {
    if (cols[j] < 0) {
      throw ParseError("missing column 'u_" + std::to_string(j) + "'", 1);
    }
  }
  if (static_cast<int>(lines.size()) - 1 != horizon + 1) {
    throw LengthMismatchError("trajectory file has " +
                              std::to_string(lines.size() - 1) +
                              " samples, expected " +
                              std::to_string(horizon + 1));
  }
  std::vector<VectorXd> U(horizon + 1, VectorXd::Zero(control_dim));
  for (int t = 0; t <= horizon; ++t) {
    const int row = t + 2;  // 1-based, after the header
    const std::vector<std::string> fields = split_csv_line(lines[t + 1]);
    for (int j = 0; j < control_dim; ++j) {
      if (cols[j] >= static_cast<int>(fields.size())) {
        throw ParseError("row has too few fields", row);
      }
      U[t][j] = parse_double(fields[cols[j]], row, "control");
    }
  }
  return U;
}

Signal load_signal_csv(const std::string& path, int output_dim) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ParseError("empty signal file", 1);

  const std::vector<std::string> first = split_csv_line(lines.front());
  double probe;
  const bool headered = !try_parse_double(first.front(), probe);

  std::vector<int> cols;
  size_t start = 0;
  if (headered) {
    start = 1;
    cols.assign(output_dim, -1);
    for (size_t c = 0; c < first.size(); ++c) {
      for (int j = 0; j < output_dim; ++j) {
        if (first[c] == "y_" + std::to_string(j)) cols[j] = static_cast<int>(c);
      }
    }
    for (int j = 0; j < output_dim; ++j) {
      if (cols[j] < 0) {
        throw ParseError("header lacks column 'y_" + std::to_string(j) + "'", 1);
      }
    }
  } else {
    if (static_cast<int>(first.size()) != output_dim) {
      throw ParseError("expected " + std::to_string(output_dim) +
                       " columns, found " + std::to_string(first.size()), 1);
    }
    for (int j = 0; j < output_dim; ++j) cols.push_back(j);
  }

  std::vector<VectorXd> samples;
  for (size_t r = start; r < lines.size(); ++r) {
    const int row = static_cast<int>(r) + 1;
    const std::vector<std::string> fields = split_csv_line(lines[r]);
    VectorXd y(output_dim);
    for (int j = 0; j < output_dim; ++j) {
      if (cols[j] >= static_cast<int>(fields.size())) {
        throw ParseError("row has too few fields", row);
      }
      y[j] = parse_double(fields[cols[j]], row, "signal");
    }
    samples.push_back(std::move(y));
  }
  if (samples.empty()) throw ParseError("signal file has no data rows", 1);
  return Signal(std::move(samples));
}

// ---------------------------------------------------------------------------
// Monitoring
// ---------------------------------------------------------------------------

SpecBundle load_spec_bundle(const std::string& path) {
  const json root = parse_file(path);
  SpecBundle bundle;
  std::optional<PlanarArmParams> arm;
  if (root.contains("model")) {
    try {
      parse_model(root.at("model"), arm);
    } catch (const ConfigError&) {
      arm.reset();  // model block is optional context for monitoring
    }
  }
  bundle.predicates = parse_predicates(root, arm);
  bundle.spec_text = as_string(need(root, "spec", "spec file"), "spec");
  bundle.horizon = as_int(need(root, "horizon", "spec file"), "horizon");
  bundle.smoothing.k1 = opt_number(root, "k1", 10.0, "spec file");
  bundle.smoothing.k2 = opt_number(root, "k2", 10.0, "spec file");
  bundle.smoothing.validate();
  bundle.specification();
  return bundle;
}

MonitorResult monitor_signal(const SpecBundle& bundle, const Signal& signal) {
  const Specification spec = bundle.specification();
  if (signal.length() != spec.horizon + 1) {
    throw LengthMismatchError("signal has " + std::to_string(signal.length()) +
                              " samples, specification horizon needs " +
                              std::to_string(spec.horizon + 1));
  }
  const RunningCostTable table = compile(spec);
  const SoundnessReport rep = check_soundness(table, signal, bundle.smoothing);

  MonitorResult out;
  out.exact_rho = rep.exact_rho;
  out.margins = rep.margins;
  out.active.assign(rep.active.begin(), rep.active.end());
  out.verdict = rep.exact_rho > 0.0   ? "satisfied"
                : rep.exact_rho < 0.0 ? "violated"
                                      : "undefined";
  return out;
}

// ---------------------------------------------------------------------------
// Benchmark suite
// ---------------------------------------------------------------------------

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Finite-horizon LQR solved by the textbook backward recursion, with the
// same cost convention the solver uses (a stage cost at every t in 0..T and
// zero value beyond the horizon). Kept local so suite results are checked
// against arithmetic the solver never touches.
double riccati_reference_cost(const MatrixXd& A, const MatrixXd& B,
                              const MatrixXd& Q, const MatrixXd& R,
                              const VectorXd& x0, int T) {
  const int n = static_cast<int>(A.rows());
  std::vector<MatrixXd> K(T + 1);
  MatrixXd V = MatrixXd::Zero(n, n);
  for (int t = T; t >= 0; --t) {
    const MatrixXd Quu = R + B.transpose() * V * B;
    const MatrixXd Qux = B.transpose() * V * A;
    const MatrixXd Qxx = Q + A.transpose() * V * A;
    K[t] = -Quu.ldlt().solve(Qux);
    V = Qxx + K[t].transpose() * Quu * K[t] + K[t].transpose() * Qux +
        Qux.transpose() * K[t];
    V = 0.5 * (V + V.transpose());
  }
  double cost = 0.0;
  VectorXd x = x0;
  for (int t = 0; t <= T; ++t) {
    const VectorXd u = K[t] * x;
    cost += 0.5 * x.dot(Q * x) + 0.5 * u.dot(R * u);
    if (t < T) x = A * x + B * u;
  }
  return cost;
}

struct CellStats {
  std::vector<double> ms;
  std::vector<double> iters;
  int successes = 0;
  int runs = 0;
};

}  // namespace

std::vector<BenchRow> run_benchmark_suite(
    const std::vector<std::string>& scenario_paths, const std::string& out_dir,
    int seeds, int baseline_iteration_cap) {
  std::vector<BenchRow> rows;

  for (const std::string& path : scenario_paths) {
    const Scenario s = load_scenario(path);
    const Specification spec = s.specification();
    const RunningCostTable table = compile(spec);
    const bool random_init = s.init.kind == InitPolicy::Kind::RandomUniform;

    for (const std::string method : {"ddp", "first_order"}) {
      CellStats stats;
      SolverConfig config = s.solver;
      if (method == std::string("first_order")) {
        config.max_iterations =
            std::min(config.max_iterations, baseline_iteration_cap);
      }

      auto run_one = [&](const VectorXd& x0, std::uint64_t seed) {
        ++stats.runs;
        try {
          InitPolicy p = s.init;
          p.seed = seed;
          const std::vector<VectorXd> U0 = make_initial_controls(s, x0, p);
          const auto t0 = std::chrono::steady_clock::now();
          const SolveResult r =
              method == std::string("ddp")
                  ? solve(*s.model, table, x0, U0, config, s.smoothing,
                          s.control_penalty)
                  : first_order_baseline(*s.model, table, x0, U0, config,
                                         s.smoothing, s.control_penalty);
          const double ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
          stats.ms.push_back(ms);
          stats.iters.push_back(static_cast<double>(r.iterations));
          if (r.certificate->verdict == Verdict::Satisfied) ++stats.successes;
        } catch (const Error&) {
          // failure recorded by the run count; the suite keeps going
        }
      };

      if (random_init) {
        for (int seed = 0; seed < seeds; ++seed) run_one(s.x0s.front(), seed);
      } else {
        for (const VectorXd& x0 : s.x0s) run_one(x0, s.init.seed);
      }

      BenchRow row;
      row.scenario = s.name;
      row.method = method;
      row.runs = stats.runs;
      row.successes = stats.successes;
      row.median_ms = median(stats.ms);
      row.median_iterations = median(stats.iters);
      rows.push_back(std::move(row));
    }
  }

  // Linear-quadratic validation row: both optimizers against the Riccati
  // recursion on a small double-integrator instance.
  {
    const double dt = 0.1;
    MatrixXd A(2, 2), B(2, 1), Q(2, 2), R(1, 1);
    A << 1.0, dt, 0.0, 1.0;
    B << 0.5 * dt * dt, dt;
    Q = MatrixXd::Identity(2, 2);
    R = MatrixXd::Identity(1, 1);
    const int T = 10;
    VectorXd x0(2);
    x0 << 1.0, 0.5;
    const double ref = riccati_reference_cost(A, B, Q, R, x0, T);

    const auto sys = linear_system(A, B, dt);
    const QuadraticStageCost cost(Q, R, T);
    const std::vector<VectorXd> U0(T + 1, VectorXd::Zero(1));

    for (const std::string method : {"ddp", "first_order"}) {
      SolverConfig config;
      config.cost_tolerance = 1e-12;
      if (method == std::string("first_order")) config.max_iterations = 5000;

      const auto t0 = std::chrono::steady_clock::now();
      const SolveResult r = method == std::string("ddp")
                                ? optimize(*sys, cost, x0, U0, config)
                                : optimize_first_order(*sys, cost, x0, U0, config);
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();

      BenchRow row;
      row.scenario = "lqr_validation";
      row.method = method;
      row.runs = 1;
      row.median_ms = ms;
      row.median_iterations = static_cast<double>(r.iterations);
      row.reference_gap =
          std::abs(r.trajectory.cost - ref) / std::max(1e-12, std::abs(ref));
      row.successes = row.reference_gap <= 1e-4 ? 1 : 0;
      rows.push_back(std::move(row));
    }
  }

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out = open_out(
        (std::filesystem::path(out_dir) / "summary.csv").string());
    out << "scenario,method,runs,successes,median_ms,median_iterations,"
           "reference_gap\n";
    for (const BenchRow& row : rows) {
      out << row.scenario << ',' << row.method << ',' << row.runs << ','
          << row.successes << ',' << fmt(row.median_ms) << ','
          << fmt(row.median_iterations) << ',';
      if (std::isfinite(row.reference_gap)) out << fmt(row.reference_gap);
      out << '\n';
    }
  }
  {
    json j = json::array();
    for (const BenchRow& row : rows) {
      json r;
      r["scenario"] = row.scenario;
      r["method"] = row.method;
      r["runs"] = row.runs;
      r["successes"] = row.successes;
      r["median_ms"] = row.median_ms;
      r["median_iterations"] = row.median_iterations;
      if (std::isfinite(row.reference_gap)) r["reference_gap"] = row.reference_gap;
      j.push_back(std::move(r));
    }
    std::ofstream out = open_out(
        (std::filesystem::path(out_dir) / "summary.json").string());
    out << j.dump(2) << '\n';
  }
  return rows;
}

}  // namespace stlddp
