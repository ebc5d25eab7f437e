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

#include "stlddp/ddp.hpp"

#include <algorithm>
#include <cmath>

namespace stlddp {

std::vector<double> SolverConfig::default_alphas() {
  std::vector<double> alphas;
  double a = 1.0;
  for (int i = 0; i <= 10; ++i) {
    alphas.push_back(a);
    a *= 0.5;
  }
  return alphas;
}

void SolverConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(cost_tolerance > 0.0)) throw ConfigError("cost_tolerance must be > 0");
  if (line_search_alphas.empty() || line_search_alphas.front() != 1.0) {
    throw ConfigError("line_search_alphas must start at 1");
  }
  for (size_t i = 0; i < line_search_alphas.size(); ++i) {
    const double a = line_search_alphas[i];
    if (!(a > 0.0 && a <= 1.0)) {
      throw ConfigError("line-search step sizes must lie in (0, 1]");
    }
    if (i > 0 && !(a < line_search_alphas[i - 1])) {
      throw ConfigError("line_search_alphas must be strictly decreasing");
    }
  }
  if (!(min_accept_ratio > 0.0 && min_accept_ratio < 1.0)) {
    throw ConfigError("min_accept_ratio must lie in (0, 1)");
  }
  if (!(reg_min > 0.0) || reg_min > reg_init || reg_init > reg_max) {
    throw ConfigError("regularization must satisfy 0 < reg_min <= reg_init <= reg_max");
  }
  if (!(reg_scale > 1.0)) throw ConfigError("reg_scale must exceed 1");
  if (!(fd_step > 0.0)) throw ConfigError("fd_step must be > 0");
}

Trajectory rollout(const DynamicsModel& model, const StageCost& cost,
                   const VectorXd& x0, const std::vector<VectorXd>& U) {
  const int T = cost.horizon();
  if (static_cast<int>(U.size()) != T + 1) {
    throw LengthMismatchError("rollout expects " + std::to_string(T + 1) +
                              " controls, got " + std::to_string(U.size()));
  }
  if (x0.size() != model.state_dim()) {
    throw DimensionMismatchError("initial state has length " +
                                 std::to_string(x0.size()) + ", model wants " +
                                 std::to_string(model.state_dim()));
  }

  Trajectory traj;
  traj.X.resize(T + 1);
  traj.U = U;
  traj.Y.resize(T + 1);
  traj.X[0] = x0;
  double total = 0.0;
  for (int t = 0; t <= T; ++t) {
    if (!traj.X[t].allFinite()) {
      throw NonFiniteStateError("state is not finite", t);
    }
    traj.Y[t] = model.output(traj.X[t], U[t]);
    const double l = cost.value(t, traj.X[t], U[t], traj.Y[t]);
    if (!std::isfinite(l)) {
      throw NonFiniteStateError("running cost is not finite", t);
    }
    total += l;
    if (t < T) traj.X[t + 1] = model.step(traj.X[t], U[t]);
  }
  traj.cost = total;
  return traj;
}

BackwardPassResult backward_pass(const std::vector<StageDerivatives>& derivs,
                                 double reg) {
  if (derivs.empty()) {
    throw EmptyArgumentError("backward pass over an empty horizon");
  }
  const int T = static_cast<int>(derivs.size()) - 1;
  const int n = static_cast<int>(derivs[0].cost.lx.size());
  const int m = static_cast<int>(derivs[0].cost.lu.size());

  BackwardPassResult bp;
  bp.K.resize(T + 1);
  bp.k.resize(T + 1);

  VectorXd Vx = VectorXd::Zero(n);
  MatrixXd Vxx = MatrixXd::Zero(n, n);
  const MatrixXd reg_eye = reg * MatrixXd::Identity(m, m);

  for (int t = T; t >= 0; --t) {
    const StageDerivatives& d = derivs[t];
    const VectorXd Qx = d.cost.lx + d.fx.transpose() * Vx;
    const VectorXd Qu = d.cost.lu + d.fu.transpose() * Vx;
    const MatrixXd Qxx = d.cost.lxx + d.fx.transpose() * Vxx * d.fx;
    const MatrixXd Quu = d.cost.luu + d.fu.transpose() * Vxx * d.fu + reg_eye;
    const MatrixXd Qux = d.cost.lux + d.fu.transpose() * Vxx * d.fx;

    Eigen::LLT<MatrixXd> llt(Quu);
    if (llt.info() != Eigen::Success) {
      bp.ok = false;
      bp.failed_step = t;
      return bp;
    }
    bp.K[t] = -llt.solve(Qux);
    bp.k[t] = -llt.solve(Qu);
    bp.dV1 += bp.k[t].dot(Qu);
    bp.dV2 += 0.5 * bp.k[t].dot(Quu * bp.k[t]);

    Vx = Qx + bp.K[t].transpose() * (Quu * bp.k[t]) +
         bp.K[t].transpose() * Qu + Qux.transpose() * bp.k[t];
    Vxx = Qxx + bp.K[t].transpose() * Quu * bp.K[t] +
          bp.K[t].transpose() * Qux + Qux.transpose() * bp.K[t];
    Vxx = (0.5 * (Vxx + Vxx.transpose())).eval();
  }
  bp.ok = true;
  return bp;
}

namespace {

// Closed-loop rollout along the gains with step size alpha.
Trajectory forward_pass(const DynamicsModel& model, const StageCost& cost,
                        const Trajectory& nominal, const BackwardPassResult& bp,
                        double alpha) {
  const int T = nominal.horizon();
  Trajectory traj;
  traj.X.resize(T + 1);
  traj.U.resize(T + 1);
  traj.Y.resize(T + 1);
  traj.X[0] = nominal.X[0];
  double total = 0.0;
  for (int t = 0; t <= T; ++t) {
    traj.U[t] =
        nominal.U[t] + alpha * bp.k[t] + bp.K[t] * (traj.X[t] - nominal.X[t]);
    if (!traj.U[t].allFinite()) {
      throw NonFiniteStateError("control is not finite", t);
    }
    traj.Y[t] = model.output(traj.X[t], traj.U[t]);
    const double l = cost.value(t, traj.X[t], traj.U[t], traj.Y[t]);
    if (!std::isfinite(l)) {
      throw NonFiniteStateError("running cost is not finite", t);
    }
    total += l;
    if (t < T) {
      traj.X[t + 1] = model.step(traj.X[t], traj.U[t]);
      if (!traj.X[t + 1].allFinite()) {
        throw NonFiniteStateError("state is not finite", t + 1);
      }
    }
  }
  traj.cost = total;
  return traj;
}

}  // namespace

SolveResult optimize(const DynamicsModel& model, const StageCost& cost,
                     const VectorXd& x0, const std::vector<VectorXd>& U_init,
                     const SolverConfig& config) {
  config.validate();
  const DerivativeOptions dopts = config.derivative_options();

  SolveResult res;
  res.trajectory = rollout(model, cost, x0, U_init);
  res.cost_history.push_back(res.trajectory.cost);

  double reg = config.reg_init;
  std::vector<StageDerivatives> derivs;

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    res.iterations = iter;
    compute_stage_derivatives(model, cost, res.trajectory.X, res.trajectory.U,
                              dopts, config.parallelism, derivs);

    BackwardPassResult bp;
    for (;;) {
      bp = backward_pass(derivs, reg);
      if (bp.ok) break;
      if (reg >= config.reg_max) return res;  // cannot make Q_uu definite
      reg = std::min(reg * config.reg_scale, config.reg_max);
    }
    res.K = bp.K;
    res.k = bp.k;

    if (bp.expected_improvement(1.0) < config.cost_tolerance) {
      res.converged = true;
      return res;
    }

    bool accepted = false;
    for (double alpha : config.line_search_alphas) {
      const double expected = bp.expected_improvement(alpha);
      if (!(expected > 0.0)) continue;
      Trajectory candidate;
      try {
        candidate = forward_pass(model, cost, res.trajectory, bp, alpha);
      } catch (const NonFiniteStateError&) {
        continue;  // blow-up at this step size; try a shorter one
      }
      if (res.trajectory.cost - candidate.cost >=
          config.min_accept_ratio * expected) {
        res.trajectory = std::move(candidate);
        res.cost_history.push_back(res.trajectory.cost);
        accepted = true;
        break;
      }
    }

    if (accepted) {
      reg = std::max(reg / config.reg_scale, config.reg_min);
    } else {
      if (reg >= config.reg_max) return res;  // line search exhausted
      reg = std::min(reg * config.reg_scale, config.reg_max);
    }
  }
  return res;
}

SolveResult solve(const DynamicsModel& model, const RunningCostTable& table,
                  const VectorXd& x0, const std::vector<VectorXd>& U_init,
                  const SolverConfig& config, const SmoothParams& params,
                  double control_penalty) {
  if (model.output_dim() != table.spec.output_dim()) {
    throw DimensionMismatchError(
        "specification predicates expect output dimension " +
        std::to_string(table.spec.output_dim()) + ", model produces " +
        std::to_string(model.output_dim()));
  }
  TableStageCost cost(table, params, control_penalty);
  SolveResult res = optimize(model, cost, x0, U_init, config);
  res.certificate =
      check_soundness(table, res.trajectory.output_signal(model.dt()), params);
  return res;
}

namespace {

// d(total cost)/dU by central differences, one rollout per perturbation.
std::vector<VectorXd> rollout_cost_gradient(const DynamicsModel& model,
                                            const StageCost& cost,
                                            const VectorXd& x0,
                                            std::vector<VectorXd> U,
                                            double h) {
  std::vector<VectorXd> grad(U.size());
  for (size_t t = 0; t < U.size(); ++t) {
    grad[t] = VectorXd::Zero(U[t].size());
    for (int j = 0; j < U[t].size(); ++j) {
      const double saved = U[t][j];
      U[t][j] = saved + h;
      const double up = rollout(model, cost, x0, U).cost;
      U[t][j] = saved - h;
      const double down = rollout(model, cost, x0, U).cost;
      U[t][j] = saved;
      grad[t][j] = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

}  // namespace

SolveResult optimize_first_order(const DynamicsModel& model,
                                 const StageCost& cost, const VectorXd& x0,
                                 const std::vector<VectorXd>& U_init,
                                 const SolverConfig& config) {
  config.validate();
  constexpr double kGradStep = 1e-6;
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxBacktracks = 40;

  SolveResult res;
  res.trajectory = rollout(model, cost, x0, U_init);
  res.cost_history.push_back(res.trajectory.cost);

  double alpha_init = 1.0;
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    res.iterations = iter;
    const std::vector<VectorXd> grad = rollout_cost_gradient(
        model, cost, x0, res.trajectory.U, kGradStep);
    double grad_sq = 0.0;
    for (const auto& g : grad) grad_sq += g.squaredNorm();

    bool accepted = false;
    double alpha = alpha_init;
    Trajectory candidate;
    for (int trial = 0; trial < kMaxBacktracks; ++trial) {
      std::vector<VectorXd> U = res.trajectory.U;
      for (size_t t = 0; t < U.size(); ++t) U[t] -= alpha * grad[t];
      try {
        candidate = rollout(model, cost, x0, U);
      } catch (const NonFiniteStateError&) {
        alpha *= 0.5;
        continue;
      }
      if (candidate.cost <= res.trajectory.cost - kArmijo * alpha * grad_sq) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) return res;  // no descent step found

    const double decrease = res.trajectory.cost - candidate.cost;
    res.trajectory = std::move(candidate);
    res.cost_history.push_back(res.trajectory.cost);
    alpha_init = std::min(1.0, 2.0 * alpha);
    if (decrease < config.cost_tolerance) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

SolveResult first_order_baseline(const DynamicsModel& model,
                                 const RunningCostTable& table,
                                 const VectorXd& x0,
                                 const std::vector<VectorXd>& U_init,
                                 const SolverConfig& config,
                                 const SmoothParams& params,
                                 double control_penalty) {
  if (model.output_dim() != table.spec.output_dim()) {
    throw DimensionMismatchError(
        "specification predicates expect output dimension " +
        std::to_string(table.spec.output_dim()) + ", model produces " +
        std::to_string(model.output_dim()));
  }
  TableStageCost cost(table, params, control_penalty);
  SolveResult res = optimize_first_order(model, cost, x0, U_init, config);
  res.certificate =
      check_soundness(table, res.trajectory.output_signal(model.dt()), params);
  return res;
}

}  // namespace stlddp
