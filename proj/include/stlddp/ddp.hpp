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

#include <optional>
#include <vector>

#include "stlddp/derivatives.hpp"

namespace stlddp {

struct SolverConfig {
  int max_iterations = 100;
  // Stop once the predicted full-step improvement drops below this.
  double cost_tolerance = 1e-6;
  // Tried largest first; a candidate is kept when the realized improvement
  // is at least min_accept_ratio times the predicted one.
  std::vector<double> line_search_alphas = default_alphas();
  double min_accept_ratio = 0.01;
  // Levenberg-Marquardt damping on Q_uu: up on failure, down on success.
  double reg_init = 1e-6;
  double reg_min = 1e-9;
  double reg_max = 1e10;
  double reg_scale = 10.0;

  enum class DerivativeMode { FiniteDifference, AnalyticIfAvailable };
  DerivativeMode derivative_mode = DerivativeMode::AnalyticIfAvailable;
  double fd_step = 1e-5;
  Parallelism parallelism = Parallelism::OpenMp;

  static std::vector<double> default_alphas();  // 1, 1/2, ..., 2^-10
  void validate() const;
  DerivativeOptions derivative_options() const {
    return {derivative_mode == DerivativeMode::AnalyticIfAvailable, fd_step};
  }
};

// States x_0..x_T, controls u_0..u_T, outputs y_0..y_T. The trailing
// control exists because y_T = g(x_T, u_T) feeds the final running cost.
struct Trajectory {
  std::vector<VectorXd> X, U, Y;
  double cost = 0.0;

  int horizon() const { return static_cast<int>(U.size()) - 1; }
  Signal output_signal(double dt) const { return Signal(Y, dt); }
};

struct BackwardPassResult {
  std::vector<MatrixXd> K;  // m x n feedback
  std::vector<VectorXd> k;  // feedforward
  // Predicted cost change of a step of size alpha is
  // alpha * dV1 + alpha^2 * dV2 (dV1 <= 0 when the pass succeeds).
  double dV1 = 0.0;
  double dV2 = 0.0;
  bool ok = false;
  int failed_step = -1;  // where Q_uu + reg I lost positive definiteness

  double expected_improvement(double alpha) const {
    return -(alpha * dV1 + alpha * alpha * dV2);
  }
};

struct SolveResult {
  Trajectory trajectory;
  std::vector<MatrixXd> K;
  std::vector<VectorXd> k;
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_history;  // initial cost plus accepted iterations
  std::optional<SoundnessReport> certificate;
};

// Simulates x' = f(x, u) from x0 under U and accumulates the stage cost.
// U fixes the horizon: it must hold cost.horizon() + 1 controls.
Trajectory rollout(const DynamicsModel& model, const StageCost& cost,
                   const VectorXd& x0, const std::vector<VectorXd>& U);

// One regularized Riccati sweep over precomputed derivatives (Gauss-Newton:
// dynamics curvature is not used). On failure, ok is false and failed_step
// names the offending timestep; the caller raises reg and retries.
BackwardPassResult backward_pass(const std::vector<StageDerivatives>& derivs,
                                 double reg);

// Iterated linear-quadratic optimization of an arbitrary stage cost:
// derivatives, backward pass with regularization retries, then a
// backtracking forward line search. Returns the best trajectory found.
SolveResult optimize(const DynamicsModel& model, const StageCost& cost,
                     const VectorXd& x0, const std::vector<VectorXd>& U_init,
                     const SolverConfig& config);

// Specification-driven entry point: compiles nothing itself, takes the
// ready cost table, optimizes, then attaches the soundness certificate for
// the resulting output trajectory.
SolveResult solve(const DynamicsModel& model, const RunningCostTable& table,
                  const VectorXd& x0, const std::vector<VectorXd>& U_init,
                  const SolverConfig& config, const SmoothParams& params,
                  double control_penalty = 0.0);

// Plain gradient descent on the same total cost with Armijo backtracking,
// gradients by finite differences through the rollout. Exists to give
// timing comparisons a first-order reference point, not to be good.
SolveResult optimize_first_order(const DynamicsModel& model,
                                 const StageCost& cost, const VectorXd& x0,
                                 const std::vector<VectorXd>& U_init,
                                 const SolverConfig& config);

SolveResult first_order_baseline(const DynamicsModel& model,
                                 const RunningCostTable& table,
                                 const VectorXd& x0,
                                 const std::vector<VectorXd>& U_init,
                                 const SolverConfig& config,
                                 const SmoothParams& params,
                                 double control_penalty = 0.0);

}  // namespace stlddp
