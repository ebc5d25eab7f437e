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

#include <vector>

#include "stlddp/stage_cost.hpp"

namespace stlddp {

// Everything the backward pass needs about one timestep: linearized
// dynamics and the quadratic cost expansion.
struct StageDerivatives {
  MatrixXd fx, fu;
  CostExpansion cost;
};

struct DerivativeOptions {
  bool prefer_analytic = true;  // use model Jacobians when it has them
  double fd_step = 1e-5;
};

enum class Parallelism { Serial, OpenMp };

// Fills out[t] for t = 0..T from the trajectory (X, U). Timesteps are
// independent, each writes only its own preassigned slot, and no reduction
// is involved, so the parallel backend produces bitwise-identical results
// to the serial one. This stage dominates solve time for models with
// finite-differenced Jacobians.
void stage_derivatives_serial(const DynamicsModel& model,
                              const StageCost& cost,
                              const std::vector<VectorXd>& X,
                              const std::vector<VectorXd>& U,
                              const DerivativeOptions& options,
                              std::vector<StageDerivatives>& out);

void stage_derivatives_openmp(const DynamicsModel& model,
                              const StageCost& cost,
                              const std::vector<VectorXd>& X,
                              const std::vector<VectorXd>& U,
                              const DerivativeOptions& options,
                              std::vector<StageDerivatives>& out);

void compute_stage_derivatives(const DynamicsModel& model,
                               const StageCost& cost,
                               const std::vector<VectorXd>& X,
                               const std::vector<VectorXd>& U,
                               const DerivativeOptions& options,
                               Parallelism backend,
                               std::vector<StageDerivatives>& out);

}  // namespace stlddp
