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

#include "stlddp/derivatives.hpp"

#include <exception>

namespace stlddp {

namespace {

void check_lengths(const StageCost& cost, const std::vector<VectorXd>& X,
                   const std::vector<VectorXd>& U) {
  const size_t len = static_cast<size_t>(cost.horizon()) + 1;
  if (X.size() != len || U.size() != len) {
    throw LengthMismatchError("derivative stage expects " +
                              std::to_string(len) + " states and controls");
  }
}

void one_step(const DynamicsModel& model, const StageCost& cost,
              const VectorXd& x, const VectorXd& u, int t,
              const DerivativeOptions& options, StageDerivatives& slot) {
  MatrixXd gx, gu;
  if (options.prefer_analytic && model.has_analytic_jacobians()) {
    model.jacobians(x, u, slot.fx, slot.fu, gx, gu);
  } else {
    ModelJacobians J = fd_jacobians(model, x, u, options.fd_step);
    slot.fx = std::move(J.fx);
    slot.fu = std::move(J.fu);
    gx = std::move(J.gx);
    gu = std::move(J.gu);
  }
  slot.cost = cost.expansion(t, x, u, model.output(x, u), gx, gu);
}

}  // namespace

void stage_derivatives_serial(const DynamicsModel& model,
                              const StageCost& cost,
                              const std::vector<VectorXd>& X,
                              const std::vector<VectorXd>& U,
                              const DerivativeOptions& options,
                              std::vector<StageDerivatives>& out) {
  check_lengths(cost, X, U);
  const int T = cost.horizon();
  out.resize(T + 1);
  for (int t = 0; t <= T; ++t) {
    one_step(model, cost, X[t], U[t], t, options, out[t]);
  }
}

void stage_derivatives_openmp(const DynamicsModel& model,
                              const StageCost& cost,
                              const std::vector<VectorXd>& X,
                              const std::vector<VectorXd>& U,
                              const DerivativeOptions& options,
                              std::vector<StageDerivatives>& out) {
  check_lengths(cost, X, U);
  const int T = cost.horizon();
  out.resize(T + 1);
  // Exceptions must not unwind out of the parallel region; park the first
  // one and rethrow after the join.
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
  for (int t = 0; t <= T; ++t) {
    try {
      one_step(model, cost, X[t], U[t], t, options, out[t]);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

void compute_stage_derivatives(const DynamicsModel& model,
                               const StageCost& cost,
                               const std::vector<VectorXd>& X,
                               const std::vector<VectorXd>& U,
                               const DerivativeOptions& options,
                               Parallelism backend,
                               std::vector<StageDerivatives>& out) {
  switch (backend) {
    case Parallelism::Serial:
      stage_derivatives_serial(model, cost, X, U, options, out);
      return;
    case Parallelism::OpenMp:
      stage_derivatives_openmp(model, cost, X, U, options, out);
      return;
  }
  throw Error("unknown derivative backend");
}

}  // namespace stlddp
