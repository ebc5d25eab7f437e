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

#include "stlddp/costgen.hpp"
#include "stlddp/dynamics.hpp"

namespace stlddp {

// Quadratic model of one stage cost around a point, in the state/control
// variables the solver optimizes.
struct CostExpansion {
  double value = 0.0;
  VectorXd lx, lu;
  MatrixXd lxx, luu, lux;
};

// Per-timestep cost l_t(x, u). The output sample y = g(x, u) and the output
// map's Jacobians are supplied by the caller, which already has them from
// the rollout and the dynamics derivative stage; costs that do not look at
// the output simply ignore those arguments.
class StageCost {
 public:
  virtual ~StageCost() = default;

  virtual int horizon() const = 0;  // valid timesteps are 0..horizon()

  virtual double value(int t, const VectorXd& x, const VectorXd& u,
                       const VectorXd& y) const = 0;

  virtual CostExpansion expansion(int t, const VectorXd& x, const VectorXd& u,
                                  const VectorXd& y, const MatrixXd& gx,
                                  const MatrixXd& gu) const = 0;
};

// Running cost compiled from a specification, pulled back to (x, u) through
// the output map by the chain rule; second derivatives of the output map
// are dropped (Gauss-Newton). An optional quadratic control penalty
// regularizes models whose table cost alone is unbounded below; it never
// enters the certificate, which reads margins straight from the table.
class TableStageCost final : public StageCost {
 public:
  TableStageCost(RunningCostTable table, SmoothParams params,
                 double control_penalty = 0.0);

  int horizon() const override { return table_.horizon(); }
  double value(int t, const VectorXd& x, const VectorXd& u,
               const VectorXd& y) const override;
  CostExpansion expansion(int t, const VectorXd& x, const VectorXd& u,
                          const VectorXd& y, const MatrixXd& gx,
                          const MatrixXd& gu) const override;

  const RunningCostTable& table() const { return table_; }
  const SmoothParams& params() const { return params_; }

 private:
  RunningCostTable table_;
  SmoothParams params_;
  double control_penalty_;
};

// l_t = 1/2 (x - x_ref)' Q (x - x_ref) + 1/2 u' R u at every step.
class QuadraticStageCost final : public StageCost {
 public:
  QuadraticStageCost(MatrixXd Q, MatrixXd R, int horizon,
                     VectorXd x_ref = VectorXd());

  int horizon() const override { return horizon_; }
  double value(int t, const VectorXd& x, const VectorXd& u,
               const VectorXd& y) const override;
  CostExpansion expansion(int t, const VectorXd& x, const VectorXd& u,
                          const VectorXd& y, const MatrixXd& gx,
                          const MatrixXd& gu) const override;

 private:
  MatrixXd Q_, R_;
  int horizon_;
  VectorXd x_ref_;
};

}  // namespace stlddp
