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

#include "stlddp/stage_cost.hpp"

namespace stlddp {

TableStageCost::TableStageCost(RunningCostTable table, SmoothParams params,
                               double control_penalty)
    : table_(std::move(table)),
      params_(params),
      control_penalty_(control_penalty) {
  params_.validate();
  if (control_penalty < 0.0) {
    throw Error("control penalty must be nonnegative");
  }
}

double TableStageCost::value(int t, const VectorXd&, const VectorXd& u,
                             const VectorXd& y) const {
  double v = eval_running_cost(table_, t, y, params_).value;
  if (control_penalty_ > 0.0) v += 0.5 * control_penalty_ * u.squaredNorm();
  return v;
}

CostExpansion TableStageCost::expansion(int t, const VectorXd& x,
                                        const VectorXd& u, const VectorXd& y,
                                        const MatrixXd& gx,
                                        const MatrixXd& gu) const {
  const SmoothValue c = eval_running_cost(table_, t, y, params_);
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(u.size());

  CostExpansion e;
  e.value = c.value;
  e.lx = gx.transpose() * c.grad;
  e.lu = gu.transpose() * c.grad;
  e.lxx = gx.transpose() * c.hess * gx;
  e.luu = gu.transpose() * c.hess * gu;
  e.lux = gu.transpose() * c.hess * gx;
  if (e.lxx.rows() != n || e.luu.rows() != m) {
    throw DimensionMismatchError("output-map Jacobians disagree with (x, u)");
  }
  if (control_penalty_ > 0.0) {
    e.value += 0.5 * control_penalty_ * u.squaredNorm();
    e.lu += control_penalty_ * u;
    e.luu += control_penalty_ * MatrixXd::Identity(m, m);
  }
  return e;
}

QuadraticStageCost::QuadraticStageCost(MatrixXd Q, MatrixXd R, int horizon,
                                       VectorXd x_ref)
    : Q_(std::move(Q)), R_(std::move(R)), horizon_(horizon),
      x_ref_(std::move(x_ref)) {
  if (Q_.rows() != Q_.cols() || R_.rows() != R_.cols()) {
    throw DimensionMismatchError("quadratic cost weights must be square");
  }
  if (horizon_ < 0) throw Error("quadratic cost horizon must be >= 0");
  if (x_ref_.size() == 0) x_ref_ = VectorXd::Zero(Q_.rows());
  if (x_ref_.size() != Q_.rows()) {
    throw DimensionMismatchError("x_ref length must match Q");
  }
}

double QuadraticStageCost::value(int, const VectorXd& x, const VectorXd& u,
                                 const VectorXd&) const {
  const VectorXd dx = x - x_ref_;
  return 0.5 * dx.dot(Q_ * dx) + 0.5 * u.dot(R_ * u);
}

CostExpansion QuadraticStageCost::expansion(int, const VectorXd& x,
                                            const VectorXd& u,
                                            const VectorXd&, const MatrixXd&,
                                            const MatrixXd&) const {
  const VectorXd dx = x - x_ref_;
  CostExpansion e;
  e.value = 0.5 * dx.dot(Q_ * dx) + 0.5 * u.dot(R_ * u);
  e.lx = Q_ * dx;
  e.lu = R_ * u;
  e.lxx = Q_;
  e.luu = R_;
  e.lux = MatrixXd::Zero(R_.rows(), Q_.rows());
  return e;
}

}  // namespace stlddp
