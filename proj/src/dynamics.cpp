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

#include "stlddp/dynamics.hpp"

namespace stlddp {

void DynamicsModel::check_dims(const VectorXd& x, const VectorXd& u) const {
  if (x.size() != state_dim() || u.size() != control_dim()) {
    throw DimensionMismatchError(
        name() + " expects state " + std::to_string(state_dim()) +
        " / control " + std::to_string(control_dim()) + ", got " +
        std::to_string(x.size()) + " / " + std::to_string(u.size()));
  }
}

void DynamicsModel::jacobians(const VectorXd&, const VectorXd&, MatrixXd&,
                              MatrixXd&, MatrixXd&, MatrixXd&) const {
  throw Error(name() + " provides no analytic Jacobians");
}

ModelJacobians fd_jacobians(const DynamicsModel& model, const VectorXd& x,
                            const VectorXd& u, double h) {
  if (!(h > 0.0)) throw Error("finite-difference step must be positive");
  const int n = model.state_dim();
  const int m = model.control_dim();
  const int p = model.output_dim();

  ModelJacobians J{MatrixXd(n, n), MatrixXd(n, m), MatrixXd(p, n),
                   MatrixXd(p, m)};

  VectorXd xp = x, xm = x, up = u, um = u;
  for (int j = 0; j < n; ++j) {
    xp[j] += h;
    xm[j] -= h;
    J.fx.col(j) = (model.step(xp, u) - model.step(xm, u)) / (2.0 * h);
    J.gx.col(j) = (model.output(xp, u) - model.output(xm, u)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  for (int j = 0; j < m; ++j) {
    up[j] += h;
    um[j] -= h;
    J.fu.col(j) = (model.step(x, up) - model.step(x, um)) / (2.0 * h);
    J.gu.col(j) = (model.output(x, up) - model.output(x, um)) / (2.0 * h);
    up[j] = u[j];
    um[j] = u[j];
  }
  if (!J.fx.allFinite() || !J.fu.allFinite() || !J.gx.allFinite() ||
      !J.gu.allFinite()) {
    throw NonFiniteStateError("finite-difference Jacobian is not finite", -1);
  }
  return J;
}

// ---------------------------------------------------------------------------
// SingleIntegrator
// ---------------------------------------------------------------------------

SingleIntegrator::SingleIntegrator(double dt, int dim) : dt_(dt), dim_(dim) {
  if (!(dt > 0.0)) throw Error("single_integrator requires dt > 0");
  if (dim < 1) throw Error("single_integrator requires dim >= 1");
}

VectorXd SingleIntegrator::step(const VectorXd& x, const VectorXd& u) const {
  check_dims(x, u);
  return x + dt_ * u;
}

VectorXd SingleIntegrator::output(const VectorXd& x, const VectorXd& u) const {
  check_dims(x, u);
  return x;
}

void SingleIntegrator::jacobians(const VectorXd& x, const VectorXd& u,
                                 MatrixXd& fx, MatrixXd& fu, MatrixXd& gx,
                                 MatrixXd& gu) const {
  check_dims(x, u);
  fx = MatrixXd::Identity(dim_, dim_);
  fu = dt_ * MatrixXd::Identity(dim_, dim_);
  gx = MatrixXd::Identity(dim_, dim_);
  gu = MatrixXd::Zero(dim_, dim_);
}

// ---------------------------------------------------------------------------
// DoubleIntegrator
// ---------------------------------------------------------------------------

DoubleIntegrator::DoubleIntegrator(double dt, int dim) : dt_(dt), dim_(dim) {
  if (!(dt > 0.0)) throw Error("double_integrator requires dt > 0");
  if (dim < 1) throw Error("double_integrator requires dim >= 1");
}

VectorXd DoubleIntegrator::step(const VectorXd& x, const VectorXd& u) const {
  check_dims(x, u);
  VectorXd next(2 * dim_);
  next.head(dim_) = x.head(dim_) + dt_ * x.tail(dim_);
  next.tail(dim_) = x.tail(dim_) + dt_ * u;
  return next;
}

VectorXd DoubleIntegrator::output(const VectorXd& x, const VectorXd& u) const {
  check_dims(x, u);
  return x;
}

void DoubleIntegrator::jacobians(const VectorXd& x, const VectorXd& u,
                                 MatrixXd& fx, MatrixXd& fu, MatrixXd& gx,
                                 MatrixXd& gu) const {
  check_dims(x, u);
  const int n = 2 * dim_;
  fx = MatrixXd::Identity(n, n);
  fx.topRightCorner(dim_, dim_) = dt_ * MatrixXd::Identity(dim_, dim_);
  fu = MatrixXd::Zero(n, dim_);
  fu.bottomRows(dim_) = dt_ * MatrixXd::Identity(dim_, dim_);
  gx = MatrixXd::Identity(n, n);
  gu = MatrixXd::Zero(n, dim_);
}

// ---------------------------------------------------------------------------
// LinearSystem
// ---------------------------------------------------------------------------

LinearSystem::LinearSystem(MatrixXd A, MatrixXd B, double dt)
    : A_(std::move(A)), B_(std::move(B)), dt_(dt) {
  if (A_.rows() != A_.cols()) {
    throw DimensionMismatchError("linear_system A must be square");
  }
  if (B_.rows() != A_.rows()) {
    throw DimensionMismatchError("linear_system B row count must match A");
  }
}

VectorXd LinearSystem::step(const VectorXd& x, const VectorXd& u) const {
  check_dims(x, u);
  return A_ * x + B_ * u;
}

VectorXd LinearSystem::output(const VectorXd& x, const VectorXd& u) const {
  check_dims(x, u);
  return x;
}

void LinearSystem::jacobians(const VectorXd& x, const VectorXd& u,
                             MatrixXd& fx, MatrixXd& fu, MatrixXd& gx,
                             MatrixXd& gu) const {
  check_dims(x, u);
  fx = A_;
  fu = B_;
  gx = MatrixXd::Identity(state_dim(), state_dim());
  gu = MatrixXd::Zero(state_dim(), control_dim());
}

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

std::shared_ptr<DynamicsModel> single_integrator(double dt, int dim) {
  return std::make_shared<SingleIntegrator>(dt, dim);
}

std::shared_ptr<DynamicsModel> double_integrator(double dt, int dim) {
  return std::make_shared<DoubleIntegrator>(dt, dim);
}

std::shared_ptr<DynamicsModel> linear_system(MatrixXd A, MatrixXd B,
                                             double dt) {
  return std::make_shared<LinearSystem>(std::move(A), std::move(B), dt);
}

}  // namespace stlddp
