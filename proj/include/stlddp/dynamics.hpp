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

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "stlddp/errors.hpp"

namespace stlddp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Discrete-time system x' = f(x, u), y = g(x, u). Both maps are pure and
// continuously differentiable; models that know their Jacobians in closed
// form say so, everything else is finite-differenced by the solver.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual std::string name() const = 0;
  virtual int state_dim() const = 0;    // n
  virtual int control_dim() const = 0;  // m
  virtual int output_dim() const = 0;   // p
  virtual double dt() const = 0;

  virtual VectorXd step(const VectorXd& x, const VectorXd& u) const = 0;
  virtual VectorXd output(const VectorXd& x, const VectorXd& u) const = 0;

  virtual bool has_analytic_jacobians() const { return false; }
  // f_x (n x n), f_u (n x m), g_x (p x n), g_u (p x m).
  virtual void jacobians(const VectorXd& x, const VectorXd& u, MatrixXd& fx,
                         MatrixXd& fu, MatrixXd& gx, MatrixXd& gu) const;

 protected:
  void check_dims(const VectorXd& x, const VectorXd& u) const;
};

struct ModelJacobians {
  MatrixXd fx, fu, gx, gu;
};

// Central-difference Jacobians of step and output, column by column.
ModelJacobians fd_jacobians(const DynamicsModel& model, const VectorXd& x,
                            const VectorXd& u, double h = 1e-5);

// x' = x + u dt, y = x. n = m = p = dim.
class SingleIntegrator final : public DynamicsModel {
 public:
  SingleIntegrator(double dt, int dim = 2);

  std::string name() const override { return "single_integrator"; }
  int state_dim() const override { return dim_; }
  int control_dim() const override { return dim_; }
  int output_dim() const override { return dim_; }
  double dt() const override { return dt_; }

  VectorXd step(const VectorXd& x, const VectorXd& u) const override;
  VectorXd output(const VectorXd& x, const VectorXd& u) const override;
  bool has_analytic_jacobians() const override { return true; }
  void jacobians(const VectorXd& x, const VectorXd& u, MatrixXd& fx,
                 MatrixXd& fu, MatrixXd& gx, MatrixXd& gu) const override;

 private:
  double dt_;
  int dim_;
};

// x = (position, velocity), u = acceleration; y = x. n = 2 dim, m = dim.
class DoubleIntegrator final : public DynamicsModel {
 public:
  DoubleIntegrator(double dt, int dim = 2);

  std::string name() const override { return "double_integrator"; }
  int state_dim() const override { return 2 * dim_; }
  int control_dim() const override { return dim_; }
  int output_dim() const override { return 2 * dim_; }
  double dt() const override { return dt_; }

  VectorXd step(const VectorXd& x, const VectorXd& u) const override;
  VectorXd output(const VectorXd& x, const VectorXd& u) const override;
  bool has_analytic_jacobians() const override { return true; }
  void jacobians(const VectorXd& x, const VectorXd& u, MatrixXd& fx,
                 MatrixXd& fu, MatrixXd& gx, MatrixXd& gu) const override;

 private:
  double dt_;
  int dim_;
};

// x' = A x + B u, y = x. dt is bookkeeping only (A, B are already discrete).
class LinearSystem final : public DynamicsModel {
 public:
  LinearSystem(MatrixXd A, MatrixXd B, double dt = 1.0);

  std::string name() const override { return "linear_system"; }
  int state_dim() const override { return static_cast<int>(A_.rows()); }
  int control_dim() const override { return static_cast<int>(B_.cols()); }
  int output_dim() const override { return state_dim(); }
  double dt() const override { return dt_; }

  VectorXd step(const VectorXd& x, const VectorXd& u) const override;
  VectorXd output(const VectorXd& x, const VectorXd& u) const override;
  bool has_analytic_jacobians() const override { return true; }
  void jacobians(const VectorXd& x, const VectorXd& u, MatrixXd& fx,
                 MatrixXd& fu, MatrixXd& gx, MatrixXd& gu) const override;

  const MatrixXd& A() const { return A_; }
  const MatrixXd& B() const { return B_; }

 private:
  MatrixXd A_, B_;
  double dt_;
};

std::shared_ptr<DynamicsModel> single_integrator(double dt, int dim = 2);
std::shared_ptr<DynamicsModel> double_integrator(double dt, int dim = 2);
std::shared_ptr<DynamicsModel> linear_system(MatrixXd A, MatrixXd B,
                                             double dt = 1.0);

}  // namespace stlddp
