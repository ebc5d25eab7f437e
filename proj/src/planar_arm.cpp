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

#include "stlddp/planar_arm.hpp"

#include <cmath>

namespace stlddp {

using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

Vector3d gravity_torque(const PlanarArmParams& params, const Vector3d& q) {
  return arm_terms<double>(params, q, Vector3d::Zero()).tau_g;
}

Vector2d end_effector(const PlanarArmParams& params, const Vector3d& q) {
  Vector2d p = Vector2d::Zero();
  double theta = 0.0;
  for (int i = 0; i < 3; ++i) {
    theta += q[i];
    p.x() += params.lengths[i] * std::cos(theta);
    p.y() += params.lengths[i] * std::sin(theta);
  }
  return p;
}

Eigen::Matrix<double, 2, 3> end_effector_jacobian(const PlanarArmParams& params,
                                                  const Vector3d& q) {
  double theta[3];
  theta[0] = q[0];
  theta[1] = theta[0] + q[1];
  theta[2] = theta[1] + q[2];
  Eigen::Matrix<double, 2, 3> J = Eigen::Matrix<double, 2, 3>::Zero();
  for (int j = 0; j < 3; ++j) {
    for (int d = j; d < 3; ++d) {
      J(0, j) -= params.lengths[d] * std::sin(theta[d]);
      J(1, j) += params.lengths[d] * std::cos(theta[d]);
    }
  }
  return J;
}

std::optional<Vector3d> solve_ik_2d(const PlanarArmParams& params,
                                    const Vector2d& target,
                                    const Vector3d& q_init, double pos_tol,
                                    int max_iters) {
  params.validate();
  constexpr double kDamping = 0.1;
  Vector3d q = q_init;
  for (int it = 0; it < max_iters; ++it) {
    const Vector2d err = target - end_effector(params, q);
    if (err.norm() < pos_tol) return q;
    const Eigen::Matrix<double, 2, 3> J = end_effector_jacobian(params, q);
    const Eigen::Matrix2d JJt =
        J * J.transpose() + kDamping * kDamping * Eigen::Matrix2d::Identity();
    Vector3d dq = J.transpose() * JJt.ldlt().solve(err);
    // Cap the step so a far target cannot fling the iterate past the goal.
    const double step = dq.norm();
    if (step > 0.5) dq *= 0.5 / step;
    q += dq;
  }
  return std::nullopt;
}

double arm_total_energy(const PlanarArmParams& params,
                        const Eigen::Matrix<double, 6, 1>& x) {
  const Vector3d q = x.head<3>();
  const Vector3d qd = x.tail<3>();
  const Matrix3d M = arm_terms<double>(params, q, qd).M;
  double energy = 0.5 * qd.dot(M * qd);

  double theta = 0.0, base_y = 0.0;
  for (int i = 0; i < 3; ++i) {
    theta += q[i];
    const double com_y = base_y + params.com_offsets[i] * std::sin(theta);
    energy += params.gravity * params.masses[i] * com_y;
    base_y += params.lengths[i] * std::sin(theta);
  }
  return energy;
}

PlanarArm::PlanarArm(PlanarArmParams params, double dt)
    : params_(std::move(params)), dt_(dt) {
  params_.validate();
  if (!(dt > 0.0)) throw Error("planar_arm requires dt > 0");
}

VectorXd PlanarArm::step(const VectorXd& x, const VectorXd& u) const {
  check_dims(x, u);
  const Vector3d q = x.head<3>();
  const Vector3d qd = x.tail<3>();
  const ArmTerms<double> terms = arm_terms<double>(params_, q, qd);

  Eigen::SelfAdjointEigenSolver<Matrix3d> eig;
  eig.computeDirect(terms.M, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi > 1e12 * lo) {
    throw SingularMassMatrixError("arm mass matrix conditioning exceeds 1e12");
  }

  const Vector3d qdd = terms.M.llt().solve(u - terms.C * qd - terms.tau_g);
  VectorXd next(6);
  next.head<3>() = q + dt_ * qd;
  next.tail<3>() = qd + dt_ * qdd;
  return next;
}

VectorXd PlanarArm::output(const VectorXd& x, const VectorXd& u) const {
  check_dims(x, u);
  return x.head<3>();
}

std::shared_ptr<DynamicsModel> planar_arm(PlanarArmParams params, double dt) {
  return std::make_shared<PlanarArm>(std::move(params), dt);
}

}  // namespace stlddp
