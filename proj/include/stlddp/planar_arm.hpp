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

#include <cmath>
#include <optional>

#include "stlddp/dynamics.hpp"

namespace stlddp {

// Three revolute joints in a vertical plane, gravity along -y, joint 1 at
// the origin. Angles are absolute-relative: q_i is measured from link i-1's
// direction, so link i points along theta_i = q_1 + ... + q_i. The state is
// x = (q, qdot) in R^6, the control is joint torques in R^3, the output is
// y = q.
struct PlanarArmParams {
  Eigen::Vector3d lengths{1.0, 0.8, 0.6};      // m
  Eigen::Vector3d masses{1.0, 0.8, 0.5};       // kg
  Eigen::Vector3d com_offsets{0.5, 0.4, 0.3};  // m from the proximal joint
  // Rotational inertia about each link's center of mass. The slender-rod
  // value m l^2 / 12 keeps the mass matrix positive definite in every
  // configuration, including the stretched-out singular ones of a
  // point-mass model.
  Eigen::Vector3d inertias = rod_inertias(masses, lengths);
  double gravity = 9.81;  // m/s^2

  static Eigen::Vector3d rod_inertias(const Eigen::Vector3d& m,
                                      const Eigen::Vector3d& l) {
    return (m.array() * l.array().square() / 12.0).matrix();
  }

  void validate() const {
    if ((lengths.array() <= 0.0).any() || (masses.array() <= 0.0).any()) {
      throw Error("arm links need positive lengths and masses");
    }
    if ((com_offsets.array() < 0.0).any() ||
        (com_offsets.array() > lengths.array()).any()) {
      throw Error("arm center-of-mass offsets must lie on the link");
    }
    if ((inertias.array() <= 0.0).any()) {
      throw Error("arm rotational inertias must be positive");
    }
    if (gravity < 0.0) {
      throw Error("arm gravity constant must be nonnegative");
    }
  }
};

// Manipulator-equation terms M(q), C(q, qdot), tau_g(q) with
// M qddot + C qdot + tau_g = tau. Templated on the scalar so a complex-step
// oracle can differentiate the same arithmetic the solver integrates.
//
// M comes from the per-link center-of-mass Jacobians, C from the Christoffel
// symbols of M (which gives the usual skew-symmetry of dM/dt - 2C), and
// tau_g from the gradient of the gravitational potential.
template <typename Scalar>
struct ArmTerms {
  Eigen::Matrix<Scalar, 3, 3> M;
  Eigen::Matrix<Scalar, 3, 3> C;
  Eigen::Matrix<Scalar, 3, 1> tau_g;
};

template <typename Scalar>
ArmTerms<Scalar> arm_terms(const PlanarArmParams& P,
                           const Eigen::Matrix<Scalar, 3, 1>& q,
                           const Eigen::Matrix<Scalar, 3, 1>& qdot) {
  using std::cos;
  using std::sin;
  using Mat23 = Eigen::Matrix<Scalar, 2, 3>;
  using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

  Scalar theta[3], c[3], s[3];
  theta[0] = q[0];
  theta[1] = theta[0] + q[1];
  theta[2] = theta[1] + q[2];
  for (int i = 0; i < 3; ++i) {
    c[i] = cos(theta[i]);
    s[i] = sin(theta[i]);
  }

  // Jv[i] = d com_i / dq; dJv[i][r] = d Jv[i] / dq_r. Column j of Jv[i]
  // collects (-sin, cos) of every segment between joint j and the com.
  Mat23 Jv[3];
  Mat23 dJv[3][3];
  for (int i = 0; i < 3; ++i) {
    Jv[i].setZero();
    for (int r = 0; r < 3; ++r) dJv[i][r].setZero();
    for (int j = 0; j <= i; ++j) {
      for (int d = j; d <= i; ++d) {
        const double coef = (d < i) ? P.lengths[d] : P.com_offsets[i];
        Jv[i](0, j) += Scalar(-coef) * s[d];
        Jv[i](1, j) += Scalar(coef) * c[d];
        for (int r = 0; r <= d; ++r) {
          dJv[i][r](0, j) += Scalar(-coef) * c[d];
          dJv[i][r](1, j) += Scalar(-coef) * s[d];
        }
      }
    }
  }

  ArmTerms<Scalar> out;
  out.M.setZero();
  Mat3 dM[3];
  for (int r = 0; r < 3; ++r) dM[r].setZero();
  for (int i = 0; i < 3; ++i) {
    out.M += Scalar(P.masses[i]) * (Jv[i].transpose() * Jv[i]);
    // Angular velocity of link i is qdot_0 + ... + qdot_i: its Jacobian is
    // constant, so the inertia term is a fixed ones-block.
    out.M.topLeftCorner(i + 1, i + 1).array() += Scalar(P.inertias[i]);
    for (int r = 0; r < 3; ++r) {
      const Mat3 cross = dJv[i][r].transpose() * Jv[i];
      dM[r] += Scalar(P.masses[i]) * (cross + cross.transpose());
    }
  }

  out.C.setZero();
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) {
        out.C(k, j) += Scalar(0.5) * (dM[i](k, j) + dM[j](k, i) - dM[k](i, j)) *
                       qdot[i];
      }
    }
  }

  // Potential V = g * sum_i m_i com_y(i); tau_g = dV/dq uses the Jacobians'
  // y rows.
  out.tau_g.setZero();
  for (int i = 0; i < 3; ++i) {
    out.tau_g += Scalar(P.gravity * P.masses[i]) * Jv[i].row(1).transpose();
  }
  return out;
}

// Time derivative of the full state: (qdot, M^{-1}(tau - C qdot - tau_g)).
template <typename Scalar>
Eigen::Matrix<Scalar, 6, 1> arm_continuous_dynamics(
    const PlanarArmParams& P, const Eigen::Matrix<Scalar, 6, 1>& x,
    const Eigen::Matrix<Scalar, 3, 1>& tau) {
  const Eigen::Matrix<Scalar, 3, 1> q = x.template head<3>();
  const Eigen::Matrix<Scalar, 3, 1> qd = x.template tail<3>();
  const ArmTerms<Scalar> terms = arm_terms(P, q, qd);
  Eigen::Matrix<Scalar, 6, 1> xdot;
  xdot.template head<3>() = qd;
  xdot.template tail<3>() = Eigen::PartialPivLU<Eigen::Matrix<Scalar, 3, 3>>(
                                terms.M)
                                .solve(tau - terms.C * qd - terms.tau_g);
  return xdot;
}

// Torques that hold q still against gravity: tau = tau_g(q).
Eigen::Vector3d gravity_torque(const PlanarArmParams& params,
                               const Eigen::Vector3d& q);

// Forward kinematics of the end effector (tip of link 3) and its Jacobian.
Eigen::Vector2d end_effector(const PlanarArmParams& params,
                             const Eigen::Vector3d& q);
Eigen::Matrix<double, 2, 3> end_effector_jacobian(const PlanarArmParams& params,
                                                  const Eigen::Vector3d& q);

// Damped-least-squares inverse kinematics for a planar target. Returns a
// joint configuration whose end effector lies within pos_tol of the target,
// or nullopt if the iteration stalls (target out of reach).
std::optional<Eigen::Vector3d> solve_ik_2d(const PlanarArmParams& params,
                                           const Eigen::Vector2d& target,
                                           const Eigen::Vector3d& q_init,
                                           double pos_tol = 1e-3,
                                           int max_iters = 500);

// Kinetic plus gravitational potential energy; drift of this under zero
// torque measures integration error.
double arm_total_energy(const PlanarArmParams& params,
                        const Eigen::Matrix<double, 6, 1>& x);

// Forward-Euler discretization of the manipulator at a fixed dt
// (200 Hz default): q' = q + qdot dt, qdot' = qdot + qddot dt.
class PlanarArm final : public DynamicsModel {
 public:
  explicit PlanarArm(PlanarArmParams params, double dt = 0.005);

  std::string name() const override { return "planar_arm"; }
  int state_dim() const override { return 6; }
  int control_dim() const override { return 3; }
  int output_dim() const override { return 3; }
  double dt() const override { return dt_; }

  VectorXd step(const VectorXd& x, const VectorXd& u) const override;
  VectorXd output(const VectorXd& x, const VectorXd& u) const override;

  const PlanarArmParams& params() const { return params_; }

 private:
  PlanarArmParams params_;
  double dt_;
};

std::shared_ptr<DynamicsModel> planar_arm(PlanarArmParams params,
                                          double dt = 0.005);

}  // namespace stlddp
