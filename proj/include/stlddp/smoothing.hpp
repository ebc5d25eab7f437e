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

#include "stlddp/stl.hpp"

namespace stlddp {

// Sharpness of the two smooth operators. Larger is closer to the exact
// min/max; both approximations stay below their exact counterparts for any
// positive setting, which is what makes certificates from smoothed values
// trustworthy.
struct SmoothParams {
  double k1 = 10.0;  // smooth min
  double k2 = 10.0;  // smooth max

  void validate() const {
    if (!(k1 > 0.0) || !(k2 > 0.0)) {
      throw Error("smoothing sharpness parameters must be positive");
    }
  }
};

// Scalar together with its first two derivatives with respect to the output
// vector y (length p). The Hessian is kept symmetric.
struct SmoothValue {
  double value = 0.0;
  VectorXd grad;
  MatrixXd hess;

  static SmoothValue constant(double v, int p) {
    return {v, VectorXd::Zero(p), MatrixXd::Zero(p, p)};
  }
};

// Scalar forms: value only.
//
//   smooth_min(a; k) = -(1/k) log sum_i exp(-k a_i)   <= min(a),
//                      with min(a) - smooth_min <= log(m)/k
//   smooth_max(a; k) = sum_i a_i exp(k a_i) / sum_i exp(k a_i)  <= max(a)
//
// Both are evaluated after shifting by the extreme element so no exponential
// overflows, and the floating-point results respect the <= bounds exactly,
// not just up to rounding.
double smooth_min(const std::vector<double>& a, double k1);
double smooth_max(const std::vector<double>& a, double k2);

// Derivative-carrying forms: the arguments are functions of y presented with
// their gradients and Hessians; the result's derivatives follow by the chain
// rule through the softmin/softmax weights.
SmoothValue smooth_min(const std::vector<SmoothValue>& a, double k1);
SmoothValue smooth_max(const std::vector<SmoothValue>& a, double k2);

// mu(y) with analytic first and second derivatives. Box predicates are not
// accepted here (they are expanded into affine faces at formula build time).
SmoothValue eval_predicate(const Predicate& p, const VectorXd& y);

// Smooth robustness of a state formula: the exact recursion with min
// replaced by smooth_min and max by smooth_max. Always a lower bound on
// exact_robustness(psi, y).
SmoothValue smooth_state_robustness(const StateFormula& psi, const VectorXd& y,
                                    const SmoothParams& params);

}  // namespace stlddp
