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

#include "stlddp/smoothing.hpp"

#include <algorithm>
#include <cmath>

namespace stlddp {

namespace {

void require_nonempty(size_t m, const char* op) {
  if (m == 0) {
    throw EmptyArgumentError(std::string(op) + " of an empty argument list");
  }
}

// Softmin weights w_i = exp(-k (a_i - L)) / S with L = min(a), plus the
// shifted log-sum. Shared by both scalar and derivative paths of smooth_min.
struct MinWeights {
  std::vector<double> w;
  double lo;      // L
  double log_sum; // log S >= 0
};

MinWeights min_weights(const std::vector<double>& a, double k) {
  MinWeights mw;
  mw.lo = *std::min_element(a.begin(), a.end());
  mw.w.resize(a.size());
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    mw.w[i] = std::exp(-k * (a[i] - mw.lo));
    sum += mw.w[i];
  }
  for (double& wi : mw.w) wi /= sum;
  mw.log_sum = std::log(sum);
  return mw;
}

struct MaxWeights {
  std::vector<double> w;
  double hi;     // M
  double value;  // M + sum_i w_i (a_i - M), <= M even in floating point
};

MaxWeights max_weights(const std::vector<double>& a, double k) {
  MaxWeights mw;
  mw.hi = *std::max_element(a.begin(), a.end());
  mw.w.resize(a.size());
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    mw.w[i] = std::exp(k * (a[i] - mw.hi));
    sum += mw.w[i];
  }
  double slack = 0.0;  // weighted mean of the (nonpositive) shifts
  for (size_t i = 0; i < a.size(); ++i) {
    mw.w[i] /= sum;
    slack += mw.w[i] * (a[i] - mw.hi);
  }
  mw.value = mw.hi + std::min(slack, 0.0);
  return mw;
}

int common_dim(const std::vector<SmoothValue>& a) {
  const int p = static_cast<int>(a.front().grad.size());
  for (const auto& v : a) {
    if (v.grad.size() != p || v.hess.rows() != p || v.hess.cols() != p) {
      throw DimensionMismatchError(
          "smooth operator arguments carry derivatives of mixed dimension");
    }
  }
  return p;
}

}  // namespace

double smooth_min(const std::vector<double>& a, double k1) {
  require_nonempty(a.size(), "smooth_min");
  const MinWeights mw = min_weights(a, k1);
  // log_sum >= 0 because the minimizing term contributes exactly 1, so the
  // result never exceeds the true min.
  return mw.lo - mw.log_sum / k1;
}

double smooth_max(const std::vector<double>& a, double k2) {
  require_nonempty(a.size(), "smooth_max");
  return max_weights(a, k2).value;
}

SmoothValue smooth_min(const std::vector<SmoothValue>& a, double k1) {
  require_nonempty(a.size(), "smooth_min");
  const int p = common_dim(a);
  if (a.size() == 1) return a.front();

  std::vector<double> vals(a.size());
  for (size_t i = 0; i < a.size(); ++i) vals[i] = a[i].value;
  const MinWeights mw = min_weights(vals, k1);

  SmoothValue out = SmoothValue::constant(mw.lo - mw.log_sum / k1, p);
  MatrixXd weighted_outer = MatrixXd::Zero(p, p);
  for (size_t i = 0; i < a.size(); ++i) {
    out.grad += mw.w[i] * a[i].grad;
    out.hess += mw.w[i] * a[i].hess;
    weighted_outer += mw.w[i] * (a[i].grad * a[i].grad.transpose());
  }
  // d2v/da_i da_j = -k (w_i delta_ij - w_i w_j)
  out.hess -= k1 * (weighted_outer - out.grad * out.grad.transpose());
  out.hess = (0.5 * (out.hess + out.hess.transpose())).eval();
  return out;
}

SmoothValue smooth_max(const std::vector<SmoothValue>& a, double k2) {
  require_nonempty(a.size(), "smooth_max");
  const int p = common_dim(a);
  if (a.size() == 1) return a.front();

  std::vector<double> vals(a.size());
  for (size_t i = 0; i < a.size(); ++i) vals[i] = a[i].value;
  const MaxWeights mw = max_weights(vals, k2);

  SmoothValue out = SmoothValue::constant(mw.value, p);
  // dv/da_i = w_i c_i with c_i = 1 + k (a_i - v).
  VectorXd mean_grad = VectorXd::Zero(p);  // sum_i w_i g_i
  MatrixXd curved_outer = MatrixXd::Zero(p, p);
  for (size_t i = 0; i < a.size(); ++i) {
    const double c = 1.0 + k2 * (vals[i] - mw.value);
    const double wc = mw.w[i] * c;
    out.grad += wc * a[i].grad;
    out.hess += wc * a[i].hess;
    curved_outer += mw.w[i] * (1.0 + c) * (a[i].grad * a[i].grad.transpose());
    mean_grad += mw.w[i] * a[i].grad;
  }
  // d2v/da_i da_j = k [w_i (1 + c_i) delta_ij - w_i w_j (c_i + c_j)]
  out.hess += k2 * (curved_outer - out.grad * mean_grad.transpose() -
                    mean_grad * out.grad.transpose());
  out.hess = (0.5 * (out.hess + out.hess.transpose())).eval();
  return out;
}

SmoothValue eval_predicate(const Predicate& p, const VectorXd& y) {
  if (p.kind == PredicateKind::Box) {
    throw FragmentError("box predicate '" + p.id +
                        "' has no single smooth margin; expand it first");
  }
  if (y.size() != p.output_dim()) {
    throw DimensionMismatchError(
        "predicate '" + p.id + "' expects dimension " +
        std::to_string(p.output_dim()) + ", got " + std::to_string(y.size()));
  }
  const int n = static_cast<int>(y.size());
  SmoothValue out = SmoothValue::constant(p.evaluate(y), n);
  if (p.kind == PredicateKind::Affine) {
    out.grad = p.a;
    return out;
  }
  // ball: mu = r - s + eps, s = sqrt(|d|^2 + eps^2) >= eps > 0 when eps > 0;
  // with eps = 0 the derivatives blow up only at the center itself.
  const VectorXd d = y - p.center;
  const double s = std::sqrt(d.squaredNorm() + p.epsilon * p.epsilon);
  if (s == 0.0) {
    throw Error("ball predicate '" + p.id +
                "' with epsilon = 0 is not differentiable at its center");
  }
  out.grad = -d / s;
  out.hess = (d * d.transpose()) / (s * s * s) - MatrixXd::Identity(n, n) / s;
  return out;
}

SmoothValue smooth_state_robustness(const StateFormula& psi, const VectorXd& y,
                                    const SmoothParams& params) {
  params.validate();
  switch (psi.kind()) {
    case StateFormula::Kind::Pred:
      return eval_predicate(psi.predicate(), y);
    case StateFormula::Kind::NegPred: {
      SmoothValue v = eval_predicate(psi.predicate(), y);
      v.value = -v.value;
      v.grad = -v.grad;
      v.hess = -v.hess;
      return v;
    }
    case StateFormula::Kind::And:
    case StateFormula::Kind::Or: {
      std::vector<SmoothValue> parts;
      parts.reserve(psi.children().size());
      for (const auto& c : psi.children()) {
        parts.push_back(smooth_state_robustness(c, y, params));
      }
      return psi.kind() == StateFormula::Kind::And
                 ? smooth_min(parts, params.k1)
                 : smooth_max(parts, params.k2);
    }
  }
  throw Error("unreachable state-formula kind");
}

}  // namespace stlddp
