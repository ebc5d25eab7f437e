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

#include <cmath>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace stlddp;

namespace {

// Reference values frozen from out-of-band evaluation of the closed forms.
constexpr double kSmin01 = -4.5398899216870535e-06;   // smooth_min({0,1}, 10)
constexpr double kSmax01 = 0.9999546021312976;        // smooth_max({0,1}, 10)
constexpr double kSminEq = 1.9306852819440055;        // smooth_min({2,2}, 10)
constexpr double kSmaxNeg = -1.0000000041223072;      // smooth_max({-1,-3}, 10)
constexpr double kBallEdge = 0.009950001249937604;    // r=1, eps=.01, |y-c|=1

doctest::Approx near(double v) { return doctest::Approx(v).epsilon(1e-12); }

SmoothValue affine_arg(const VectorXd& a, double b, const VectorXd& y) {
  SmoothValue v;
  v.value = a.dot(y) + b;
  v.grad = a;
  v.hess = MatrixXd::Zero(y.size(), y.size());
  return v;
}

SmoothValue quadratic_arg(const MatrixXd& H, const VectorXd& g, double c,
                          const VectorXd& y) {
  SmoothValue v;
  v.value = 0.5 * y.dot(H * y) + g.dot(y) + c;
  v.grad = H * y + g;
  v.hess = H;
  return v;
}

}  // namespace

TEST_CASE("smooth operators match frozen reference values") {
  CHECK(smooth_min({0.0, 1.0}, 10.0) == near(kSmin01));
  CHECK(smooth_max({0.0, 1.0}, 10.0) == near(kSmax01));
  CHECK(smooth_min({2.0, 2.0}, 10.0) == near(kSminEq));
  CHECK(smooth_max({-1.0, -3.0}, 10.0) == near(kSmaxNeg));
  CHECK(smooth_min({0.5, -0.25, 2.0}, 10.0) == near(-0.2500552931644457));
  CHECK(smooth_max({0.5, -0.25, 2.0}, 10.0) == near(1.9999995407659827));
}

TEST_CASE("single argument passes through exactly") {
  CHECK(smooth_min(std::vector<double>{0.375}, 10.0) == 0.375);
  CHECK(smooth_max(std::vector<double>{-17.25}, 3.0) == -17.25);

  VectorXd y(2);
  y << 0.5, -1.0;
  VectorXd a(2);
  a << 2.0, -1.0;
  const SmoothValue arg = affine_arg(a, 0.25, y);
  const SmoothValue mn = smooth_min({arg}, 10.0);
  const SmoothValue mx = smooth_max({arg}, 10.0);
  CHECK(mn.value == arg.value);
  CHECK(mx.value == arg.value);
  CHECK((mn.grad - arg.grad).norm() == 0.0);
  CHECK((mx.grad - arg.grad).norm() == 0.0);
  CHECK((mn.hess - arg.hess).norm() == 0.0);
  CHECK((mx.hess - arg.hess).norm() == 0.0);
}

TEST_CASE("lower bounds and the log(m)/k gap hold on random vectors") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> entry(-5.0, 5.0);
  std::uniform_int_distribution<int> m_dist(2, 8);
  for (double k : {1.0, 10.0, 100.0}) {
    for (int trial = 0; trial < 500; ++trial) {
      const int m = m_dist(rng);
      std::vector<double> a(m);
      double lo = oracles::kInf, hi = -oracles::kInf;
      for (double& v : a) {
        v = entry(rng);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double smin = smooth_min(a, k);
      const double smax = smooth_max(a, k);
      REQUIRE(smin <= lo);
      REQUIRE(smax <= hi);
      REQUIRE(lo - smin <= std::log(static_cast<double>(m)) / k);
    }
  }
}

TEST_CASE("larger sharpness tightens the approximation") {
  const std::vector<double> a = {0.3, -1.2, 0.7, 2.0};
  double prev_min_gap = oracles::kInf, prev_max_gap = oracles::kInf;
  for (double k : {1.0, 10.0, 100.0}) {
    const double min_gap = -1.2 - smooth_min(a, k);
    const double max_gap = 2.0 - smooth_max(a, k);
    CHECK(min_gap < prev_min_gap);
    CHECK(max_gap <= prev_max_gap);
    prev_min_gap = min_gap;
    prev_max_gap = max_gap;
  }
  CHECK(prev_min_gap < 1e-10);
  CHECK(prev_max_gap < 1e-10);
}

TEST_CASE("empty argument lists are rejected") {
  CHECK_THROWS_AS(smooth_min(std::vector<double>{}, 10.0), EmptyArgumentError);
  CHECK_THROWS_AS(smooth_max(std::vector<double>{}, 10.0), EmptyArgumentError);
  CHECK_THROWS_AS(smooth_min(std::vector<SmoothValue>{}, 10.0),
                  EmptyArgumentError);
  CHECK_THROWS_AS(smooth_max(std::vector<SmoothValue>{}, 10.0),
                  EmptyArgumentError);
}

TEST_CASE("mixed argument dimensions are rejected") {
  const SmoothValue a = SmoothValue::constant(1.0, 2);
  const SmoothValue b = SmoothValue::constant(2.0, 3);
  CHECK_THROWS_AS(smooth_min({a, b}, 10.0), DimensionMismatchError);
  CHECK_THROWS_AS(smooth_max({a, b}, 10.0), DimensionMismatchError);
}

TEST_CASE("sharpness parameters must be positive") {
  CHECK_THROWS_AS((SmoothParams{0.0, 10.0}.validate()), Error);
  CHECK_THROWS_AS((SmoothParams{10.0, -1.0}.validate()), Error);
  CHECK_NOTHROW(SmoothParams{}.validate());
}

TEST_CASE("derivative-carrying smooth_min matches finite differences") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 3;
    VectorXd y = VectorXd::NullaryExpr(d, [&] { return entry(rng); });
    VectorXd a1 = VectorXd::NullaryExpr(d, [&] { return entry(rng); });
    VectorXd a2 = VectorXd::NullaryExpr(d, [&] { return entry(rng); });
    MatrixXd M = MatrixXd::NullaryExpr(d, d, [&] { return entry(rng); });
    MatrixXd H = M + M.transpose();

    auto args_at = [&](const VectorXd& z) {
      return std::vector<SmoothValue>{affine_arg(a1, 0.3, z),
                                      affine_arg(a2, -0.1, z),
                                      quadratic_arg(H, a1, 0.0, z)};
    };
    for (bool use_min : {true, false}) {
      auto scalar = [&](const VectorXd& z) {
        std::vector<double> vals;
        for (const SmoothValue& s : args_at(z)) vals.push_back(s.value);
        return use_min ? smooth_min(vals, 10.0) : smooth_max(vals, 10.0);
      };
      const SmoothValue got = use_min ? smooth_min(args_at(y), 10.0)
                                      : smooth_max(args_at(y), 10.0);
      CHECK(got.value == near(scalar(y)));
      const VectorXd g_ref = oracles::fd_gradient(scalar, y);
      const MatrixXd h_ref = oracles::fd_hessian(scalar, y);
      REQUIRE((got.grad - g_ref).norm() <=
              1e-5 * std::max(1.0, g_ref.norm()));
      REQUIRE((got.hess - h_ref).norm() <=
              1e-4 * std::max(1.0, h_ref.norm()));
      REQUIRE((got.hess - got.hess.transpose()).norm() == 0.0);
    }
  }
}

TEST_CASE("predicate evaluation: values and derivatives") {
  VectorXd a(2);
  a << 1.0, -2.0;
  const Predicate aff = Predicate::affine("aff", a, 0.5);
  VectorXd y(2);
  y << 0.25, 0.75;

  SUBCASE("affine") {
    const SmoothValue v = eval_predicate(aff, y);
    CHECK(v.value == near(a.dot(y) - 0.5));
    CHECK((v.grad - a).norm() == 0.0);
    CHECK(v.hess.norm() == 0.0);
  }

  SUBCASE("ball on the sphere surface") {
    const Predicate ball =
        Predicate::ball("b", VectorXd::Zero(2), 1.0, 0.01);
    VectorXd edge(2);
    edge << 1.0, 0.0;
    CHECK(eval_predicate(ball, edge).value == near(kBallEdge));
  }

  SUBCASE("ball derivatives match finite differences") {
    VectorXd c(2);
    c << 0.1, -0.3;
    const Predicate ball = Predicate::ball("b", c, 0.7, 0.05);
    auto scalar = [&](const VectorXd& z) { return ball.evaluate(z); };
    const SmoothValue v = eval_predicate(ball, y);
    CHECK(v.value == near(scalar(y)));
    CHECK((v.grad - oracles::fd_gradient(scalar, y)).norm() <= 1e-6);
    CHECK((v.hess - oracles::fd_hessian(scalar, y)).norm() <= 1e-4);
  }

  SUBCASE("ball is twice differentiable at its center when smoothed") {
    VectorXd c(2);
    c << 0.1, -0.3;
    const Predicate ball = Predicate::ball("b", c, 0.7, 0.05);
    const SmoothValue v = eval_predicate(ball, c);
    CHECK(std::isfinite(v.value));
    CHECK(v.grad.norm() == 0.0);  // exact stationary point by symmetry
    CHECK(v.hess.allFinite());
  }

  SUBCASE("unsmoothed ball rejects evaluation at its center") {
    VectorXd c(2);
    c << 0.1, -0.3;
    const Predicate ball = Predicate::ball("b", c, 0.7, 0.0);
    CHECK_THROWS_AS(eval_predicate(ball, c), Error);
    CHECK(std::isfinite(eval_predicate(ball, y).value));
  }

  SUBCASE("box predicates must be expanded before smoothing") {
    VectorXd lo(2), hi(2);
    lo << 0.0, 0.0;
    hi << 1.0, 1.0;
    const Predicate box = Predicate::box("box", lo, hi);
    CHECK_THROWS_AS(eval_predicate(box, y), FragmentError);
  }

  SUBCASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(eval_predicate(aff, VectorXd::Zero(3)),
                    DimensionMismatchError);
  }
}

TEST_CASE("state-formula smoothing underapproximates the exact robustness") {
  PredicateTable preds;
  VectorXd a1(2), a2(2);
  a1 << 1.0, 0.0;
  a2 << 0.0, 1.0;
  preds.emplace("px", Predicate::affine("px", a1, 0.2));
  preds.emplace("py", Predicate::affine("py", a2, -0.4));
  preds.emplace("near0", Predicate::ball("near0", VectorXd::Zero(2), 1.0, 0.01));

  const StateFormula psi = StateFormula::disj(
      {StateFormula::conj({StateFormula::pred(preds.at("px")),
                           StateFormula::neg_pred(preds.at("py"))}),
       StateFormula::pred(preds.at("near0"))});

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  const SmoothParams params;
  for (int trial = 0; trial < 200; ++trial) {
    VectorXd y = VectorXd::NullaryExpr(2, [&] { return entry(rng); });
    const double smooth = smooth_state_robustness(psi, y, params).value;
    const double exact = exact_robustness(psi, y);
    REQUIRE(smooth <= exact);
    REQUIRE(exact - smooth <= std::log(2.0) / params.k1 +
                                  std::log(2.0) / params.k2 + 1e-12);
  }
}

TEST_CASE("state-formula smoothing derivatives match finite differences") {
  PredicateTable preds;
  VectorXd a1(2), a2(2);
  a1 << 1.0, -0.5;
  a2 << -0.25, 1.0;
  preds.emplace("p0", Predicate::affine("p0", a1, 0.1));
  preds.emplace("p1", Predicate::affine("p1", a2, -0.2));
  preds.emplace("p2",
                Predicate::ball("p2", VectorXd::Constant(2, 0.3), 0.8, 0.05));

  const StateFormula psi = StateFormula::conj(
      {StateFormula::disj({StateFormula::pred(preds.at("p0")),
                           StateFormula::pred(preds.at("p2"))}),
       StateFormula::neg_pred(preds.at("p1"))});
  const SmoothParams params;

  auto scalar = [&](const VectorXd& z) {
    return smooth_state_robustness(psi, z, params).value;
  };
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> entry(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    VectorXd y = VectorXd::NullaryExpr(2, [&] { return entry(rng); });
    const SmoothValue v = smooth_state_robustness(psi, y, params);
    const VectorXd g_ref = oracles::fd_gradient(scalar, y);
    const MatrixXd h_ref = oracles::fd_hessian(scalar, y);
    REQUIRE((v.grad - g_ref).norm() <= 1e-5 * std::max(1.0, g_ref.norm()));
    REQUIRE((v.hess - h_ref).norm() <= 1e-4 * std::max(1.0, h_ref.norm()));
  }
}

TEST_CASE("negated predicate flips value and derivatives") {
  VectorXd a(2);
  a << 0.6, -1.1;
  PredicateTable preds;
  preds.emplace("p", Predicate::affine("p", a, 0.3));
  const StateFormula pos = StateFormula::pred(preds.at("p"));
  const StateFormula neg = StateFormula::neg_pred(preds.at("p"));
  VectorXd y(2);
  y << -0.4, 0.9;
  const SmoothParams params;
  const SmoothValue vp = smooth_state_robustness(pos, y, params);
  const SmoothValue vn = smooth_state_robustness(neg, y, params);
  CHECK(vn.value == near(-vp.value));
  CHECK((vn.grad + vp.grad).norm() == 0.0);
  CHECK((vn.hess + vp.hess).norm() == 0.0);
}
