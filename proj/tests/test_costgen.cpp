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

#include "stlddp/costgen.hpp"

#include <random>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace stlddp;

namespace {

PredicateTable reach_avoid_preds() {
  PredicateTable preds;
  VectorXd olo(2), ohi(2), glo(2), ghi(2);
  olo << 0.4, 0.4;
  ohi << 0.6, 0.6;
  glo << 0.8, 0.8;
  ghi << 1.0, 1.0;
  preds.emplace("obstacle", Predicate::box("obstacle", olo, ohi));
  preds.emplace("goal", Predicate::box("goal", glo, ghi));
  return preds;
}

PredicateTable scalar_pair() {
  PredicateTable preds;
  VectorXd one(1), two(1);
  one << 1.0;
  two << 2.0;
  preds.emplace("p1", Predicate::affine("p1", one, 1.0));  // y - 1
  preds.emplace("p2", Predicate::affine("p2", two, 1.0));  // 2y - 1
  return preds;
}

}  // namespace

TEST_CASE("term placement follows the switching-time convention") {
  const PredicateTable preds = reach_avoid_preds();

  SUBCASE("always and eventually over the full horizon") {
    const Specification spec =
        parse_spec("G[0,100] not obstacle & F[0,100] goal", 100, preds);
    const RunningCostTable table = compile(spec);
    REQUIRE(table.terms.size() == 101);
    for (int t = 0; t <= 99; ++t) {
      REQUIRE(table.terms[t].size() == 1);
      CHECK(table.terms[t][0].weight == 1.0);
      CHECK(table.terms[t][0].source == 0);
    }
    REQUIRE(table.terms[100].size() == 2);
    CHECK(table.terms[100][0].weight == 1.0);
    CHECK(table.terms[100][1].weight == 100.0);
    CHECK(table.terms[100][1].source == 1);
  }

  SUBCASE("until splits hold and target") {
    const Specification spec =
        parse_spec("(not obstacle) U[0,50] goal", 50, preds);
    const RunningCostTable table = compile(spec);
    for (int t = 0; t < 50; ++t) {
      REQUIRE(table.terms[t].size() == 1);
      CHECK(table.terms[t][0].weight == 1.0);
    }
    REQUIRE(table.terms[50].size() == 1);
    CHECK(table.terms[50][0].weight == 50.0);
  }

  SUBCASE("eventually lands one weighted term at its switch time") {
    const Specification spec = parse_spec("F[0,33] goal", 40, preds);
    const RunningCostTable table = compile(spec);
    int populated = 0;
    for (int t = 0; t <= 40; ++t) populated += !table.terms[t].empty();
    CHECK(populated == 1);
    REQUIRE(table.terms[33].size() == 1);
    CHECK(table.terms[33][0].weight == 33.0);
  }

  SUBCASE("zero-width windows keep the unit weight floor") {
    const Specification spec = parse_spec("F[5,5] goal", 10, preds);
    const RunningCostTable table = compile(spec);
    REQUIRE(table.terms[5].size() == 1);
    CHECK(table.terms[5][0].weight == 1.0);
  }
}

TEST_CASE("switching-time overrides") {
  const PredicateTable preds = reach_avoid_preds();
  const Specification spec =
      parse_spec("F[2,8] goal & G[0,4] not obstacle", 10, preds);

  SUBCASE("move the eventually term inside its window") {
    const RunningCostTable table = compile(spec, {4, std::nullopt});
    REQUIRE(table.terms[4].size() == 2);  // moved goal term joins the G term
    CHECK(table.terms[8].empty());
    // Weight still reflects the window, not the switch position.
    for (const CostTerm& term : table.terms[4]) {
      CHECK(term.weight == (term.source == 0 ? 6.0 : 1.0));
    }
  }

  SUBCASE("override outside the window is rejected") {
    CHECK_THROWS_AS(compile(spec, {9, std::nullopt}), HorizonExceededError);
    CHECK_THROWS_AS(compile(spec, {1, std::nullopt}), HorizonExceededError);
  }

  SUBCASE("override on an always conjunct is rejected") {
    CHECK_THROWS_AS(compile(spec, {std::nullopt, 2}), Error);
  }

  SUBCASE("override list must match the conjunct count") {
    CHECK_THROWS_AS(compile(spec, {std::nullopt}), LengthMismatchError);
  }
}

TEST_CASE("running-cost evaluation") {
  const SmoothParams params;

  SUBCASE("empty timestep is exactly zero") {
    const PredicateTable preds = reach_avoid_preds();
    const Specification spec = parse_spec("F[0,3] goal", 10, preds);
    const RunningCostTable table = compile(spec);
    VectorXd y(2);
    y << 0.5, 0.5;
    const SmoothValue v = eval_running_cost(table, 7, y, params);
    CHECK(v.value == 0.0);
    CHECK(v.grad.size() == 2);
    CHECK(v.grad.norm() == 0.0);
    CHECK(v.hess.norm() == 0.0);
  }

  SUBCASE("single term is the negated weighted smooth robustness, exactly") {
    const PredicateTable preds = reach_avoid_preds();
    const Specification spec = parse_spec("F[0,10] goal", 10, preds);
    const RunningCostTable table = compile(spec);
    VectorXd y(2);
    y << 0.7, 0.9;
    const SmoothValue cost = eval_running_cost(table, 10, y, params);
    const SmoothValue rho =
        smooth_state_robustness(spec.conjuncts[0].body(), y, params);
    CHECK(cost.value == -10.0 * rho.value);
    CHECK((cost.grad + 10.0 * rho.grad).norm() == 0.0);
  }

  SUBCASE("two coincident unit terms match the closed-form smooth max") {
    // Single affine predicates smooth exactly, so at y = 2 the two terms
    // have robustness 1 and 3; the merged cost is smooth_max(-1, -3).
    const PredicateTable preds = scalar_pair();
    const Specification spec = parse_spec("G[0,1] p1 & G[0,1] p2", 1, preds);
    const RunningCostTable table = compile(spec);
    const SmoothValue v =
        eval_running_cost(table, 0, VectorXd::Constant(1, 2.0), params);
    CHECK(v.value == doctest::Approx(-1.0000000041223072).epsilon(1e-12));
  }

  SUBCASE("merge is invariant to conjunct order") {
    PredicateTable preds = scalar_pair();
    VectorXd half(1);
    half << 0.5;
    preds.emplace("p3", Predicate::affine("p3", half, -0.25));
    const Specification a =
        parse_spec("G[0,1] p1 & G[0,1] p2 & G[0,1] p3", 1, preds);
    const Specification b =
        parse_spec("G[0,1] p3 & G[0,1] p1 & G[0,1] p2", 1, preds);
    for (double yv : {-1.0, 0.0, 0.8, 2.5}) {
      const VectorXd y = VectorXd::Constant(1, yv);
      const double va = eval_running_cost(compile(a), 0, y, params).value;
      const double vb = eval_running_cost(compile(b), 0, y, params).value;
      CHECK(va == doctest::Approx(vb).epsilon(1e-14));
    }
  }

  SUBCASE("out-of-range timestep is rejected") {
    const PredicateTable preds = scalar_pair();
    const Specification spec = parse_spec("G[0,1] p1", 1, preds);
    const RunningCostTable table = compile(spec);
    CHECK_THROWS_AS(eval_running_cost(table, 2, VectorXd::Zero(1), params),
                    HorizonExceededError);
    CHECK_THROWS_AS(eval_running_cost(table, -1, VectorXd::Zero(1), params),
                    HorizonExceededError);
  }
}

TEST_CASE("running-cost derivatives match finite differences") {
  const PredicateTable preds = reach_avoid_preds();
  const Specification spec =
      parse_spec("G[0,5] not obstacle & F[0,5] goal", 5, preds);
  const RunningCostTable table = compile(spec, {std::nullopt, 3});
  const SmoothParams params;

  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> entry(-0.2, 1.2);
  for (int t : {0, 3}) {
    for (int trial = 0; trial < 25; ++trial) {
      VectorXd y(2);
      y << entry(rng), entry(rng);
      auto scalar = [&](const VectorXd& z) {
        return eval_running_cost(table, t, z, params).value;
      };
      const SmoothValue v = eval_running_cost(table, t, y, params);
      const VectorXd g_ref = oracles::fd_gradient(scalar, y);
      const MatrixXd h_ref = oracles::fd_hessian(scalar, y);
      REQUIRE((v.grad - g_ref).norm() <= 1e-5 * std::max(1.0, g_ref.norm()));
      REQUIRE((v.hess - h_ref).norm() <= 1e-3 * std::max(1.0, h_ref.norm()));
    }
  }
}

TEST_CASE("soundness certificates") {
  const PredicateTable preds = reach_avoid_preds();
  const Specification spec =
      parse_spec("G[0,4] not obstacle & F[0,4] goal", 4, preds);
  const RunningCostTable table = compile(spec);
  const SmoothParams params{30.0, 30.0};

  auto straight_line = [&](const VectorXd& from, const VectorXd& to) {
    std::vector<VectorXd> samples;
    for (int t = 0; t <= 4; ++t) {
      samples.push_back(from + (to - from) * (t / 4.0));
    }
    return Signal(samples);
  };

  VectorXd start(2), goal_center(2);
  start << 0.0, 0.9;  // passes above the obstacle box
  goal_center << 0.9, 0.9;

  SUBCASE("satisfying trajectory certifies and cross-checks") {
    const SoundnessReport rep =
        check_soundness(table, straight_line(start, goal_center), params);
    CHECK(rep.verdict == Verdict::Satisfied);
    CHECK(rep.exact_rho > 0.0);
    CHECK(rep.first_violation == -1);
    REQUIRE(rep.margins.size() == 5);
    for (int t = 0; t <= 4; ++t) {
      CHECK(rep.active[t]);
      CHECK(rep.margins[t] < 0.0);
    }
  }

  SUBCASE("trajectory through the obstacle is rejected with the first t") {
    VectorXd mid(2);
    mid << 0.0, 0.5;
    VectorXd end(2);
    end << 1.0, 0.5;  // crosses the box; also misses the goal
    const SoundnessReport rep =
        check_soundness(table, straight_line(mid, end), params);
    CHECK(rep.verdict == Verdict::NotCertified);
    CHECK(rep.first_violation == 2);  // y = (0.5, 0.5), inside the obstacle
    CHECK(rep.exact_rho < 0.0);
  }

  SUBCASE("inactive timesteps stay at zero margin") {
    const Specification sparse = parse_spec("F[0,2] goal", 4, preds);
    const RunningCostTable sparse_table = compile(sparse);
    const SoundnessReport rep =
        check_soundness(sparse_table, straight_line(start, goal_center),
                        params);
    for (int t = 0; t <= 4; ++t) {
      if (t == 2) {
        CHECK(rep.active[t]);
      } else {
        CHECK_FALSE(rep.active[t]);
        CHECK(rep.margins[t] == 0.0);
      }
    }
  }

  SUBCASE("signal length must equal horizon + 1") {
    std::vector<VectorXd> too_short(3, start);
    CHECK_THROWS_AS(check_soundness(table, Signal(too_short), params),
                    LengthMismatchError);
  }
}

TEST_CASE("boundary contact yields an uncertified, undefined verdict") {
  PredicateTable preds;
  VectorXd one(1);
  one << 1.0;
  preds.emplace("pos", Predicate::affine("pos", one, 0.0));
  const Specification spec = parse_spec("G[0,2] pos", 2, preds);
  const RunningCostTable table = compile(spec);
  std::vector<VectorXd> samples(3, VectorXd::Zero(1));  // mu = 0 exactly
  const SoundnessReport rep =
      check_soundness(table, Signal(samples), SmoothParams{});
  CHECK(rep.verdict == Verdict::NotCertified);
  CHECK(rep.exact_rho == 0.0);
}

TEST_CASE("per-term diagnostics expose source and weighted cost") {
  const PredicateTable preds = scalar_pair();
  const Specification spec = parse_spec("G[0,1] p1 & F[0,1] p2", 1, preds);
  const RunningCostTable table = compile(spec);
  const SmoothParams params;
  const VectorXd y = VectorXd::Constant(1, 2.0);
  const auto diag = diagnose_timestep(table, 1, y, params);
  REQUIRE(diag.size() == 2);
  CHECK(diag[0].source == 0);
  CHECK(diag[1].source == 1);
  CHECK(diag[0].smooth_robustness == doctest::Approx(1.0));
  CHECK(diag[1].smooth_robustness == doctest::Approx(3.0));
  CHECK(diag[1].weighted_cost == doctest::Approx(-3.0));
  CHECK_THROWS_AS(diagnose_timestep(table, 5, y, params),
                  HorizonExceededError);
}
