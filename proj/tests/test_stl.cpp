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

#include "stlddp/stl.hpp"

#include <random>
#include <string>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace stlddp;

namespace {

PredicateTable scalar_preds(const oracles::RefSpec& ref) {
  PredicateTable preds;
  for (size_t i = 0; i < ref.predicates.size(); ++i) {
    const auto& p = ref.predicates[i];
    preds.emplace("p" + std::to_string(i),
                  Predicate::affine("p" + std::to_string(i), p.a, p.b));
  }
  return preds;
}

Signal make_signal(const std::vector<Eigen::VectorXd>& samples) {
  return Signal(samples);
}

PredicateTable planar_preds() {
  PredicateTable preds;
  VectorXd lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << 1.0, 1.0;
  preds.emplace("box", Predicate::box("box", lo, hi));
  VectorXd a(2);
  a << 1.0, 0.0;
  preds.emplace("right", Predicate::affine("right", a, 0.5));
  preds.emplace("near", Predicate::ball("near", VectorXd::Zero(2), 1.0, 0.01));
  return preds;
}

}  // namespace

TEST_CASE("predicate construction validates its parameters") {
  CHECK_THROWS_AS(Predicate::affine("a", VectorXd(), 0.0), Error);
  CHECK_THROWS_AS(Predicate::ball("b", VectorXd::Zero(2), -1.0, 0.01), Error);
  CHECK_THROWS_AS(Predicate::ball("b", VectorXd::Zero(2), 1.0, -0.5), Error);

  VectorXd lo(2), hi(2);
  lo << 0.0, 2.0;
  hi << 1.0, 1.0;
  CHECK_THROWS_AS(Predicate::box("box", lo, hi), Error);

  const double inf = oracles::kInf;
  VectorXd all_lo(1), all_hi(1);
  all_lo << -inf;
  all_hi << inf;
  CHECK_THROWS_AS(Predicate::box("box", all_lo, all_hi), Error);
}

TEST_CASE("box margin is the tightest face margin") {
  VectorXd lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << 2.0, 1.0;
  const Predicate box = Predicate::box("box", lo, hi);
  VectorXd y(2);
  y << 0.5, 0.25;
  CHECK(box.evaluate(y) == doctest::Approx(0.25));
  y << -0.5, 0.5;
  CHECK(box.evaluate(y) == doctest::Approx(-0.5));

  // Half-open box: only finite faces participate.
  VectorXd lo1(1), hi1(1);
  lo1 << 0.0;
  hi1 << oracles::kInf;
  const Predicate half = Predicate::box("half", lo1, hi1);
  VectorXd z(1);
  z << 42.0;
  CHECK(half.evaluate(z) == doctest::Approx(42.0));
}

TEST_CASE("box formulas expand into affine faces") {
  VectorXd lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << 1.0, 2.0;
  const Predicate box = Predicate::box("box", lo, hi);

  const StateFormula inside = StateFormula::pred(box);
  REQUIRE(inside.kind() == StateFormula::Kind::And);
  CHECK(inside.children().size() == 4);
  CHECK(inside.ref_name() == "box");
  CHECK_FALSE(inside.ref_negated());

  const StateFormula outside = StateFormula::neg_pred(box);
  REQUIRE(outside.kind() == StateFormula::Kind::Or);
  CHECK(outside.children().size() == 4);
  CHECK(outside.ref_negated());
  for (const StateFormula& face : outside.children()) {
    CHECK(face.kind() == StateFormula::Kind::NegPred);
  }

  // The expansion preserves the margin semantics.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> entry(-1.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    VectorXd y(2);
    y << entry(rng), entry(rng);
    CHECK(exact_robustness(inside, y) == doctest::Approx(box.evaluate(y)));
    CHECK(exact_robustness(outside, y) == doctest::Approx(-box.evaluate(y)));
  }
}

TEST_CASE("one-face boxes expand to a single literal") {
  VectorXd lo(1), hi(1);
  lo << 0.5;
  hi << oracles::kInf;
  const Predicate half = Predicate::box("half", lo, hi);
  const StateFormula inside = StateFormula::pred(half);
  CHECK(inside.kind() == StateFormula::Kind::Pred);
  CHECK(inside.ref_name() == "half");
  const StateFormula outside = StateFormula::neg_pred(half);
  CHECK(outside.kind() == StateFormula::Kind::NegPred);
  CHECK(outside.ref_negated());
}

TEST_CASE("formula builders enforce arity and window order") {
  const PredicateTable preds = planar_preds();
  const StateFormula p = StateFormula::pred(preds.at("right"));
  CHECK_THROWS_AS(StateFormula::conj({p}), FragmentError);
  CHECK_THROWS_AS(StateFormula::disj({p}), FragmentError);
  CHECK_THROWS_AS(PathFormula::always(p, 3, 2), HorizonExceededError);
  CHECK_THROWS_AS(PathFormula::eventually(p, -1, 2), HorizonExceededError);
  CHECK_THROWS_AS(Specification({}, 10), FragmentError);
  CHECK_THROWS_AS(Specification({PathFormula::always(p, 0, 5)}, 4),
                  HorizonExceededError);
}

TEST_CASE("signals validate their samples") {
  CHECK_THROWS_AS(Signal(std::vector<VectorXd>{}), LengthMismatchError);
  const std::vector<VectorXd> mixed = {VectorXd::Zero(2), VectorXd::Zero(3)};
  CHECK_THROWS_AS(Signal{mixed}, DimensionMismatchError);
}

TEST_CASE("parser handles the full grammar") {
  const PredicateTable preds = planar_preds();

  SUBCASE("always over an identifier") {
    const Specification s = parse_spec("G[0,5] right", 10, preds);
    REQUIRE(s.conjuncts.size() == 1);
    CHECK(s.conjuncts[0].kind() == PathFormula::Kind::Always);
    CHECK(s.conjuncts[0].t1() == 0);
    CHECK(s.conjuncts[0].t2() == 5);
  }

  SUBCASE("conjunction of paths with eventually and until") {
    const Specification s = parse_spec(
        "G[0,10] not box & F[2,8] (right | near) & (not box) U[0,9] near", 10,
        preds);
    REQUIRE(s.conjuncts.size() == 3);
    CHECK(s.conjuncts[0].kind() == PathFormula::Kind::Always);
    CHECK(s.conjuncts[1].kind() == PathFormula::Kind::Eventually);
    CHECK(s.conjuncts[2].kind() == PathFormula::Kind::Until);
  }

  SUBCASE("whitespace is insignificant") {
    const Specification a = parse_spec("G[0,5](right&near)", 10, preds);
    const Specification b = parse_spec("  G [ 0 , 5 ] ( right & near ) ", 10,
                                       preds);
    CHECK(a == b);
  }

  SUBCASE("state-level precedence: & binds tighter than |") {
    const Specification s =
        parse_spec("F[0,5] (right & near | not box)", 10, preds);
    const StateFormula& body = s.conjuncts[0].body();
    REQUIRE(body.kind() == StateFormula::Kind::Or);
    CHECK(body.children().size() == 2);
    CHECK(body.children()[0].kind() == StateFormula::Kind::And);
  }
}

TEST_CASE("parser reports actionable errors") {
  const PredicateTable preds = planar_preds();

  SUBCASE("unknown predicate") {
    CHECK_THROWS_AS(parse_spec("G[0,5] ghost", 10, preds),
                    UnknownPredicateError);
  }
  SUBCASE("syntax errors carry a column") {
    try {
      parse_spec("G[0,5] right @", 10, preds);
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
  }
  SUBCASE("window out of order") {
    CHECK_THROWS_AS(parse_spec("G[5,2] right", 10, preds),
                    HorizonExceededError);
  }
  SUBCASE("window beyond the horizon") {
    CHECK_THROWS_AS(parse_spec("G[0,11] right", 10, preds),
                    HorizonExceededError);
  }
  SUBCASE("fragment violations name the rule") {
    CHECK_THROWS_WITH_AS(parse_spec("G[0,5] right | F[0,5] near", 10, preds),
                         doctest::Contains("disjunction between path"),
                         FragmentError);
    CHECK_THROWS_WITH_AS(parse_spec("right", 10, preds),
                         doctest::Contains("bare state formula"),
                         FragmentError);
    CHECK_THROWS_WITH_AS(parse_spec("G[0,5] (F[0,2] right)", 10, preds),
                         doctest::Contains("nested temporal"), FragmentError);
    CHECK_THROWS_WITH_AS(parse_spec("F[0,5] not (right & near)", 10, preds),
                         doctest::Contains("negation above a non-predicate"),
                         FragmentError);
  }
  SUBCASE("negation of a parenthesized single predicate is allowed") {
    CHECK_NOTHROW(parse_spec("G[0,5] not (box)", 10, preds));
  }
}

TEST_CASE("printing round-trips through the parser") {
  const PredicateTable preds = planar_preds();
  for (const char* text :
       {"G[0,10] not box", "F[2,8] (right | near)",
        "(not box) U[0,9] near", "G[0,10] not box & F[0,10] (right & near)",
        "F[0,3] (right & near | not box)"}) {
    const Specification first = parse_spec(text, 10, preds);
    const Specification second = parse_spec(to_text(first), 10, preds);
    CHECK(first == second);
  }
}

TEST_CASE("exact robustness agrees with hand-computed windows") {
  PredicateTable preds;
  VectorXd one(1);
  one << 1.0;
  preds.emplace("pos", Predicate::affine("pos", one, 0.0));

  std::vector<VectorXd> samples;
  for (double v : {-1.0, 2.0, 3.0, -0.5, 1.0}) {
    samples.push_back(VectorXd::Constant(1, v));
  }
  const Signal sig = make_signal(samples);

  const Specification always = parse_spec("G[1,3] pos", 4, preds);
  CHECK(exact_robustness(always, sig) == doctest::Approx(-0.5));

  const Specification eventually = parse_spec("F[0,2] pos", 4, preds);
  CHECK(exact_robustness(eventually, sig) == doctest::Approx(3.0));

  // Until: at t' = 0 the hold window [0,0) is empty (+inf) so the score is
  // the target value -1; every later t' pays the hold minimum -1 from t=0.
  const Specification until = parse_spec("pos U[0,3] pos", 4, preds);
  CHECK(exact_robustness(until, sig) == doctest::Approx(-1.0));

  // Shifted evaluation start for a path formula.
  const PathFormula f = PathFormula::eventually(
      StateFormula::pred(preds.at("pos")), 0, 1);
  CHECK(exact_robustness(f, sig, 3) == doctest::Approx(1.0));
}

TEST_CASE("until with an unreachable hold still scores the first instant") {
  // If the target already holds at t1, the empty hold-window minimum must
  // not drag the score down.
  PredicateTable preds;
  VectorXd one(1);
  one << 1.0;
  preds.emplace("pos", Predicate::affine("pos", one, 0.0));
  preds.emplace("neg", Predicate::affine("neg", -one, 0.0));

  std::vector<VectorXd> samples(3, VectorXd::Constant(1, 2.0));
  const Signal sig = make_signal(samples);
  // Hold formula is always false (-2), target true (2) from the start.
  const Specification s = parse_spec("neg U[0,2] pos", 2, preds);
  CHECK(exact_robustness(s, sig) == doctest::Approx(2.0));
}

TEST_CASE("brute-force equivalence on random in-fragment formulas") {
  std::mt19937_64 rng(101);
  const std::vector<double> grid = {-1.0, 0.5, 2.0};
  int mismatches = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int horizon = 1 + static_cast<int>(rng() % 5);  // lengths 2..6
    const oracles::RefSpec ref = oracles::random_spec(rng, horizon);
    const PredicateTable preds = scalar_preds(ref);
    const Specification spec =
        parse_spec(oracles::to_spec_text(ref), horizon, preds);
    oracles::for_each_grid_signal(
        horizon + 1, grid, [&](const std::vector<VectorXd>& y) {
          const double got = exact_robustness(spec, make_signal(y));
          const double want = oracles::ref_rho(ref, y);
          if (std::abs(got - want) > 1e-12) ++mismatches;
        });
  }
  CHECK(mismatches == 0);
}

TEST_CASE("robustness rejects too-short signals") {
  PredicateTable preds;
  VectorXd one(1);
  one << 1.0;
  preds.emplace("pos", Predicate::affine("pos", one, 0.0));
  const Specification s = parse_spec("G[0,4] pos", 4, preds);
  std::vector<VectorXd> samples(3, VectorXd::Constant(1, 1.0));
  CHECK_THROWS_AS(exact_robustness(s, make_signal(samples)),
                  HorizonExceededError);
}

TEST_CASE("validate_fragment rejects malformed structures") {
  const PredicateTable preds = planar_preds();
  const Specification ok = parse_spec("G[0,5] right", 10, preds);
  CHECK_NOTHROW(validate_fragment(ok));
}
