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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stlddp/errors.hpp"

namespace stlddp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

enum class PredicateKind { Affine, Ball, Box };

// A predicate pi = (mu(y) >= 0) over the output vector y in R^p.
//
//   affine: mu(y) = a.y - b
//   ball:   mu(y) = r - sqrt(|y - c|^2 + eps^2) + eps          (eps >= 0)
//   box:    per-dimension bounds; used as a conjunction of affine faces
//           when it appears in a formula. +-inf marks an unconstrained
//           dimension.
//
// The ball form is smoothed so it has two derivatives at the center; eps = 0
// recovers the plain norm predicate.
struct Predicate {
  std::string id;
  PredicateKind kind = PredicateKind::Affine;

  VectorXd a;
  double b = 0.0;

  VectorXd center;
  double radius = 0.0;
  double epsilon = 1e-3;

  VectorXd lower;
  VectorXd upper;

  static Predicate affine(std::string id, VectorXd a, double b);
  static Predicate ball(std::string id, VectorXd center, double radius,
                        double epsilon = 1e-3);
  static Predicate box(std::string id, VectorXd lower, VectorXd upper);

  int output_dim() const;

  // mu(y). For a box this is the min over its face margins.
  double evaluate(const VectorXd& y) const;

  bool operator==(const Predicate& other) const;
};

using PredicateTable = std::map<std::string, Predicate>;

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

// Boolean combination of predicates over a single timestep's output, in
// positive normal form: negation sits directly above a predicate.
class StateFormula {
 public:
  enum class Kind { Pred, NegPred, And, Or };

  // Box predicates expand here: pred(box) becomes the conjunction of its
  // affine faces, neg_pred(box) the disjunction of their negations.
  static StateFormula pred(Predicate p);
  static StateFormula neg_pred(Predicate p);
  static StateFormula conj(std::vector<StateFormula> children);
  static StateFormula disj(std::vector<StateFormula> children);

  Kind kind() const { return node_->kind; }
  const Predicate& predicate() const;
  const std::vector<StateFormula>& children() const;
  int output_dim() const;

  // Name of the predicate-table entry this subtree came from, when it was
  // built from one ("obs" for an expanded box). Used by the printer.
  const std::string& ref_name() const { return node_->ref_name; }
  bool ref_negated() const { return node_->ref_negated; }

  bool operator==(const StateFormula& other) const;

 private:
  struct Node {
    Kind kind;
    Predicate pred;                      // Pred / NegPred only
    std::vector<StateFormula> children;  // And / Or only
    std::string ref_name;
    bool ref_negated = false;
  };

  explicit StateFormula(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Temporal operator over state formulas with an integer timestep window.
class PathFormula {
 public:
  enum class Kind { Always, Eventually, Until };

  static PathFormula always(StateFormula body, int t1, int t2);
  static PathFormula eventually(StateFormula body, int t1, int t2);
  static PathFormula until(StateFormula lhs, StateFormula rhs, int t1, int t2);

  Kind kind() const { return kind_; }
  int t1() const { return t1_; }
  int t2() const { return t2_; }
  // Body for Always/Eventually; rhs (the target) for Until.
  const StateFormula& body() const { return body_; }
  // Until only.
  const StateFormula& lhs() const;

  int output_dim() const;
  bool operator==(const PathFormula& other) const;

 private:
  PathFormula(Kind kind, std::optional<StateFormula> lhs, StateFormula body,
              int t1, int t2);

  Kind kind_;
  std::optional<StateFormula> lhs_;
  StateFormula body_;
  int t1_;
  int t2_;
};

// Conjunction of path formulas over a fixed horizon of T timesteps
// (signal indices 0..T).
struct Specification {
  std::vector<PathFormula> conjuncts;
  int horizon = 0;

  Specification(std::vector<PathFormula> conjuncts, int horizon);

  int output_dim() const;
  bool operator==(const Specification& other) const;
};

// Time-indexed sequence of output vectors y_0..y_T. dt is metadata only;
// all semantics are index-based.
struct Signal {
  std::vector<VectorXd> samples;
  double dt = 0.0;

  Signal() = default;
  Signal(std::vector<VectorXd> samples, double dt = 0.0);

  int length() const { return static_cast<int>(samples.size()); }
  int output_dim() const;
};

// ---------------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------------

// Grammar (ASCII, whitespace insignificant):
//
//   spec   := path ('&' path)*
//   path   := 'G' window atom | 'F' window atom | atom 'U' window atom
//   window := '[' int ',' int ']'
//   atom   := ident | 'not' atom | '(' state ')'
//   state  := sconj ('|' sconj)*
//   sconj  := atom ('&' atom)*
//
// '&' between paths binds looser than the temporal operators; 'G', 'F', 'U',
// and 'not' are reserved words. Disjunction is state-level only, negation
// predicate-level only, and temporal operators never nest.
Specification parse_spec(const std::string& text, int horizon,
                         const PredicateTable& predicates);

std::string to_text(const StateFormula& f);
std::string to_text(const PathFormula& f);
std::string to_text(const Specification& s);

// ---------------------------------------------------------------------------
// Exact quantitative semantics (ground-truth oracle)
// ---------------------------------------------------------------------------

// rho of a state formula on a single output sample (true min/max).
double exact_robustness(const StateFormula& f, const VectorXd& y);

// rho^phi((Y,t)) by the exact recursion. For until, the left operand is
// enforced only on [t+t1, t'), not from t.
double exact_robustness(const PathFormula& f, const Signal& sig, int t);
double exact_robustness(const StateFormula& f, const Signal& sig, int t);

// Full specification at t = 0: min over conjuncts.
double exact_robustness(const Specification& spec, const Signal& sig);

// Checks the structural invariants that the builders cannot enforce against
// a horizon: window bounds within [0, T], And/Or arity, non-empty conjuncts.
// Throws FragmentError / HorizonExceededError naming the violated rule.
void validate_fragment(const Specification& spec);
void validate_fragment(const PathFormula& f, int horizon);

}  // namespace stlddp
