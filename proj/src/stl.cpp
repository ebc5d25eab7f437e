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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace stlddp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Predicate
// ---------------------------------------------------------------------------

Predicate Predicate::affine(std::string id, VectorXd a, double b) {
  Predicate p;
  p.id = std::move(id);
  p.kind = PredicateKind::Affine;
  p.a = std::move(a);
  p.b = b;
  if (p.a.size() == 0) {
    throw DimensionMismatchError("affine predicate '" + p.id +
                                 "' has empty coefficient vector");
  }
  return p;
}

Predicate Predicate::ball(std::string id, VectorXd center, double radius,
                          double epsilon) {
  Predicate p;
  p.id = std::move(id);
  p.kind = PredicateKind::Ball;
  p.center = std::move(center);
  p.radius = radius;
  p.epsilon = epsilon;
  if (p.radius <= 0.0) {
    throw Error("ball predicate '" + p.id + "' requires radius > 0");
  }
  if (p.epsilon < 0.0) {
    throw Error("ball predicate '" + p.id + "' requires epsilon >= 0");
  }
  return p;
}

Predicate Predicate::box(std::string id, VectorXd lower, VectorXd upper) {
  Predicate p;
  p.id = std::move(id);
  p.kind = PredicateKind::Box;
  p.lower = std::move(lower);
  p.upper = std::move(upper);
  if (p.lower.size() != p.upper.size()) {
    throw DimensionMismatchError("box predicate '" + p.id +
                                 "' has mismatched bound lengths");
  }
  bool any_face = false;
  for (int i = 0; i < p.lower.size(); ++i) {
    const bool lo = std::isfinite(p.lower[i]);
    const bool hi = std::isfinite(p.upper[i]);
    if ((lo || hi) && !(p.lower[i] < p.upper[i])) {
      throw Error("box predicate '" + p.id + "' needs lower < upper in dim " +
                  std::to_string(i));
    }
    any_face = any_face || lo || hi;
  }
  if (!any_face) {
    throw Error("box predicate '" + p.id + "' constrains no dimension");
  }
  return p;
}

int Predicate::output_dim() const {
  switch (kind) {
    case PredicateKind::Affine:
      return static_cast<int>(a.size());
    case PredicateKind::Ball:
      return static_cast<int>(center.size());
    case PredicateKind::Box:
      return static_cast<int>(lower.size());
  }
  return 0;
}

double Predicate::evaluate(const VectorXd& y) const {
  if (y.size() != output_dim()) {
    throw DimensionMismatchError(
        "predicate '" + id + "' expects dimension " +
        std::to_string(output_dim()) + ", got " + std::to_string(y.size()));
  }
  switch (kind) {
    case PredicateKind::Affine:
      return a.dot(y) - b;
    case PredicateKind::Ball: {
      const double s = std::sqrt((y - center).squaredNorm() + epsilon * epsilon);
      return radius - s + epsilon;
    }
    case PredicateKind::Box: {
      double m = kInf;
      for (int i = 0; i < lower.size(); ++i) {
        if (std::isfinite(lower[i])) m = std::min(m, y[i] - lower[i]);
        if (std::isfinite(upper[i])) m = std::min(m, upper[i] - y[i]);
      }
      return m;
    }
  }
  return 0.0;
}

bool Predicate::operator==(const Predicate& o) const {
  if (kind != o.kind || id != o.id) return false;
  switch (kind) {
    case PredicateKind::Affine:
      return a == o.a && b == o.b;
    case PredicateKind::Ball:
      return center == o.center && radius == o.radius && epsilon == o.epsilon;
    case PredicateKind::Box:
      return lower == o.lower && upper == o.upper;
  }
  return false;
}

// ---------------------------------------------------------------------------
// StateFormula
// ---------------------------------------------------------------------------

namespace {

// One affine face of a box: sign * y[dim] - sign * bound >= 0.
Predicate box_face(const Predicate& box, int dim, double coeff, double bound,
                   const char* tag) {
  VectorXd a = VectorXd::Zero(box.lower.size());
  a[dim] = coeff;
  return Predicate::affine(box.id + "." + tag + std::to_string(dim), a,
                           coeff * bound);
}

std::vector<Predicate> box_faces(const Predicate& box) {
  std::vector<Predicate> faces;
  for (int i = 0; i < box.lower.size(); ++i) {
    if (std::isfinite(box.lower[i]))
      faces.push_back(box_face(box, i, 1.0, box.lower[i], "lo"));
    if (std::isfinite(box.upper[i]))
      faces.push_back(box_face(box, i, -1.0, box.upper[i], "hi"));
  }
  return faces;
}

}  // namespace

StateFormula StateFormula::pred(Predicate p) {
  if (p.kind == PredicateKind::Box) {
    std::vector<StateFormula> faces;
    for (auto& f : box_faces(p)) faces.push_back(pred(std::move(f)));
    if (faces.size() == 1) {
      auto node = std::make_shared<Node>(*faces.front().node_);
      node->ref_name = p.id;
      return StateFormula(std::move(node));
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::And;
    node->children = std::move(faces);
    node->ref_name = p.id;
    return StateFormula(std::move(node));
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Pred;
  node->pred = std::move(p);
  return StateFormula(std::move(node));
}

StateFormula StateFormula::neg_pred(Predicate p) {
  if (p.kind == PredicateKind::Box) {
    std::vector<StateFormula> faces;
    for (auto& f : box_faces(p)) faces.push_back(neg_pred(std::move(f)));
    if (faces.size() == 1) {
      auto node = std::make_shared<Node>(*faces.front().node_);
      node->ref_name = p.id;
      node->ref_negated = true;
      return StateFormula(std::move(node));
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::Or;
    node->children = std::move(faces);
    node->ref_name = p.id;
    node->ref_negated = true;
    return StateFormula(std::move(node));
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::NegPred;
  node->pred = std::move(p);
  return StateFormula(std::move(node));
}

StateFormula StateFormula::conj(std::vector<StateFormula> children) {
  if (children.size() < 2) {
    throw FragmentError("conjunction requires at least 2 children");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::And;
  node->children = std::move(children);
  return StateFormula(std::move(node));
}

StateFormula StateFormula::disj(std::vector<StateFormula> children) {
  if (children.size() < 2) {
    throw FragmentError("disjunction requires at least 2 children");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Or;
  node->children = std::move(children);
  return StateFormula(std::move(node));
}

const Predicate& StateFormula::predicate() const {
  if (node_->kind != Kind::Pred && node_->kind != Kind::NegPred) {
    throw Error("predicate() called on a boolean node");
  }
  return node_->pred;
}

const std::vector<StateFormula>& StateFormula::children() const {
  return node_->children;
}

int StateFormula::output_dim() const {
  if (node_->kind == Kind::Pred || node_->kind == Kind::NegPred) {
    return node_->pred.output_dim();
  }
  return node_->children.front().output_dim();
}

bool StateFormula::operator==(const StateFormula& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  if (node_->kind == Kind::Pred || node_->kind == Kind::NegPred) {
    return node_->pred == o.node_->pred;
  }
  return node_->children == o.node_->children;
}

// ---------------------------------------------------------------------------
// PathFormula / Specification / Signal
// ---------------------------------------------------------------------------

PathFormula::PathFormula(Kind kind, std::optional<StateFormula> lhs,
                         StateFormula body, int t1, int t2)
    : kind_(kind), lhs_(std::move(lhs)), body_(std::move(body)), t1_(t1), t2_(t2) {
  if (t1 < 0 || t2 < t1) {
    throw HorizonExceededError("window [" + std::to_string(t1) + "," +
                               std::to_string(t2) +
                               "] violates 0 <= t1 <= t2");
  }
}

PathFormula PathFormula::always(StateFormula body, int t1, int t2) {
  return PathFormula(Kind::Always, std::nullopt, std::move(body), t1, t2);
}

PathFormula PathFormula::eventually(StateFormula body, int t1, int t2) {
  return PathFormula(Kind::Eventually, std::nullopt, std::move(body), t1, t2);
}

PathFormula PathFormula::until(StateFormula lhs, StateFormula rhs, int t1,
                               int t2) {
  return PathFormula(Kind::Until, std::move(lhs), std::move(rhs), t1, t2);
}

const StateFormula& PathFormula::lhs() const {
  if (!lhs_) throw Error("lhs() is only defined for until");
  return *lhs_;
}

int PathFormula::output_dim() const { return body_.output_dim(); }

bool PathFormula::operator==(const PathFormula& o) const {
  if (kind_ != o.kind_ || t1_ != o.t1_ || t2_ != o.t2_) return false;
  if (!(body_ == o.body_)) return false;
  if (kind_ == Kind::Until) return *lhs_ == *o.lhs_;
  return true;
}

Specification::Specification(std::vector<PathFormula> conjuncts_in, int horizon_in)
    : conjuncts(std::move(conjuncts_in)), horizon(horizon_in) {
  if (conjuncts.empty()) {
    throw FragmentError("specification requires at least one path formula");
  }
  if (horizon < 1) {
    throw HorizonExceededError("horizon must be >= 1");
  }
  for (const auto& c : conjuncts) {
    if (c.t2() > horizon) {
      throw HorizonExceededError("window upper bound " + std::to_string(c.t2()) +
                                 " exceeds horizon " + std::to_string(horizon));
    }
  }
}

int Specification::output_dim() const { return conjuncts.front().output_dim(); }

bool Specification::operator==(const Specification& o) const {
  return horizon == o.horizon && conjuncts == o.conjuncts;
}

Signal::Signal(std::vector<VectorXd> samples_in, double dt_in)
    : samples(std::move(samples_in)), dt(dt_in) {
  if (samples.empty()) {
    throw LengthMismatchError("signal must contain at least one sample");
  }
  for (const auto& y : samples) {
    if (y.size() != samples.front().size()) {
      throw DimensionMismatchError("signal samples have mixed dimensions");
    }
  }
}

int Signal::output_dim() const {
  return samples.empty() ? 0 : static_cast<int>(samples.front().size());
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  Ident, Always, Eventually, Until, Not, Amp, Pipe,
  LParen, RParen, LBracket, RBracket, Comma, Int, End
};

struct Token {
  Tok kind;
  std::string text;
  long value = 0;
  int column = 0;  // 1-based
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Always: return "'G'";
    case Tok::Eventually: return "'F'";
    case Tok::Until: return "'U'";
    case Tok::Not: return "'not'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Int: return "integer";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const int col = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      Token t{Tok::Int, text.substr(i, j - i), 0, col};
      t.value = std::stol(t.text);
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      std::string word = text.substr(i, j - i);
      Tok kind = Tok::Ident;
      if (word == "G") kind = Tok::Always;
      else if (word == "F") kind = Tok::Eventually;
      else if (word == "U") kind = Tok::Until;
      else if (word == "not") kind = Tok::Not;
      out.push_back(Token{kind, std::move(word), 0, col});
      i = j;
      continue;
    }
    Tok kind;
    switch (c) {
      case '&': kind = Tok::Amp; break;
      case '|': kind = Tok::Pipe; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case ',': kind = Tok::Comma; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", col);
    }
    out.push_back(Token{kind, std::string(1, c), 0, col});
    ++i;
  }
  out.push_back(Token{Tok::End, "", 0, static_cast<int>(text.size()) + 1});
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, const PredicateTable& predicates)
      : tokens_(tokenize(text)), predicates_(predicates) {}

  std::vector<PathFormula> parse() {
    std::vector<PathFormula> conjuncts;
    conjuncts.push_back(parse_path());
    while (peek().kind == Tok::Amp) {
      advance();
      conjuncts.push_back(parse_path());
    }
    if (peek().kind == Tok::Pipe) {
      throw FragmentError("disjunction between path formulas at column " +
                          std::to_string(peek().column));
    }
    expect(Tok::End);
    return conjuncts;
  }

 private:
  const Token& peek(int ahead = 0) const {
    const size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& advance() { return tokens_[pos_++]; }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) {
      throw SyntaxError(std::string("expected ") + tok_name(kind) + ", found " +
                        tok_name(peek().kind), peek().column);
    }
    return tokens_[pos_++];
  }

  std::pair<int, int> parse_window() {
    expect(Tok::LBracket);
    const long t1 = expect(Tok::Int).value;
    expect(Tok::Comma);
    const long t2 = expect(Tok::Int).value;
    expect(Tok::RBracket);
    return {static_cast<int>(t1), static_cast<int>(t2)};
  }

  PathFormula parse_path() {
    const Token& t = peek();
    if (t.kind == Tok::Always || t.kind == Tok::Eventually) {
      advance();
      auto [t1, t2] = parse_window();
      StateFormula body = parse_atom();
      return t.kind == Tok::Always ? PathFormula::always(std::move(body), t1, t2)
                                   : PathFormula::eventually(std::move(body), t1, t2);
    }
    // Otherwise a state atom that must be the left operand of an until.
    const int start_col = t.column;
    StateFormula lhs = parse_atom();
    if (peek().kind == Tok::Pipe) {
      throw FragmentError("disjunction between path formulas at column " +
                          std::to_string(peek().column) +
                          " (parenthesize state-level '|')");
    }
    if (peek().kind != Tok::Until) {
      throw FragmentError("bare state formula at path level at column " +
                          std::to_string(start_col) +
                          " (expected a temporal operator)");
    }
    advance();
    auto [t1, t2] = parse_window();
    StateFormula rhs = parse_atom();
    return PathFormula::until(std::move(lhs), std::move(rhs), t1, t2);
  }

  // atom := ident | 'not' atom | '(' state ')'
  StateFormula parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        advance();
        return resolve(t, false);
      }
      case Tok::Not: {
        advance();
        const Token& target = peek();
        if (target.kind == Tok::Ident) {
          advance();
          return resolve(target, true);
        }
        if (target.kind == Tok::LParen) {
          // Allow 'not (ident)'; anything compound underneath is out of
          // fragment.
          advance();
          const Token& inner = peek();
          if (inner.kind == Tok::Ident && peek(1).kind == Tok::RParen) {
            advance();
            advance();
            return resolve(inner, true);
          }
          throw FragmentError("negation above a non-predicate at column " +
                              std::to_string(t.column));
        }
        if (target.kind == Tok::Not) {
          throw FragmentError("negation above a non-predicate at column " +
                              std::to_string(t.column) +
                              " (double negation)");
        }
        throw SyntaxError(std::string("expected identifier after 'not', found ") +
                          tok_name(target.kind), target.column);
      }
      case Tok::LParen: {
        advance();
        StateFormula inner = parse_state();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Always:
      case Tok::Eventually:
      case Tok::Until:
        throw FragmentError("nested temporal operator at column " +
                            std::to_string(t.column));
      default:
        throw SyntaxError(std::string("expected identifier, 'not', or '(', found ") +
                          tok_name(t.kind), t.column);
    }
  }

  // state := sconj ('|' sconj)* ; sconj := atom ('&' atom)*
  StateFormula parse_state() {
    std::vector<StateFormula> alts;
    alts.push_back(parse_sconj());
    while (peek().kind == Tok::Pipe) {
      advance();
      alts.push_back(parse_sconj());
    }
    if (alts.size() == 1) return std::move(alts.front());
    return StateFormula::disj(std::move(alts));
  }

  StateFormula parse_sconj() {
    std::vector<StateFormula> parts;
    parts.push_back(parse_atom());
    while (peek().kind == Tok::Amp) {
      advance();
      parts.push_back(parse_atom());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return StateFormula::conj(std::move(parts));
  }

  StateFormula resolve(const Token& ident, bool negated) {
    auto it = predicates_.find(ident.text);
    if (it == predicates_.end()) {
      throw UnknownPredicateError(ident.text);
    }
    return negated ? StateFormula::neg_pred(it->second)
                   : StateFormula::pred(it->second);
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  const PredicateTable& predicates_;
};

}  // namespace

Specification parse_spec(const std::string& text, int horizon,
                         const PredicateTable& predicates) {
  Parser parser(text, predicates);
  Specification spec(parser.parse(), horizon);
  validate_fragment(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

void print_state(const StateFormula& f, std::ostream& os, bool atom_position);

void print_named_or(const StateFormula& f, std::ostream& os) {
  if (!f.ref_name().empty()) {
    if (f.ref_negated()) os << "not ";
    os << f.ref_name();
    return;
  }
  switch (f.kind()) {
    case StateFormula::Kind::Pred:
      os << f.predicate().id;
      break;
    case StateFormula::Kind::NegPred:
      os << "not " << f.predicate().id;
      break;
    case StateFormula::Kind::And: {
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) os << " & ";
        first = false;
        print_state(c, os, true);
      }
      break;
    }
    case StateFormula::Kind::Or: {
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) os << " | ";
        first = false;
        print_state(c, os, true);
      }
      break;
    }
  }
}

// In atom position anything compound (or a negated name) needs parentheses.
void print_state(const StateFormula& f, std::ostream& os, bool atom_position) {
  const bool named = !f.ref_name().empty();
  const bool plain_pred =
      (named && !f.ref_negated()) || (!named && f.kind() == StateFormula::Kind::Pred);
  if (atom_position && !plain_pred) {
    os << "(";
    print_named_or(f, os);
    os << ")";
  } else {
    print_named_or(f, os);
  }
}

}  // namespace

std::string to_text(const StateFormula& f) {
  std::ostringstream os;
  print_state(f, os, false);
  return os.str();
}

std::string to_text(const PathFormula& f) {
  std::ostringstream os;
  switch (f.kind()) {
    case PathFormula::Kind::Always:
      os << "G[" << f.t1() << "," << f.t2() << "] ";
      print_state(f.body(), os, true);
      break;
    case PathFormula::Kind::Eventually:
      os << "F[" << f.t1() << "," << f.t2() << "] ";
      print_state(f.body(), os, true);
      break;
    case PathFormula::Kind::Until:
      print_state(f.lhs(), os, true);
      os << " U[" << f.t1() << "," << f.t2() << "] ";
      print_state(f.body(), os, true);
      break;
  }
  return os.str();
}

std::string to_text(const Specification& s) {
  std::ostringstream os;
  bool first = true;
  for (const auto& c : s.conjuncts) {
    if (!first) os << " & ";
    first = false;
    os << to_text(c);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Exact semantics
// ---------------------------------------------------------------------------

double exact_robustness(const StateFormula& f, const VectorXd& y) {
  switch (f.kind()) {
    case StateFormula::Kind::Pred:
      return f.predicate().evaluate(y);
    case StateFormula::Kind::NegPred:
      return -f.predicate().evaluate(y);
    case StateFormula::Kind::And: {
      double v = kInf;
      for (const auto& c : f.children()) v = std::min(v, exact_robustness(c, y));
      return v;
    }
    case StateFormula::Kind::Or: {
      double v = -kInf;
      for (const auto& c : f.children()) v = std::max(v, exact_robustness(c, y));
      return v;
    }
  }
  return 0.0;
}

double exact_robustness(const StateFormula& f, const Signal& sig, int t) {
  if (t < 0 || t >= sig.length()) {
    throw HorizonExceededError("sample index " + std::to_string(t) +
                               " outside signal of length " +
                               std::to_string(sig.length()));
  }
  return exact_robustness(f, sig.samples[t]);
}

double exact_robustness(const PathFormula& f, const Signal& sig, int t) {
  if (sig.samples.empty()) {
    throw LengthMismatchError("robustness of an empty signal is undefined");
  }
  const int last = t + f.t2();
  if (t < 0 || last >= sig.length()) {
    throw HorizonExceededError(
        "window reaches index " + std::to_string(last) +
        " but signal has indices 0.." + std::to_string(sig.length() - 1));
  }
  switch (f.kind()) {
    case PathFormula::Kind::Always: {
      double v = kInf;
      for (int tp = t + f.t1(); tp <= t + f.t2(); ++tp) {
        v = std::min(v, exact_robustness(f.body(), sig.samples[tp]));
      }
      return v;
    }
    case PathFormula::Kind::Eventually: {
      double v = -kInf;
      for (int tp = t + f.t1(); tp <= t + f.t2(); ++tp) {
        v = std::max(v, exact_robustness(f.body(), sig.samples[tp]));
      }
      return v;
    }
    case PathFormula::Kind::Until: {
      // max over t' of min(rho_rhs(t'), min_{t'' in [t+t1, t')} rho_lhs(t'')).
      double best = -kInf;
      double lhs_running = kInf;
      for (int tp = t + f.t1(); tp <= t + f.t2(); ++tp) {
        const double cand =
            std::min(exact_robustness(f.body(), sig.samples[tp]), lhs_running);
        best = std::max(best, cand);
        lhs_running =
            std::min(lhs_running, exact_robustness(f.lhs(), sig.samples[tp]));
      }
      return best;
    }
  }
  return 0.0;
}

double exact_robustness(const Specification& spec, const Signal& sig) {
  double v = kInf;
  for (const auto& c : spec.conjuncts) {
    v = std::min(v, exact_robustness(c, sig, 0));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Fragment validation
// ---------------------------------------------------------------------------

namespace {

void validate_state(const StateFormula& f) {
  switch (f.kind()) {
    case StateFormula::Kind::Pred:
    case StateFormula::Kind::NegPred:
      if (f.predicate().kind == PredicateKind::Box) {
        throw FragmentError("box predicate '" + f.predicate().id +
                            "' must be expanded before use in a formula");
      }
      return;
    case StateFormula::Kind::And:
    case StateFormula::Kind::Or:
      if (f.children().size() < 2) {
        throw FragmentError("boolean node with fewer than 2 children");
      }
      for (const auto& c : f.children()) validate_state(c);
      return;
  }
}

}  // namespace

void validate_fragment(const PathFormula& f, int horizon) {
  if (f.t1() < 0 || f.t2() < f.t1()) {
    throw HorizonExceededError("window violates 0 <= t1 <= t2");
  }
  if (f.t2() > horizon) {
    throw HorizonExceededError("window upper bound " + std::to_string(f.t2()) +
                               " exceeds horizon " + std::to_string(horizon));
  }
  validate_state(f.body());
  if (f.kind() == PathFormula::Kind::Until) validate_state(f.lhs());
}

void validate_fragment(const Specification& spec) {
  if (spec.conjuncts.empty()) {
    throw FragmentError("specification requires at least one path formula");
  }
  const int p = spec.output_dim();
  for (const auto& c : spec.conjuncts) {
    validate_fragment(c, spec.horizon);
    if (c.output_dim() != p) {
      throw DimensionMismatchError("conjuncts disagree on output dimension");
    }
  }
}

}  // namespace stlddp
