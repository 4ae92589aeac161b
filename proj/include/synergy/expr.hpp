/*
 * Copyright 2026 The Synergy Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// A small analytic expression language.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' nat)?
//   atom   := number | 'x' nat | ident | func '(' expr ')' | '(' expr ')'
//           | '-' atom
//   func   := sin | cos | exp
//
// Named constants must be bound by the caller; there is no implicit
// multiplication. Every node is real-analytic, so every expression is
// infinitely differentiable.
//
// Nodes are immutable and shared. The node builders fold constants and
// flatten nested sums/products; no other simplification happens.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "synergy/combinatorics.hpp"
#include "synergy/core.hpp"
#include "synergy/error.hpp"
#include "synergy/polynomial.hpp"

namespace synergy {

enum class Op { kConstant, kVariable, kNegate, kAdd, kMultiply, kPower, kSin, kCos, kExp };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  Op op = Op::kConstant;
  double value = 0.0;  // kConstant
  int index = 0;       // kVariable: 1-based feature; kPower: exponent
  std::vector<NodePtr> children;
  std::uint64_t depends_on = 0;  // variables reachable from this node
  bool transcendental = false;   // contains sin/cos/exp
};

namespace node {

inline NodePtr make(Op op, std::vector<NodePtr> children, double value = 0.0,
                    int index = 0) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->value = value;
  n->index = index;
  n->children = std::move(children);
  for (const auto& c : n->children) {
    n->depends_on |= c->depends_on;
    n->transcendental = n->transcendental || c->transcendental;
  }
  if (op == Op::kVariable) n->depends_on = std::uint64_t{1} << (index - 1);
  if (op == Op::kSin || op == Op::kCos || op == Op::kExp) n->transcendental = true;
  return n;
}

inline bool is_constant(const NodePtr& n) { return n->op == Op::kConstant; }
inline bool is_constant(const NodePtr& n, double v) {
  return n->op == Op::kConstant && n->value == v;
}

inline NodePtr constant(double v) { return make(Op::kConstant, {}, v); }
inline NodePtr variable(int i) { return make(Op::kVariable, {}, 0.0, i); }

inline NodePtr negate(NodePtr a) {
  if (is_constant(a)) return constant(-a->value);
  return make(Op::kNegate, {std::move(a)});
}

// Folded constant goes last.
inline NodePtr add(const std::vector<NodePtr>& terms) {
  std::vector<NodePtr> out;
  double folded = 0.0;
  bool any_constant = false;
  auto take = [&](const NodePtr& t) {
    if (is_constant(t)) {
      folded += t->value;
      any_constant = true;
    } else {
      out.push_back(t);
    }
  };
  for (const auto& t : terms) {
    if (t->op == Op::kAdd) {
      for (const auto& c : t->children) take(c);
    } else {
      take(t);
    }
  }
  if (any_constant && (folded != 0.0 || out.empty())) out.push_back(constant(folded));
  if (out.empty()) return constant(0.0);
  if (out.size() == 1) return out.front();
  return make(Op::kAdd, std::move(out));
}
inline NodePtr add(NodePtr a, NodePtr b) { return add(std::vector<NodePtr>{std::move(a), std::move(b)}); }

// Folded constant goes first.
inline NodePtr multiply(const std::vector<NodePtr>& factors) {
  std::vector<NodePtr> out;
  double folded = 1.0;
  auto take = [&](const NodePtr& f) {
    if (is_constant(f)) {
      folded *= f->value;
    } else {
      out.push_back(f);
    }
  };
  for (const auto& f : factors) {
    if (f->op == Op::kMultiply) {
      for (const auto& c : f->children) take(c);
    } else {
      take(f);
    }
  }
  if (folded == 0.0) return constant(0.0);
  if (out.empty()) return constant(folded);
  if (folded != 1.0) out.insert(out.begin(), constant(folded));
  if (out.size() == 1) return out.front();
  return make(Op::kMultiply, std::move(out));
}
inline NodePtr multiply(NodePtr a, NodePtr b) {
  return multiply(std::vector<NodePtr>{std::move(a), std::move(b)});
}

inline NodePtr power(NodePtr base, int exponent) {
  if (exponent < 0) throw DomainError("negative exponents are not supported");
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (is_constant(base)) return constant(ipow(base->value, exponent));
  return make(Op::kPower, {std::move(base)}, 0.0, exponent);
}

inline NodePtr sin(NodePtr a) {
  if (is_constant(a)) return constant(std::sin(a->value));
  return make(Op::kSin, {std::move(a)});
}
inline NodePtr cos(NodePtr a) {
  if (is_constant(a)) return constant(std::cos(a->value));
  return make(Op::kCos, {std::move(a)});
}
inline NodePtr exp(NodePtr a) {
  if (is_constant(a)) return constant(std::exp(a->value));
  return make(Op::kExp, {std::move(a)});
}

}  // namespace node

// An expression over features x1..xn.
class Expr {
 public:
  Expr() : n_(1), root_(node::constant(0.0)) {}
  Expr(int n, NodePtr root) : n_(n), root_(std::move(root)) {
    check_dimension(n_);
    if (std::bit_width(root_->depends_on) > static_cast<unsigned>(n_)) {
      throw DomainError("expression references a feature beyond n=" +
                        std::to_string(n_));
    }
  }

  int dim() const { return n_; }
  const NodePtr& root() const { return root_; }
  bool is_transcendental() const { return root_->transcendental; }
  // Features the expression actually reads.
  Coalition dependencies() const { return Coalition(root_->depends_on); }

 private:
  int n_;
  NodePtr root_;
};

inline bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (a.op != b.op || a.children.size() != b.children.size()) return false;
  switch (a.op) {
    case Op::kConstant:
      if (a.value != b.value) return false;
      break;
    case Op::kVariable:
    case Op::kPower:
      if (a.index != b.index) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

inline bool operator==(const Expr& a, const Expr& b) {
  return a.dim() == b.dim() && structurally_equal(*a.root(), *b.root());
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, int n, const std::map<std::string, double>& bindings)
      : src_(src), n_(n), bindings_(bindings) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                  src_[pos_] == '\n' || src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(std::string("expected '") + c + "'");
    }
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }

  NodePtr parse_expr() {
    std::vector<NodePtr> terms{parse_term()};
    while (true) {
      if (accept('+')) {
        terms.push_back(parse_term());
      } else if (accept('-')) {
        terms.push_back(node::negate(parse_term()));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms.front() : node::add(terms);
  }

  NodePtr parse_term() {
    std::vector<NodePtr> factors{parse_factor()};
    while (accept('*')) factors.push_back(parse_factor());
    return factors.size() == 1 ? factors.front() : node::multiply(factors);
  }

  NodePtr parse_factor() {
    NodePtr base = parse_atom();
    if (accept('^')) {
      skip_ws();
      if (pos_ >= src_.size() || !is_digit(src_[pos_])) {
        fail("exponent must be a non-negative integer");
      }
      const std::size_t start = pos_;
      long value = 0;
      while (pos_ < src_.size() && is_digit(src_[pos_])) {
        value = value * 10 + (src_[pos_] - '0');
        if (value > kMaxPolynomialDegree * 16) {
          pos_ = start;
          fail("exponent too large");
        }
        ++pos_;
      }
      return node::power(std::move(base), static_cast<int>(value));
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      return node::negate(parse_atom());
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (is_digit(c) || c == '.') return parse_number();
    if (is_alpha(c)) return parse_identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && is_digit(src_[look])) {
        pos_ = look;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("malformed number");
    }
    return node::constant(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));

    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      if (name[1] == '0' || name.size() > 4) {
        pos_ = start;
        fail("invalid variable '" + name + "'");
      }
      const int index = std::stoi(name.substr(1));
      if (index > n_) {
        pos_ = start;
        fail("variable '" + name + "' exceeds n=" + std::to_string(n_));
      }
      return node::variable(index);
    }
    if (name == "sin" || name == "cos" || name == "exp") {
      expect('(');
      NodePtr arg = parse_expr();
      expect(')');
      if (name == "sin") return node::sin(std::move(arg));
      if (name == "cos") return node::cos(std::move(arg));
      return node::exp(std::move(arg));
    }
    auto it = bindings_.find(name);
    if (it == bindings_.end()) {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    return node::constant(it->second);
  }

  std::string_view src_;
  int n_;
  const std::map<std::string, double>& bindings_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view src, int n,
                  const std::map<std::string, double>& bindings = {}) {
  check_dimension(n);
  detail::Parser parser(src, n, bindings);
  return Expr(n, parser.parse_all());
}

// ---------------------------------------------------------------------------
// Printing

// Shortest representation that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

namespace detail {

inline std::string print(const ExprNode& n);

// Atom-like nodes can follow '-' or precede '^' without parentheses.
inline bool is_atomic(const ExprNode& n) {
  switch (n.op) {
    case Op::kVariable:
    case Op::kSin:
    case Op::kCos:
    case Op::kExp:
      return true;
    case Op::kConstant:
      return n.value >= 0.0 && !std::signbit(n.value);
    default:
      return false;
  }
}

inline std::string print_atomic(const ExprNode& n) {
  return is_atomic(n) ? print(n) : "(" + print(n) + ")";
}

inline std::string print(const ExprNode& n) {
  switch (n.op) {
    case Op::kConstant:
      return format_double(n.value);
    case Op::kVariable:
      return "x" + std::to_string(n.index);
    case Op::kNegate:
      return "-" + print_atomic(*n.children[0]);
    case Op::kAdd: {
      std::string s;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += " + ";
        s += print(*n.children[i]);
      }
      return s;
    }
    case Op::kMultiply: {
      std::string s;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += "*";
        const ExprNode& c = *n.children[i];
        s += c.op == Op::kAdd ? "(" + print(c) + ")" : print(c);
      }
      return s;
    }
    case Op::kPower:
      return print_atomic(*n.children[0]) + "^" + std::to_string(n.index);
    case Op::kSin:
      return "sin(" + print(*n.children[0]) + ")";
    case Op::kCos:
      return "cos(" + print(*n.children[0]) + ")";
    case Op::kExp:
      return "exp(" + print(*n.children[0]) + ")";
  }
  return {};
}

}  // namespace detail

inline std::string to_string(const Expr& e) { return detail::print(*e.root()); }

// Top-level summands (the expression itself when it is not a sum).
inline std::vector<Expr> addends(const Expr& e) {
  std::vector<Expr> out;
  if (e.root()->op == Op::kAdd) {
    for (const auto& c : e.root()->children) out.emplace_back(e.dim(), c);
  } else {
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation and differentiation

namespace detail {

inline double eval(const ExprNode& n, const FeaturePoint& y) {
  switch (n.op) {
    case Op::kConstant:
      return n.value;
    case Op::kVariable:
      return y[static_cast<std::size_t>(n.index - 1)];
    case Op::kNegate:
      return -eval(*n.children[0], y);
    case Op::kAdd: {
      double s = 0.0;
      for (const auto& c : n.children) s += eval(*c, y);
      return s;
    }
    case Op::kMultiply: {
      double p = 1.0;
      for (const auto& c : n.children) p *= eval(*c, y);
      return p;
    }
    case Op::kPower:
      return ipow(eval(*n.children[0], y), n.index);
    case Op::kSin:
      return std::sin(eval(*n.children[0], y));
    case Op::kCos:
      return std::cos(eval(*n.children[0], y));
    case Op::kExp:
      return std::exp(eval(*n.children[0], y));
  }
  return 0.0;
}

inline NodePtr derive(const NodePtr& n, int feature) {
  if (((n->depends_on >> (feature - 1)) & 1u) == 0) return node::constant(0.0);
  switch (n->op) {
    case Op::kConstant:
      return node::constant(0.0);
    case Op::kVariable:
      return node::constant(n->index == feature ? 1.0 : 0.0);
    case Op::kNegate:
      return node::negate(derive(n->children[0], feature));
    case Op::kAdd: {
      std::vector<NodePtr> terms;
      terms.reserve(n->children.size());
      for (const auto& c : n->children) terms.push_back(derive(c, feature));
      return node::add(terms);
    }
    case Op::kMultiply: {
      std::vector<NodePtr> terms;
      for (std::size_t i = 0; i < n->children.size(); ++i) {
        NodePtr d = derive(n->children[i], feature);
        if (node::is_constant(d, 0.0)) continue;
        std::vector<NodePtr> factors = n->children;
        factors[i] = std::move(d);
        terms.push_back(node::multiply(factors));
      }
      return node::add(terms);
    }
    case Op::kPower: {
      const NodePtr& base = n->children[0];
      return node::multiply({node::constant(static_cast<double>(n->index)),
                             node::power(base, n->index - 1), derive(base, feature)});
    }
    case Op::kSin: {
      const NodePtr& a = n->children[0];
      return node::multiply(node::cos(a), derive(a, feature));
    }
    case Op::kCos: {
      const NodePtr& a = n->children[0];
      return node::negate(node::multiply(node::sin(a), derive(a, feature)));
    }
    case Op::kExp: {
      return node::multiply(n, derive(n->children[0], feature));
    }
  }
  return node::constant(0.0);
}

}  // namespace detail

inline double expr_eval(const Expr& e, const FeaturePoint& y) {
  if (y.dim() != e.dim()) {
    throw DimensionMismatch("evaluation point has dimension " +
                            std::to_string(y.dim()) + ", expression has " +
                            std::to_string(e.dim()));
  }
  return detail::eval(*e.root(), y);
}

// Exact symbolic d/dx_i (1-based).
inline Expr expr_partial(const Expr& e, int feature) {
  if (feature < 1 || feature > e.dim()) {
    throw InvalidCoalition("feature index " + std::to_string(feature) +
                           " outside 1.." + std::to_string(e.dim()));
  }
  return Expr(e.dim(), detail::derive(e.root(), feature));
}

// a * f + b * g
inline Expr expr_combine(double a, const Expr& f, double b, const Expr& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("expression dimensions differ");
  return Expr(f.dim(), node::add(node::multiply(node::constant(a), f.root()),
                                 node::multiply(node::constant(b), g.root())));
}

// ---------------------------------------------------------------------------
// Polynomial extraction and Taylor expansion

namespace detail {

inline SparsePolynomial poly_multiply(const SparsePolynomial& p, const SparsePolynomial& q) {
  SparsePolynomial out(p.center());
  const auto n = static_cast<std::size_t>(p.dim());
  for (const auto& [mp, cp] : p.terms()) {
    for (const auto& [mq, cq] : q.terms()) {
      std::vector<int> e(n);
      for (std::size_t i = 0; i < n; ++i) e[i] = mp[i] + mq[i];
      out.add_term(MultiIndex(std::move(e)), cp * cq);
    }
  }
  return out;
}

inline std::optional<SparsePolynomial> expand(const ExprNode& n, const FeaturePoint& center) {
  const int dim = center.dim();
  switch (n.op) {
    case Op::kConstant: {
      SparsePolynomial p(center);
      p.add_term(MultiIndex::zeros(dim), n.value);
      return p;
    }
    case Op::kVariable: {
      // y_i = (y_i - c_i) + c_i
      SparsePolynomial p(center);
      const auto i = static_cast<std::size_t>(n.index - 1);
      p.add_term(MultiIndex::zeros(dim).shifted(i, 1), 1.0);
      p.add_term(MultiIndex::zeros(dim), center[i]);
      return p;
    }
    case Op::kNegate: {
      auto inner = expand(*n.children[0], center);
      if (!inner) return std::nullopt;
      return poly_scale(*inner, -1.0);
    }
    case Op::kAdd: {
      SparsePolynomial acc(center);
      for (const auto& c : n.children) {
        auto part = expand(*c, center);
        if (!part) return std::nullopt;
        acc = poly_add(acc, *part);
      }
      return acc;
    }
    case Op::kMultiply: {
      SparsePolynomial acc(center);
      acc.add_term(MultiIndex::zeros(dim), 1.0);
      for (const auto& c : n.children) {
        auto part = expand(*c, center);
        if (!part) return std::nullopt;
        acc = poly_multiply(acc, *part);
      }
      return acc;
    }
    case Op::kPower: {
      auto base = expand(*n.children[0], center);
      if (!base) return std::nullopt;
      SparsePolynomial result(center);
      result.add_term(MultiIndex::zeros(dim), 1.0);
      SparsePolynomial square = *base;
      for (int e = n.index; e > 0; e >>= 1) {
        if (e & 1) result = poly_multiply(result, square);
        if (e > 1) square = poly_multiply(square, square);
      }
      return result;
    }
    case Op::kSin:
    case Op::kCos:
    case Op::kExp:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

// Exact expansion as a polynomial centered at `center`; nullopt when the
// expression contains sin/cos/exp of a non-constant argument.
inline std::optional<SparsePolynomial> to_polynomial(const Expr& e, const FeaturePoint& center) {
  if (center.dim() != e.dim()) throw DimensionMismatch("center dimension mismatch");
  if (e.is_transcendental()) return std::nullopt;
  return detail::expand(*e.root(), center);
}

inline constexpr int kMaxTaylorOrder = 12;
inline constexpr int kMaxTaylorTranscendentalDim = 6;

// Degree-L Taylor polynomial of e at center. Coefficients are
// D^m e(center) / m!, with D^m built by repeated symbolic differentiation
// (memoized per multi-index for the duration of the call).
inline SparsePolynomial taylor(const Expr& e, const FeaturePoint& center, int order) {
  if (center.dim() != e.dim()) throw DimensionMismatch("center dimension mismatch");
  if (order < 0) throw DomainError("Taylor order must be >= 0");
  if (order > kMaxTaylorOrder) {
    throw CapExceeded("Taylor order is capped at " + std::to_string(kMaxTaylorOrder));
  }
  if (e.is_transcendental() && e.dim() > kMaxTaylorTranscendentalDim) {
    throw CapExceeded("Taylor expansion of transcendental expressions is capped at n=" +
                      std::to_string(kMaxTaylorTranscendentalDim));
  }
  const int n = e.dim();
  SparsePolynomial out(center);
  std::map<MultiIndex, NodePtr> derivatives;
  derivatives.emplace(MultiIndex::zeros(n), e.root());
  out.add_term(MultiIndex::zeros(n), detail::eval(*e.root(), center));

  // Multi-indices of each degree are generated from those of the previous
  // degree by bumping one component at or after the last non-zero one.
  std::vector<MultiIndex> frontier{MultiIndex::zeros(n)};
  for (int degree = 1; degree <= order; ++degree) {
    std::vector<MultiIndex> next;
    for (const MultiIndex& parent : frontier) {
      int last = -1;
      for (int i = 0; i < n; ++i) {
        if (parent[static_cast<std::size_t>(i)] > 0) last = i;
      }
      const NodePtr& parent_d = derivatives.at(parent);
      for (int i = std::max(last, 0); i < n; ++i) {
        MultiIndex child = parent.shifted(static_cast<std::size_t>(i), 1);
        NodePtr d = node::is_constant(parent_d, 0.0)
                        ? parent_d
                        : detail::derive(parent_d, i + 1);
        if (!node::is_constant(d, 0.0)) {
          double denom = 1.0;
          for (int j = 0; j < n; ++j) {
            for (int f = 2; f <= child[static_cast<std::size_t>(j)]; ++f) denom *= f;
          }
          out.add_term(child, detail::eval(*d, center) / denom);
        }
        derivatives.emplace(child, std::move(d));
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace synergy
