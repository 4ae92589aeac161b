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

#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "synergy/combinatorics.hpp"
#include "synergy/core.hpp"
#include "synergy/error.hpp"

namespace synergy {

inline constexpr int kMaxPolynomialDegree = 128;
inline constexpr std::size_t kMaxPolynomialTerms = 1'000'000;

// x^e for a non-negative integer e, with 0^0 = 1.
inline double ipow(double x, int e) {
  double result = 1.0;
  double base = x;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

// (y - c)^m
inline double monomial_value(const MultiIndex& m, const FeaturePoint& y,
                             const FeaturePoint& center) {
  double v = 1.0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(m.dim()); ++i) {
    if (m[i] != 0) v *= ipow(y[i] - center[i], m[i]);
  }
  return v;
}

// Sparse polynomial  F(y) = sum_m c_m (y - center)^m.
//
// Zero coefficients are never stored.
class SparsePolynomial {
 public:
  using Terms = std::map<MultiIndex, double>;

  SparsePolynomial() = default;
  explicit SparsePolynomial(FeaturePoint center) : center_(std::move(center)) {
    check_dimension(center_.dim());
  }
  SparsePolynomial(FeaturePoint center, const Terms& terms)
      : SparsePolynomial(std::move(center)) {
    for (const auto& [m, c] : terms) add_term(m, c);
  }

  int dim() const { return center_.dim(); }
  const FeaturePoint& center() const { return center_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  double coefficient(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  // Accumulates c into the coefficient of m, dropping the term if it cancels.
  void add_term(const MultiIndex& m, double c) {
    if (m.dim() != dim()) {
      throw DimensionMismatch("multi-index dimension " + std::to_string(m.dim()) +
                              " differs from polynomial dimension " +
                              std::to_string(dim()));
    }
    if (m.degree() > kMaxPolynomialDegree) {
      throw CapExceeded("monomial degree exceeds " +
                        std::to_string(kMaxPolynomialDegree));
    }
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
    if (terms_.size() > kMaxPolynomialTerms) {
      throw CapExceeded("polynomial exceeds " +
                        std::to_string(kMaxPolynomialTerms) + " terms");
    }
  }

  friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

 private:
  FeaturePoint center_;
  Terms terms_;
};

inline double poly_eval(const SparsePolynomial& p, const FeaturePoint& y) {
  if (y.dim() != p.dim()) {
    throw DimensionMismatch("evaluation point has dimension " +
                            std::to_string(y.dim()) + ", polynomial has " +
                            std::to_string(p.dim()));
  }
  double sum = 0.0;
  for (const auto& [m, c] : p.terms()) sum += c * monomial_value(m, y, p.center());
  return sum;
}

inline void check_same_center(const SparsePolynomial& p, const SparsePolynomial& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch("polynomial dimensions differ");
  if (!(p.center() == q.center())) throw DomainError("polynomial centers differ");
}

inline SparsePolynomial poly_add(const SparsePolynomial& p, const SparsePolynomial& q) {
  check_same_center(p, q);
  SparsePolynomial out = p;
  for (const auto& [m, c] : q.terms()) out.add_term(m, c);
  return out;
}

inline SparsePolynomial poly_scale(const SparsePolynomial& p, double s) {
  SparsePolynomial out(p.center());
  for (const auto& [m, c] : p.terms()) out.add_term(m, c * s);
  return out;
}

inline SparsePolynomial poly_sub(const SparsePolynomial& p, const SparsePolynomial& q) {
  return poly_add(p, poly_scale(q, -1.0));
}

// d/dy_i, with i 1-based.
inline SparsePolynomial poly_partial(const SparsePolynomial& p, int feature) {
  if (feature < 1 || feature > p.dim()) {
    throw InvalidCoalition("feature index " + std::to_string(feature) +
                           " outside 1.." + std::to_string(p.dim()));
  }
  const auto i = static_cast<std::size_t>(feature - 1);
  SparsePolynomial out(p.center());
  for (const auto& [m, c] : p.terms()) {
    if (m[i] == 0) continue;
    out.add_term(m.shifted(i, -1), c * m[i]);
  }
  return out;
}

// Drops every term of total degree above max_degree.
inline SparsePolynomial poly_truncate(const SparsePolynomial& p, int max_degree) {
  if (max_degree < 0) throw DomainError("truncation degree must be >= 0");
  SparsePolynomial out(p.center());
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() <= max_degree) out.add_term(m, c);
  }
  return out;
}

// Groups terms by their support. Each piece is the synergy function of its
// coalition: it vanishes whenever one of its members sits at the center.
inline std::map<Coalition, SparsePolynomial> synergy_split(const SparsePolynomial& p) {
  std::map<Coalition, SparsePolynomial> pieces;
  for (const auto& [m, c] : p.terms()) {
    auto [it, inserted] = pieces.try_emplace(m.support(), p.center());
    it->second.add_term(m, c);
  }
  return pieces;
}

// Re-labels features: feature i of p becomes feature perm[i-1] of the result
// (1-based targets). The center is permuted alongside.
inline SparsePolynomial poly_permute(const SparsePolynomial& p,
                                     const std::vector<int>& perm) {
  const auto n = static_cast<std::size_t>(p.dim());
  if (perm.size() != n) throw DimensionMismatch("permutation size mismatch");
  FeaturePoint center = FeaturePoint::zeros(p.dim());
  for (std::size_t i = 0; i < n; ++i) {
    center[static_cast<std::size_t>(perm[i] - 1)] = p.center()[i];
  }
  SparsePolynomial out(center);
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e(n, 0);
    for (std::size_t i = 0; i < n; ++i) e[static_cast<std::size_t>(perm[i] - 1)] = m[i];
    out.add_term(MultiIndex(std::move(e)), c);
  }
  return out;
}

}  // namespace synergy
