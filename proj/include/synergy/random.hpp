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

// Seeded random instances. The standard distributions are implementation
// defined, so reals and integers are drawn straight from the engine bits to
// keep runs identical across standard libraries.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "synergy/core.hpp"
#include "synergy/expr.hpp"
#include "synergy/polynomial.hpp"
#include "synergy/set_methods.hpp"

namespace synergy {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of trial `trial` in stream `stream`, derived from the master seed by
// counter so every trial can be replayed on its own.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t trial) {
  return mix64(mix64(mix64(master) ^ stream) ^ trial);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
    std::uint64_t r = engine_();
    while (r >= limit) r = engine_();
    return lo + static_cast<int>(r % range);
  }

  bool bernoulli(double p) { return unit() < p; }

  // Uniform permutation of 1..n (Fisher-Yates).
  std::vector<int> permutation(int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    for (int i = n - 1; i > 0; --i) {
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(integer(0, i))]);
    }
    return perm;
  }

  // Uniform coalition of the given size inside {1..n}.
  Coalition coalition(int n, int size) {
    const std::vector<int> perm = permutation(n);
    std::uint64_t mask = 0;
    for (int i = 0; i < size; ++i) mask |= std::uint64_t{1} << (perm[static_cast<std::size_t>(i)] - 1);
    return Coalition(mask);
  }

 private:
  std::mt19937_64 engine_;
};

inline FeaturePoint random_point(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
  FeaturePoint p = FeaturePoint::zeros(n);
  for (double& v : p.values) v = rng.uniform(lo, hi);
  return p;
}

inline SetFunctionTable random_table(Rng& rng, int n) {
  SetFunctionTable table = SetFunctionTable::zeros(n);
  for (double& v : table.values) v = rng.uniform(-1.0, 1.0);
  return table;
}

// Every multi-index over n variables with total degree <= max_degree, in
// graded order.
inline std::vector<MultiIndex> monomials_up_to(int n, int max_degree) {
  std::vector<MultiIndex> out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int pos, int budget) -> void {
    if (pos == n) {
      out.emplace_back(e);
      return;
    }
    for (int d = 0; d <= budget; ++d) {
      e[static_cast<std::size_t>(pos)] = d;
      self(self, pos + 1, budget - d);
    }
    e[static_cast<std::size_t>(pos)] = 0;
  };
  rec(rec, 0, max_degree);
  std::stable_sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
    return a.degree() < b.degree();
  });
  return out;
}

// Each monomial of degree <= max_degree is kept with probability `density`
// and gets a coefficient uniform on [-1, 1].
inline SparsePolynomial random_polynomial(Rng& rng, const FeaturePoint& center, int max_degree = 6,
                                          double density = 0.3) {
  SparsePolynomial p(center);
  for (const MultiIndex& m : monomials_up_to(center.dim(), max_degree)) {
    if (rng.bernoulli(density)) p.add_term(m, rng.uniform(-1.0, 1.0));
  }
  return p;
}

// Exponents in [1, max_exponent] exactly on `support`.
inline MultiIndex random_monomial(Rng& rng, int n, Coalition support, int max_exponent = 3) {
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  for (int i : support.members()) e[static_cast<std::size_t>(i - 1)] = rng.integer(1, max_exponent);
  return MultiIndex(std::move(e));
}

// sum_m c_m (x - center)^m as an expression tree.
inline Expr poly_to_expr(const SparsePolynomial& p) {
  std::vector<NodePtr> terms;
  for (const auto& [m, c] : p.terms()) {
    std::vector<NodePtr> factors{node::constant(c)};
    for (int i = 0; i < m.dim(); ++i) {
      if (m[static_cast<std::size_t>(i)] == 0) continue;
      NodePtr base = node::variable(i + 1);
      const double shift = p.center()[static_cast<std::size_t>(i)];
      if (shift != 0.0) base = node::add(base, node::constant(-shift));
      factors.push_back(node::power(base, m[static_cast<std::size_t>(i)]));
    }
    terms.push_back(node::multiply(factors));
  }
  return Expr(p.dim(), terms.empty() ? node::constant(0.0) : node::add(terms));
}

}  // namespace synergy
