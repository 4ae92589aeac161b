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

// Closed-form gradient methods on polynomials.
//
// A monomial (y - x')^m centered at the baseline is a pure synergy of its
// support S_m, and a linear method that is continuous under Taylor
// truncation is fully determined by how it splits such monomials. Each
// method below is therefore a termwise distribution rule:
//
//   IG      {i}      : m_i / |m|                         for i in S_m
//   IH^k    T        : M^k_T(m) / |m|^k                  for T subset S_m
//   IH^k*   T = S_m  : 1 if |S_m| <= k, else as IH^k on proper subsets
//   SP^k    T = S_m  : 1 if |S_m| <= k, else
//           |T| = k  : (sum_{i in T} m_i) / |m| / C(|S_m| - 1, k - 1)
//
// where |m| is the total degree. The constant term always goes to the empty
// coalition.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "synergy/combinatorics.hpp"
#include "synergy/core.hpp"
#include "synergy/error.hpp"
#include "synergy/polynomial.hpp"
#include "synergy/set_methods.hpp"

namespace synergy {

namespace detail {

inline void check_point(const SparsePolynomial& p, const FeaturePoint& x) {
  if (x.dim() != p.dim()) {
    throw DimensionMismatch("input point has dimension " + std::to_string(x.dim()) +
                            ", polynomial has " + std::to_string(p.dim()));
  }
}

// M^k_T(m) / |m|^k, memoized. The value only depends on k, |m| and the
// multiset {m_i : i in T}.
inline double mass_weight(int k, Coalition t, const MultiIndex& m) {
  using Key = std::tuple<int, int, std::vector<int>>;
  static std::mutex mutex;
  static std::map<Key, double> cache;

  std::vector<int> parts;
  parts.reserve(static_cast<std::size_t>(t.size()));
  for (int i : t.members()) parts.push_back(m[static_cast<std::size_t>(i - 1)]);
  std::sort(parts.begin(), parts.end());
  Key key{k, m.degree(), parts};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  MultiIndex compact(parts);
  const double w =
      ratio(monomial_mass(k, Coalition::full(static_cast<int>(parts.size())), compact),
            boost::multiprecision::pow(BigInt(m.degree()), static_cast<unsigned>(k)));
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(std::move(key), w);
  return w;
}

// Calls f(T) for every non-empty submask T of `set` with |T| <= max_size,
// in decreasing mask order.
template <typename Fn>
void for_each_small_subset(Coalition set, int max_size, Fn&& f) {
  const std::uint64_t mask = set.mask();
  for (std::uint64_t t = mask; t != 0; t = (t - 1) & mask) {
    if (std::popcount(t) <= max_size) f(Coalition(t));
  }
}

// Every k-element subset of `set`.
template <typename Fn>
void for_each_subset_of_size(Coalition set, int size, Fn&& f) {
  const std::vector<int> members = set.members();
  const int m = static_cast<int>(members.size());
  if (size > m) return;
  std::vector<int> idx(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::uint64_t mask = 0;
    for (int i : idx) mask |= std::uint64_t{1} << (members[static_cast<std::size_t>(i)] - 1);
    f(Coalition(mask));
    int pos = size - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - size + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < size; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace detail

// Integrated Gradients.
inline InteractionReport ig_exact(const SparsePolynomial& p, const FeaturePoint& x) {
  detail::check_point(p, x);
  InteractionReport report(p.dim(), 1);
  for (const auto& [m, c] : p.terms()) {
    const int degree = m.degree();
    if (degree == 0) {
      report[Coalition()] += c;
      continue;
    }
    const double value = c * monomial_value(m, x, p.center());
    for (int i : m.support().members()) {
      report[Coalition::of({i})] += value * m[static_cast<std::size_t>(i - 1)] / degree;
    }
  }
  return report;
}

// y -> IG_i(y, p) with the baseline held at p's center. Again a polynomial:
// each term is scaled by m_i / |m|.
inline SparsePolynomial ig_polynomial(const SparsePolynomial& p, int feature) {
  if (feature < 1 || feature > p.dim()) {
    throw InvalidCoalition("feature index " + std::to_string(feature) + " out of range");
  }
  const auto i = static_cast<std::size_t>(feature - 1);
  SparsePolynomial out(p.center());
  for (const auto& [m, c] : p.terms()) {
    if (m[i] == 0) continue;
    out.add_term(m, c * m[i] / m.degree());
  }
  return out;
}

// k-th order Integrated Hessian.
inline InteractionReport ih_exact(const SparsePolynomial& p, const FeaturePoint& x, int k) {
  detail::check_point(p, x);
  detail::check_order(k, p.dim());
  InteractionReport report(p.dim(), k);
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() == 0) {
      report[Coalition()] += c;
      continue;
    }
    const double value = c * monomial_value(m, x, p.center());
    detail::for_each_small_subset(m.support(), k, [&](Coalition t) {
      report[t] += value * detail::mass_weight(k, t, m);
    });
  }
  return report;
}

// Augmented Integrated Hessian.
inline InteractionReport ih_star_exact(const SparsePolynomial& p, const FeaturePoint& x, int k) {
  detail::check_point(p, x);
  detail::check_order(k, p.dim());
  InteractionReport report(p.dim(), k);
  for (const auto& [m, c] : p.terms()) {
    const Coalition support = m.support();
    const double value = c * monomial_value(m, x, p.center());
    if (support.size() <= k) {
      report[support] += value;
      continue;
    }
    detail::for_each_small_subset(support, k, [&](Coalition t) {
      report[t] += value * detail::mass_weight(k, t, m);
    });
  }
  return report;
}

// Augmented Integrated Hessian through its definition: synergies of size
// <= k are handed to their own coalition, and IH^k runs on what is left.
inline InteractionReport ih_star_via_synergy(const SparsePolynomial& p, const FeaturePoint& x,
                                             int k) {
  detail::check_point(p, x);
  detail::check_order(k, p.dim());
  SparsePolynomial residual = p;
  std::map<Coalition, double> low_order;
  for (const auto& [s, piece] : synergy_split(p)) {
    if (s.size() > k) continue;
    low_order[s] = poly_eval(piece, x);
    residual = poly_sub(residual, piece);
  }
  InteractionReport report = ih_exact(residual, x, k);
  for (const auto& [s, v] : low_order) report[s] += v;
  return report;
}

// Sum of Powers, the top-distributing gradient method.
inline InteractionReport sum_of_powers_exact(const SparsePolynomial& p, const FeaturePoint& x,
                                             int k) {
  detail::check_point(p, x);
  detail::check_order(k, p.dim());
  InteractionReport report(p.dim(), k);
  for (const auto& [m, c] : p.terms()) {
    const Coalition support = m.support();
    const double value = c * monomial_value(m, x, p.center());
    if (support.size() <= k) {
      report[support] += value;
      continue;
    }
    const double share =
        value / m.degree() * ratio(1, binomial(support.size() - 1, k - 1));
    detail::for_each_subset_of_size(support, k, [&](Coalition t) {
      int weight = 0;
      for (int i : t.members()) weight += m[static_cast<std::size_t>(i - 1)];
      report[t] += share * weight;
    });
  }
  return report;
}

// ---------------------------------------------------------------------------
// Constructive oracles

// ST^{-i}_S(x, x', G): Shapley-Taylor of order |S|-1 for S \ {i} on the
// function with x_i frozen at its input value.
inline double altered_shapley_taylor(const SetFunctionTable& g, Coalition s, int feature) {
  const int n = g.n;
  const Coalition held = Coalition::of({feature});
  const Coalition rest = Coalition(s.mask() & ~held.mask());
  const std::uint64_t outside = Coalition::full(n).mask() & ~s.mask();
  double sum = 0.0;
  std::uint64_t t = outside;
  while (true) {
    sum += discrete_derivative(g, rest, Coalition(t) | held) /
           static_cast<double>(binomial(n - 2, std::popcount(t)));
    if (t == 0) break;
    t = (t - 1) & outside;
  }
  return static_cast<double>(s.size() - 1) / (n - 1) * sum;
}

// Shap^{-i}_j(x, x', G): the k = 2 form of the altered Shapley-Taylor.
inline double altered_shapley(const SetFunctionTable& g, int held, int feature) {
  const int n = g.n;
  const std::uint64_t i_bit = std::uint64_t{1} << (held - 1);
  const std::uint64_t j_bit = std::uint64_t{1} << (feature - 1);
  const std::uint64_t outside = Coalition::full(n).mask() & ~(i_bit | j_bit);
  double sum = 0.0;
  std::uint64_t s = outside;
  while (true) {
    const int size = std::popcount(s);
    const double w = ratio(factorial(size) * factorial(n - size - 2), factorial(n - 1));
    sum += w * (g.values[s | i_bit | j_bit] - g.values[s | i_bit]);
    if (s == 0) break;
    s = (s - 1) & outside;
  }
  return sum;
}

// Sum of Powers by construction: phi_S for |S| < k, and for |S| = k
//   sum_{i in S} ST^{-i}_S(x, x', IG_i(., x', F)).
// The IG_i functions are built symbolically and tabulated on the lattice;
// phi comes from the Mobius transform of the tabulated polynomial.
inline InteractionReport sum_of_powers_oracle(const SparsePolynomial& p, const FeaturePoint& x,
                                              int k) {
  detail::check_point(p, x);
  detail::check_order(k, p.dim());
  const int n = p.dim();
  if (n > kMaxOracleFeatures || k > 3) {
    throw CapExceeded("Sum of Powers oracle is capped at n <= 6, k <= 3");
  }
  if (k == 1) return ig_exact(p, x);

  const ProblemInstance inst = ProblemInstance::tight(x, p.center());
  auto tabulate = [&](const SparsePolynomial& q) {
    return build_table(inst, [&](const FeaturePoint& y) { return poly_eval(q, y); });
  };
  const SetFunctionTable table = tabulate(p);
  const SynergyTable syn = mobius(table);
  std::vector<SetFunctionTable> ig_tables;
  for (int i = 1; i <= n; ++i) ig_tables.push_back(tabulate(ig_polynomial(p, i)));

  InteractionReport report(n, k);
  report.fill([&](Coalition s) {
    if (s.empty()) return table.at_baseline();
    if (s.size() < k) return syn[s];
    double sum = 0.0;
    for (int i : s.members()) {
      const SetFunctionTable& g = ig_tables[static_cast<std::size_t>(i - 1)];
      if (k == 2) {
        const int j = s.members()[0] == i ? s.members()[1] : s.members()[0];
        sum += altered_shapley(g, i, j);
      } else {
        sum += altered_shapley_taylor(g, s, i);
      }
    }
    return sum;
  });
  return report;
}

// Second-order Integrated Hessian from its double-integral definition,
// integrated in closed form term by term:
//
//   IH_{ij} = 2 d_i d_j  int int st d2F/dx_i dx_j (x' + st d) ds dt
//   IH_{i}  = d_i int int dF/dx_i (x' + st d) ds dt
//           + d_i^2 int int st d2F/dx_i^2 (x' + st d) ds dt
//
// with d = x - x'. A term of degree q in the integrand contributes
// (st)^q, whose double integral is 1/(q+1)^2.
inline InteractionReport ih2_formulas(const SparsePolynomial& p, const FeaturePoint& x) {
  detail::check_point(p, x);
  const int n = p.dim();
  detail::check_order(2, n);
  const FeaturePoint& center = p.center();

  // int int (st)^shift * q(x' + st d) ds dt
  auto integrate = [&](const SparsePolynomial& q, int shift) {
    double sum = 0.0;
    for (const auto& [m, c] : q.terms()) {
      const double e = m.degree() + shift + 1;
      sum += c * monomial_value(m, x, center) / (e * e);
    }
    return sum;
  };

  InteractionReport report(n, 2);
  report[Coalition()] = p.coefficient(MultiIndex::zeros(n));
  for (int i = 1; i <= n; ++i) {
    const double di = x[static_cast<std::size_t>(i - 1)] - center[static_cast<std::size_t>(i - 1)];
    const SparsePolynomial grad = poly_partial(p, i);
    report[Coalition::of({i})] =
        di * integrate(grad, 0) + di * di * integrate(poly_partial(grad, i), 1);
    for (int j = i + 1; j <= n; ++j) {
      const double dj =
          x[static_cast<std::size_t>(j - 1)] - center[static_cast<std::size_t>(j - 1)];
      report[Coalition::of({i, j})] = 2.0 * di * dj * integrate(poly_partial(grad, j), 1);
    }
  }
  return report;
}

// Second-order Integrated Hessian as nested IG:
//   IH_{ij} = IG_i(x, IG_j(., F)) + IG_j(x, IG_i(., F)),  IH_i = IG_i(x, IG_i(., F)).
inline InteractionReport ih2_recursive_ig(const SparsePolynomial& p, const FeaturePoint& x) {
  detail::check_point(p, x);
  const int n = p.dim();
  detail::check_order(2, n);
  std::vector<InteractionReport> nested;
  for (int j = 1; j <= n; ++j) nested.push_back(ig_exact(ig_polynomial(p, j), x));
  InteractionReport report(n, 2);
  report[Coalition()] = p.coefficient(MultiIndex::zeros(n));
  for (int i = 1; i <= n; ++i) {
    const Coalition single_i = Coalition::of({i});
    report[single_i] = nested[static_cast<std::size_t>(i - 1)].at(single_i);
    for (int j = i + 1; j <= n; ++j) {
      const Coalition single_j = Coalition::of({j});
      report[Coalition::of({i, j})] = nested[static_cast<std::size_t>(j - 1)].at(single_i) +
                                      nested[static_cast<std::size_t>(i - 1)].at(single_j);
    }
  }
  return report;
}

}  // namespace synergy
