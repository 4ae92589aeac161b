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

// Binary-feature methods.
//
// Everything here works on the 2^n evaluations F(x_S), indexed by the subset
// encoding sum_{i in S} 2^(i-1). The production path of every method is:
//
//   table --mobius--> synergy table --distribution rule--> report
//
// The classical averaging formulas (Shapley marginal sums, the Shapley-Taylor
// delta sums, nested Shapley along sequences) are kept alongside as
// independent oracles.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "synergy/combinatorics.hpp"
#include "synergy/core.hpp"
#include "synergy/error.hpp"

namespace synergy {

inline constexpr int kMaxTableFeatures = 20;
inline constexpr int kMaxOracleFeatures = 6;
inline constexpr int kMaxOracleOrder = 4;

namespace detail {

inline void check_table_dim(int n) {
  check_dimension(n);
  if (n > kMaxTableFeatures) {
    throw CapExceeded("set-function tables are capped at n=" +
                      std::to_string(kMaxTableFeatures));
  }
}

inline void check_table_shape(int n, std::size_t size) {
  check_table_dim(n);
  if (size != (std::size_t{1} << n)) {
    throw DimensionMismatch("table of size " + std::to_string(size) +
                            " does not match 2^" + std::to_string(n));
  }
}

}  // namespace detail

// values[S] = F(x_S).
struct SetFunctionTable {
  int n = 0;
  std::vector<double> values;

  SetFunctionTable() = default;
  SetFunctionTable(int n_, std::vector<double> v) : n(n_), values(std::move(v)) {
    detail::check_table_shape(n, values.size());
  }
  static SetFunctionTable zeros(int n) {
    detail::check_table_dim(n);
    return SetFunctionTable(n, std::vector<double>(std::size_t{1} << n, 0.0));
  }

  std::size_t size() const { return values.size(); }
  double operator[](Coalition s) const { return values[s.mask()]; }
  double& operator[](Coalition s) { return values[s.mask()]; }
  double at_baseline() const { return values.front(); }
  double at_input() const { return values.back(); }
};

// values[S] = phi_S(F)(x), the Mobius transform of a SetFunctionTable.
struct SynergyTable {
  int n = 0;
  std::vector<double> values;

  SynergyTable() = default;
  SynergyTable(int n_, std::vector<double> v) : n(n_), values(std::move(v)) {
    detail::check_table_shape(n, values.size());
  }

  double operator[](Coalition s) const { return values[s.mask()]; }
  double& operator[](Coalition s) { return values[s.mask()]; }
};

template <typename Fn>
SetFunctionTable build_table(const ProblemInstance& inst, Fn&& f) {
  const int n = inst.dim();
  detail::check_table_dim(n);
  if (inst.baseline.dim() != n) throw DimensionMismatch("baseline dimension mismatch");
  std::vector<double> values(std::size_t{1} << n);
  for (std::uint64_t s = 0; s < values.size(); ++s) {
    const double v = f(masked_point(inst, Coalition(s)));
    if (!std::isfinite(v)) {
      throw NonFiniteValue("function is not finite at x_S for S=" +
                           Coalition(s).to_string());
    }
    values[s] = v;
  }
  return SetFunctionTable(n, std::move(values));
}

// a(v)(S) = sum_{T subset S} (-1)^{|S|-|T|} v(T), via the in-place
// O(n 2^n) recursion.
inline SynergyTable mobius(const SetFunctionTable& table) {
  std::vector<double> a = table.values;
  const std::size_t size = a.size();
  for (int i = 0; i < table.n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < size; ++s) {
      if (s & bit) a[s] -= a[s ^ bit];
    }
  }
  return SynergyTable(table.n, std::move(a));
}

// v(S) = sum_{T subset S} a(T).
inline SetFunctionTable mobius_inverse(const SynergyTable& syn) {
  std::vector<double> v = syn.values;
  const std::size_t size = v.size();
  for (int i = 0; i < syn.n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < size; ++s) {
      if (s & bit) v[s] += v[s ^ bit];
    }
  }
  return SetFunctionTable(syn.n, std::move(v));
}

namespace detail {

// out[T] = sum over S containing T of weighted[S], via a superset-sum
// transform. Accumulation order is fixed (ascending bit, ascending mask).
inline std::vector<double> superset_sums(std::vector<double> weighted, int n) {
  const std::size_t size = weighted.size();
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < size; ++s) {
      if (!(s & bit)) weighted[s] += weighted[s | bit];
    }
  }
  return weighted;
}

// Applies a size-dependent distribution rule
//   report[T] = sum_{S containing T} weight(|T|, |S|) * syn[S]
// to every non-empty T in P_k. weight(t, s) is the share a synergy of size s
// hands to each of its subsets of size t.
template <typename Weight>
InteractionReport distribute(const SynergyTable& syn, int k, double baseline_value,
                             Weight&& weight) {
  const int n = syn.n;
  InteractionReport report(n, k);
  std::vector<std::vector<double>> by_size(static_cast<std::size_t>(k) + 1);
  for (int t = 1; t <= k; ++t) {
    std::vector<double> weighted(syn.values.size(), 0.0);
    for (std::size_t s = 1; s < weighted.size(); ++s) {
      const int size = std::popcount(s);
      if (size < t) continue;
      const double w = weight(t, size);
      if (w != 0.0) weighted[s] = w * syn.values[s];
    }
    by_size[static_cast<std::size_t>(t)] = superset_sums(std::move(weighted), n);
  }
  report.fill([&](Coalition s) {
    if (s.empty()) return baseline_value;
    return by_size[static_cast<std::size_t>(s.size())][s.mask()];
  });
  return report;
}

inline void check_order(int k, int n) {
  if (k < 1 || k > n) {
    throw DomainError("interaction order k=" + std::to_string(k) +
                      " must satisfy 1 <= k <= n=" + std::to_string(n));
  }
}

// N^k_t / s^k for 1 <= t <= s, as doubles, indexed [t][s].
inline std::vector<std::vector<double>> recursive_weights(int k, int n) {
  std::vector<std::vector<double>> w(static_cast<std::size_t>(k) + 1,
                                     std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
  for (int t = 1; t <= k; ++t) {
    const BigInt count = surjective_sequence_count(k, t);
    for (int s = t; s <= n; ++s) {
      w[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] =
          ratio(count, boost::multiprecision::pow(BigInt(s), static_cast<unsigned>(k)));
    }
  }
  return w;
}

}  // namespace detail

// Shapley value: each synergy is split equally among its members.
inline InteractionReport shapley(const SetFunctionTable& table) {
  const SynergyTable syn = mobius(table);
  return detail::distribute(syn, 1, table.at_baseline(),
                            [](int, int size) { return 1.0 / size; });
}

// Shapley-Taylor of order k. Synergies of size <= k stay with their own
// coalition; larger ones are split equally among their size-k subsets.
inline InteractionReport shapley_taylor(const SetFunctionTable& table, int k) {
  detail::check_order(k, table.n);
  const SynergyTable syn = mobius(table);
  std::vector<double> inv_binom(static_cast<std::size_t>(table.n) + 1, 0.0);
  for (int s = k; s <= table.n; ++s) {
    inv_binom[static_cast<std::size_t>(s)] = ratio(1, binomial(s, k));
  }
  return detail::distribute(syn, k, table.at_baseline(), [&](int t, int size) {
    if (t < k) return t == size ? 1.0 : 0.0;
    return inv_binom[static_cast<std::size_t>(size)];
  });
}

// Recursive Shapley of order k: a synergy of S passes N^k_T / |S|^k of its
// value to every non-empty T inside S.
inline InteractionReport recursive_shapley(const SetFunctionTable& table, int k) {
  detail::check_order(k, table.n);
  const SynergyTable syn = mobius(table);
  const auto w = detail::recursive_weights(k, table.n);
  return detail::distribute(syn, k, table.at_baseline(), [&](int t, int size) {
    return w[static_cast<std::size_t>(t)][static_cast<std::size_t>(size)];
  });
}

// Augmented Recursive Shapley: synergies of size <= k go to their own
// coalition; larger ones are distributed as in recursive_shapley.
inline InteractionReport augmented_recursive_shapley(const SetFunctionTable& table, int k) {
  detail::check_order(k, table.n);
  const SynergyTable syn = mobius(table);
  const auto w = detail::recursive_weights(k, table.n);
  return detail::distribute(syn, k, table.at_baseline(), [&](int t, int size) {
    if (size <= k) return t == size ? 1.0 : 0.0;
    return w[static_cast<std::size_t>(t)][static_cast<std::size_t>(size)];
  });
}

// ---------------------------------------------------------------------------
// Averaging-formula oracles

namespace detail {

inline void check_oracle_scale(int n, int k) {
  if (n > kMaxOracleFeatures || k > kMaxOracleOrder) {
    throw CapExceeded("oracle scale is capped at n <= " + std::to_string(kMaxOracleFeatures) +
                      ", k <= " + std::to_string(kMaxOracleOrder));
  }
}

// 1 / (n C(n-1, s)) for s = 0..n-1.
inline std::vector<double> shapley_weights(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) w[static_cast<std::size_t>(s)] = ratio(1, binomial(n - 1, s) * n);
  return w;
}

// Shap_i of the game W -> values[W & restrict] (0-based i).
inline double shapley_marginal_restricted(const std::vector<double>& values,
                                          const std::vector<double>& weights, int i,
                                          std::uint64_t restrict) {
  const std::uint64_t bit = std::uint64_t{1} << i;
  double sum = 0.0;
  for (std::uint64_t s = 0; s < values.size(); ++s) {
    if (s & bit) continue;
    const double w = weights[static_cast<std::size_t>(std::popcount(s))];
    sum += w * (values[(s | bit) & restrict] - values[s & restrict]);
  }
  return sum;
}

}  // namespace detail

// Shap_i = (1/n) sum_{S not containing i} C(n-1, |S|)^-1 (F(x_{S+i}) - F(x_S)).
inline InteractionReport shapley_marginal(const SetFunctionTable& table) {
  const int n = table.n;
  const auto weights = detail::shapley_weights(n);
  InteractionReport report(n, 1);
  report.fill([&](Coalition s) {
    if (s.empty()) return table.at_baseline();
    const int i = s.members().front() - 1;
    return detail::shapley_marginal_restricted(table.values, weights, i, ~std::uint64_t{0});
  });
  return report;
}

// delta_{S|T} F(x) = sum_{W subset S} (-1)^{|S|-|W|} F(x_{W u T})
inline double discrete_derivative(const SetFunctionTable& table, Coalition s, Coalition t) {
  double sum = 0.0;
  const std::uint64_t mask = s.mask();
  // Enumerate submasks of S including S itself and the empty set.
  std::uint64_t w = mask;
  while (true) {
    const int parity = std::popcount(mask ^ w) & 1;
    const double v = table.values[w | t.mask()];
    sum += parity ? -v : v;
    if (w == 0) break;
    w = (w - 1) & mask;
  }
  return sum;
}

// Shapley-Taylor straight from its defining delta sums.
inline InteractionReport shapley_taylor_formula(const SetFunctionTable& table, int k) {
  detail::check_order(k, table.n);
  const int n = table.n;
  const std::uint64_t all = Coalition::full(n).mask();
  InteractionReport report(n, k);
  report.fill([&](Coalition s) {
    if (s.size() < k) return discrete_derivative(table, s, Coalition());
    const std::uint64_t rest = all & ~s.mask();
    double sum = 0.0;
    std::uint64_t t = rest;
    while (true) {
      sum += discrete_derivative(table, s, Coalition(t)) /
             static_cast<double>(binomial(n - 1, std::popcount(t)));
      if (t == 0) break;
      t = (t - 1) & rest;
    }
    return static_cast<double>(k) / n * sum;
  });
  return report;
}

// Recursive Shapley by literal nesting: for every sequence s in sigma^k_T,
// Shap_{s_k}(x, Shap_{s_{k-1}}(., ... Shap_{s_1}(., F))), where each inner
// attribution is re-tabulated as a function on the lattice points x_W.
inline InteractionReport recursive_shapley_oracle(const SetFunctionTable& table, int k) {
  detail::check_order(k, table.n);
  detail::check_oracle_scale(table.n, k);
  const int n = table.n;
  const auto weights = detail::shapley_weights(n);

  auto nested_step = [&](const std::vector<double>& g, int feature) {
    std::vector<double> next(g.size());
    for (std::uint64_t w = 0; w < g.size(); ++w) {
      next[w] = detail::shapley_marginal_restricted(g, weights, feature - 1, w);
    }
    return next;
  };

  InteractionReport report(n, k);
  report.fill([&](Coalition t) {
    if (t.empty()) return table.at_baseline();
    double sum = 0.0;
    for (const auto& seq : enumerate_sequences(k, t)) {
      std::vector<double> g = table.values;
      for (int feature : seq) g = nested_step(g, feature);
      sum += g.back();
    }
    return sum;
  });
  return report;
}

// Pure synergy table of coalition S: phi_S = value, every other synergy 0.
inline SetFunctionTable pure_synergy_table(int n, Coalition s, double value) {
  std::vector<double> syn(std::size_t{1} << n, 0.0);
  syn[s.mask()] = value;
  return mobius_inverse(SynergyTable(n, std::move(syn)));
}

// Relabels features: feature i moves to perm[i-1] (1-based targets).
inline SetFunctionTable permute_table(const SetFunctionTable& table, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != table.n) throw DimensionMismatch("permutation size mismatch");
  std::vector<double> out(table.values.size());
  for (std::uint64_t s = 0; s < table.values.size(); ++s) {
    std::uint64_t image = 0;
    for (std::uint64_t m = s; m != 0; m &= m - 1) {
      image |= std::uint64_t{1} << (perm[static_cast<std::size_t>(std::countr_zero(m))] - 1);
    }
    out[image] = table.values[s];
  }
  return SetFunctionTable(table.n, std::move(out));
}

}  // namespace synergy
