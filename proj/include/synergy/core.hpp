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

// Shared vocabulary: feature points, problem instances, coalitions and
// interaction reports.
//
// Feature indices are 1-based everywhere a user can see them. Internally a
// coalition is an n-bit mask where feature i occupies bit i-1.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "synergy/error.hpp"

namespace synergy {

// Hard cap on the number of features a coalition mask can address.
inline constexpr int kMaxFeatures = 63;

// A point in feature space.
struct FeaturePoint {
  std::vector<double> values;

  FeaturePoint() = default;
  explicit FeaturePoint(std::vector<double> v) : values(std::move(v)) {}
  FeaturePoint(std::initializer_list<double> v) : values(v) {}

  static FeaturePoint zeros(int n) {
    return FeaturePoint(std::vector<double>(static_cast<std::size_t>(n), 0.0));
  }

  int dim() const { return static_cast<int>(values.size()); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  friend bool operator==(const FeaturePoint&, const FeaturePoint&) = default;
};

struct Box {
  FeaturePoint lower;
  FeaturePoint upper;
};

// (x, x', [a, b]) triple every method is evaluated on.
struct ProblemInstance {
  FeaturePoint x;
  FeaturePoint baseline;
  Box box;

  int dim() const { return x.dim(); }

  // Smallest box holding both x and the baseline.
  static ProblemInstance tight(FeaturePoint x, FeaturePoint baseline) {
    Box box{FeaturePoint::zeros(x.dim()), FeaturePoint::zeros(x.dim())};
    for (int i = 0; i < x.dim() && i < baseline.dim(); ++i) {
      box.lower[i] = std::min(x[i], baseline[i]);
      box.upper[i] = std::max(x[i], baseline[i]);
    }
    return ProblemInstance{std::move(x), std::move(baseline), std::move(box)};
  }
};

// A subset of features {1..n}, stored as a bit mask.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t mask) : mask_(mask) {}

  // Builds a coalition from 1-based feature indices.
  static Coalition of(std::initializer_list<int> members) {
    return of(std::span<const int>(members.begin(), members.size()));
  }
  static Coalition of(std::span<const int> members) {
    std::uint64_t mask = 0;
    for (int i : members) {
      if (i < 1 || i > kMaxFeatures) {
        throw InvalidCoalition("feature index " + std::to_string(i) +
                               " outside 1.." + std::to_string(kMaxFeatures));
      }
      mask |= std::uint64_t{1} << (i - 1);
    }
    return Coalition(mask);
  }
  static Coalition full(int n) {
    return Coalition(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }

  // 1-based membership test.
  constexpr bool has(int feature) const {
    return feature >= 1 && feature <= 64 && ((mask_ >> (feature - 1)) & 1u);
  }
  constexpr bool subset_of(Coalition other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr bool proper_subset_of(Coalition other) const {
    return subset_of(other) && mask_ != other.mask_;
  }
  // Highest feature index present, 0 for the empty coalition.
  constexpr int max_feature() const { return 64 - std::countl_zero(mask_); }

  // Ascending 1-based member list.
  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
      out.push_back(std::countr_zero(m) + 1);
    }
    return out;
  }

  std::string to_string() const {
    if (empty()) return "{}";
    std::string s = "{";
    bool first = true;
    for (int i : members()) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    }
    return s + "}";
  }

  friend constexpr Coalition operator|(Coalition a, Coalition b) {
    return Coalition(a.mask_ | b.mask_);
  }
  friend constexpr Coalition operator&(Coalition a, Coalition b) {
    return Coalition(a.mask_ & b.mask_);
  }
  friend constexpr bool operator==(Coalition a, Coalition b) {
    return a.mask_ == b.mask_;
  }

  // Lexicographic order on the ascending member lists, so {} < {1} < {1,2} <
  // {1,3} < {2}. This is the order reports are serialized in.
  friend constexpr bool operator<(Coalition a, Coalition b) {
    const std::uint64_t diff = a.mask_ ^ b.mask_;
    if (diff == 0) return false;
    const int p = std::countr_zero(diff);
    const std::uint64_t above = p == 63 ? 0 : ~((std::uint64_t{2} << p) - 1);
    if ((a.mask_ >> p) & 1u) {
      // a continues with p; b continues with something larger or stops.
      return (b.mask_ & above) != 0;
    }
    return (a.mask_ & above) == 0;
  }

 private:
  std::uint64_t mask_ = 0;
};

// Scores over every coalition of size <= k (the empty one included).
//
// The key set is fixed at construction to exactly P_k = {S : |S| <= k};
// writes to any other coalition are rejected.
class InteractionReport {
 public:
  InteractionReport() = default;
  InteractionReport(int n, int order);

  int n() const { return n_; }
  int order() const { return order_; }
  std::size_t size() const { return entries_.size(); }

  double at(Coalition s) const {
    auto it = entries_.find(s);
    if (it == entries_.end()) {
      throw InvalidCoalition("coalition " + s.to_string() +
                             " is not in the report's key set");
    }
    return it->second;
  }
  double& operator[](Coalition s) {
    auto it = entries_.find(s);
    if (it == entries_.end()) {
      throw InvalidCoalition("coalition " + s.to_string() +
                             " is not in the report's key set");
    }
    return it->second;
  }
  bool contains(Coalition s) const { return entries_.count(s) != 0; }

  // Sets every entry to value_of(coalition).
  template <typename Fn>
  void fill(Fn&& value_of) {
    for (auto& [s, v] : entries_) v = value_of(s);
  }

  // Sum over every non-empty coalition.
  double total() const {
    double sum = 0.0;
    for (const auto& [s, v] : entries_) {
      if (!s.empty()) sum += v;
    }
    return sum;
  }

  bool all_finite() const {
    for (const auto& [s, v] : entries_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  // Iteration is in lexicographic coalition order.
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  int n_ = 0;
  int order_ = 0;
  std::map<Coalition, double> entries_;
};

inline void check_dimension(int n) {
  if (n < 1) throw DimensionMismatch("dimension must be at least 1");
  if (n > kMaxFeatures) {
    throw CapExceeded("dimension " + std::to_string(n) + " exceeds cap " +
                      std::to_string(kMaxFeatures));
  }
}

inline InteractionReport::InteractionReport(int n, int order)
    : n_(n), order_(order) {
  check_dimension(n);
  if (order < 1 || order > n) {
    throw DomainError("interaction order must satisfy 1 <= k <= n");
  }
  // Gosper's hack over each size layer.
  entries_.emplace(Coalition(), 0.0);
  const std::uint64_t limit =
      n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n);
  for (int size = 1; size <= order; ++size) {
    std::uint64_t s = (std::uint64_t{1} << size) - 1;
    while (s < limit) {
      entries_.emplace(Coalition(s), 0.0);
      const std::uint64_t c = s & (~s + 1);
      const std::uint64_t r = s + c;
      if (r == 0) break;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }
}

// x_S: takes x on S and the baseline elsewhere.
inline FeaturePoint masked_point(const ProblemInstance& inst, Coalition s) {
  const int n = inst.dim();
  if (s.max_feature() > n) {
    throw InvalidCoalition("coalition " + s.to_string() +
                           " references a feature beyond n=" +
                           std::to_string(n));
  }
  FeaturePoint out = inst.baseline;
  for (std::uint64_t m = s.mask(); m != 0; m &= m - 1) {
    const auto i = static_cast<std::size_t>(std::countr_zero(m));
    out[i] = inst.x[i];
  }
  return out;
}

inline void validate_instance(const ProblemInstance& inst) {
  const int n = inst.x.dim();
  check_dimension(n);
  if (inst.baseline.dim() != n || inst.box.lower.dim() != n ||
      inst.box.upper.dim() != n) {
    throw DimensionMismatch("x, baseline and box must share dimension " +
                            std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    const double lo = inst.box.lower[i];
    const double hi = inst.box.upper[i];
    auto inside = [&](double v) { return lo <= v && v <= hi; };
    if (!inside(inst.x[i]) || !inside(inst.baseline[i])) {
      throw OutOfBox("feature " + std::to_string(i + 1) +
                     " lies outside its box interval");
    }
  }
}

}  // namespace synergy
