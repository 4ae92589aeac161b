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

// Exact integer combinatorics behind the distribution rules.
//
// Every count is an arbitrary-precision integer; callers convert to double
// only when forming a final weight (see ratio()).

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "synergy/core.hpp"
#include "synergy/error.hpp"

namespace synergy {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Exponent vector m of the monomial (y - x')^m.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents)
      : exponents_(std::move(exponents)) {
    for (int e : exponents_) {
      if (e < 0) throw DomainError("multi-index exponents must be >= 0");
    }
  }
  MultiIndex(std::initializer_list<int> exponents)
      : MultiIndex(std::vector<int>(exponents)) {}

  static MultiIndex zeros(int n) {
    return MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 0));
  }

  int dim() const { return static_cast<int>(exponents_.size()); }
  // 0-based component access.
  int operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<int>& exponents() const { return exponents_; }

  // ||m||_1
  int degree() const {
    int d = 0;
    for (int e : exponents_) d += e;
    return d;
  }

  // S_m = {i : m_i > 0}
  Coalition support() const {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      if (exponents_[i] > 0) mask |= std::uint64_t{1} << i;
    }
    return Coalition(mask);
  }

  // Returns a copy with component i (0-based) shifted by delta.
  MultiIndex shifted(std::size_t i, int delta) const {
    MultiIndex out = *this;
    out.exponents_[i] += delta;
    if (out.exponents_[i] < 0) throw DomainError("negative exponent");
    return out;
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> exponents_;
};

inline double ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("zero denominator");
  return static_cast<double>(BigRational(num, den));
}

inline BigInt binomial(int n, int r) {
  if (n < 0 || r < 0 || r > n) {
    throw DomainError("binomial(" + std::to_string(n) + ", " +
                      std::to_string(r) + ") requires 0 <= r <= n");
  }
  if (r > n - r) r = n - r;
  BigInt acc = 1;
  // Each partial product acc * (n - r + i) / i is itself a binomial, so the
  // division is exact.
  for (int i = 1; i <= r; ++i) {
    acc *= n - r + i;
    acc /= i;
  }
  return acc;
}

inline BigInt factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative number");
  BigInt acc = 1;
  for (int i = 2; i <= n; ++i) acc *= i;
  return acc;
}

// k! / prod(l_i!) with sum(l) == k.
inline BigInt multinomial(int k, const MultiIndex& l) {
  if (l.degree() != k) {
    throw DomainError("multinomial parts sum to " + std::to_string(l.degree()) +
                      ", expected " + std::to_string(k));
  }
  BigInt acc = 1;
  int running = 0;
  for (int part : l.exponents()) {
    running += part;
    acc *= binomial(running, part);
  }
  return acc;
}

// N^k_t: number of length-k sequences over a t-element set that use every
// element at least once (surjections). Inclusion-exclusion.
inline BigInt surjective_sequence_count(int k, int t) {
  if (k < 0 || t < 0) throw DomainError("surjection count needs k, t >= 0");
  if (t > k) return 0;
  BigInt acc = 0;
  for (int j = 0; j <= t; ++j) {
    BigInt term = binomial(t, j) * boost::multiprecision::pow(BigInt(t - j),
                                                              static_cast<unsigned>(k));
    if (j % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

// M^k_T(m) = sum over l with |l| = k and S_l = T of multinomial(k, l) * m^l.
//
// Dynamic program over the members of T: after processing r members,
// table[j] holds the sum over compositions of j into r positive parts of
// multinomial(j; parts) * prod m_i^part. Adding a member with weight w uses
// multinomial(j; ..., a) = C(j, a) * multinomial(j - a; ...).
//
// The empty coalition follows the convention M^k_{} / ||m||^k := 1 when
// S_m is empty too, which this returns as ||m||_1^k (= 0^k, or 1 at k = 0).
inline BigInt monomial_mass(int k, Coalition t, const MultiIndex& m) {
  if (k < 0) throw DomainError("monomial_mass needs k >= 0");
  if (t.max_feature() > m.dim()) {
    throw InvalidCoalition("coalition " + t.to_string() +
                           " exceeds the multi-index dimension");
  }
  if (t.empty()) {
    return boost::multiprecision::pow(BigInt(m.degree()),
                                      static_cast<unsigned>(k));
  }
  const auto len = static_cast<std::size_t>(k) + 1;
  std::vector<BigInt> table(len, 0);
  table[0] = 1;
  int processed = 0;
  for (int feature : t.members()) {
    const BigInt w = m[static_cast<std::size_t>(feature - 1)];
    std::vector<BigInt> next(len, 0);
    ++processed;
    for (int j = processed; j <= k; ++j) {
      BigInt power = 1;
      for (int a = 1; a <= j - (processed - 1); ++a) {
        power *= w;
        const BigInt& rest = table[static_cast<std::size_t>(j - a)];
        if (rest != 0) next[static_cast<std::size_t>(j)] += binomial(j, a) * power * rest;
      }
    }
    table = std::move(next);
  }
  return table[static_cast<std::size_t>(k)];
}

// All coalitions of {1..n} with at most k members, ordered by size and then
// lexicographically.
inline std::vector<Coalition> enumerate_coalitions(int n, int k) {
  check_dimension(n);
  if (k < 0 || k > n) throw DomainError("enumerate_coalitions needs 0 <= k <= n");
  std::vector<Coalition> out;
  std::vector<int> combo;
  for (int size = 0; size <= k; ++size) {
    combo.resize(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) combo[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
      out.push_back(Coalition::of(combo));
      int pos = size - 1;
      while (pos >= 0 && combo[static_cast<std::size_t>(pos)] == n - size + pos + 1) --pos;
      if (pos < 0) break;
      ++combo[static_cast<std::size_t>(pos)];
      for (int j = pos + 1; j < size; ++j) {
        combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return out;
}

inline constexpr int kMaxSequenceLength = 6;

// sigma^k_T: every length-k sequence over T hitting each member at least
// once, in lexicographic order. Exponential; meant for oracles only.
inline std::vector<std::vector<int>> enumerate_sequences(int k, Coalition t) {
  if (k > kMaxSequenceLength) {
    throw CapExceeded("sequence enumeration is capped at k = " +
                      std::to_string(kMaxSequenceLength));
  }
  const std::vector<int> alphabet = t.members();
  std::vector<std::vector<int>> out;
  if (alphabet.empty() || k < static_cast<int>(alphabet.size())) return out;

  std::vector<std::size_t> digits(static_cast<std::size_t>(k), 0);
  const std::size_t base = alphabet.size();
  while (true) {
    std::uint64_t seen = 0;
    for (std::size_t d : digits) seen |= std::uint64_t{1} << d;
    if (std::popcount(seen) == static_cast<int>(base)) {
      std::vector<int> seq;
      seq.reserve(digits.size());
      for (std::size_t d : digits) seq.push_back(alphabet[d]);
      out.push_back(std::move(seq));
    }
    int pos = k - 1;
    while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == base - 1) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++digits[static_cast<std::size_t>(pos)];
  }
  return out;
}

}  // namespace synergy
