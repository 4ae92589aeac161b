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


#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "synergy/synergy.hpp"

namespace synergy {
namespace {

SparsePolynomial sample_poly() {
  // 2 x1 - 3 x2 + x1 x3 - 15
  SparsePolynomial p(FeaturePoint::zeros(3));
  p.add_term(MultiIndex{1, 0, 0}, 2.0);
  p.add_term(MultiIndex{0, 1, 0}, -3.0);
  p.add_term(MultiIndex{1, 0, 1}, 1.0);
  p.add_term(MultiIndex{0, 0, 0}, -15.0);
  return p;
}

TEST(SparsePolynomial, AccumulatesAndCancels) {
  SparsePolynomial p(FeaturePoint::zeros(2));
  p.add_term(MultiIndex{1, 1}, 2.0);
  p.add_term(MultiIndex{1, 1}, 0.5);
  EXPECT_EQ(p.coefficient(MultiIndex{1, 1}), 2.5);
  p.add_term(MultiIndex{1, 1}, -2.5);
  EXPECT_TRUE(p.empty());
  p.add_term(MultiIndex{2, 0}, 0.0);
  EXPECT_TRUE(p.empty());
}

TEST(SparsePolynomial, RejectsBadTerms) {
  SparsePolynomial p(FeaturePoint::zeros(2));
  EXPECT_THROW(p.add_term(MultiIndex{1, 0, 0}, 1.0), DimensionMismatch);
  EXPECT_THROW(p.add_term(MultiIndex{kMaxPolynomialDegree + 1, 0}, 1.0), CapExceeded);
  EXPECT_NO_THROW(p.add_term(MultiIndex{100, 1}, 1.0));
  EXPECT_EQ(p.degree(), 101);
}

TEST(SparsePolynomial, Evaluates) {
  const SparsePolynomial p = sample_poly();
  EXPECT_EQ(poly_eval(p, FeaturePoint{1.0, 1.0, 1.0}), -15.0);
  EXPECT_EQ(poly_eval(p, FeaturePoint{0.0, 0.0, 0.0}), -15.0);
  EXPECT_EQ(poly_eval(p, FeaturePoint{2.0, -1.0, 3.0}), 4.0 + 3.0 + 6.0 - 15.0);
  EXPECT_THROW(poly_eval(p, FeaturePoint{1.0}), DimensionMismatch);
}

TEST(SparsePolynomial, CenteredMonomials) {
  SparsePolynomial p(FeaturePoint{1.0, -1.0});
  p.add_term(MultiIndex{2, 1}, 3.0);
  // 3 (y1 - 1)^2 (y2 + 1)
  EXPECT_DOUBLE_EQ(poly_eval(p, FeaturePoint{3.0, 0.5}), 3.0 * 4.0 * 1.5);
  EXPECT_EQ(poly_eval(p, FeaturePoint{1.0, 7.0}), 0.0);
}

TEST(SparsePolynomial, ArithmeticRequiresSameCenter) {
  const SparsePolynomial p = sample_poly();
  const SparsePolynomial q(FeaturePoint{1.0, 0.0, 0.0});
  EXPECT_THROW(poly_add(p, q), DomainError);
  const SparsePolynomial zero = poly_sub(p, p);
  EXPECT_TRUE(zero.empty());
  const SparsePolynomial twice = poly_add(p, p);
  EXPECT_EQ(twice, poly_scale(p, 2.0));
}

TEST(SparsePolynomial, PartialMatchesFiniteDifferences) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const FeaturePoint center = random_point(rng, 3);
    const SparsePolynomial p = random_polynomial(rng, center, 5, 0.4);
    const FeaturePoint y = random_point(rng, 3);
    for (int i = 1; i <= 3; ++i) {
      const double fd = oracle::central_difference(
          [&](const FeaturePoint& z) { return poly_eval(p, z); }, y, i);
      EXPECT_NEAR(poly_eval(poly_partial(p, i), y), fd, 1e-7);
    }
  }
  EXPECT_THROW(poly_partial(sample_poly(), 4), InvalidCoalition);
}

TEST(SparsePolynomial, Truncate) {
  const SparsePolynomial p = sample_poly();
  const SparsePolynomial t = poly_truncate(p, 1);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.coefficient(MultiIndex{1, 0, 1}), 0.0);
  EXPECT_THROW(poly_truncate(p, -1), DomainError);
}

TEST(SynergySplit, PiecesSumBackAndAreSupportedExactly) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const FeaturePoint center = random_point(rng, 4);
    const SparsePolynomial p = random_polynomial(rng, center, 4, 0.3);
    const auto pieces = synergy_split(p);
    SparsePolynomial sum(center);
    for (const auto& [s, piece] : pieces) {
      sum = poly_add(sum, piece);
      for (const auto& [m, c] : piece.terms()) EXPECT_EQ(m.support(), s);
      // Vanishes when any member sits at the center.
      const FeaturePoint y = random_point(rng, 4);
      for (int i : s.members()) {
        FeaturePoint z = y;
        z[static_cast<std::size_t>(i - 1)] = center[static_cast<std::size_t>(i - 1)];
        EXPECT_EQ(poly_eval(piece, z), 0.0);
      }
    }
    EXPECT_EQ(sum, p);
  }
}

TEST(SynergySplit, WorkedExample) {
  const auto pieces = synergy_split(sample_poly());
  ASSERT_EQ(pieces.size(), 4u);
  EXPECT_EQ(pieces.at(Coalition()).coefficient(MultiIndex{0, 0, 0}), -15.0);
  EXPECT_EQ(pieces.at(Coalition::of({1})).coefficient(MultiIndex{1, 0, 0}), 2.0);
  EXPECT_EQ(pieces.at(Coalition::of({2})).coefficient(MultiIndex{0, 1, 0}), -3.0);
  EXPECT_EQ(pieces.at(Coalition::of({1, 3})).coefficient(MultiIndex{1, 0, 1}), 1.0);
}

TEST(PolyPermute, RelabelsFeaturesAndCenter) {
  SparsePolynomial p(FeaturePoint{1.0, 2.0, 3.0});
  p.add_term(MultiIndex{2, 1, 0}, 5.0);
  const SparsePolynomial q = poly_permute(p, {3, 1, 2});
  EXPECT_EQ(q.center().values, (std::vector<double>{2.0, 3.0, 1.0}));
  EXPECT_EQ(q.coefficient(MultiIndex{1, 0, 2}), 5.0);
  const FeaturePoint y{0.5, -1.0, 4.0};
  const FeaturePoint moved{-1.0, 4.0, 0.5};
  EXPECT_DOUBLE_EQ(poly_eval(p, y), poly_eval(q, moved));
  EXPECT_THROW(poly_permute(p, {1, 2}), DimensionMismatch);
}

}  // namespace
}  // namespace synergy
