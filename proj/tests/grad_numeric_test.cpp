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
#include <numbers>

#include "oracles.hpp"
#include "synergy/synergy.hpp"

namespace synergy {
namespace {

TEST(GaussLegendre, WeightsSumToTwoAndNodesAreSymmetric) {
  for (int n = 1; n <= 80; ++n) {
    const QuadratureRule rule = gauss_legendre(n);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    EXPECT_NEAR(sum, 2.0, 1e-13) << n;
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
      EXPECT_NEAR(rule.points[i], -rule.points[rule.points.size() - 1 - i], 1e-15);
      if (i > 0) {
        EXPECT_LT(rule.points[i - 1], rule.points[i]);
      }
    }
  }
  EXPECT_THROW(gauss_legendre(0), DomainError);
}

TEST(GaussLegendre, TwoPointRule) {
  const QuadratureRule rule = gauss_legendre(2);
  EXPECT_NEAR(rule.points[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(rule.points[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(rule.weights[0], 1.0, 1e-15);
}

TEST(GaussLegendre, ExactUpToDegreeTwoNMinusOne) {
  for (int n = 2; n <= 12; ++n) {
    const QuadratureRule rule = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.points.size(); ++i) sum += rule.weights[i] * std::pow(rule.points[i], d);
      const double want = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
      EXPECT_NEAR(sum, want, 1e-14) << "n=" << n << " d=" << d;
    }
  }
}

TEST(UnitIntervalRule, CompositePanels) {
  const QuadratureRule rule = unit_interval_rule({8, 3});
  ASSERT_EQ(rule.points.size(), 24u);
  double sum = 0.0;
  double cube = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    EXPECT_GT(rule.points[i], 0.0);
    EXPECT_LT(rule.points[i], 1.0);
    sum += rule.weights[i];
    cube += rule.weights[i] * std::pow(rule.points[i], 3);
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_NEAR(cube, 0.25, 1e-15);
}

TEST(QuadratureConfig, Validation) {
  EXPECT_THROW((QuadratureConfig{1, 4}.validate()), DomainError);
  EXPECT_THROW((QuadratureConfig{8, 0}.validate()), DomainError);
  EXPECT_NO_THROW((QuadratureConfig{}.validate()));
}

TEST(IgQuadrature, QuadraticExample) {
  const Expr e = parse("2*x1 - 3*x2 + x1*x3 - 15", 3);
  const ProblemInstance inst = ProblemInstance::tight(FeaturePoint{1.0, 1.0, 1.0}, FeaturePoint::zeros(3));
  const InteractionReport r = ig_quadrature(e, inst);
  EXPECT_NEAR(r.at(Coalition()), -15.0, 1e-14);
  EXPECT_NEAR(r.at(Coalition::of({1})), 2.5, 1e-14);
  EXPECT_NEAR(r.at(Coalition::of({2})), -3.0, 1e-14);
  EXPECT_NEAR(r.at(Coalition::of({3})), 0.5, 1e-14);
  EXPECT_NEAR(r.total(), 0.0, 1e-14);
}

TEST(IgQuadrature, SingleAxisSine) {
  const Expr e = parse("c*sin(x2)", 2, {{"c", 3.0}});
  const ProblemInstance inst =
      ProblemInstance::tight(FeaturePoint{0.4, std::numbers::pi / 2}, FeaturePoint::zeros(2));
  const InteractionReport r = ig_quadrature(e, inst);
  EXPECT_NEAR(r.at(Coalition::of({2})), 3.0, 1e-10);
  EXPECT_EQ(r.at(Coalition::of({1})), 0.0);
}

TEST(IgQuadrature, AgreesWithExactOnPolynomials) {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.integer(1, 4);
    const FeaturePoint center = random_point(rng, n);
    const SparsePolynomial p = random_polynomial(rng, center, 10, 0.1);
    const FeaturePoint x = random_point(rng, n);
    const InteractionReport exact = ig_exact(p, x);
    const InteractionReport quad = ig_quadrature(poly_to_expr(p), ProblemInstance::tight(x, center));
    for (const auto& [s, v] : exact) EXPECT_NEAR(quad.at(s), v, 1e-8 * std::max(1.0, std::abs(v)));
  }
}

TEST(Ih2Quadrature, AgreesWithExactOnPolynomials) {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.integer(2, 4);
    const FeaturePoint center = random_point(rng, n);
    const SparsePolynomial p = random_polynomial(rng, center, 8, 0.2);
    const FeaturePoint x = random_point(rng, n);
    const InteractionReport exact = ih_exact(p, x, 2);
    // 16 nodes are exact at this degree; a few trials also run the default rule.
    const QuadratureConfig cfg = trial < 3 ? QuadratureConfig{} : QuadratureConfig{16, 1};
    const InteractionReport quad =
        ih2_quadrature(poly_to_expr(p), ProblemInstance::tight(x, center), cfg);
    for (const auto& [s, v] : exact) EXPECT_NEAR(quad.at(s), v, 1e-8 * std::max(1.0, std::abs(v)));
  }
}

TEST(Ih2Quadrature, ProductOfTwoFeatures) {
  const ProblemInstance inst = ProblemInstance::tight(FeaturePoint{0.8, -1.5}, FeaturePoint::zeros(2));
  const InteractionReport r = ih2_quadrature(parse("x1*x2", 2), inst);
  const double f = 0.8 * -1.5;
  EXPECT_NEAR(r.at(Coalition::of({1, 2})), f / 2.0, 1e-14);
  EXPECT_NEAR(r.at(Coalition::of({1})), f / 4.0, 1e-14);
  EXPECT_NEAR(r.at(Coalition::of({2})), f / 4.0, 1e-14);
  EXPECT_THROW(ih2_quadrature(parse("x1", 1), ProblemInstance::tight(FeaturePoint{1.0}, FeaturePoint{0.0})),
               DomainError);
}

TEST(Quadrature, CompletenessOnTranscendental) {
  const Expr e = parse("exp(x1*x2) - 1 + sin(x1*x2*x3) + cos(x2 - x3)", 3);
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const ProblemInstance inst = ProblemInstance::tight(random_point(rng, 3), random_point(rng, 3));
    const double want = expr_eval(e, inst.x) - expr_eval(e, inst.baseline);
    EXPECT_NEAR(ig_quadrature(e, inst).total(), want, 1e-7);
    EXPECT_NEAR(ih2_quadrature(e, inst).total(), want, 1e-7);
  }
}

TEST(Quadrature, ErrorShrinksAsNodesDouble) {
  const Expr e = parse("exp(2*x1*x2) + sin(3*x1)", 2);
  const ProblemInstance inst = ProblemInstance::tight(FeaturePoint{1.0, 0.9}, FeaturePoint{-0.3, 0.1});
  const double reference = ig_quadrature(e, inst, {64, 8}).at(Coalition::of({1}));
  double last = INFINITY;
  for (int nodes = 2; nodes <= 16; nodes *= 2) {
    const double err = std::abs(ig_quadrature(e, inst, {nodes, 1}).at(Coalition::of({1})) - reference);
    EXPECT_LE(err, last + 1e-12);
    last = err;
  }
  EXPECT_LT(last, 1e-10);
}

TEST(Quadrature, Errors) {
  const Expr e = parse("x1 + x2", 2);
  EXPECT_THROW(ig_quadrature(e, ProblemInstance::tight(FeaturePoint{1.0}, FeaturePoint{0.0})),
               DimensionMismatch);
  ProblemInstance out = ProblemInstance::tight(FeaturePoint{1.0, 1.0}, FeaturePoint::zeros(2));
  out.box.upper = FeaturePoint{0.5, 1.0};
  EXPECT_THROW(ig_quadrature(e, out), OutOfBox);
}

TEST(Quadrature, NonFiniteIntegrand) {
  const Expr e = parse("exp(x1^4)", 1);
  const ProblemInstance inst = ProblemInstance::tight(FeaturePoint{30.0}, FeaturePoint{0.0});
  EXPECT_THROW(ig_quadrature(e, inst), NonFiniteValue);
}

}  // namespace
}  // namespace synergy
