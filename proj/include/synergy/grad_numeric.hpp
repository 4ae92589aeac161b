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

// Quadrature engine for path methods on arbitrary analytic expressions.
// Integrands use symbolic derivatives, so the quadrature rule is the only
// source of error.

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "synergy/core.hpp"
#include "synergy/error.hpp"
#include "synergy/expr.hpp"

namespace synergy {

struct QuadratureConfig {
  int nodes = 64;   // Gauss-Legendre points per panel and axis
  int panels = 4;   // composite panels on [0, 1]

  void validate() const {
    if (nodes < 2) throw DomainError("quadrature needs at least 2 nodes");
    if (panels < 1) throw DomainError("quadrature needs at least 1 panel");
  }
};

struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1], roots found by Newton iteration on the
// three-term recurrence.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs n >= 1");
  QuadratureRule rule;
  rule.points.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.points[lo] = -z;
    rule.points[hi] = z;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

// Composite rule on [0, 1]; nodes ascend within each panel, panels ascend.
inline QuadratureRule unit_interval_rule(const QuadratureConfig& cfg) {
  cfg.validate();
  const QuadratureRule base = gauss_legendre(cfg.nodes);
  QuadratureRule rule;
  const double h = 1.0 / cfg.panels;
  for (int p = 0; p < cfg.panels; ++p) {
    for (std::size_t i = 0; i < base.points.size(); ++i) {
      rule.points.push_back((p + 0.5 * (base.points[i] + 1.0)) * h);
      rule.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return rule;
}

namespace detail {

inline void check_instance_for(const Expr& e, const ProblemInstance& inst) {
  validate_instance(inst);
  if (inst.dim() != e.dim()) {
    throw DimensionMismatch("instance dimension " + std::to_string(inst.dim()) +
                            " differs from expression dimension " + std::to_string(e.dim()));
  }
}

inline FeaturePoint along_path(const ProblemInstance& inst, double t) {
  FeaturePoint y = inst.baseline;
  for (std::size_t i = 0; i < y.values.size(); ++i) {
    y[i] += t * (inst.x[i] - inst.baseline[i]);
  }
  return y;
}

inline double checked(double v) {
  if (!std::isfinite(v)) throw NonFiniteValue("integrand is not finite on the path");
  return v;
}

}  // namespace detail

// IG_i = (x_i - x'_i) * int_0^1 dF/dx_i(x' + t (x - x')) dt
inline InteractionReport ig_quadrature(const Expr& e, const ProblemInstance& inst,
                                       const QuadratureConfig& cfg = {}) {
  detail::check_instance_for(e, inst);
  const int n = e.dim();
  const QuadratureRule rule = unit_interval_rule(cfg);

  std::vector<Expr> grad;
  for (int i = 1; i <= n; ++i) grad.push_back(expr_partial(e, i));

  std::vector<double> integral(static_cast<std::size_t>(n), 0.0);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const FeaturePoint y = detail::along_path(inst, rule.points[q]);
    for (int i = 0; i < n; ++i) {
      if (node::is_constant(grad[static_cast<std::size_t>(i)].root(), 0.0)) continue;
      integral[static_cast<std::size_t>(i)] +=
          rule.weights[q] * detail::checked(expr_eval(grad[static_cast<std::size_t>(i)], y));
    }
  }

  InteractionReport report(n, 1);
  report[Coalition()] = expr_eval(e, inst.baseline);
  for (int i = 0; i < n; ++i) {
    const double d = inst.x[static_cast<std::size_t>(i)] - inst.baseline[static_cast<std::size_t>(i)];
    report[Coalition::of({i + 1})] = d * integral[static_cast<std::size_t>(i)];
  }
  return report;
}

// Second-order Integrated Hessian on a tensor-product Gauss-Legendre grid
// over (s, t):
//   IH_{ij} = 2 d_i d_j int int st d2F/dx_i dx_j (x' + st d) ds dt
//   IH_{i}  = d_i int int dF/dx_i (x' + st d) ds dt
//           + d_i^2 int int st d2F/dx_i^2 (x' + st d) ds dt
inline InteractionReport ih2_quadrature(const Expr& e, const ProblemInstance& inst,
                                        const QuadratureConfig& cfg = {}) {
  detail::check_instance_for(e, inst);
  const int n = e.dim();
  if (n < 2) throw DomainError("second-order interactions need n >= 2");
  const QuadratureRule rule = unit_interval_rule(cfg);

  std::vector<Expr> grad;
  for (int i = 1; i <= n; ++i) grad.push_back(expr_partial(e, i));
  // Upper triangle of the Hessian, row-major.
  std::vector<Expr> hess;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) hess.push_back(expr_partial(grad[static_cast<std::size_t>(i - 1)], j));
  }
  auto hess_index = [n](int i, int j) {  // 0-based, i <= j
    return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
  };

  std::vector<double> grad_acc(grad.size(), 0.0);
  std::vector<double> hess_acc(hess.size(), 0.0);
  std::vector<bool> grad_zero(grad.size());
  std::vector<bool> hess_zero(hess.size());
  for (std::size_t i = 0; i < grad.size(); ++i) grad_zero[i] = node::is_constant(grad[i].root(), 0.0);
  for (std::size_t i = 0; i < hess.size(); ++i) hess_zero[i] = node::is_constant(hess[i].root(), 0.0);

  for (std::size_t a = 0; a < rule.points.size(); ++a) {
    for (std::size_t b = 0; b < rule.points.size(); ++b) {
      const double st = rule.points[a] * rule.points[b];
      const double w = rule.weights[a] * rule.weights[b];
      const FeaturePoint y = detail::along_path(inst, st);
      for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!grad_zero[i]) grad_acc[i] += w * detail::checked(expr_eval(grad[i], y));
      }
      for (std::size_t i = 0; i < hess.size(); ++i) {
        if (!hess_zero[i]) hess_acc[i] += w * st * detail::checked(expr_eval(hess[i], y));
      }
    }
  }

  InteractionReport report(n, 2);
  report[Coalition()] = expr_eval(e, inst.baseline);
  for (int i = 0; i < n; ++i) {
    const double di = inst.x[static_cast<std::size_t>(i)] - inst.baseline[static_cast<std::size_t>(i)];
    report[Coalition::of({i + 1})] =
        di * grad_acc[static_cast<std::size_t>(i)] + di * di * hess_acc[hess_index(i, i)];
    for (int j = i + 1; j < n; ++j) {
      const double dj = inst.x[static_cast<std::size_t>(j)] - inst.baseline[static_cast<std::size_t>(j)];
      report[Coalition::of({i + 1, j + 1})] = 2.0 * di * dj * hess_acc[hess_index(i, j)];
    }
  }
  return report;
}

}  // namespace synergy
