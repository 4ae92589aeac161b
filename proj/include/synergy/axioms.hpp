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

// Method-agnostic axiom checker.
//
// A method is a callable from (sample, k) to an InteractionReport plus the
// kind of function it consumes. Every check draws seeded random samples of
// that kind, runs the method and measures how far the axiom is from holding.
// Which methods are supposed to fail which axioms is data (see
// default_expectations), not logic.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "synergy/core.hpp"
#include "synergy/error.hpp"
#include "synergy/expr.hpp"
#include "synergy/grad_exact.hpp"
#include "synergy/grad_numeric.hpp"
#include "synergy/json_io.hpp"
#include "synergy/polynomial.hpp"
#include "synergy/random.hpp"
#include "synergy/set_methods.hpp"

namespace synergy {

enum class Capability { kBinary, kPolynomial, kAnalytic };

inline const char* capability_name(Capability c) {
  switch (c) {
    case Capability::kBinary: return "binary-feature";
    case Capability::kPolynomial: return "polynomial";
    case Capability::kAnalytic: return "analytic";
  }
  return "?";
}

using FunctionInput = std::variant<SetFunctionTable, SparsePolynomial, Expr>;

// A function together with the instance it is explained on. Tables already
// encode x and x', so their instance only fixes n.
struct Sample {
  ProblemInstance instance;
  FunctionInput function;

  int dim() const { return instance.dim(); }
};

struct MethodUnderTest {
  std::string id;
  Capability capability = Capability::kBinary;
  bool attribution = false;   // order fixed at 1
  double tolerance = 1e-10;
  std::function<InteractionReport(const Sample&, int k)> run;
};

enum class Axiom {
  kCompleteness,
  kLinearity,
  kNullFeature,
  kSymmetry,
  kBaselineTest,
  kInteractionDistribution,
  kContinuity,
  kUniqueness,  // not a per-method check; see check_uniqueness
};

inline constexpr Axiom kAllAxioms[] = {
    Axiom::kCompleteness, Axiom::kLinearity,    Axiom::kNullFeature,
    Axiom::kSymmetry,     Axiom::kBaselineTest, Axiom::kInteractionDistribution,
    Axiom::kContinuity,
};

inline const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::kCompleteness: return "completeness";
    case Axiom::kLinearity: return "linearity";
    case Axiom::kNullFeature: return "null-feature";
    case Axiom::kSymmetry: return "symmetry";
    case Axiom::kBaselineTest: return "baseline-test";
    case Axiom::kInteractionDistribution: return "interaction-distribution";
    case Axiom::kContinuity: return "continuity";
    case Axiom::kUniqueness: return "uniqueness";
  }
  return "?";
}

inline std::optional<Axiom> axiom_from_name(const std::string& name) {
  for (Axiom a : kAllAxioms) {
    if (name == axiom_name(a)) return a;
  }
  return std::nullopt;
}

enum class Status { kPass, kFail, kNotApplicable };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kNotApplicable: return "n/a";
  }
  return "?";
}

struct AxiomReport {
  std::string method;
  Axiom axiom = Axiom::kCompleteness;
  Status status = Status::kNotApplicable;
  int trials = 0;
  int failures = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  Json witness;                             // first failing trial, null on pass
  std::vector<std::pair<int, double>> series;  // continuity: (L, residual)
  std::string note;
};

struct CheckOptions {
  std::uint64_t seed = 1;
  int trials = 1000;
  std::optional<double> tolerance;  // defaults to the method's own
};

// ---------------------------------------------------------------------------
// Sample construction

namespace detail {

inline Json function_to_json(const FunctionInput& f) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SetFunctionTable>) {
          return {{"table", table_to_json(v)}};
        } else if constexpr (std::is_same_v<T, SparsePolynomial>) {
          return {{"polynomial", poly_to_json(v)}};
        } else {
          return {{"expr", to_string(v)}, {"n", v.dim()}};
        }
      },
      f);
}

inline Json sample_to_json(const Sample& s) {
  return {{"instance", instance_to_json(s.instance)}, {"function", function_to_json(s.function)}};
}

inline ProblemInstance unit_box_instance(Rng& rng, int n) {
  FeaturePoint lower(std::vector<double>(static_cast<std::size_t>(n), -1.0));
  FeaturePoint upper(std::vector<double>(static_cast<std::size_t>(n), 1.0));
  return ProblemInstance{random_point(rng, n), FeaturePoint::zeros(n), Box{lower, upper}};
}

inline int max_dim(Capability c) {
  switch (c) {
    case Capability::kBinary: return 6;
    case Capability::kPolynomial: return 5;
    case Capability::kAnalytic: return 4;
  }
  return 4;
}

// Random function of the capability's kind that only reads `features`.
inline FunctionInput random_function(Capability cap, Rng& rng, const ProblemInstance& inst,
                                     Coalition features) {
  const int n = inst.dim();
  switch (cap) {
    case Capability::kBinary: {
      SetFunctionTable t = random_table(rng, n);
      // Copy the slice without each ignored feature onto the slice with it.
      for (std::uint64_t s = 0; s < t.values.size(); ++s) {
        const std::uint64_t kept = s & features.mask();
        t.values[s] = t.values[kept];
      }
      return t;
    }
    case Capability::kPolynomial: {
      const SparsePolynomial full = random_polynomial(rng, inst.baseline);
      SparsePolynomial p(inst.baseline);
      for (const auto& [m, c] : full.terms()) {
        if (m.support().subset_of(features)) p.add_term(m, c);
      }
      return p;
    }
    case Capability::kAnalytic: {
      const SparsePolynomial full = random_polynomial(rng, inst.baseline, 4);
      SparsePolynomial p(inst.baseline);
      for (const auto& [m, c] : full.terms()) {
        if (m.support().subset_of(features)) p.add_term(m, c);
      }
      std::vector<NodePtr> terms{poly_to_expr(p).root()};
      const std::vector<int> members = features.members();
      if (!members.empty()) {
        // Draws are sequenced one per statement so the sample does not depend
        // on argument evaluation order.
        auto pick = [&] {
          return node::variable(members[static_cast<std::size_t>(
              rng.integer(0, static_cast<int>(members.size()) - 1))]);
        };
        const double a = rng.uniform(-1.0, 1.0);
        const NodePtr u1 = pick();
        const NodePtr u2 = pick();
        const double b = rng.uniform(-1.0, 1.0);
        const NodePtr v1 = pick();
        const NodePtr v2 = pick();
        terms.push_back(node::multiply(node::constant(a), node::sin(node::multiply(u1, u2))));
        terms.push_back(node::multiply(node::constant(b), node::exp(node::add(v1, v2))));
      }
      return Expr(n, node::add(terms));
    }
  }
  throw DomainError("unknown capability");
}

// Pure synergy of coalition S: a table with a single non-zero synergy, or a
// monomial supported exactly on S.
inline FunctionInput pure_synergy(Capability cap, Rng& rng, const ProblemInstance& inst,
                                  Coalition s) {
  const int n = inst.dim();
  const double c = rng.uniform(-1.0, 1.0);
  if (cap == Capability::kBinary) return pure_synergy_table(n, s, c);
  SparsePolynomial p(inst.baseline);
  p.add_term(random_monomial(rng, n, s), c);
  if (cap == Capability::kPolynomial) return p;
  return poly_to_expr(p);
}

inline FunctionInput combine(double a, const FunctionInput& f, double b, const FunctionInput& g) {
  if (const auto* tf = std::get_if<SetFunctionTable>(&f)) {
    const auto& tg = std::get<SetFunctionTable>(g);
    SetFunctionTable out = *tf;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] = a * tf->values[i] + b * tg.values[i];
    }
    return out;
  }
  if (const auto* pf = std::get_if<SparsePolynomial>(&f)) {
    return poly_add(poly_scale(*pf, a), poly_scale(std::get<SparsePolynomial>(g), b));
  }
  return expr_combine(a, std::get<Expr>(f), b, std::get<Expr>(g));
}

inline NodePtr rename(const NodePtr& n, const std::vector<int>& perm) {
  if (n->op == Op::kVariable) return node::variable(perm[static_cast<std::size_t>(n->index - 1)]);
  if (n->children.empty()) return n;
  std::vector<NodePtr> children;
  for (const auto& c : n->children) children.push_back(rename(c, perm));
  return node::make(n->op, std::move(children), n->value, n->index);
}

inline FeaturePoint permute_point(const FeaturePoint& p, const std::vector<int>& perm) {
  FeaturePoint out = p;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out[static_cast<std::size_t>(perm[i] - 1)] = p[i];
  }
  return out;
}

inline Coalition permute_coalition(Coalition s, const std::vector<int>& perm) {
  std::uint64_t mask = 0;
  for (int i : s.members()) mask |= std::uint64_t{1} << (perm[static_cast<std::size_t>(i - 1)] - 1);
  return Coalition(mask);
}

// (pi x, pi x', F o pi^{-1}): feature i is renamed perm[i-1].
inline Sample permute_sample(const Sample& s, const std::vector<int>& perm) {
  Sample out;
  out.instance = ProblemInstance{permute_point(s.instance.x, perm),
                                 permute_point(s.instance.baseline, perm),
                                 Box{permute_point(s.instance.box.lower, perm),
                                     permute_point(s.instance.box.upper, perm)}};
  if (const auto* t = std::get_if<SetFunctionTable>(&s.function)) {
    out.function = permute_table(*t, perm);
  } else if (const auto* p = std::get_if<SparsePolynomial>(&s.function)) {
    out.function = poly_permute(*p, perm);
  } else {
    const Expr& e = std::get<Expr>(s.function);
    out.function = Expr(e.dim(), rename(e.root(), perm));
  }
  return out;
}

// F(x) - F(x').
inline double delta(const Sample& s) {
  if (const auto* t = std::get_if<SetFunctionTable>(&s.function)) {
    return t->at_input() - t->at_baseline();
  }
  if (const auto* p = std::get_if<SparsePolynomial>(&s.function)) {
    return poly_eval(*p, s.instance.x) - poly_eval(*p, s.instance.baseline);
  }
  const Expr& e = std::get<Expr>(s.function);
  return expr_eval(e, s.instance.x) - expr_eval(e, s.instance.baseline);
}

inline double max_abs(const InteractionReport& r) {
  double m = 0.0;
  for (const auto& [s, v] : r) m = std::max(m, std::abs(v));
  return m;
}

// Bookkeeping shared by the randomized checks.
class Tally {
 public:
  Tally(const MethodUnderTest& mut, Axiom axiom, const CheckOptions& opt)
      : tol_(opt.tolerance.value_or(mut.tolerance)) {
    report_.method = mut.id;
    report_.axiom = axiom;
    report_.status = Status::kPass;
  }

  double tolerance() const { return tol_; }

  // Records a trial with scaled residual r; `witness` builds the failure
  // record lazily.
  template <typename Witness>
  void record(double r, Witness&& witness) {
    ++report_.trials;
    sum_ += r;
    report_.max_residual = std::max(report_.max_residual, r);
    if (!(r <= tol_)) {
      if (report_.failures == 0) {
        report_.witness = witness();
        report_.witness["residual"] = r;
        report_.witness["tolerance"] = tol_;
      }
      ++report_.failures;
      report_.status = Status::kFail;
    }
  }

  AxiomReport finish() {
    if (report_.trials > 0) report_.mean_residual = sum_ / report_.trials;
    return report_;
  }

 private:
  double tol_;
  double sum_ = 0.0;
  AxiomReport report_;
};

inline int random_order(const MethodUnderTest& mut, Rng& rng, int n) {
  return mut.attribution ? 1 : rng.integer(1, n);
}

inline std::uint64_t axiom_stream(const MethodUnderTest& mut, Axiom axiom) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over the id
  for (char c : mut.id) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  return h ^ (static_cast<std::uint64_t>(axiom) << 56);
}

inline AxiomReport not_applicable(const MethodUnderTest& mut, Axiom axiom, std::string why) {
  AxiomReport r;
  r.method = mut.id;
  r.axiom = axiom;
  r.status = Status::kNotApplicable;
  r.note = std::move(why);
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Checks

// sum_{S != {}} I_S = F(x) - F(x'), residual relative to max(1, |F(x) - F(x')|).
inline AxiomReport check_completeness(const MethodUnderTest& mut, const CheckOptions& opt = {}) {
  detail::Tally tally(mut, Axiom::kCompleteness, opt);
  const std::uint64_t stream = detail::axiom_stream(mut, Axiom::kCompleteness);
  for (int trial = 0; trial < opt.trials; ++trial) {
    Rng rng(derive_seed(opt.seed, stream, static_cast<std::uint64_t>(trial)));
    const int n = rng.integer(1, detail::max_dim(mut.capability));
    const int k = detail::random_order(mut, rng, n);
    Sample s;
    s.instance = detail::unit_box_instance(rng, n);
    s.function = detail::random_function(mut.capability, rng, s.instance, Coalition::full(n));
    const InteractionReport r = mut.run(s, k);
    const double d = detail::delta(s);
    const double residual = std::abs(r.total() - d) / std::max(1.0, std::abs(d));
    tally.record(residual, [&] {
      return Json{{"sample", detail::sample_to_json(s)}, {"k", k},
                  {"sum", r.total()}, {"expected", d}};
    });
  }
  return tally.finish();
}

// I(aF + bG) = a I(F) + b I(G) entrywise, a, b uniform on [-2, 2].
inline AxiomReport check_linearity(const MethodUnderTest& mut, const CheckOptions& opt = {}) {
  detail::Tally tally(mut, Axiom::kLinearity, opt);
  const std::uint64_t stream = detail::axiom_stream(mut, Axiom::kLinearity);
  for (int trial = 0; trial < opt.trials; ++trial) {
    Rng rng(derive_seed(opt.seed, stream, static_cast<std::uint64_t>(trial)));
    const int n = rng.integer(1, detail::max_dim(mut.capability));
    const int k = detail::random_order(mut, rng, n);
    const ProblemInstance inst = detail::unit_box_instance(rng, n);
    const Sample f{inst, detail::random_function(mut.capability, rng, inst, Coalition::full(n))};
    const Sample g{inst, detail::random_function(mut.capability, rng, inst, Coalition::full(n))};
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    const Sample mix{inst, detail::combine(a, f.function, b, g.function)};
    const InteractionReport rf = mut.run(f, k);
    const InteractionReport rg = mut.run(g, k);
    const InteractionReport rm = mut.run(mix, k);
    double diff = 0.0;
    double scale = 1.0;
    Coalition worst;
    for (const auto& [s, v] : rm) {
      const double expected = a * rf.at(s) + b * rg.at(s);
      scale = std::max(scale, std::abs(expected));
      if (std::abs(v - expected) > diff) {
        diff = std::abs(v - expected);
        worst = s;
      }
    }
    tally.record(diff / scale, [&] {
      return Json{{"f", detail::sample_to_json(f)}, {"g", detail::sample_to_json(g)},
                  {"a", a}, {"b", b}, {"k", k}, {"coalition", coalition_to_json(worst)}};
    });
  }
  return tally.finish();
}

// If F ignores feature i, every coalition holding i scores 0.
inline AxiomReport check_null_feature(const MethodUnderTest& mut, const CheckOptions& opt = {}) {
  detail::Tally tally(mut, Axiom::kNullFeature, opt);
  const std::uint64_t stream = detail::axiom_stream(mut, Axiom::kNullFeature);
  for (int trial = 0; trial < opt.trials; ++trial) {
    Rng rng(derive_seed(opt.seed, stream, static_cast<std::uint64_t>(trial)));
    const int n = rng.integer(1, detail::max_dim(mut.capability));
    const int k = detail::random_order(mut, rng, n);
    const int ignored = rng.integer(1, n);
    Sample s;
    s.instance = detail::unit_box_instance(rng, n);
    const Coalition used(Coalition::full(n).mask() & ~Coalition::of({ignored}).mask());
    s.function = detail::random_function(mut.capability, rng, s.instance, used);
    const InteractionReport r = mut.run(s, k);
    double worst_value = 0.0;
    Coalition worst;
    for (const auto& [c, v] : r) {
      if (c.has(ignored) && std::abs(v) > std::abs(worst_value)) {
        worst_value = v;
        worst = c;
      }
    }
    const double scale = std::max(1.0, detail::max_abs(r));
    tally.record(std::abs(worst_value) / scale, [&] {
      return Json{{"sample", detail::sample_to_json(s)}, {"k", k}, {"ignored", ignored},
                  {"coalition", coalition_to_json(worst)}, {"value", worst_value}};
    });
  }
  return tally.finish();
}

// I_S(x, x', F) = I_{pi S}(pi x, pi x', F o pi^{-1}) on the box [-1, 1]^n.
inline AxiomReport check_symmetry(const MethodUnderTest& mut, const CheckOptions& opt = {}) {
  detail::Tally tally(mut, Axiom::kSymmetry, opt);
  const std::uint64_t stream = detail::axiom_stream(mut, Axiom::kSymmetry);
  for (int trial = 0; trial < opt.trials; ++trial) {
    Rng rng(derive_seed(opt.seed, stream, static_cast<std::uint64_t>(trial)));
    const int n = rng.integer(1, detail::max_dim(mut.capability));
    const int k = detail::random_order(mut, rng, n);
    Sample s;
    s.instance = detail::unit_box_instance(rng, n);
    s.function = detail::random_function(mut.capability, rng, s.instance, Coalition::full(n));
    const std::vector<int> perm = rng.permutation(n);
    const Sample moved = detail::permute_sample(s, perm);
    const InteractionReport r = mut.run(s, k);
    const InteractionReport rp = mut.run(moved, k);
    double diff = 0.0;
    Coalition worst;
    for (const auto& [c, v] : r) {
      const double other = rp.at(detail::permute_coalition(c, perm));
      if (std::abs(v - other) > diff) {
        diff = std::abs(v - other);
        worst = c;
      }
    }
    const double scale = std::max(1.0, detail::max_abs(r));
    tally.record(diff / scale, [&] {
      return Json{{"sample", detail::sample_to_json(s)}, {"k", k}, {"permutation", perm},
                  {"coalition", coalition_to_json(worst)}};
    });
  }
  return tally.finish();
}

namespace detail {

// Feeds pure synergies Phi_S and measures the largest score on a proper
// subset T of S that the axiom requires to be zero. `max_subset` bounds |T|.
template <typename DrawShape>
AxiomReport check_pure_synergy_zeros(const MethodUnderTest& mut, Axiom axiom,
                                     const CheckOptions& opt, DrawShape&& draw) {
  Tally tally(mut, axiom, opt);
  const std::uint64_t stream = axiom_stream(mut, axiom);
  for (int trial = 0; trial < opt.trials; ++trial) {
    Rng rng(derive_seed(opt.seed, stream, static_cast<std::uint64_t>(trial)));
    const auto [n, k, size, max_subset] = draw(rng);
    const Coalition coalition = rng.coalition(n, size);
    Sample s;
    s.instance = unit_box_instance(rng, n);
    s.function = pure_synergy(mut.capability, rng, s.instance, coalition);
    const InteractionReport r = mut.run(s, k);
    double worst_value = 0.0;
    Coalition worst;
    for (const auto& [t, v] : r) {
      if (!t.proper_subset_of(coalition) || t.size() > max_subset) continue;
      if (std::abs(v) > std::abs(worst_value)) {
        worst_value = v;
        worst = t;
      }
    }
    const double scale = std::max(1.0, std::abs(delta(s)));
    tally.record(std::abs(worst_value) / scale, [&] {
      return Json{{"sample", sample_to_json(s)}, {"k", k},
                  {"synergy", coalition_to_json(coalition)},
                  {"coalition", coalition_to_json(worst)}, {"value", worst_value}};
    });
  }
  return tally.finish();
}

}  // namespace detail

// For a pure synergy Phi_S with |S| <= k, every proper subset of S scores 0.
inline AxiomReport check_baseline_test(const MethodUnderTest& mut, const CheckOptions& opt = {}) {
  if (mut.attribution) {
    return detail::not_applicable(mut, Axiom::kBaselineTest, "attribution method (order 1)");
  }
  return detail::check_pure_synergy_zeros(
      mut, Axiom::kBaselineTest, opt, [&](Rng& rng) {
        const int n = rng.integer(2, detail::max_dim(mut.capability));
        const int k = rng.integer(2, n);
        const int size = rng.integer(1, k);
        return std::tuple{n, k, size, k};
      });
}

// For a pure synergy Phi_S of any size, proper subsets T with |T| < k score 0.
inline AxiomReport check_interaction_distribution(const MethodUnderTest& mut,
                                                  const CheckOptions& opt = {}) {
  if (mut.attribution) {
    return detail::not_applicable(mut, Axiom::kInteractionDistribution,
                                  "attribution method (order 1)");
  }
  return detail::check_pure_synergy_zeros(
      mut, Axiom::kInteractionDistribution, opt, [&](Rng& rng) {
        const int n = rng.integer(3, detail::max_dim(mut.capability));
        const int k = rng.integer(2, n - 1);
        const int size = rng.integer(1, n);
        return std::tuple{n, k, size, k - 1};
      });
}

// Runs the method on Taylor truncations T_L of a transcendental expression,
// L = 2, 4, ..., l_max. With a reference report the residual is
// max |I(T_L) - reference|; without one it is the Cauchy difference
// max |I(T_L) - I(T_{L+2})|. Taylor series of sparse functions skip degrees,
// so the residual need not shrink at every step; the check passes when no
// residual exceeds the first one, the last one is the smallest, and it is
// below the tolerance.
inline AxiomReport check_continuity(const MethodUnderTest& mut, const Expr& e,
                                    const ProblemInstance& inst, int k, int l_max,
                                    const std::optional<InteractionReport>& reference,
                                    double tolerance = 1e-6) {
  if (mut.capability != Capability::kPolynomial) {
    return detail::not_applicable(mut, Axiom::kContinuity, "method does not take polynomials");
  }
  AxiomReport out;
  out.method = mut.id;
  out.axiom = Axiom::kContinuity;
  out.status = Status::kPass;
  out.note = reference ? "reference: independent engine" : "reference: self-convergence";
  const int last = reference ? l_max : l_max + 2;
  if (l_max < 2 || last > kMaxTaylorOrder) {
    throw DomainError("continuity needs 2 <= L_max and L_max (+2 without reference) <= " +
                      std::to_string(kMaxTaylorOrder));
  }
  auto run_at = [&](int order) {
    return mut.run(Sample{inst, taylor(e, inst.baseline, order)}, k);
  };
  auto distance = [](const InteractionReport& a, const InteractionReport& b) {
    double d = 0.0;
    for (const auto& [s, v] : a) d = std::max(d, std::abs(v - b.at(s)));
    return d;
  };
  std::optional<InteractionReport> previous;
  for (int order = 2; order <= l_max; order += 2) {
    const InteractionReport current = previous ? *previous : run_at(order);
    double residual;
    if (reference) {
      residual = distance(current, *reference);
    } else {
      previous = run_at(order + 2);
      residual = distance(current, *previous);
    }
    out.series.emplace_back(order, residual);
    ++out.trials;
    out.max_residual = std::max(out.max_residual, residual);
  }
  const double first = out.series.front().second;
  const double final_residual = out.series.back().second;
  for (const auto& [l, r] : out.series) {
    if (r > first || r < final_residual) out.status = Status::kFail;
  }
  if (!(final_residual <= tolerance)) out.status = Status::kFail;
  if (out.status == Status::kFail) {
    ++out.failures;
    Json series = Json::array();
    for (const auto& [l, r] : out.series) series.push_back({l, r});
    out.witness = {{"expr", to_string(e)}, {"instance", instance_to_json(inst)},
                   {"k", k}, {"series", series}, {"tolerance", tolerance}};
  }
  return out;
}

// Full-order uniqueness: shapley_taylor(k = n), the Mobius transform and the
// augmented Recursive Shapley at k = n agree entrywise on random tables.
inline AxiomReport check_uniqueness(const CheckOptions& opt = {}) {
  AxiomReport out;
  out.method = "shapley-taylor/mobius/rs-aug";
  out.axiom = Axiom::kUniqueness;
  out.status = Status::kPass;
  const double tol = opt.tolerance.value_or(1e-10);
  double sum = 0.0;
  for (int trial = 0; trial < opt.trials; ++trial) {
    Rng rng(derive_seed(opt.seed, 0x756e69717565ULL, static_cast<std::uint64_t>(trial)));
    const int n = rng.integer(1, 5);
    const SetFunctionTable table = random_table(rng, n);
    const SynergyTable syn = mobius(table);
    const InteractionReport st = shapley_taylor(table, n);
    const InteractionReport rs = augmented_recursive_shapley(table, n);
    double diff = 0.0;
    for (const auto& [s, v] : st) {
      diff = std::max({diff, std::abs(v - syn[s]), std::abs(rs.at(s) - syn[s])});
    }
    ++out.trials;
    sum += diff;
    out.max_residual = std::max(out.max_residual, diff);
    if (!(diff <= tol)) {
      if (out.failures == 0) out.witness = {{"table", table_to_json(table)}, {"residual", diff}};
      ++out.failures;
      out.status = Status::kFail;
    }
  }
  if (out.trials > 0) out.mean_residual = sum / out.trials;
  return out;
}

// ---------------------------------------------------------------------------
// Registry and suite

inline QuadratureConfig harness_quadrature() { return QuadratureConfig{16, 1}; }

// The eight methods plus the quadrature IG engine on expressions.
inline std::vector<MethodUnderTest> default_methods() {
  auto table_of = [](const Sample& s) -> const SetFunctionTable& {
    return std::get<SetFunctionTable>(s.function);
  };
  auto poly_of = [](const Sample& s) -> const SparsePolynomial& {
    return std::get<SparsePolynomial>(s.function);
  };
  std::vector<MethodUnderTest> out;
  out.push_back({"shapley", Capability::kBinary, true, 1e-10,
                 [=](const Sample& s, int) { return shapley(table_of(s)); }});
  out.push_back({"shapley-taylor", Capability::kBinary, false, 1e-10,
                 [=](const Sample& s, int k) { return shapley_taylor(table_of(s), k); }});
  out.push_back({"rs", Capability::kBinary, false, 1e-10,
                 [=](const Sample& s, int k) { return recursive_shapley(table_of(s), k); }});
  out.push_back({"rs-aug", Capability::kBinary, false, 1e-10, [=](const Sample& s, int k) {
                   return augmented_recursive_shapley(table_of(s), k);
                 }});
  out.push_back({"ig", Capability::kPolynomial, true, 1e-10,
                 [=](const Sample& s, int) { return ig_exact(poly_of(s), s.instance.x); }});
  out.push_back({"ih", Capability::kPolynomial, false, 1e-10,
                 [=](const Sample& s, int k) { return ih_exact(poly_of(s), s.instance.x, k); }});
  out.push_back({"ih-aug", Capability::kPolynomial, false, 1e-10, [=](const Sample& s, int k) {
                   return ih_star_exact(poly_of(s), s.instance.x, k);
                 }});
  out.push_back({"sop", Capability::kPolynomial, false, 1e-10, [=](const Sample& s, int k) {
                   return sum_of_powers_exact(poly_of(s), s.instance.x, k);
                 }});
  out.push_back({"ig-quad", Capability::kAnalytic, true, 1e-8, [](const Sample& s, int) {
                   return ig_quadrature(std::get<Expr>(s.function), s.instance,
                                        harness_quadrature());
                 }});
  return out;
}

struct Expectation {
  std::string method;
  Axiom axiom;
  Status expected;
};

// Departures from "pass". Order-1 methods have no interaction axioms; the
// Recursive Shapley and Integrated Hessian break the baseline test, and only
// the top-distributing methods satisfy interaction distribution.
inline std::vector<Expectation> default_expectations() {
  return {
      {"shapley", Axiom::kBaselineTest, Status::kNotApplicable},
      {"shapley", Axiom::kInteractionDistribution, Status::kNotApplicable},
      {"ig", Axiom::kBaselineTest, Status::kNotApplicable},
      {"ig", Axiom::kInteractionDistribution, Status::kNotApplicable},
      {"ig-quad", Axiom::kBaselineTest, Status::kNotApplicable},
      {"ig-quad", Axiom::kInteractionDistribution, Status::kNotApplicable},
      {"rs", Axiom::kBaselineTest, Status::kFail},
      {"ih", Axiom::kBaselineTest, Status::kFail},
      {"rs", Axiom::kInteractionDistribution, Status::kFail},
      {"rs-aug", Axiom::kInteractionDistribution, Status::kFail},
      {"ih", Axiom::kInteractionDistribution, Status::kFail},
      {"ih-aug", Axiom::kInteractionDistribution, Status::kFail},
      {"shapley", Axiom::kContinuity, Status::kNotApplicable},
      {"shapley-taylor", Axiom::kContinuity, Status::kNotApplicable},
      {"rs", Axiom::kContinuity, Status::kNotApplicable},
      {"rs-aug", Axiom::kContinuity, Status::kNotApplicable},
      {"ig-quad", Axiom::kContinuity, Status::kNotApplicable},
  };
}

inline Status expected_status(const std::vector<Expectation>& table, const std::string& method,
                              Axiom axiom) {
  for (const auto& e : table) {
    if (e.method == method && e.axiom == axiom) return e.expected;
  }
  return Status::kPass;
}

struct SuiteConfig {
  std::uint64_t seed = 1;
  int trials = 1000;
  std::vector<std::string> methods;  // empty: all registered
  std::vector<Axiom> axioms;         // empty: all
  std::map<std::string, double> tolerances;
  std::vector<Expectation> expectations = default_expectations();
};

struct SuiteEntry {
  AxiomReport report;
  Status expected = Status::kPass;
  bool ok() const { return report.status == expected; }
};

struct SuiteResult {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<SuiteEntry> entries;
  AxiomReport uniqueness;
  bool ran_uniqueness = false;

  bool ok() const {
    if (ran_uniqueness && uniqueness.status != Status::kPass) return false;
    return std::all_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.ok(); });
  }
  const SuiteEntry* find(const std::string& method, Axiom axiom) const {
    for (const auto& e : entries) {
      if (e.report.method == method && e.report.axiom == axiom) return &e;
    }
    return nullptr;
  }
};

inline SuiteConfig suite_config_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("suite config must be a JSON object");
  SuiteConfig cfg;
  const std::vector<MethodUnderTest> known = default_methods();
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") {
      if (!value.is_number_unsigned()) throw DomainError("\"seed\" must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "trials") {
      if (!value.is_number_integer() || value.get<long long>() < 1) {
        throw DomainError("\"trials\" must be a positive integer");
      }
      cfg.trials = value.get<int>();
    } else if (key == "methods") {
      if (!value.is_array()) throw DomainError("\"methods\" must be an array");
      for (const Json& m : value) {
        if (!m.is_string()) throw DomainError("method ids must be strings");
        const std::string id = m.get<std::string>();
        if (std::none_of(known.begin(), known.end(), [&](const auto& k) { return k.id == id; })) {
          throw DomainError("unknown method \"" + id + "\"");
        }
        cfg.methods.push_back(id);
      }
    } else if (key == "axioms") {
      if (!value.is_array()) throw DomainError("\"axioms\" must be an array");
      for (const Json& a : value) {
        const auto axiom = a.is_string() ? axiom_from_name(a.get<std::string>()) : std::nullopt;
        if (!axiom) throw DomainError("unknown axiom " + a.dump());
        cfg.axioms.push_back(*axiom);
      }
    } else if (key == "tolerances") {
      if (!value.is_object()) throw DomainError("\"tolerances\" must be an object");
      for (const auto& [id, tol] : value.items()) {
        if (!tol.is_number() || !(tol.get<double>() > 0.0)) {
          throw DomainError("tolerance for \"" + id + "\" must be a positive number");
        }
        cfg.tolerances[id] = tol.get<double>();
      }
    } else {
      throw DomainError("unknown suite config field \"" + key + "\"");
    }
  }
  return cfg;
}

namespace detail {

// Continuity instance per method: exp(x1 x2) - 1 + sin(x1 x2 x3) at x = 1/2.
// IG and the order-2 IH have quadrature references; the rest converge
// against themselves.
inline AxiomReport continuity_for(const MethodUnderTest& mut, std::optional<double> tol) {
  const Expr e = parse("exp(x1*x2) - 1 + sin(x1*x2*x3)", 3);
  const ProblemInstance inst = ProblemInstance::tight({0.5, 0.5, 0.5}, {0.0, 0.0, 0.0});
  const double t = tol.value_or(1e-6);
  if (mut.id == "ig") return check_continuity(mut, e, inst, 1, 10, ig_quadrature(e, inst), t);
  if (mut.id == "ih") return check_continuity(mut, e, inst, 2, 10, ih2_quadrature(e, inst, {32, 1}), t);
  return check_continuity(mut, e, inst, 3, 10, std::nullopt, t);
}

}  // namespace detail

inline SuiteResult run_suite(const SuiteConfig& cfg,
                             const std::vector<MethodUnderTest>& registry = default_methods()) {
  if (cfg.trials < 1) throw DomainError("trials must be >= 1");
  SuiteResult result;
  result.seed = cfg.seed;
  result.trials = cfg.trials;
  auto wanted_axiom = [&](Axiom a) {
    return cfg.axioms.empty() || std::find(cfg.axioms.begin(), cfg.axioms.end(), a) != cfg.axioms.end();
  };
  for (const MethodUnderTest& mut : registry) {
    if (!cfg.methods.empty() &&
        std::find(cfg.methods.begin(), cfg.methods.end(), mut.id) == cfg.methods.end()) {
      continue;
    }
    CheckOptions opt{cfg.seed, cfg.trials, std::nullopt};
    if (auto it = cfg.tolerances.find(mut.id); it != cfg.tolerances.end()) opt.tolerance = it->second;
    for (Axiom axiom : kAllAxioms) {
      if (!wanted_axiom(axiom)) continue;
      SuiteEntry entry;
      entry.expected = expected_status(cfg.expectations, mut.id, axiom);
      switch (axiom) {
        case Axiom::kCompleteness: entry.report = check_completeness(mut, opt); break;
        case Axiom::kLinearity: entry.report = check_linearity(mut, opt); break;
        case Axiom::kNullFeature: entry.report = check_null_feature(mut, opt); break;
        case Axiom::kSymmetry: entry.report = check_symmetry(mut, opt); break;
        case Axiom::kBaselineTest: entry.report = check_baseline_test(mut, opt); break;
        case Axiom::kInteractionDistribution:
          entry.report = check_interaction_distribution(mut, opt);
          break;
        case Axiom::kContinuity:
          entry.report = mut.capability == Capability::kPolynomial
                             ? detail::continuity_for(mut, std::nullopt)
                             : detail::not_applicable(mut, axiom, "method does not take polynomials");
          break;
        case Axiom::kUniqueness: continue;
      }
      result.entries.push_back(std::move(entry));
    }
  }
  if (cfg.methods.empty() && cfg.axioms.empty()) {
    result.uniqueness = check_uniqueness({cfg.seed, std::min(cfg.trials, 200), std::nullopt});
    result.ran_uniqueness = true;
  }
  return result;
}

inline Json suite_to_json(const SuiteResult& r) {
  auto report_json = [](const AxiomReport& a) {
    Json j{{"method", a.method},
           {"axiom", axiom_name(a.axiom)},
           {"status", status_name(a.status)},
           {"trials", a.trials},
           {"failures", a.failures},
           {"max_residual", a.max_residual},
           {"mean_residual", a.mean_residual}};
    if (!a.note.empty()) j["note"] = a.note;
    if (!a.series.empty()) {
      Json series = Json::array();
      for (const auto& [l, res] : a.series) series.push_back({{"L", l}, {"residual", res}});
      j["series"] = series;
    }
    if (!a.witness.is_null()) j["witness"] = a.witness;
    return j;
  };
  Json results = Json::array();
  for (const auto& e : r.entries) {
    Json j = report_json(e.report);
    j["expected"] = status_name(e.expected);
    j["ok"] = e.ok();
    results.push_back(std::move(j));
  }
  Json out{{"seed", r.seed}, {"trials", r.trials}, {"ok", r.ok()}, {"results", results}};
  if (r.ran_uniqueness) {
    out["uniqueness"] = report_json(r.uniqueness);
  }
  return out;
}

}  // namespace synergy
