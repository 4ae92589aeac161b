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

#include "synergy/synergy.hpp"

namespace synergy {
namespace {

MethodUnderTest find_method(const std::string& id) {
  for (const auto& m : default_methods()) {
    if (m.id == id) return m;
  }
  throw std::runtime_error("no method " + id);
}

CheckOptions quick(std::uint64_t seed = 7) { return {seed, 100, std::nullopt}; }

// Every entry scaled by 0.9.
MethodUnderTest shrunk(const MethodUnderTest& base) {
  MethodUnderTest m = base;
  m.id = base.id + "-shrunk";
  m.run = [run = base.run](const Sample& s, int k) {
    InteractionReport r = run(s, k);
    for (const auto& [c, v] : InteractionReport(r)) {
      if (!c.empty()) r[c] = 0.9 * v;
    }
    return r;
  };
  return m;
}

// Splits F(x) - F(x') evenly over the features, ignoring what F does.
MethodUnderTest even_split() {
  MethodUnderTest m{"even-split", Capability::kBinary, true, 1e-10, nullptr};
  m.run = [](const Sample& s, int) {
    const auto& t = std::get<SetFunctionTable>(s.function);
    InteractionReport r(t.n, 1);
    r[Coalition()] = t.at_baseline();
    for (int i = 1; i <= t.n; ++i) r[Coalition::of({i})] = (t.at_input() - t.at_baseline()) / t.n;
    return r;
  };
  return m;
}

// Credits everything to feature 1.
MethodUnderTest first_takes_all() {
  MethodUnderTest m{"first-takes-all", Capability::kBinary, true, 1e-10, nullptr};
  m.run = [](const Sample& s, int) {
    const auto& t = std::get<SetFunctionTable>(s.function);
    InteractionReport r(t.n, 1);
    r[Coalition()] = t.at_baseline();
    r[Coalition::of({1})] = t.at_input() - t.at_baseline();
    return r;
  };
  return m;
}

TEST(Harness, ExactMethodsPassCoreAxioms) {
  for (const auto& m : default_methods()) {
    SCOPED_TRACE(m.id);
    EXPECT_EQ(check_completeness(m, quick()).status, Status::kPass);
    EXPECT_EQ(check_linearity(m, quick()).status, Status::kPass);
    EXPECT_EQ(check_null_feature(m, quick()).status, Status::kPass);
    EXPECT_EQ(check_symmetry(m, quick()).status, Status::kPass);
  }
}

TEST(Harness, PlantedScalingFailsCompletenessWithWitness) {
  for (const char* id : {"shapley-taylor", "sop", "ig-quad"}) {
    const AxiomReport r = check_completeness(shrunk(find_method(id)), quick());
    EXPECT_EQ(r.status, Status::kFail) << id;
    EXPECT_GT(r.failures, 0);
    EXPECT_FALSE(r.witness.is_null());
    EXPECT_TRUE(r.witness.contains("sample"));
    // Linearity survives the scaling.
    EXPECT_EQ(check_linearity(shrunk(find_method(id)), quick()).status, Status::kPass) << id;
  }
}

TEST(Harness, PlantedEvenSplitFailsNullFeature) {
  const MethodUnderTest m = even_split();
  EXPECT_EQ(check_completeness(m, quick()).status, Status::kPass);
  EXPECT_EQ(check_symmetry(m, quick()).status, Status::kPass);
  const AxiomReport r = check_null_feature(m, quick());
  EXPECT_EQ(r.status, Status::kFail);
  EXPECT_FALSE(r.witness.is_null());
}

TEST(Harness, PlantedFavouritismFailsSymmetry) {
  const AxiomReport r = check_symmetry(first_takes_all(), quick());
  EXPECT_EQ(r.status, Status::kFail);
  EXPECT_FALSE(r.witness.is_null());
}

TEST(Harness, BaselineTestMatrix) {
  for (const char* id : {"shapley-taylor", "rs-aug", "ih-aug", "sop"}) {
    EXPECT_EQ(check_baseline_test(find_method(id), quick()).status, Status::kPass) << id;
  }
  for (const char* id : {"rs", "ih"}) {
    const AxiomReport r = check_baseline_test(find_method(id), quick());
    EXPECT_EQ(r.status, Status::kFail) << id;
    EXPECT_FALSE(r.witness.is_null()) << id;
  }
  for (const char* id : {"shapley", "ig", "ig-quad"}) {
    EXPECT_EQ(check_baseline_test(find_method(id), quick()).status, Status::kNotApplicable) << id;
  }
}

TEST(Harness, InteractionDistributionMatrix) {
  for (const char* id : {"shapley-taylor", "sop"}) {
    EXPECT_EQ(check_interaction_distribution(find_method(id), quick()).status, Status::kPass) << id;
  }
  for (const char* id : {"rs", "rs-aug", "ih", "ih-aug"}) {
    EXPECT_EQ(check_interaction_distribution(find_method(id), quick()).status, Status::kFail) << id;
  }
}

TEST(Harness, Deterministic) {
  const MethodUnderTest m = find_method("ih");
  const AxiomReport a = check_completeness(m, quick(5));
  const AxiomReport b = check_completeness(m, quick(5));
  EXPECT_EQ(a.max_residual, b.max_residual);
  EXPECT_EQ(a.mean_residual, b.mean_residual);
  const AxiomReport fa = check_baseline_test(m, quick(5));
  const AxiomReport fb = check_baseline_test(m, quick(5));
  EXPECT_EQ(fa.witness.dump(), fb.witness.dump());
  const AxiomReport c = check_completeness(m, quick(6));
  EXPECT_NE(a.mean_residual, c.mean_residual);
}

TEST(Continuity, PolynomialConvergesOnceOrderReachesDegree) {
  const Expr e = parse("x1^3*x2 - 2*x2^2 + x1", 2);
  const ProblemInstance inst = ProblemInstance::tight({0.7, -0.4}, {0.1, 0.2});
  const AxiomReport r =
      check_continuity(find_method("ig"), e, inst, 1, 10, ig_quadrature(e, inst), 1e-10);
  EXPECT_EQ(r.status, Status::kPass);
  ASSERT_EQ(r.series.size(), 5u);
  EXPECT_GT(r.series[0].second, 0.0);
  for (std::size_t i = 1; i < r.series.size(); ++i) EXPECT_LT(r.series[i].second, 1e-14);
}

TEST(Continuity, ExpOfProductConverges) {
  const Expr e = parse("exp(x1*x2) - 1", 2);
  const ProblemInstance inst = ProblemInstance::tight({0.5, 0.5}, {0.0, 0.0});
  const AxiomReport r = check_continuity(find_method("ig"), e, inst, 1, 10,
                                         ig_quadrature(e, inst), 1e-6);
  EXPECT_EQ(r.status, Status::kPass);
  for (std::size_t i = 1; i < r.series.size(); ++i) {
    EXPECT_LT(r.series[i].second, r.series[i - 1].second);
  }
}

TEST(Continuity, NotApplicableOffPolynomials) {
  const Expr e = parse("sin(x1)", 1);
  const ProblemInstance inst = ProblemInstance::tight({0.5}, {0.0});
  EXPECT_EQ(check_continuity(find_method("shapley"), e, inst, 1, 4, std::nullopt).status,
            Status::kNotApplicable);
  EXPECT_THROW(check_continuity(find_method("sop"), e, inst, 1, 12, std::nullopt), DomainError);
}

TEST(Uniqueness, TopOrderMethodsCoincide) {
  const AxiomReport r = check_uniqueness({3, 200, std::nullopt});
  EXPECT_EQ(r.status, Status::kPass);
  EXPECT_EQ(r.trials, 200);
  EXPECT_LE(r.max_residual, 1e-10);
}

TEST(Suite, SmallRunMatchesExpectations) {
  SuiteConfig cfg;
  cfg.trials = 40;
  const SuiteResult result = run_suite(cfg);
  EXPECT_TRUE(result.ok());
  EXPECT_TRUE(result.ran_uniqueness);
  const SuiteEntry* ih = result.find("ih", Axiom::kBaselineTest);
  ASSERT_NE(ih, nullptr);
  EXPECT_EQ(ih->report.status, Status::kFail);
  EXPECT_TRUE(ih->ok());
  const Json j = suite_to_json(result);
  EXPECT_TRUE(j.at("ok").get<bool>());
  EXPECT_EQ(j.at("results").size(), result.entries.size());
}

TEST(Suite, UnexpectedFailureIsNotOk) {
  SuiteConfig cfg;
  cfg.trials = 20;
  cfg.methods = {"ih"};
  cfg.axioms = {Axiom::kBaselineTest};
  cfg.expectations.clear();
  EXPECT_FALSE(run_suite(cfg).ok());
}

TEST(Suite, ConfigParsing) {
  const SuiteConfig cfg = suite_config_from_json(parse_json(
      R"({"seed": 9, "trials": 12, "methods": ["sop"], "axioms": ["symmetry"],
          "tolerances": {"sop": 1e-9}})"));
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.trials, 12);
  EXPECT_EQ(cfg.methods, std::vector<std::string>{"sop"});
  EXPECT_EQ(cfg.axioms, std::vector<Axiom>{Axiom::kSymmetry});
  EXPECT_EQ(cfg.tolerances.at("sop"), 1e-9);
  for (const char* bad : {R"({"trails": 3})", R"({"trials": 0})", R"({"methods": ["nope"]})",
                          R"({"axioms": ["beauty"]})", R"({"seed": -1})", R"([1, 2])",
                          R"({"tolerances": {"sop": -1}})"}) {
    EXPECT_THROW(suite_config_from_json(parse_json(bad)), DomainError) << bad;
  }
  EXPECT_THROW(parse_json("{\"seed\": "), ParseError);
}

}  // namespace
}  // namespace synergy
