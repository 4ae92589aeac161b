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

#include <algorithm>
#include <vector>

#include "synergy/synergy.hpp"

namespace synergy {
namespace {

TEST(Coalition, MembersAreOneBasedAndSorted) {
  const Coalition s = Coalition::of({3, 1});
  EXPECT_EQ(s.members(), (std::vector<int>{1, 3}));
  EXPECT_EQ(s.size(), 2);
  EXPECT_TRUE(s.has(1));
  EXPECT_FALSE(s.has(2));
  EXPECT_TRUE(s.has(3));
  EXPECT_EQ(s.max_feature(), 3);
  EXPECT_EQ(s.to_string(), "{1,3}");
  EXPECT_EQ(Coalition().to_string(), "{}");
  EXPECT_EQ(Coalition().max_feature(), 0);
}

TEST(Coalition, RejectsOutOfRangeFeatures) {
  EXPECT_THROW(Coalition::of({0}), InvalidCoalition);
  EXPECT_THROW(Coalition::of({64}), InvalidCoalition);
  EXPECT_NO_THROW(Coalition::of({63}));
}

TEST(Coalition, SubsetRelations) {
  const Coalition a = Coalition::of({1});
  const Coalition b = Coalition::of({1, 2});
  EXPECT_TRUE(a.subset_of(b));
  EXPECT_TRUE(a.proper_subset_of(b));
  EXPECT_TRUE(b.subset_of(b));
  EXPECT_FALSE(b.proper_subset_of(b));
  EXPECT_TRUE(Coalition().proper_subset_of(a));
  EXPECT_EQ((a | Coalition::of({3})), Coalition::of({1, 3}));
  EXPECT_EQ((b & Coalition::of({2, 3})), Coalition::of({2}));
}

TEST(Coalition, OrderIsLexicographicOnMemberLists) {
  std::vector<Coalition> v{Coalition::of({2}), Coalition::of({1, 3}), Coalition(),
                           Coalition::of({1, 2}), Coalition::of({1}), Coalition::of({2, 3}),
                           Coalition::of({1, 2, 3})};
  std::sort(v.begin(), v.end());
  std::vector<std::vector<int>> lists;
  for (Coalition c : v) lists.push_back(c.members());
  std::vector<std::vector<int>> expected = lists;
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(lists, expected);
  EXPECT_EQ(v.front(), Coalition());
}

TEST(Coalition, OrderAgreesWithVectorOrderOnAllPairs) {
  for (std::uint64_t a = 0; a < 64; ++a) {
    for (std::uint64_t b = 0; b < 64; ++b) {
      EXPECT_EQ(Coalition(a) < Coalition(b), Coalition(a).members() < Coalition(b).members());
    }
  }
}

TEST(Coalition, FullCoalition) {
  EXPECT_EQ(Coalition::full(3).members(), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(Coalition::full(63).size(), 63);
}

TEST(InteractionReport, KeySetIsAllCoalitionsUpToOrder) {
  for (int n = 1; n <= 7; ++n) {
    for (int k = 1; k <= n; ++k) {
      const InteractionReport r(n, k);
      std::size_t expected = 0;
      std::size_t c = 1;  // C(n, j), built incrementally
      for (int j = 0; j <= k; ++j) {
        expected += c;
        c = c * static_cast<std::size_t>(n - j) / static_cast<std::size_t>(j + 1);
      }
      EXPECT_EQ(r.size(), expected) << "n=" << n << " k=" << k;
      for (const auto& [s, v] : r) {
        EXPECT_LE(s.size(), k);
        EXPECT_LE(s.max_feature(), n);
        EXPECT_EQ(v, 0.0);
      }
    }
  }
}

TEST(InteractionReport, RejectsKeysOutsideTheKeySet) {
  InteractionReport r(3, 2);
  EXPECT_THROW(r[Coalition::of({1, 2, 3})], InvalidCoalition);
  EXPECT_THROW(r.at(Coalition::of({4})), InvalidCoalition);
  EXPECT_FALSE(r.contains(Coalition::of({1, 2, 3})));
  EXPECT_TRUE(r.contains(Coalition::of({2, 3})));
}

TEST(InteractionReport, RejectsBadOrders) {
  EXPECT_THROW(InteractionReport(3, 0), DomainError);
  EXPECT_THROW(InteractionReport(3, 4), DomainError);
  EXPECT_THROW(InteractionReport(0, 1), DimensionMismatch);
}

TEST(InteractionReport, TotalSkipsTheEmptyCoalition) {
  InteractionReport r(2, 2);
  r[Coalition()] = 100.0;
  r[Coalition::of({1})] = 1.0;
  r[Coalition::of({1, 2})] = 2.5;
  EXPECT_DOUBLE_EQ(r.total(), 3.5);
  EXPECT_TRUE(r.all_finite());
  r[Coalition::of({2})] = std::nan("");
  EXPECT_FALSE(r.all_finite());
}

TEST(InteractionReport, IteratesInLexicographicOrder) {
  const InteractionReport r(3, 2);
  std::vector<std::vector<int>> seen;
  for (const auto& [s, v] : r) seen.push_back(s.members());
  EXPECT_EQ(seen, (std::vector<std::vector<int>>{{}, {1}, {1, 2}, {1, 3}, {2}, {2, 3}, {3}}));
}

TEST(ProblemInstance, MaskedPointTakesInputOnCoalition) {
  const ProblemInstance inst = ProblemInstance::tight({1.0, 2.0, 3.0}, {-1.0, -2.0, -3.0});
  const FeaturePoint y = masked_point(inst, Coalition::of({1, 3}));
  EXPECT_EQ(y.values, (std::vector<double>{1.0, -2.0, 3.0}));
  EXPECT_EQ(masked_point(inst, Coalition()).values, inst.baseline.values);
  EXPECT_THROW(masked_point(inst, Coalition::of({4})), InvalidCoalition);
}

TEST(ProblemInstance, TightBoxHoldsBothPoints) {
  const ProblemInstance inst = ProblemInstance::tight({1.0, -2.0}, {0.5, 0.0});
  EXPECT_EQ(inst.box.lower.values, (std::vector<double>{0.5, -2.0}));
  EXPECT_EQ(inst.box.upper.values, (std::vector<double>{1.0, 0.0}));
  EXPECT_NO_THROW(validate_instance(inst));
}

TEST(ProblemInstance, ValidationErrors) {
  ProblemInstance inst = ProblemInstance::tight({1.0, 2.0}, {0.0, 0.0});
  inst.box.upper[1] = 1.5;
  EXPECT_THROW(validate_instance(inst), OutOfBox);
  ProblemInstance mismatch = ProblemInstance::tight({1.0, 2.0}, {0.0, 0.0});
  mismatch.baseline = FeaturePoint{0.0};
  EXPECT_THROW(validate_instance(mismatch), DimensionMismatch);
  EXPECT_THROW(validate_instance(ProblemInstance{}), DimensionMismatch);
}

TEST(ProblemInstance, DimensionCap) {
  EXPECT_THROW(check_dimension(64), CapExceeded);
  EXPECT_NO_THROW(check_dimension(63));
}

}  // namespace
}  // namespace synergy
