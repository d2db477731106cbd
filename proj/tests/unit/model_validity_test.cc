// Copyright 2026 The Resonance Lab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.h"
#include "random_instances.h"
#include "resonance/errors.h"
#include "resonance/mdfm.h"
#include "resonance/model.h"
#include "resonance/validity.h"

namespace resonance {
namespace {

Allocation Alloc(int num_tx, std::vector<std::pair<int, NodeSet>> entries) {
  Allocation a(num_tx);
  for (const auto& [t, nodes] : entries) a.Assign(t, nodes);
  return a;
}

MarketInstance OneTxOneNode() {
  MarketInstance m;
  m.transactions = {{"t", Rational(1), std::nullopt}};
  m.nodes = {{"n", ZeroCost{}, std::nullopt}};
  m.Validate();
  return m;
}

TEST(ModelTest, RejectsDuplicateIds) {
  MarketInstance m;
  m.transactions = {{"a", Rational(1), std::nullopt}};
  m.nodes = {{"a", ZeroCost{}, std::nullopt}};
  EXPECT_THROW(m.Validate(), MalformedInput);
}

TEST(ModelTest, AllocationInverseAndSets) {
  const Allocation a = Alloc(3, {{0, 0b01}, {2, 0b11}});
  EXPECT_EQ(a.Inverse(0), TxSet{0b101});
  EXPECT_EQ(a.Inverse(1), TxSet{0b100});
  EXPECT_EQ(a.Transactions(), TxSet{0b101});
  EXPECT_EQ(a.Nodes(), NodeSet{0b11});
  EXPECT_FALSE(a.IsEmpty());
  EXPECT_TRUE(Allocation(3).IsEmpty());
}

TEST(ModelTest, CanonicalOrderPutsEmptyFirstAndSortsByIds) {
  MarketInstance m;
  m.transactions = {{"tb", Rational(1), std::nullopt},
                    {"ta", Rational(1), std::nullopt}};
  m.nodes = {{"n1", ZeroCost{}, std::nullopt}};
  m.Validate();
  const CanonicalOrder order(m);
  const Allocation empty(2);
  const Allocation on_ta = Alloc(2, {{1, 1}});
  const Allocation on_tb = Alloc(2, {{0, 1}});
  EXPECT_TRUE(order.Less(empty, on_ta));
  EXPECT_TRUE(order.Less(empty, on_tb));
  EXPECT_FALSE(order.Less(on_ta, on_ta));
  EXPECT_NE(order.Less(on_ta, on_tb), order.Less(on_tb, on_ta));
}

TEST(ValidityTest, EmptyAllocationAlwaysValid) {
  const MarketInstance fig = GenFigure1Instance();
  EXPECT_TRUE(IsValid(EmptyAllocation(fig), fig));
  ExtensionalValidity ext;
  EXPECT_TRUE(IsValid(EmptyAllocation(fig), ext, fig));
}

TEST(ValidityTest, TwoNodeExampleConstraints) {
  const MarketInstance fig = GenFigure1Instance();
  EXPECT_TRUE(IsValid(Alloc(2, {{0, 0b11}}), fig));
  EXPECT_FALSE(IsValid(Alloc(2, {{0, 0b11}, {1, 0b10}}), fig));
  EXPECT_FALSE(IsValid(Alloc(2, {{0, 0b01}}), fig));
}

TEST(ValidityTest, NodeCapacityOverflow) {
  MarketInstance m;
  m.transactions = {{"t1", Rational(1), std::vector<Rational>{Rational(1)}},
                    {"t2", Rational(1), std::vector<Rational>{Rational(1)}}};
  m.nodes = {{"n", ZeroCost{}, std::vector<Rational>{Rational(1)}}};
  m.validity = ConstraintValidity{{NodeCapacityConstraint{0}}};
  m.Validate();
  EXPECT_FALSE(IsValid(Alloc(2, {{0, 1}, {1, 1}}), m));
  EXPECT_TRUE(IsValid(Alloc(2, {{0, 1}}), m));
}

TEST(ValidityTest, ExtensionalSpecMembership) {
  MarketInstance m = OneTxOneNode();
  ExtensionalValidity ext{{Alloc(1, {{0, 1}})}};
  EXPECT_TRUE(IsValid(Alloc(1, {{0, 1}}), ext, m));
  m.nodes.push_back({"n2", ZeroCost{}, std::nullopt});
  m.Validate();
  EXPECT_FALSE(IsValid(Alloc(1, {{0, 2}}), ext, m));
}

TEST(EnumerateValidTest, SingleTransactionSingleNode) {
  const std::vector<Allocation> all = EnumerateValid(OneTxOneNode());
  ASSERT_EQ(all.size(), 2u);
  EXPECT_TRUE(all[0].IsEmpty());
  EXPECT_EQ(all[1].nodes_of(0), NodeSet{1});
}

TEST(EnumerateValidTest, TwoNodeExampleHasFourAllocations) {
  const MarketInstance fig = GenFigure1Instance();
  const std::vector<Allocation> all = EnumerateValid(fig);
  ASSERT_EQ(all.size(), 4u);
  EXPECT_TRUE(all[0].IsEmpty());
  const std::vector<Allocation> expected = {
      Alloc(2, {{0, 0b11}}), Alloc(2, {{1, 0b01}}), Alloc(2, {{1, 0b10}})};
  for (const Allocation& e : expected) {
    EXPECT_NE(std::find(all.begin(), all.end(), e), all.end());
  }
}

TEST(EnumerateValidTest, SingleAssignmentSubsets) {
  MarketInstance m;
  m.transactions = {{"t1", Rational(1), std::nullopt},
                    {"t2", Rational(1), std::nullopt}};
  m.nodes = {{"n", ZeroCost{}, std::nullopt}};
  m.validity = ConstraintValidity{{SingleAssignmentConstraint{}}};
  m.Validate();
  EXPECT_EQ(EnumerateValid(m).size(), 4u);
}

TEST(EnumerateValidTest, CanonicalOrderIsStrictlyIncreasing) {
  const MarketInstance fig = GenFigure1Instance();
  const std::vector<Allocation> all = EnumerateValid(fig);
  const CanonicalOrder order(fig);
  for (std::size_t i = 1; i < all.size(); ++i) {
    EXPECT_TRUE(order.Less(all[i - 1], all[i]));
  }
}

TEST(EnumerateValidTest, CapExceededThrows) {
  MarketInstance m;
  for (int t = 0; t < 6; ++t) {
    m.transactions.push_back({"t" + std::to_string(t), Rational(1), std::nullopt});
  }
  for (int n = 0; n < 4; ++n) {
    m.nodes.push_back({"n" + std::to_string(n), ZeroCost{}, std::nullopt});
  }
  m.Validate();
  EnumerationOptions options;
  options.max_candidates = 1000;
  EXPECT_THROW(EnumerateValid(m, options), InstanceTooLarge);
}

TEST(EnumerateValidTest, MatchesBruteForceOnRandomInstances) {
  testing::Rng rng(77);
  for (int i = 0; i < 150; ++i) {
    const MarketInstance m = testing::RandomMarket(rng);
    std::vector<Allocation> fast = EnumerateValid(m);
    std::vector<Allocation> naive = testing::NaiveValidAllocations(m);
    ASSERT_EQ(fast.size(), naive.size()) << "instance " << i;
    const CanonicalOrder order(m);
    std::sort(naive.begin(), naive.end(), order);
    EXPECT_EQ(fast, naive) << "instance " << i;
    for (const Allocation& a : fast) EXPECT_TRUE(IsValid(a, m));
  }
}

}  // namespace
}  // namespace resonance
