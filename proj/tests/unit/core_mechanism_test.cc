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

#include "oracles.h"
#include "random_instances.h"
#include "resonance/core.h"
#include "resonance/errors.h"
#include "resonance/mdfm.h"
#include "resonance/mechanism.h"

namespace resonance {
namespace {

constexpr NodeSet kBoth = 0b11;

// Two-node example routing: t1 on both nodes.
Routing T1Routing(const MarketInstance& m, long pi, long phi) {
  Routing r = EmptyRouting(m);
  r.allocation.Assign(0, kBoth);
  r.tx_payments[0] = Rational(pi);
  r.node_payments = {Rational(phi), Rational(phi)};
  return r;
}

Routing T2Routing(const MarketInstance& m, long pi, long phi) {
  Routing r = EmptyRouting(m);
  r.allocation.Assign(1, 0b01);
  r.tx_payments[1] = Rational(pi);
  r.node_payments[0] = Rational(phi);
  return r;
}

class TwoNodeExample : public ::testing::Test {
 protected:
  MarketInstance m_ = GenFigure1Instance();
  ReportProfile truth_ = TruthfulReports(m_);
};

TEST_F(TwoNodeExample, Margin) {
  EXPECT_EQ(Margin(EmptyRouting(m_)), Rational(0));
  EXPECT_EQ(Margin(T1Routing(m_, 6, 1)), Rational(4));
  EXPECT_EQ(Margin(T2Routing(m_, 4, 1)), Rational(3));
}

TEST_F(TwoNodeExample, TxUtility) {
  EXPECT_EQ(TxUtility(1, EmptyRouting(m_), Rational(6)), Rational(0));
  EXPECT_EQ(TxUtility(0, T1Routing(m_, 2, 1), Rational(6)), Rational(4));
  EXPECT_EQ(TxUtility(1, T2Routing(m_, 5, 1), Rational(4)), Rational(-1));
}

TEST_F(TwoNodeExample, NodeUtility) {
  const CostFunction unit = ConstantNonemptyCost{Rational(1)};
  EXPECT_EQ(NodeUtility(1, EmptyRouting(m_), unit, m_), Rational(0));
  EXPECT_EQ(NodeUtility(0, T1Routing(m_, 2, 1), unit, m_), Rational(0));
  Routing r = T1Routing(m_, 2, 3);
  EXPECT_EQ(NodeUtility(0, r, PerTransactionCost{{Rational(1), Rational(7)}}, m_),
            Rational(2));
}

TEST_F(TwoNodeExample, SurplusAndWelfare) {
  EXPECT_EQ(Surplus(EmptyRouting(m_), truth_, m_), Rational(0));
  EXPECT_EQ(Surplus(T1Routing(m_, 2, 1), truth_, m_), Rational(4));
  EXPECT_EQ(Surplus(T1Routing(m_, 6, 1), truth_, m_), Rational(0));
  EXPECT_EQ(Welfare(EmptyAllocation(m_), truth_, m_), Rational(0));
  EXPECT_EQ(Welfare(T1Routing(m_, 0, 0).allocation, truth_, m_), Rational(4));
  EXPECT_EQ(Welfare(T2Routing(m_, 0, 0).allocation, truth_, m_), Rational(3));
}

TEST_F(TwoNodeExample, BudgetBalance) {
  EXPECT_TRUE(IsBudgetBalanced(EmptyRouting(m_)));
  EXPECT_TRUE(IsBudgetBalanced(T1Routing(m_, 6, 1)));
  Routing r = T2Routing(m_, 1, 2);
  EXPECT_FALSE(IsBudgetBalanced(r));
}

TEST_F(TwoNodeExample, HigherSurplusWins) {
  const std::vector<Proposal> proposals = {{"b1", T1Routing(m_, 2, 1)},
                                           {"b2", T2Routing(m_, 4, 1)}};
  const std::vector<std::string> order = {"b1", "b2"};
  const MechanismOutcome o = resonance::Run(m_, truth_, proposals, order);
  EXPECT_EQ(o.winner, "b1");
  EXPECT_EQ(o.broker_payment, Rational(0));
  EXPECT_EQ(o.routing, proposals[0].routing);
  EXPECT_FALSE(o.rejection.has_value());
}

TEST_F(TwoNodeExample, IrViolationRejects) {
  const std::vector<Proposal> proposals = {{"b1", T2Routing(m_, 5, 1)}};
  const std::vector<std::string> order = {"b1"};
  const MechanismOutcome o = resonance::Run(m_, truth_, proposals, order);
  EXPECT_FALSE(o.winner.has_value());
  EXPECT_EQ(o.rejection, RejectionReason::kIrViolation);
  EXPECT_EQ(o.ir_violator, "t2");
  EXPECT_EQ(o.selected, "b1");
  EXPECT_EQ(o.routing, EmptyRouting(m_));
  EXPECT_EQ(RejectionReasonName(*o.rejection), "ir_violation");
}

TEST_F(TwoNodeExample, NoProposals) {
  const MechanismOutcome o = resonance::Run(m_, truth_, {}, {});
  EXPECT_FALSE(o.winner.has_value());
  EXPECT_EQ(o.routing, EmptyRouting(m_));
  EXPECT_EQ(o.rejection, RejectionReason::kNoBudgetBalancedProposal);
}

TEST_F(TwoNodeExample, TieBrokenByOrder) {
  const Routing r = T1Routing(m_, 2, 1);
  const std::vector<Proposal> proposals = {{"b1", r}, {"b2", r}};
  const std::vector<std::string> order = {"b2", "b1"};
  EXPECT_EQ(resonance::Run(m_, truth_, proposals, order).winner, "b2");
}

TEST_F(TwoNodeExample, NegativeMarginProposalsIgnored) {
  const std::vector<Proposal> proposals = {{"b1", T1Routing(m_, 1, 1)},
                                           {"b2", T2Routing(m_, 4, 1)}};
  const std::vector<std::string> order = {"b1", "b2"};
  const MechanismOutcome o = resonance::Run(m_, truth_, proposals, order);
  EXPECT_EQ(o.winner, "b2");
  EXPECT_EQ(o.broker_payment, Rational(3));
  EXPECT_EQ(BrokerUtility(o, "b2"), Rational(3));
  EXPECT_EQ(BrokerUtility(o, "b1"), Rational(0));
}

TEST_F(TwoNodeExample, InvalidProposalsThrow) {
  Routing bad = EmptyRouting(m_);
  bad.allocation.Assign(0, 0b01);  // t1 needs two nodes
  const std::vector<Proposal> proposals = {{"b1", bad}};
  const std::vector<std::string> order = {"b1"};
  EXPECT_THROW(resonance::Run(m_, truth_, proposals, order), InvalidProposal);
  const std::vector<Proposal> twice = {{"b1", EmptyRouting(m_)},
                                       {"b1", EmptyRouting(m_)}};
  EXPECT_THROW(resonance::Run(m_, truth_, twice, order), MalformedInput);
}

TEST(MechanismPropertyTest, BudgetBalanceAndReportedIr) {
  testing::Rng rng(9);
  for (int i = 0; i < 300; ++i) {
    const MarketInstance m = testing::RandomMarket(rng);
    const ReportProfile reports = testing::RandomReports(rng, m);
    const std::vector<std::string> order = testing::BrokerIds(3);
    const std::vector<Proposal> proposals =
        testing::RandomProposals(rng, m, order);
    const MechanismOutcome o = resonance::Run(m, reports, proposals, order);
    Rational in, out;
    for (const Rational& x : o.routing.tx_payments) in += x;
    for (const Rational& x : o.routing.node_payments) out += x;
    ASSERT_EQ(in, out + o.broker_payment);
    for (int t = 0; t < m.num_transactions(); ++t) {
      EXPECT_GE(o.tx_utilities[t], Rational(0));
    }
    for (int n = 0; n < m.num_nodes(); ++n) {
      EXPECT_GE(o.node_utilities[n], Rational(0));
    }
    if (o.winner) {
      // The winner's reported surplus is maximal among budget-balanced
      // proposals.
      const Rational s = Surplus(o.routing, reports, m);
      for (const Proposal& p : proposals) {
        if (IsBudgetBalanced(p.routing)) {
          EXPECT_LE(Surplus(p.routing, reports, m), s);
        }
      }
    }
  }
}

TEST(CostTest, EvaluatesEveryVariant) {
  MarketInstance m;
  m.transactions = {{"t1", Rational(1), std::vector<Rational>{Rational(2)}},
                    {"t2", Rational(1), std::vector<Rational>{Rational(3)}}};
  m.nodes = {{"n", ZeroCost{}, std::nullopt}};
  m.Validate();
  const TxSet both = 0b11;
  EXPECT_EQ(EvaluateCost(ZeroCost{}, both, m), Rational(0));
  EXPECT_EQ(EvaluateCost(ConstantNonemptyCost{Rational(5)}, 0, m), Rational(0));
  EXPECT_EQ(EvaluateCost(ConstantNonemptyCost{Rational(5)}, both, m),
            Rational(5));
  EXPECT_EQ(EvaluateCost(PerTransactionCost{{Rational(1), Rational(2)}}, both, m),
            Rational(3));
  EXPECT_EQ(EvaluateCost(LinearResourceCost{{Rational(1, 2)}}, both, m),
            Rational(5, 2));
  SubsetTableCost table{{Rational(0), Rational(1), Rational(2), Rational(9)}};
  EXPECT_EQ(EvaluateCost(table, both, m), Rational(9));
}

}  // namespace
}  // namespace resonance
