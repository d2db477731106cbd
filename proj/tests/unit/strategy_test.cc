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

#include "resonance/strategy.h"

#include <gtest/gtest.h>

#include "oracles.h"
#include "random_instances.h"
#include "resonance/core.h"
#include "resonance/errors.h"
#include "resonance/mdfm.h"

namespace resonance {
namespace {

class StrategyTest : public ::testing::Test {
 protected:
  StrategyTest() {
    t1_both_.Assign(0, 0b11);
    t2_n1_.Assign(1, 0b01);
  }
  MarketInstance m_ = GenFigure1Instance();
  ReportProfile truth_ = TruthfulReports(m_);
  Allocation t1_both_{2};
  Allocation t2_n1_{2};
};

TEST_F(StrategyTest, MaxExtraction) {
  const Routing empty = MaxExtractionRouting(m_, EmptyAllocation(m_), truth_);
  EXPECT_EQ(empty, EmptyRouting(m_));
  const Routing r = MaxExtractionRouting(m_, t1_both_, truth_);
  EXPECT_EQ(r.tx_payments, (std::vector<Rational>{Rational(6), Rational(0)}));
  EXPECT_EQ(r.node_payments, (std::vector<Rational>{Rational(1), Rational(1)}));
  EXPECT_EQ(Margin(r), Rational(4));
  const Routing r2 = MaxExtractionRouting(m_, t2_n1_, truth_);
  EXPECT_EQ(r2.tx_payments[1], Rational(4));
  EXPECT_EQ(Margin(r2), Rational(3));
}

TEST_F(StrategyTest, ScaledRebate) {
  const Routing r = ScaledRebateRouting(m_, t1_both_, truth_, Rational(0));
  EXPECT_EQ(r.tx_payments[0], Rational(2));
  EXPECT_EQ(Surplus(r, truth_, m_), Rational(4));
  EXPECT_EQ(ScaledRebateRouting(m_, t1_both_, truth_, Rational(4)),
            MaxExtractionRouting(m_, t1_both_, truth_));
  EXPECT_EQ(ScaledRebateRouting(m_, EmptyAllocation(m_), truth_, Rational(0)),
            EmptyRouting(m_));
  EXPECT_THROW(ScaledRebateRouting(m_, t1_both_, truth_, Rational(5)),
               PreconditionViolation);
  EXPECT_THROW(ScaledRebateRouting(m_, t1_both_, truth_, Rational(-1)),
               PreconditionViolation);
}

TEST_F(StrategyTest, WelfareMaximum) {
  const WelfareMaximum best = WelfareMaxAllocation(m_, truth_);
  EXPECT_EQ(best.allocation, t1_both_);
  EXPECT_EQ(best.welfare, Rational(4));
  EXPECT_TRUE(best.unique);
}

TEST(WelfareMaximumTest, ZeroValuesGiveEmptyAllocation) {
  MarketInstance m;
  m.transactions = {{"t1", Rational(0), std::nullopt}};
  m.nodes = {{"n1", ConstantNonemptyCost{Rational(1)}, std::nullopt}};
  m.Validate();
  const WelfareMaximum best = WelfareMaxAllocation(m, TruthfulReports(m));
  EXPECT_TRUE(best.allocation.IsEmpty());
  EXPECT_EQ(best.welfare, Rational(0));
}

TEST(WelfareMaximumTest, OracleFamilyHasTwoMaximizers) {
  const ResourceMarket market =
      GenThmWoInstance(2, {Rational(1), Rational(2)}, Rational(1, 2));
  const MarketInstance m = market.ToInstance();
  const WelfareMaximum best = WelfareMaxAllocation(m, TruthfulReports(m));
  EXPECT_EQ(best.welfare, Rational(2));
  EXPECT_TRUE(best.allocation.nodes_of(0) == 0b01 &&
              best.allocation.nodes_of(1) == 0b10);
}

TEST(WelfareMaximumTest, MatchesBruteForce) {
  testing::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const MarketInstance m = testing::RandomMarket(rng);
    const ReportProfile truth = TruthfulReports(m);
    const WelfareMaximum best = WelfareMaxAllocation(m, truth);
    const testing::NaiveWelfareMax naive = testing::NaiveMaxWelfare(m, truth);
    ASSERT_EQ(best.welfare, naive.welfare) << "instance " << i;
    EXPECT_EQ(best.unique, naive.maximizers == 1) << "instance " << i;
  }
}

TEST_F(StrategyTest, SingleBrokerExtractsEverything) {
  const std::vector<std::string> order = {"b1"};
  const BrokerBestResponse br =
      ComputeBrokerBestResponse("b1", m_, truth_, {}, order);
  EXPECT_EQ(br.proposal.routing, MaxExtractionRouting(m_, t1_both_, truth_));
  EXPECT_EQ(br.utility, Rational(4));
  EXPECT_TRUE(br.wins);
}

TEST_F(StrategyTest, LaterBrokerCannotBeatZeroMarginRival) {
  const std::vector<std::string> order = {"b1", "b2"};
  const std::vector<Proposal> rivals = {
      {"b1", ScaledRebateRouting(m_, t1_both_, truth_, Rational(0))}};
  const BrokerBestResponse br =
      ComputeBrokerBestResponse("b2", m_, truth_, rivals, order);
  EXPECT_EQ(br.utility, Rational(0));
  EXPECT_EQ(br.proposal.routing, EmptyRouting(m_));
  EXPECT_FALSE(br.wins);
}

TEST_F(StrategyTest, EarlierBrokerMatchesRivalSurplus) {
  const std::vector<std::string> order = {"b1", "b2"};
  const std::vector<Proposal> rivals = {
      {"b2", ScaledRebateRouting(m_, t1_both_, truth_, Rational(1))}};
  const BrokerBestResponse br =
      ComputeBrokerBestResponse("b1", m_, truth_, rivals, order);
  EXPECT_EQ(br.utility, Rational(1));
  EXPECT_TRUE(br.wins);
}

TEST_F(StrategyTest, LaterBrokerUndercutsByOneQuantum) {
  const std::vector<std::string> order = {"b1", "b2"};
  const std::vector<Proposal> rivals = {
      {"b1", ScaledRebateRouting(m_, t1_both_, truth_, Rational(1))}};
  BestResponseOptions options;
  options.quantum = Rational(1, 4);
  const BrokerBestResponse br =
      ComputeBrokerBestResponse("b2", m_, truth_, rivals, order, options);
  EXPECT_EQ(br.utility, Rational(3, 4));
  EXPECT_TRUE(br.wins);
  EXPECT_EQ(br.proposal.routing.allocation, t1_both_);
}

TEST(BestResponseTest, ZeroValuesNoRivals) {
  MarketInstance m;
  m.transactions = {{"t1", Rational(0), std::nullopt}};
  m.nodes = {{"n1", ZeroCost{}, std::nullopt}};
  m.Validate();
  const std::vector<std::string> order = {"b1"};
  const BrokerBestResponse br =
      ComputeBrokerBestResponse("b1", m, TruthfulReports(m), {}, order);
  EXPECT_EQ(br.utility, Rational(0));
  EXPECT_EQ(br.proposal.routing, EmptyRouting(m));
}

TEST(BestResponseTest, NoProposalBeatsTheBestResponse) {
  testing::Rng rng(12);
  const std::vector<std::string> order = {"b1", "b2"};
  for (int i = 0; i < 100; ++i) {
    const MarketInstance m = testing::RandomMarket(rng);
    const ReportProfile truth = TruthfulReports(m);
    const std::vector<Proposal> rivals =
        testing::RandomProposals(rng, m, {"b2"});
    BestResponseOptions options;
    options.quantum = Rational(1, 8);
    const BrokerBestResponse br =
        ComputeBrokerBestResponse("b1", m, truth, rivals, order, options);
    // Any winning routing on allocation a has margin at most welfare(a).
    for (const Allocation& a : testing::NaiveValidAllocations(m)) {
      const Rational w = testing::NaiveWelfare(a, truth, m);
      if (w.Sign() <= 0) continue;
      for (Rational margin = w; margin > br.utility;
           margin -= options.quantum) {
        std::vector<Proposal> all = rivals;
        all.push_back({"b1", ScaledRebateRouting(m, a, truth, margin)});
        const MechanismOutcome o = resonance::Run(m, truth, all, order);
        ASSERT_NE(o.winner, "b1")
            << "instance " << i << ": margin " << margin << " beats "
            << br.utility;
      }
    }
  }
}

TEST_F(StrategyTest, DynamicsUndercutToOneQuantum) {
  const std::vector<std::string> order = {"b1", "b2"};
  const Routing start = MaxExtractionRouting(m_, t1_both_, truth_);
  const std::vector<Proposal> initial = {{"b1", start}, {"b2", start}};
  const DynamicsTrace trace = BestResponseDynamics(
      m_, truth_, initial, order, Rational(1, 4), 1000);
  EXPECT_TRUE(trace.converged);
  ASSERT_TRUE(trace.outcome.winner.has_value());
  EXPECT_EQ(trace.outcome.routing.allocation, t1_both_);
  EXPECT_LE(Margin(trace.outcome.routing), Rational(1, 4));
  EXPECT_FALSE(trace.steps.empty());
}

TEST_F(StrategyTest, DynamicsNeedTwoBrokers) {
  const std::vector<std::string> order = {"b1"};
  const std::vector<Proposal> initial = {
      {"b1", MaxExtractionRouting(m_, t1_both_, truth_)}};
  EXPECT_THROW(
      BestResponseDynamics(m_, truth_, initial, order, Rational(1, 4), 10),
      PreconditionViolation);
}

TEST_F(StrategyTest, DynamicsAtZeroMarginConvergeImmediately) {
  const std::vector<std::string> order = {"b1", "b2"};
  const Routing zero = ScaledRebateRouting(m_, t1_both_, truth_, Rational(0));
  const std::vector<Proposal> initial = {{"b1", zero}, {"b2", zero}};
  const DynamicsTrace trace =
      BestResponseDynamics(m_, truth_, initial, order, Rational(1, 4), 10);
  EXPECT_TRUE(trace.converged);
  EXPECT_TRUE(trace.steps.empty());
  EXPECT_EQ(trace.outcome.winner, "b1");
}

}  // namespace
}  // namespace resonance
