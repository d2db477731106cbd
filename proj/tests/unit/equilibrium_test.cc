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

#include "resonance/equilibrium.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.h"
#include "random_instances.h"
#include "resonance/core.h"
#include "resonance/errors.h"
#include "resonance/mdfm.h"
#include "resonance/strategy.h"

namespace resonance {
namespace {

bool Has(const std::vector<Rational>& xs, const Rational& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

MarketInstance SingleTxMarket(long value) {
  MarketInstance m;
  m.transactions = {{"t1", Rational(value), std::nullopt}};
  m.nodes = {{"n1", ZeroCost{}, std::nullopt}};
  m.Validate();
  return m;
}

Routing OnNode(const MarketInstance& m, long pi, long phi) {
  Routing r = EmptyRouting(m);
  r.allocation.Assign(0, 0b1);
  r.tx_payments[0] = Rational(pi);
  r.node_payments[0] = Rational(phi);
  return r;
}

TEST(TxCandidatesTest, SingleProposalBreakpoints) {
  const MarketInstance m = SingleTxMarket(5);
  const std::vector<Proposal> proposals = {{"b1", OnNode(m, 2, 0)}};
  const std::vector<Rational> c =
      TxDeviationCandidates(m, 0, proposals, TruthfulReports(m));
  for (const Rational& x : {Rational(0), Rational(1), Rational(2), Rational(3)}) {
    EXPECT_TRUE(Has(c, x)) << x;
  }
}

TEST(TxCandidatesTest, UnallocatedTransaction) {
  MarketInstance m;
  m.transactions = {{"t1", Rational(3), std::nullopt},
                    {"t2", Rational(3), std::nullopt}};
  m.nodes = {{"n1", ZeroCost{}, std::nullopt}};
  m.Validate();
  Routing r = EmptyRouting(m);
  r.allocation.Assign(0, 1);
  r.tx_payments = {Rational(1), Rational(1, 2)};
  r.node_payments = {Rational(1)};
  const std::vector<Proposal> proposals = {{"b1", r}};
  const std::vector<Rational> c =
      TxDeviationCandidates(m, 1, proposals, TruthfulReports(m));
  EXPECT_EQ(c, (std::vector<Rational>{Rational(0), Rational(1, 2)}));
}

TEST(TxCandidatesTest, SurplusIntersectionIsACandidate) {
  // t1 allocated only by b1. b1's surplus is x - 2 + 0, b2's surplus is 1
  // (t2 allocated, value 3, paying 2). They are equal at x = 3.
  MarketInstance m;
  m.transactions = {{"t1", Rational(5), std::nullopt},
                    {"t2", Rational(3), std::nullopt}};
  m.nodes = {{"n1", ZeroCost{}, std::nullopt}};
  m.validity = ConstraintValidity{{MaxTxPerNodeConstraint{0, 1}}};
  m.Validate();
  Routing r1 = EmptyRouting(m);
  r1.allocation.Assign(0, 1);
  r1.tx_payments[0] = Rational(2);
  Routing r2 = EmptyRouting(m);
  r2.allocation.Assign(1, 1);
  r2.tx_payments[1] = Rational(2);
  const std::vector<Proposal> proposals = {{"b1", r1}, {"b2", r2}};
  const std::vector<Rational> c =
      TxDeviationCandidates(m, 0, proposals, TruthfulReports(m));
  EXPECT_TRUE(Has(c, Rational(3)));
}

TEST(NodeCandidatesTest, UnassignedNodeOnlyZero) {
  const MarketInstance m = GenFigure1Instance();
  Routing r = EmptyRouting(m);
  r.allocation.Assign(1, 0b01);
  r.tx_payments[1] = Rational(2);
  r.node_payments[0] = Rational(1);
  const std::vector<Proposal> proposals = {{"b1", r}};
  const std::vector<std::string> order = {"b1"};
  const std::vector<CostFunction> c = NodeDeviationCandidates(
      m, 1, proposals, TruthfulReports(m), order);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<ZeroCost>(c[0]));
}

TEST(NodeCandidatesTest, SingleBundleScalarGrid) {
  const MarketInstance m = GenFigure1Instance();
  Routing r = EmptyRouting(m);
  r.allocation.Assign(1, 0b01);
  r.tx_payments[1] = Rational(2);
  r.node_payments[0] = Rational(1);
  const std::vector<Proposal> proposals = {{"b1", r}};
  const std::vector<std::string> order = {"b1"};
  const std::vector<CostFunction> c = NodeDeviationCandidates(
      m, 0, proposals, TruthfulReports(m), order);
  std::vector<Rational> on_bundle;
  for (const CostFunction& f : c) {
    on_bundle.push_back(EvaluateCost(f, 0b10, m));
  }
  for (const Rational& y : {Rational(0), Rational(1), Rational(2)}) {
    EXPECT_TRUE(Has(on_bundle, y)) << y;
  }
}

TEST(NodeCandidatesTest, TwoBundlesProductGrid) {
  MarketInstance m;
  m.transactions = {{"t1", Rational(4), std::nullopt},
                    {"t2", Rational(4), std::nullopt}};
  m.nodes = {{"n1", PerTransactionCost{{Rational(1), Rational(1)}}, std::nullopt}};
  m.validity = ConstraintValidity{{MaxTxPerNodeConstraint{0, 1}}};
  m.Validate();
  Routing r1 = EmptyRouting(m);
  r1.allocation.Assign(0, 1);
  r1.tx_payments[0] = Rational(3);
  r1.node_payments[0] = Rational(2);
  Routing r2 = EmptyRouting(m);
  r2.allocation.Assign(1, 1);
  r2.tx_payments[1] = Rational(3);
  r2.node_payments[0] = Rational(3);
  const std::vector<Proposal> proposals = {{"b1", r1}, {"b2", r2}};
  const std::vector<std::string> order = {"b1", "b2"};
  const std::vector<CostFunction> c = NodeDeviationCandidates(
      m, 0, proposals, TruthfulReports(m), order);
  std::vector<std::pair<Rational, Rational>> points;
  for (const CostFunction& f : c) {
    points.emplace_back(EvaluateCost(f, 0b01, m), EvaluateCost(f, 0b10, m));
  }
  // Every combination of the per-bundle payment breakpoints appears.
  for (const Rational& y1 : {Rational(0), Rational(2)}) {
    for (const Rational& y2 : {Rational(0), Rational(3)}) {
      EXPECT_NE(std::find(points.begin(), points.end(), std::pair(y1, y2)),
                points.end())
          << y1 << "," << y2;
    }
  }
}

class TwoNodeEquilibrium : public ::testing::Test {
 protected:
  TwoNodeEquilibrium() { best_.Assign(0, 0b11); }
  MarketInstance m_ = GenFigure1Instance();
  ReportProfile truth_ = TruthfulReports(m_);
  Allocation best_{2};
  std::vector<std::string> order_{"b1", "b2"};
};

TEST_F(TwoNodeEquilibrium, ZeroMarginPairIsPne) {
  const Routing zero = ScaledRebateRouting(m_, best_, truth_, Rational(0));
  const std::vector<Proposal> sigma = {{"b1", zero}, {"b2", zero}};
  const EquilibriumReport report = CheckPNE(m_, truth_, truth_, sigma, order_);
  EXPECT_TRUE(report.is_pne);
  EXPECT_TRUE(report.witnesses.empty());
  EXPECT_GT(report.checked_agent_deviations, 0);
}

TEST_F(TwoNodeEquilibrium, PositiveMarginWinnerIsUndercut) {
  const std::vector<Proposal> sigma = {
      {"b1", MaxExtractionRouting(m_, best_, truth_)},
      {"b2", EmptyRouting(m_)}};
  const EquilibriumReport report = CheckPNE(m_, truth_, truth_, sigma, order_);
  EXPECT_FALSE(report.is_pne);
  bool broker_witness = false;
  for (const DeviationWitness& w : report.witnesses) {
    if (w.kind == AgentKind::kBroker && w.agent == "b2") {
      broker_witness = true;
      EXPECT_GT(w.utility_after, w.utility_before);
    }
  }
  EXPECT_TRUE(broker_witness);
}

TEST_F(TwoNodeEquilibrium, SingleBrokerMaxExtractionIsPne) {
  const std::vector<std::string> order = {"b1"};
  const std::vector<Proposal> sigma = {
      {"b1", MaxExtractionRouting(m_, best_, truth_)}};
  EXPECT_TRUE(CheckPNE(m_, truth_, truth_, sigma, order).is_pne);
}

TEST_F(TwoNodeEquilibrium, DsicBarringBrokers) {
  const std::vector<Proposal> sigma =
      ConstructFootnoteEquilibrium(m_, truth_, order_);
  ASSERT_EQ(sigma.size(), 2u);
  EXPECT_EQ(sigma[0].routing.allocation, best_);
  EXPECT_EQ(sigma[0].routing.tx_payments[0], Rational(2));
  EXPECT_EQ(sigma[0].routing, sigma[1].routing);
  const DsicReport report = CheckDSICBarringB(m_, truth_, sigma, order_);
  EXPECT_TRUE(report.truthful_dominant);
  EXPECT_TRUE(report.broker_profile_pne);
  EXPECT_TRUE(report.holds());
  EXPECT_TRUE(report.exhaustive);
  EXPECT_GT(report.profiles_checked, 0);
}

TEST_F(TwoNodeEquilibrium, SingleBrokerTruthfulnessHolds) {
  const std::vector<std::string> order = {"b1"};
  const std::vector<Proposal> sigma = {
      {"b1", MaxExtractionRouting(m_, best_, truth_)}};
  EXPECT_TRUE(CheckDSICBarringB(m_, truth_, sigma, order).truthful_dominant);
}

TEST_F(TwoNodeEquilibrium, MismatchedAllocationsRejected) {
  Allocation other(2);
  other.Assign(1, 0b01);
  const std::vector<Proposal> sigma = {
      {"b1", ScaledRebateRouting(m_, best_, truth_, Rational(0))},
      {"b2", ScaledRebateRouting(m_, other, truth_, Rational(0))}};
  EXPECT_THROW(CheckDSICBarringB(m_, truth_, sigma, order_),
               PreconditionViolation);
}

TEST_F(TwoNodeEquilibrium, SamplingNeedsSeed) {
  const std::vector<Proposal> sigma =
      ConstructFootnoteEquilibrium(m_, truth_, order_);
  DsicOptions options;
  options.others_cap = 1;
  EXPECT_THROW(CheckDSICBarringB(m_, truth_, sigma, order_, options),
               PreconditionViolation);
  options.seed = 42;
  options.samples = 64;
  const DsicReport report = CheckDSICBarringB(m_, truth_, sigma, order_, options);
  EXPECT_FALSE(report.exhaustive);
  EXPECT_TRUE(report.holds());
}

TEST(FootnoteTest, ZeroValuesGiveEmptyProposals) {
  const MarketInstance m = SingleTxMarket(0);
  const std::vector<std::string> brokers = {"b1", "b2", "b3"};
  const std::vector<Proposal> sigma =
      ConstructFootnoteEquilibrium(m, TruthfulReports(m), brokers);
  ASSERT_EQ(sigma.size(), 3u);
  for (const Proposal& p : sigma) EXPECT_EQ(p.routing, EmptyRouting(m));
}

TEST(FootnoteTest, OracleFamilyUsesTwoPairAllocation) {
  const MarketInstance m =
      GenThmWoInstance(2, {Rational(1), Rational(2)}, Rational(1, 2))
          .ToInstance();
  const ReportProfile truth = TruthfulReports(m);
  const std::vector<std::string> brokers = {"b1", "b2"};
  const std::vector<Proposal> sigma =
      ConstructFootnoteEquilibrium(m, truth, brokers);
  ASSERT_EQ(sigma.size(), 2u);
  EXPECT_EQ(sigma[0].routing.allocation.nodes_of(0), NodeSet{0b01});
  EXPECT_EQ(sigma[0].routing.allocation.nodes_of(1), NodeSet{0b10});
  EXPECT_EQ(Margin(sigma[0].routing), Rational(0));
  EXPECT_EQ(Surplus(sigma[0].routing, truth, m), Rational(2));
}

// The breakpoint checker and a dense grid search agree on PNE verdicts.
TEST(CheckerSoundnessTest, AgreesWithGridSearch) {
  testing::Rng rng(101);
  testing::RandomMarketOptions options;
  options.max_transactions = 2;
  options.max_nodes = 2;
  options.max_value = 5;
  options.max_denominator = 1;
  const std::vector<std::string> brokers = {"b1", "b2"};
  for (int i = 0; i < 12; ++i) {
    const MarketInstance m = testing::RandomMarket(rng, options);
    const ReportProfile truth = TruthfulReports(m);
    const std::vector<Proposal> proposals =
        i % 2 == 0 ? ConstructFootnoteEquilibrium(m, truth, brokers)
                   : testing::RandomProposals(rng, m, brokers, options);
    testing::GridSearchOptions grid;
    grid.extent = Rational(10);
    EXPECT_EQ(CheckPNE(m, truth, truth, proposals, brokers).is_pne,
              testing::NaiveGridIsPNE(m, truth, truth, proposals, brokers, grid))
        << "case " << i;
  }
}

}  // namespace
}  // namespace resonance
