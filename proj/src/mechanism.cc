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

#include "resonance/mechanism.h"

#include <set>

#include "resonance/core.h"
#include "resonance/errors.h"
#include "resonance/validity.h"

namespace resonance {

std::string_view RejectionReasonName(RejectionReason reason) {
  switch (reason) {
    case RejectionReason::kNoBudgetBalancedProposal:
      return "no_budget_balanced_proposal";
    case RejectionReason::kIrViolation:
      return "ir_violation";
  }
  return "unknown";
}

int BrokerRank(std::span<const std::string> broker_order,
               const std::string& broker) {
  for (int i = 0; i < static_cast<int>(broker_order.size()); ++i) {
    if (broker_order[i] == broker) return i;
  }
  throw MalformedInput("broker '" + broker + "' missing from broker order");
}

void ValidateProposals(const MarketInstance& instance,
                       std::span<const Proposal> proposals,
                       std::span<const std::string> broker_order) {
  std::set<std::string> ordered(broker_order.begin(), broker_order.end());
  if (ordered.size() != broker_order.size()) {
    throw MalformedInput("broker order lists a broker twice");
  }
  std::set<std::string> proposing;
  for (const Proposal& p : proposals) {
    if (!proposing.insert(p.broker).second) {
      throw MalformedInput("broker '" + p.broker + "' proposed twice");
    }
    CheckRouting(instance, p.routing);
    if (!IsValid(p.routing.allocation, instance)) {
      throw InvalidProposal("proposal of broker '" + p.broker +
                            "' has an invalid allocation");
    }
  }
  if (proposing != ordered) {
    throw MalformedInput(
        "broker order must be a permutation of the proposing brokers");
  }
}

MechanismOutcome RunValidated(const MarketInstance& instance,
                              const ReportProfile& reports,
                              std::span<const Proposal> proposals,
                              std::span<const std::string> broker_order) {
  const Proposal* best = nullptr;
  Rational best_surplus;
  int best_rank = 0;
  for (const Proposal& p : proposals) {
    if (!IsBudgetBalanced(p.routing)) continue;
    const Rational s = Surplus(p.routing, reports, instance);
    const int rank = BrokerRank(broker_order, p.broker);
    if (best == nullptr || s > best_surplus ||
        (s == best_surplus && rank < best_rank)) {
      best = &p;
      best_surplus = s;
      best_rank = rank;
    }
  }

  MechanismOutcome outcome;
  auto fill_utilities = [&](const Routing& r) {
    outcome.tx_utilities.clear();
    outcome.node_utilities.clear();
    for (int t = 0; t < instance.num_transactions(); ++t) {
      outcome.tx_utilities.push_back(TxUtility(t, r, reports.tx_reports[t]));
    }
    for (int n = 0; n < instance.num_nodes(); ++n) {
      outcome.node_utilities.push_back(
          NodeUtility(n, r, reports.node_reports[n], instance));
    }
  };

  if (best == nullptr) {
    outcome.routing = EmptyRouting(instance);
    outcome.rejection = RejectionReason::kNoBudgetBalancedProposal;
    fill_utilities(outcome.routing);
    return outcome;
  }

  outcome.selected = best->broker;
  fill_utilities(best->routing);
  const CanonicalOrder order(instance);
  for (TxIndex t : order.transactions()) {
    if (outcome.tx_utilities[t].Sign() < 0) {
      outcome.ir_violator = instance.transactions[t].id;
      break;
    }
  }
  if (!outcome.ir_violator) {
    for (NodeIndex n : order.nodes()) {
      if (outcome.node_utilities[n].Sign() < 0) {
        outcome.ir_violator = instance.nodes[n].id;
        break;
      }
    }
  }
  if (outcome.ir_violator) {
    outcome.routing = EmptyRouting(instance);
    outcome.rejection = RejectionReason::kIrViolation;
    fill_utilities(outcome.routing);
    return outcome;
  }

  outcome.routing = best->routing;
  outcome.winner = best->broker;
  outcome.broker_payment = Margin(best->routing);
  return outcome;
}

MechanismOutcome Run(const MarketInstance& instance,
                     const ReportProfile& reports,
                     std::span<const Proposal> proposals,
                     std::span<const std::string> broker_order) {
  CheckReports(instance, reports);
  ValidateProposals(instance, proposals, broker_order);
  return RunValidated(instance, reports, proposals, broker_order);
}

Rational BrokerUtility(const MechanismOutcome& outcome,
                       const std::string& broker) {
  if (outcome.winner && *outcome.winner == broker) {
    return outcome.broker_payment;
  }
  return Rational();
}

}  // namespace resonance
