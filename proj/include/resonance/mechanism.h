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

// One round of the broker mechanism: keep budget-balanced proposals, pick
// the highest reported surplus (ties to the earliest broker in the fixed
// order), reject it if any agent would get negative reported utility, and
// pay the winner the routing's margin.

#ifndef RESONANCE_MECHANISM_H_
#define RESONANCE_MECHANISM_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "resonance/model.h"
#include "resonance/rational.h"

namespace resonance {

struct Proposal {
  std::string broker;
  Routing routing;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

enum class RejectionReason {
  kNoBudgetBalancedProposal,
  kIrViolation,
};

// "no_budget_balanced_proposal" / "ir_violation".
std::string_view RejectionReasonName(RejectionReason reason);

struct MechanismOutcome {
  Routing routing;
  std::optional<std::string> winner;
  Rational broker_payment;
  // Utilities of every agent under the reported types for `routing`.
  std::vector<Rational> tx_utilities;
  std::vector<Rational> node_utilities;
  std::optional<RejectionReason> rejection;
  // Set with kIrViolation: first violating agent in canonical agent order
  // (transactions by id, then nodes by id).
  std::optional<std::string> ir_violator;
  // Broker whose proposal was selected, even if it was then rejected.
  std::optional<std::string> selected;
};

// Validates every proposal (well-formed payments, valid allocation, broker
// order a permutation of the proposing brokers) and runs the mechanism.
// Throws InvalidProposal or MalformedInput.
MechanismOutcome Run(const MarketInstance& instance,
                     const ReportProfile& reports,
                     std::span<const Proposal> proposals,
                     std::span<const std::string> broker_order);

// Run without intake checks; callers must have validated the proposals and
// reports once already (used by the exhaustive checkers).
MechanismOutcome RunValidated(const MarketInstance& instance,
                              const ReportProfile& reports,
                              std::span<const Proposal> proposals,
                              std::span<const std::string> broker_order);

// Intake checks performed by Run.
void ValidateProposals(const MarketInstance& instance,
                       std::span<const Proposal> proposals,
                       std::span<const std::string> broker_order);

// Position of `broker` in `broker_order`; throws MalformedInput if absent.
int BrokerRank(std::span<const std::string> broker_order,
               const std::string& broker);

// Payment the outcome gives to `broker`.
Rational BrokerUtility(const MechanismOutcome& outcome,
                       const std::string& broker);

}  // namespace resonance

#endif  // RESONANCE_MECHANISM_H_
