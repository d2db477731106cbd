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

// Exact equilibrium checks. With broker proposals fixed, the mechanism's
// outcome is piecewise constant in any single agent's report, so a finite
// candidate set per agent decides every unilateral deviation.

#ifndef RESONANCE_EQUILIBRIUM_H_
#define RESONANCE_EQUILIBRIUM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "resonance/mechanism.h"
#include "resonance/model.h"
#include "resonance/rational.h"
#include "resonance/strategy.h"

namespace resonance {

struct DeviationOptions {
  // Distinct non-empty bundles a node may hold across the proposals.
  int node_bundle_cap = 6;
  // Bound on the per-node product grid of candidate reports.
  std::int64_t node_candidate_cap = 100000;
};

// Reports of transaction `t` that realize every outcome reachable by
// varying its report with everything else fixed: the breakpoints (0, every
// proposal's payment for t, every value equalizing two proposals'
// surpluses), the midpoints between them and one point above the largest.
std::vector<Rational> TxDeviationCandidates(const MarketInstance& instance,
                                            TxIndex t,
                                            std::span<const Proposal> proposals,
                                            const ReportProfile& reports);

// Cost reports of node `n` that realize every reachable outcome. Reports
// are subset tables that differ only on the bundles n holds in some
// proposal: a per-bundle breakpoint grid plus one feasible report for every
// reachable (selected proposal, accepted or rejected) outcome. A node with
// no bundle anywhere yields {Zero}.
std::vector<CostFunction> NodeDeviationCandidates(
    const MarketInstance& instance, NodeIndex n,
    std::span<const Proposal> proposals, const ReportProfile& reports,
    std::span<const std::string> broker_order,
    const DeviationOptions& options = {});

enum class AgentKind { kTransaction, kNode, kBroker };

std::string_view AgentKindName(AgentKind kind);

struct DeviationWitness {
  AgentKind kind = AgentKind::kTransaction;
  std::string agent;
  std::variant<Rational, CostFunction, Proposal> deviation;
  Rational utility_before;
  Rational utility_after;
  // Reports of the other agents under which the deviation pays off, when
  // they differ from the checked profile.
  std::optional<ReportProfile> context;
};

struct EquilibriumReport {
  bool is_pne = true;
  std::vector<DeviationWitness> witnesses;
  std::int64_t checked_agent_deviations = 0;
  std::int64_t checked_broker_allocations = 0;
};

struct EquilibriumOptions {
  BestResponseOptions best_response;
  DeviationOptions deviation;
};

// Checks both bullets of pure Nash equilibrium for the profile
// (reports, proposals): no transaction or node gains (under its true type)
// by changing its report, and no broker gains by changing its proposal.
// Reports the most profitable deviation of every agent that has one.
EquilibriumReport CheckPNE(const MarketInstance& instance,
                           const ReportProfile& true_types,
                           const ReportProfile& reports,
                           std::span<const Proposal> proposals,
                           std::span<const std::string> broker_order,
                           const EquilibriumOptions& options = {});

struct DsicOptions {
  EquilibriumOptions equilibrium;
  // Largest product of other agents' candidate reports enumerated in full.
  std::int64_t others_cap = 65536;
  // Required only when some product exceeds `others_cap`.
  std::optional<std::uint64_t> seed;
  std::int64_t samples = 2048;
};

struct DsicReport {
  // Truthful reporting is a best reply to every checked profile of the
  // other agents' reports.
  bool truthful_dominant = true;
  // The broker profile with truthful reports is a pure Nash equilibrium.
  bool broker_profile_pne = true;
  bool holds() const { return truthful_dominant && broker_profile_pne; }
  // False when any agent's quantifier was sampled.
  bool exhaustive = true;
  std::int64_t profiles_checked = 0;
  std::vector<DeviationWitness> witnesses;
  EquilibriumReport pne;
};

// Checks that truthful reporting is dominant for every transaction and node
// once the brokers play `sigma`, and that (truth, sigma) is a PNE. All
// proposals in `sigma` must share one allocation. Other agents' reports
// range over their candidate sets at the truthful profile; products above
// `others_cap` are sampled with the explicit seed and the report is marked
// non-exhaustive. Throws PreconditionViolation on mismatched allocations
// or a missing seed when sampling is needed.
DsicReport CheckDSICBarringB(const MarketInstance& instance,
                             const ReportProfile& true_types,
                             std::span<const Proposal> sigma,
                             std::span<const std::string> broker_order,
                             const DsicOptions& options = {});

// Every broker proposes the zero-margin proportional-rebate routing on the
// canonical welfare maximizer. Requires at least two brokers.
std::vector<Proposal> ConstructFootnoteEquilibrium(
    const MarketInstance& instance, const ReportProfile& true_types,
    std::span<const std::string> broker_ids,
    const EnumerationOptions& enumeration = {});

}  // namespace resonance

#endif  // RESONANCE_EQUILIBRIUM_H_
