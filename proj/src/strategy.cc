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

#include <optional>

#include "resonance/core.h"
#include "resonance/errors.h"

namespace resonance {
namespace {

struct RivalSummary {
  bool any = false;
  Rational best_surplus;
  bool wins_tie = true;
};

RivalSummary SummarizeRivals(const std::string& broker,
                             const MarketInstance& instance,
                             const ReportProfile& reports,
                             std::span<const Proposal> rivals,
                             std::span<const std::string> broker_order) {
  RivalSummary summary;
  const int own_rank = BrokerRank(broker_order, broker);
  int best_rank = 0;
  for (const Proposal& p : rivals) {
    if (p.broker == broker || !IsBudgetBalanced(p.routing)) continue;
    const Rational s = Surplus(p.routing, reports, instance);
    const int rank = BrokerRank(broker_order, p.broker);
    if (!summary.any || s > summary.best_surplus ||
        (s == summary.best_surplus && rank < best_rank)) {
      summary.any = true;
      summary.best_surplus = s;
      best_rank = rank;
    }
  }
  summary.wins_tie = !summary.any || own_rank < best_rank;
  return summary;
}

// Largest winning margin on an allocation of welfare `welfare`.
Rational WinningMargin(const Rational& welfare, const RivalSummary& rivals,
                       const BestResponseOptions& options) {
  const Rational& q = options.quantum;
  const Rational bound =
      rivals.any ? welfare - rivals.best_surplus : welfare;
  const bool strict = !rivals.wins_tie;
  Rational margin;
  if (strict) {
    margin = ((bound / q).Ceil() - Rational(1)) * q;
  } else if (options.lattice_margins) {
    margin = (bound / q).Floor() * q;
  } else {
    margin = bound;
  }
  const Rational cap =
      options.lattice_margins ? (welfare / q).Floor() * q : welfare;
  return Min(margin, cap);
}

}  // namespace

Routing MaxExtractionRouting(const MarketInstance& instance,
                             const Allocation& allocation,
                             const ReportProfile& reports) {
  Routing r = EmptyRouting(instance);
  r.allocation = allocation;
  const TxSet allocated = allocation.Transactions();
  for (int t = 0; t < instance.num_transactions(); ++t) {
    if (Contains(allocated, t)) r.tx_payments[t] = reports.tx_reports[t];
  }
  for (int n = 0; n < instance.num_nodes(); ++n) {
    r.node_payments[n] = EvaluateCost(reports.node_reports[n],
                                      allocation.Inverse(n), instance);
  }
  return r;
}

Routing ScaledRebateRouting(const MarketInstance& instance,
                            const Allocation& allocation,
                            const ReportProfile& reports,
                            const Rational& target_margin) {
  if (target_margin.Sign() < 0) {
    throw PreconditionViolation("target margin must be non-negative");
  }
  Routing r = MaxExtractionRouting(instance, allocation, reports);
  Rational costs;
  for (const Rational& phi : r.node_payments) costs += phi;
  Rational values;
  for (const Rational& pi : r.tx_payments) values += pi;
  const Rational needed = costs + target_margin;
  if (values.IsZero()) {
    if (!needed.IsZero()) {
      throw PreconditionViolation(
          "target margin not reachable: allocated values sum to zero");
    }
    return r;
  }
  const Rational lambda = needed / values;
  if (lambda > Rational(1)) {
    throw PreconditionViolation("target margin " + target_margin.ToString() +
                                " exceeds the allocation's welfare");
  }
  for (Rational& pi : r.tx_payments) pi *= lambda;
  return r;
}

AllocationTable BuildAllocationTable(const MarketInstance& instance,
                                     const ReportProfile& reports,
                                     const EnumerationOptions& options) {
  AllocationTable table;
  table.allocations = EnumerateValid(instance, options);
  table.welfare.reserve(table.allocations.size());
  for (const Allocation& a : table.allocations) {
    table.welfare.push_back(Welfare(a, reports, instance));
  }
  return table;
}

WelfareMaximum WelfareMaxAllocation(const MarketInstance& instance,
                                    const AllocationTable& table) {
  WelfareMaximum best;
  best.allocation = EmptyAllocation(instance);
  bool found = false;
  for (std::size_t i = 0; i < table.allocations.size(); ++i) {
    const Rational& w = table.welfare[i];
    if (!found || w > best.welfare) {
      best.allocation = table.allocations[i];
      best.welfare = w;
      best.unique = true;
      found = true;
    } else if (w == best.welfare) {
      best.unique = false;
    }
  }
  return best;
}

WelfareMaximum WelfareMaxAllocation(const MarketInstance& instance,
                                    const ReportProfile& reports,
                                    const EnumerationOptions& options) {
  return WelfareMaxAllocation(instance,
                              BuildAllocationTable(instance, reports, options));
}

BrokerBestResponse ComputeBrokerBestResponse(
    const std::string& broker, const MarketInstance& instance,
    const ReportProfile& reports, std::span<const Proposal> rivals,
    std::span<const std::string> broker_order,
    const BestResponseOptions& options, const AllocationTable* table) {
  if (options.quantum.Sign() <= 0) {
    throw PreconditionViolation("margin quantum must be positive");
  }
  std::optional<AllocationTable> local;
  if (table == nullptr) {
    local = BuildAllocationTable(instance, reports, options.enumeration);
    table = &*local;
  }
  const RivalSummary summary =
      SummarizeRivals(broker, instance, reports, rivals, broker_order);

  BrokerBestResponse best;
  best.allocations_examined =
      static_cast<std::int64_t>(table->allocations.size());
  std::optional<std::size_t> best_index;
  Rational best_margin;
  for (std::size_t i = 0; i < table->allocations.size(); ++i) {
    const Rational& w = table->welfare[i];
    if (w.Sign() <= 0) continue;
    const Rational m = WinningMargin(w, summary, options);
    if (m.Sign() <= 0) continue;
    if (!best_index || m > best_margin ||
        (m == best_margin && w > table->welfare[*best_index])) {
      best_index = i;
      best_margin = m;
    }
  }

  if (best_index) {
    best.proposal = {broker,
                     ScaledRebateRouting(instance,
                                         table->allocations[*best_index],
                                         reports, best_margin)};
    best.utility = best_margin;
    best.wins = true;
    return best;
  }

  best.proposal = {broker, EmptyRouting(instance)};
  std::vector<Proposal> all;
  for (const Proposal& p : rivals) {
    if (p.broker != broker) all.push_back(p);
  }
  all.push_back(best.proposal);
  const MechanismOutcome outcome =
      RunValidated(instance, reports, all, broker_order);
  best.wins = outcome.winner && *outcome.winner == broker;
  return best;
}

DynamicsTrace BestResponseDynamics(const MarketInstance& instance,
                                   const ReportProfile& reports,
                                   std::span<const Proposal> initial,
                                   std::span<const std::string> broker_order,
                                   const Rational& quantum, int max_rounds,
                                   const EnumerationOptions& enumeration) {
  if (broker_order.size() < 2) {
    throw PreconditionViolation("dynamics need at least two brokers");
  }
  if (quantum.Sign() <= 0) {
    throw PreconditionViolation("margin quantum must be positive");
  }
  if (max_rounds < 0) {
    throw PreconditionViolation("round limit must be non-negative");
  }
  CheckReports(instance, reports);
  ValidateProposals(instance, initial, broker_order);

  const AllocationTable table =
      BuildAllocationTable(instance, reports, enumeration);
  BestResponseOptions options;
  options.quantum = quantum;
  options.lattice_margins = true;
  options.enumeration = enumeration;

  std::vector<Proposal> profile;
  for (const std::string& b : broker_order) {
    for (const Proposal& p : initial) {
      if (p.broker == b) profile.push_back(p);
    }
  }

  DynamicsTrace trace;
  for (int round = 1; round <= max_rounds; ++round) {
    trace.rounds = round;
    bool moved = false;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      const std::string& b = profile[i].broker;
      const Rational current = BrokerUtility(
          RunValidated(instance, reports, profile, broker_order), b);
      BrokerBestResponse response = ComputeBrokerBestResponse(
          b, instance, reports, profile, broker_order, options, &table);
      if (response.utility > current) {
        profile[i] = response.proposal;
        trace.steps.push_back({b, response.proposal, response.utility, round});
        moved = true;
      }
    }
    if (!moved) {
      trace.converged = true;
      break;
    }
  }
  trace.terminal = profile;
  trace.outcome = RunValidated(instance, reports, profile, broker_order);
  return trace;
}

}  // namespace resonance
