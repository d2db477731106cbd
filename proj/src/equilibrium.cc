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

#include <algorithm>
#include <random>
#include <set>

#include "resonance/core.h"
#include "resonance/errors.h"
#include "resonance/fourier_motzkin.h"

namespace resonance {
namespace {

// Sorted breakpoints plus the midpoint of every gap and one point past the
// largest.
std::vector<Rational> Representatives(std::vector<Rational> breakpoints) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());
  std::vector<Rational> out;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    out.push_back(breakpoints[i]);
    if (i + 1 < breakpoints.size()) {
      out.push_back((breakpoints[i] + breakpoints[i + 1]) / Rational(2));
    }
  }
  out.push_back(breakpoints.back() + Rational(1));
  return out;
}

CostFunction TableFor(const MarketInstance& instance,
                      const std::vector<TxSet>& bundles,
                      const std::vector<Rational>& values) {
  SubsetTableCost table;
  table.costs.assign(std::size_t{1} << instance.num_transactions(),
                     Rational());
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    table.costs[bundles[i]] = values[i];
  }
  return table;
}

// Saturating product for candidate-space sizes.
std::int64_t SaturatingMultiply(std::int64_t a, std::int64_t b) {
  constexpr std::int64_t kMax = std::int64_t{1} << 62;
  if (a == 0 || b == 0) return 0;
  if (a > kMax / b) return kMax;
  return a * b;
}

Rational TrueUtility(AgentKind kind, int index, const Routing& routing,
                     const ReportProfile& true_types,
                     const MarketInstance& instance) {
  if (kind == AgentKind::kTransaction) {
    return TxUtility(index, routing, true_types.tx_reports[index]);
  }
  return NodeUtility(index, routing, true_types.node_reports[index],
                     instance);
}

const std::string& AgentId(AgentKind kind, int index,
                           const MarketInstance& instance) {
  return kind == AgentKind::kTransaction ? instance.transactions[index].id
                                         : instance.nodes[index].id;
}

// Best unilateral report deviation of one transaction or node, evaluated
// against `reports` for everyone else.
std::optional<DeviationWitness> BestReportDeviation(
    AgentKind kind, int index, const MarketInstance& instance,
    const ReportProfile& true_types, const ReportProfile& reports,
    std::span<const Proposal> proposals,
    std::span<const std::string> broker_order,
    const DeviationOptions& options, std::int64_t& checked) {
  const MechanismOutcome base =
      RunValidated(instance, reports, proposals, broker_order);
  const Rational before =
      TrueUtility(kind, index, base.routing, true_types, instance);
  std::optional<DeviationWitness> best;
  ReportProfile deviated = reports;
  auto consider = [&](auto report) {
    ++checked;
    const MechanismOutcome o =
        RunValidated(instance, deviated, proposals, broker_order);
    const Rational after =
        TrueUtility(kind, index, o.routing, true_types, instance);
    if (after > before && (!best || after > best->utility_after)) {
      best = DeviationWitness{kind, AgentId(kind, index, instance),
                              std::move(report), before, after,
                              std::nullopt};
    }
  };
  if (kind == AgentKind::kTransaction) {
    for (const Rational& x :
         TxDeviationCandidates(instance, index, proposals, reports)) {
      deviated.tx_reports[index] = x;
      consider(x);
    }
  } else {
    for (const CostFunction& c : NodeDeviationCandidates(
             instance, index, proposals, reports, broker_order, options)) {
      deviated.node_reports[index] = c;
      consider(c);
    }
  }
  return best;
}

}  // namespace

std::string_view AgentKindName(AgentKind kind) {
  switch (kind) {
    case AgentKind::kTransaction:
      return "transaction";
    case AgentKind::kNode:
      return "node";
    case AgentKind::kBroker:
      return "broker";
  }
  return "unknown";
}

std::vector<Rational> TxDeviationCandidates(const MarketInstance& instance,
                                            TxIndex t,
                                            std::span<const Proposal> proposals,
                                            const ReportProfile& reports) {
  if (t < 0 || t >= instance.num_transactions()) {
    throw MalformedInput("unknown transaction index " + std::to_string(t));
  }
  std::vector<Rational> breakpoints = {Rational()};
  bool allocated_anywhere = false;
  for (const Proposal& p : proposals) {
    breakpoints.push_back(p.routing.tx_payments[t]);
    if (p.routing.allocation.nodes_of(t) != 0) allocated_anywhere = true;
  }
  if (!allocated_anywhere) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());
    return breakpoints;
  }
  // Each surplus is K + s*x with slope s in {0, 1}.
  ReportProfile zeroed = reports;
  zeroed.tx_reports[t] = Rational();
  std::vector<Rational> intercept;
  std::vector<bool> slope;
  for (const Proposal& p : proposals) {
    intercept.push_back(Surplus(p.routing, zeroed, instance));
    slope.push_back(p.routing.allocation.nodes_of(t) != 0);
  }
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    for (std::size_t j = 0; j < proposals.size(); ++j) {
      if (!slope[i] || slope[j]) continue;
      const Rational x = intercept[j] - intercept[i];
      if (x.Sign() >= 0) breakpoints.push_back(x);
    }
  }
  return Representatives(std::move(breakpoints));
}

std::vector<CostFunction> NodeDeviationCandidates(
    const MarketInstance& instance, NodeIndex n,
    std::span<const Proposal> proposals, const ReportProfile& reports,
    std::span<const std::string> broker_order,
    const DeviationOptions& options) {
  if (n < 0 || n >= instance.num_nodes()) {
    throw MalformedInput("unknown node index " + std::to_string(n));
  }
  std::vector<TxSet> bundles;
  for (const Proposal& p : proposals) {
    const TxSet b = p.routing.allocation.Inverse(n);
    if (b != 0) bundles.push_back(b);
  }
  std::sort(bundles.begin(), bundles.end());
  bundles.erase(std::unique(bundles.begin(), bundles.end()), bundles.end());
  if (bundles.empty()) return {ZeroCost{}};
  if (static_cast<int>(bundles.size()) > options.node_bundle_cap) {
    throw InstanceTooLarge("node '" + instance.nodes[n].id + "' holds " +
                           std::to_string(bundles.size()) +
                           " distinct bundles, above the cap of " +
                           std::to_string(options.node_bundle_cap));
  }
  if (instance.num_transactions() > kMaxSubsetTableTransactions) {
    throw InstanceTooLarge("node deviation reports need at most " +
                           std::to_string(kMaxSubsetTableTransactions) +
                           " transactions");
  }
  const int m = static_cast<int>(bundles.size());

  // Surplus of proposal b is K_b - y[coord_b] (no y term when coord_b < 0).
  ReportProfile zeroed = reports;
  zeroed.node_reports[n] = ZeroCost{};
  std::vector<int> coord;
  std::vector<Rational> intercept;
  for (const Proposal& p : proposals) {
    const TxSet b = p.routing.allocation.Inverse(n);
    coord.push_back(b == 0 ? -1
                           : static_cast<int>(
                                 std::lower_bound(bundles.begin(),
                                                  bundles.end(), b) -
                                 bundles.begin()));
    intercept.push_back(Surplus(p.routing, zeroed, instance));
  }

  std::set<std::vector<Rational>> points;

  std::vector<std::vector<Rational>> axes(m);
  std::int64_t product = 1;
  for (int i = 0; i < m; ++i) {
    std::vector<Rational> breakpoints = {Rational()};
    for (std::size_t b = 0; b < proposals.size(); ++b) {
      if (coord[b] != i) continue;
      breakpoints.push_back(proposals[b].routing.node_payments[n]);
      for (std::size_t c = 0; c < proposals.size(); ++c) {
        if (coord[c] >= 0) continue;
        const Rational y = intercept[b] - intercept[c];
        if (y.Sign() >= 0) breakpoints.push_back(y);
      }
    }
    axes[i] = Representatives(std::move(breakpoints));
    product = SaturatingMultiply(product,
                                 static_cast<std::int64_t>(axes[i].size()));
  }
  if (product > options.node_candidate_cap) {
    throw InstanceTooLarge("node '" + instance.nodes[n].id +
                           "' has a candidate grid of " +
                           std::to_string(product) + " reports, above " +
                           std::to_string(options.node_candidate_cap));
  }
  std::vector<std::size_t> digit(m, 0);
  for (std::int64_t k = 0; k < product; ++k) {
    std::vector<Rational> y(m);
    for (int i = 0; i < m; ++i) y[i] = axes[i][digit[i]];
    points.insert(std::move(y));
    for (int i = 0; i < m; ++i) {
      if (++digit[i] < axes[i].size()) break;
      digit[i] = 0;
    }
  }

  // One report per reachable (selected proposal, IR verdict of n) outcome.
  for (std::size_t b = 0; b < proposals.size(); ++b) {
    if (!IsBudgetBalanced(proposals[b].routing)) continue;
    const int rank_b = BrokerRank(broker_order, proposals[b].broker);
    LinearSystem base(m);
    base.AddNonNegativity();
    for (std::size_t c = 0; c < proposals.size(); ++c) {
      if (c == b || !IsBudgetBalanced(proposals[c].routing)) continue;
      // S_b - S_c = K_b - K_c - y[coord_b] + y[coord_c].
      std::vector<Rational> row(m);
      if (coord[b] >= 0) row[coord[b]] -= Rational(1);
      if (coord[c] >= 0) row[coord[c]] += Rational(1);
      const Rational rhs = intercept[c] - intercept[b];
      if (BrokerRank(broker_order, proposals[c].broker) < rank_b) {
        base.AddGreater(row, rhs);
      } else {
        base.AddGreaterEqual(row, rhs);
      }
    }
    std::vector<LinearSystem> systems;
    if (coord[b] < 0) {
      systems.push_back(base);
    } else {
      std::vector<Rational> row(m);
      row[coord[b]] = Rational(1);
      const Rational& phi = proposals[b].routing.node_payments[n];
      LinearSystem accept = base;
      accept.AddLessEqual(row, phi);
      LinearSystem reject = base;
      reject.AddGreater(row, phi);
      systems.push_back(std::move(accept));
      systems.push_back(std::move(reject));
    }
    for (const LinearSystem& s : systems) {
      if (auto y = FindFeasiblePoint(s)) points.insert(std::move(*y));
    }
  }

  std::vector<CostFunction> out;
  out.reserve(points.size());
  for (const auto& y : points) out.push_back(TableFor(instance, bundles, y));
  return out;
}

EquilibriumReport CheckPNE(const MarketInstance& instance,
                           const ReportProfile& true_types,
                           const ReportProfile& reports,
                           std::span<const Proposal> proposals,
                           std::span<const std::string> broker_order,
                           const EquilibriumOptions& options) {
  CheckReports(instance, true_types);
  const MechanismOutcome outcome =
      Run(instance, reports, proposals, broker_order);
  EquilibriumReport report;

  for (int t = 0; t < instance.num_transactions(); ++t) {
    if (auto w = BestReportDeviation(
            AgentKind::kTransaction, t, instance, true_types, reports,
            proposals, broker_order, options.deviation,
            report.checked_agent_deviations)) {
      report.witnesses.push_back(std::move(*w));
    }
  }
  for (int n = 0; n < instance.num_nodes(); ++n) {
    if (auto w = BestReportDeviation(
            AgentKind::kNode, n, instance, true_types, reports, proposals,
            broker_order, options.deviation,
            report.checked_agent_deviations)) {
      report.witnesses.push_back(std::move(*w));
    }
  }

  const AllocationTable table = BuildAllocationTable(
      instance, reports, options.best_response.enumeration);
  for (const std::string& broker : broker_order) {
    const Rational before = BrokerUtility(outcome, broker);
    BrokerBestResponse response = ComputeBrokerBestResponse(
        broker, instance, reports, proposals, broker_order,
        options.best_response, &table);
    report.checked_broker_allocations += response.allocations_examined;
    if (response.utility > before) {
      report.witnesses.push_back({AgentKind::kBroker, broker,
                                  std::move(response.proposal), before,
                                  response.utility, std::nullopt});
    }
  }
  report.is_pne = report.witnesses.empty();
  return report;
}

DsicReport CheckDSICBarringB(const MarketInstance& instance,
                             const ReportProfile& true_types,
                             std::span<const Proposal> sigma,
                             std::span<const std::string> broker_order,
                             const DsicOptions& options) {
  if (sigma.empty()) {
    throw PreconditionViolation("broker profile must not be empty");
  }
  for (const Proposal& p : sigma) {
    if (!(p.routing.allocation == sigma.front().routing.allocation)) {
      throw PreconditionViolation(
          "all proposals of the broker profile must share one allocation");
    }
  }
  CheckReports(instance, true_types);
  ValidateProposals(instance, sigma, broker_order);

  const DeviationOptions& deviation = options.equilibrium.deviation;
  const int num_tx = instance.num_transactions();
  const int num_agents = num_tx + instance.num_nodes();
  auto kind_of = [&](int agent) {
    return agent < num_tx ? AgentKind::kTransaction : AgentKind::kNode;
  };
  auto index_of = [&](int agent) {
    return agent < num_tx ? agent : agent - num_tx;
  };

  // Candidate reports of every agent at the truthful profile.
  std::vector<std::vector<Rational>> tx_candidates(num_tx);
  std::vector<std::vector<CostFunction>> node_candidates(instance.num_nodes());
  std::vector<std::int64_t> sizes(num_agents);
  for (int t = 0; t < num_tx; ++t) {
    tx_candidates[t] = TxDeviationCandidates(instance, t, sigma, true_types);
    sizes[t] = static_cast<std::int64_t>(tx_candidates[t].size());
  }
  for (int n = 0; n < instance.num_nodes(); ++n) {
    node_candidates[n] = NodeDeviationCandidates(
        instance, n, sigma, true_types, broker_order, deviation);
    sizes[num_tx + n] = static_cast<std::int64_t>(node_candidates[n].size());
  }

  DsicReport report;
  for (int agent = 0; agent < num_agents; ++agent) {
    std::vector<int> others;
    std::int64_t product = 1;
    for (int o = 0; o < num_agents; ++o) {
      if (o == agent) continue;
      others.push_back(o);
      product = SaturatingMultiply(product, sizes[o]);
    }
    const bool exhaustive = product <= options.others_cap;
    if (!exhaustive && !options.seed) {
      throw PreconditionViolation(
          "other agents' report space has " + std::to_string(product) +
          " profiles, above the cap of " + std::to_string(options.others_cap) +
          "; sampling requires an explicit seed");
    }
    const std::int64_t count = exhaustive ? product : options.samples;
    std::mt19937_64 rng(options.seed.value_or(0) +
                        0x9e3779b97f4a7c15ULL * static_cast<unsigned>(agent));
    if (!exhaustive) report.exhaustive = false;

    std::vector<std::int64_t> digit(others.size(), 0);
    for (std::int64_t k = 0; k < count; ++k) {
      if (!exhaustive) {
        for (std::size_t i = 0; i < others.size(); ++i) {
          std::uniform_int_distribution<std::int64_t> pick(
              0, sizes[others[i]] - 1);
          digit[i] = pick(rng);
        }
      }
      ReportProfile profile = true_types;
      for (std::size_t i = 0; i < others.size(); ++i) {
        const int o = others[i];
        if (o < num_tx) {
          profile.tx_reports[o] = tx_candidates[o][digit[i]];
        } else {
          profile.node_reports[o - num_tx] =
              node_candidates[o - num_tx][digit[i]];
        }
      }
      ++report.profiles_checked;
      std::int64_t unused = 0;
      std::optional<DeviationWitness> w = BestReportDeviation(
          kind_of(agent), index_of(agent), instance, true_types, profile,
          sigma, broker_order, deviation, unused);
      if (w) {
        w->context = profile;
        report.witnesses.push_back(std::move(*w));
        report.truthful_dominant = false;
        break;
      }
      if (exhaustive) {
        for (std::size_t i = 0; i < others.size(); ++i) {
          if (++digit[i] < sizes[others[i]]) break;
          digit[i] = 0;
        }
      }
    }
  }

  report.pne = CheckPNE(instance, true_types, true_types, sigma, broker_order,
                        options.equilibrium);
  report.broker_profile_pne = report.pne.is_pne;
  return report;
}

std::vector<Proposal> ConstructFootnoteEquilibrium(
    const MarketInstance& instance, const ReportProfile& true_types,
    std::span<const std::string> broker_ids,
    const EnumerationOptions& enumeration) {
  if (broker_ids.size() < 2) {
    throw PreconditionViolation("the construction needs at least two brokers");
  }
  const WelfareMaximum best =
      WelfareMaxAllocation(instance, true_types, enumeration);
  const Routing routing =
      ScaledRebateRouting(instance, best.allocation, true_types, Rational());
  std::vector<Proposal> proposals;
  for (const std::string& b : broker_ids) proposals.push_back({b, routing});
  return proposals;
}

}  // namespace resonance
