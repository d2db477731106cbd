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

// Constructive broker strategies: routings that extract all welfare or
// rebate it proportionally, exact best responses against fixed rivals, and
// round-robin best-response dynamics on a margin lattice.

#ifndef RESONANCE_STRATEGY_H_
#define RESONANCE_STRATEGY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "resonance/mechanism.h"
#include "resonance/model.h"
#include "resonance/rational.h"
#include "resonance/validity.h"

namespace resonance {

// pi(t) = reported value of each allocated transaction, phi(n) = reported
// cost of n's bundle. Margin equals the reported welfare; surplus is 0.
Routing MaxExtractionRouting(const MarketInstance& instance,
                             const Allocation& allocation,
                             const ReportProfile& reports);

// Nodes are paid their reported cost and every allocated transaction pays
// lambda times its reported value, with lambda chosen so that the margin is
// exactly `target_margin`. Throws PreconditionViolation unless lambda lies
// in [0, 1].
Routing ScaledRebateRouting(const MarketInstance& instance,
                            const Allocation& allocation,
                            const ReportProfile& reports,
                            const Rational& target_margin);

// Valid allocations paired with their welfare under one report profile.
struct AllocationTable {
  std::vector<Allocation> allocations;
  std::vector<Rational> welfare;
};

AllocationTable BuildAllocationTable(const MarketInstance& instance,
                                     const ReportProfile& reports,
                                     const EnumerationOptions& options = {});

struct WelfareMaximum {
  Allocation allocation;
  Rational welfare;
  bool unique = true;
};

// Canonically first welfare maximizer over all valid allocations.
WelfareMaximum WelfareMaxAllocation(const MarketInstance& instance,
                                    const ReportProfile& reports,
                                    const EnumerationOptions& options = {});
WelfareMaximum WelfareMaxAllocation(const MarketInstance& instance,
                                    const AllocationTable& table);

struct BestResponseOptions {
  Rational quantum = Rational(1, 1024);
  // Restrict every margin to multiples of `quantum`. Otherwise margins are
  // exact where a tie is won by broker order and lattice points only where
  // the rival surplus must be beaten strictly.
  bool lattice_margins = false;
  EnumerationOptions enumeration;
};

struct BrokerBestResponse {
  Proposal proposal;
  Rational utility;
  bool wins = false;
  std::int64_t allocations_examined = 0;
};

// Utility-maximizing proposal of `broker` against the fixed `rivals`.
// `table` may carry precomputed valid allocations for `reports`.
BrokerBestResponse ComputeBrokerBestResponse(
    const std::string& broker, const MarketInstance& instance,
    const ReportProfile& reports, std::span<const Proposal> rivals,
    std::span<const std::string> broker_order,
    const BestResponseOptions& options = {},
    const AllocationTable* table = nullptr);

struct DynamicsStep {
  std::string broker;
  Proposal proposal;
  Rational utility;
  int round = 0;
};

struct DynamicsTrace {
  std::vector<DynamicsStep> steps;
  std::vector<Proposal> terminal;
  MechanismOutcome outcome;
  bool converged = false;
  int rounds = 0;
};

// Round-robin best responses in `broker_order` with lattice margins. A
// broker moves only on strict improvement; the run converges after a full
// round without moves or stops after `max_rounds`.
DynamicsTrace BestResponseDynamics(const MarketInstance& instance,
                                   const ReportProfile& reports,
                                   std::span<const Proposal> initial,
                                   std::span<const std::string> broker_order,
                                   const Rational& quantum, int max_rounds,
                                   const EnumerationOptions& enumeration = {});

}  // namespace resonance

#endif  // RESONANCE_STRATEGY_H_
