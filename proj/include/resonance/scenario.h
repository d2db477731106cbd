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

// Scenario files: a market or resource market plus optional proposals,
// reports, broker order and run parameters, as JSON. Numbers are decimal
// strings ("1.25", "7/4"), JSON integers or {"num": .., "den": ..} objects;
// JSON floating-point literals are rejected because they are inexact.

#ifndef RESONANCE_SCENARIO_H_
#define RESONANCE_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resonance/mdfm.h"
#include "resonance/mechanism.h"
#include "resonance/model.h"
#include "resonance/rational.h"

namespace resonance {

enum class ScenarioKind { kMarket, kResourceMarket };

struct RunParams {
  Rational quantum = Rational(1, 1024);
  std::uint64_t enum_cap = std::uint64_t{1} << 24;
  std::optional<std::uint64_t> seed;
  std::int64_t others_cap = 65536;
  int max_iters = 10000;
  int node_bundle_cap = 6;
  int fee_grid_steps = 4;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::kMarket;
  MarketInstance instance;
  // Set for resource markets; `instance` then holds its general form.
  std::optional<ResourceMarket> resource_market;
  std::vector<Proposal> proposals;
  std::optional<ReportProfile> reports;
  std::vector<std::string> broker_order;
  RunParams params;

  // Reports, defaulting to the truthful profile.
  ReportProfile EffectiveReports() const;
  // Broker order, defaulting to the order of the proposals.
  std::vector<std::string> EffectiveBrokerOrder() const;
};

// Throws MalformedInput naming the offending JSON path (or the parse
// position for syntax errors).
Scenario ParseScenario(std::string_view json_text);
Scenario LoadScenarioFile(const std::string& path);

// Pretty-printed JSON that ParseScenario reads back to an equal scenario.
std::string SerializeScenario(const Scenario& scenario);

Scenario MarketScenario(MarketInstance instance);
Scenario ResourceMarketScenario(ResourceMarket market);

// Sets one run parameter from text: quantum, enum_cap, seed, others_cap,
// max_iters, node_bundle_cap or fee_grid_steps.
void SetRunParam(RunParams& params, std::string_view name,
                 std::string_view value);

}  // namespace resonance

#endif  // RESONANCE_SCENARIO_H_
