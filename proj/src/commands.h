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

#ifndef RESONANCE_SRC_COMMANDS_H_
#define RESONANCE_SRC_COMMANDS_H_

#include <string>
#include <string_view>

#include "resonance/scenario.h"

namespace resonance::internal {

enum class OutputFormat { kJson, kCsv };

struct CommandOutput {
  std::string text;
  // The mechanism output the empty routing.
  bool rejected = false;
};

CommandOutput CommandRun(const Scenario& scenario, OutputFormat format);
// mode is "pne" or "dsic-barring-b".
CommandOutput CommandEquilibrium(const Scenario& scenario,
                                 std::string_view mode, OutputFormat format);
// JSON lines: one per step, then a summary line.
CommandOutput CommandDynamics(const Scenario& scenario, OutputFormat format);
CommandOutput CommandBenchmarks(const Scenario& scenario, OutputFormat format);

// Generator parameters as a JSON object: thm-of {"d"}, thm-fee {"k"},
// thm-wo {"k", "values", "epsilon"}, figure1 {}. Returns a scenario file.
std::string CommandGenerate(std::string_view name,
                            std::string_view params_json);

}  // namespace resonance::internal

#endif  // RESONANCE_SRC_COMMANDS_H_
