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

#ifndef RESONANCE_SRC_JSON_IO_H_
#define RESONANCE_SRC_JSON_IO_H_

#include <string>

#include "json.hpp"
#include "resonance/mechanism.h"
#include "resonance/model.h"
#include "resonance/rational.h"

namespace resonance::internal {

using Json = nlohmann::ordered_json;

Json ToJson(const Rational& value);
Json ToJson(const std::vector<Rational>& values);
Json ToJson(const CostFunction& cost, const MarketInstance& instance);
// Object mapping every allocated transaction id to its sorted node ids.
Json ToJson(const Allocation& allocation, const MarketInstance& instance);
Json ToJson(const Routing& routing, const MarketInstance& instance);
Json ToJson(const Proposal& proposal, const MarketInstance& instance);
Json ToJson(const ReportProfile& reports, const MarketInstance& instance);

// Reading helpers; `path` is the JSON pointer of `j` used in diagnostics.
[[noreturn]] void Fail(const std::string& path, const std::string& message);
Rational ReadRational(const Json& j, const std::string& path);
std::vector<Rational> ReadRationals(const Json& j, const std::string& path);
std::string ReadString(const Json& j, const std::string& path);
long ReadInteger(const Json& j, const std::string& path);
const Json& Field(const Json& object, const char* key,
                  const std::string& path);
void CheckKeys(const Json& object, std::initializer_list<const char*> allowed,
               const std::string& path);

CostFunction ReadCost(const Json& j, const MarketInstance& instance,
                      const std::string& path);
Allocation ReadAllocation(const Json& j, const MarketInstance& instance,
                          const std::string& path);
Proposal ReadProposal(const Json& j, const MarketInstance& instance,
                      const std::string& path);

}  // namespace resonance::internal

#endif  // RESONANCE_SRC_JSON_IO_H_
