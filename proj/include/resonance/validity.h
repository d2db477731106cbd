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

#ifndef RESONANCE_VALIDITY_H_
#define RESONANCE_VALIDITY_H_

#include <cstdint>
#include <vector>

#include "resonance/model.h"

namespace resonance {

struct EnumerationOptions {
  // Bound on the raw search space (2^|N|)^|T| before pruning.
  std::uint64_t max_candidates = std::uint64_t{1} << 24;
};

bool IsValid(const Allocation& allocation, const ValiditySpec& spec,
             const MarketInstance& instance);
inline bool IsValid(const Allocation& allocation,
                    const MarketInstance& instance) {
  return IsValid(allocation, instance.validity, instance);
}

// Every valid allocation exactly once, in canonical order, starting with
// the empty allocation. Constraint specs are searched depth-first with
// capacity, per-node count and per-transaction pruning; throws
// InstanceTooLarge when (2^|N|)^|T| exceeds the configured bound.
std::vector<Allocation> EnumerateValid(const MarketInstance& instance,
                                       const ValiditySpec& spec,
                                       const EnumerationOptions& options = {});
inline std::vector<Allocation> EnumerateValid(
    const MarketInstance& instance, const EnumerationOptions& options = {}) {
  return EnumerateValid(instance, instance.validity, options);
}

}  // namespace resonance

#endif  // RESONANCE_VALIDITY_H_
