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

// Scalar functionals over routings: margin, utilities, surplus, welfare.
// Identity: Surplus(r) + Margin(r) == Welfare(r.allocation), exactly.

#ifndef RESONANCE_CORE_H_
#define RESONANCE_CORE_H_

#include "resonance/model.h"
#include "resonance/rational.h"

namespace resonance {

// c_n(bundle). Zero on the empty bundle for every variant.
Rational EvaluateCost(const CostFunction& cost, TxSet bundle,
                      const MarketInstance& instance);

// sum_t pi(t) - sum_n phi(n). May be negative.
Rational Margin(const Routing& routing);

// 1[allocated] * value - pi(t). Throws MalformedInput on unknown t.
Rational TxUtility(TxIndex t, const Routing& routing, const Rational& value);

// phi(n) - cost(alpha^{-1}(n)).
Rational NodeUtility(NodeIndex n, const Routing& routing,
                     const CostFunction& cost, const MarketInstance& instance);

// Sum of transaction and node utilities under `types`.
Rational Surplus(const Routing& routing, const ReportProfile& types,
                 const MarketInstance& instance);

// Sum of allocated values minus the costs nodes incur for their bundles.
Rational Welfare(const Allocation& allocation, const ReportProfile& types,
                 const MarketInstance& instance);

bool IsBudgetBalanced(const Routing& routing);

}  // namespace resonance

#endif  // RESONANCE_CORE_H_
