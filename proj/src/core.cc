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

#include "resonance/core.h"

#include <variant>

#include "overloaded.h"
#include "resonance/errors.h"

namespace resonance {
namespace {

using internal::Overloaded;

}  // namespace

Rational EvaluateCost(const CostFunction& cost, TxSet bundle,
                      const MarketInstance& instance) {
  if (bundle == 0) return Rational();
  return std::visit(
      Overloaded{
          [](const ZeroCost&) { return Rational(); },
          [](const ConstantNonemptyCost& c) { return c.cost; },
          [&](const PerTransactionCost& c) {
            Rational total;
            for (int t = 0; t < static_cast<int>(c.costs.size()); ++t) {
              if (Contains(bundle, t)) total += c.costs[t];
            }
            return total;
          },
          [&](const LinearResourceCost& c) {
            Rational total;
            for (int t = 0; t < instance.num_transactions(); ++t) {
              if (!Contains(bundle, t)) continue;
              const auto& g = instance.transactions[t].resources;
              if (!g || g->size() != c.unit_costs.size()) {
                throw MalformedInput("transaction '" +
                                     instance.transactions[t].id +
                                     "' lacks a matching resource vector");
              }
              for (std::size_t i = 0; i < g->size(); ++i) {
                total += (*g)[i] * c.unit_costs[i];
              }
            }
            return total;
          },
          [&](const SubsetTableCost& c) {
            if (bundle >= c.costs.size()) {
              throw MalformedInput("subset table has no entry for bundle");
            }
            return c.costs[bundle];
          },
      },
      cost);
}

Rational Margin(const Routing& routing) {
  Rational margin;
  for (const Rational& p : routing.tx_payments) margin += p;
  for (const Rational& p : routing.node_payments) margin -= p;
  return margin;
}

Rational TxUtility(TxIndex t, const Routing& routing, const Rational& value) {
  if (t < 0 || t >= static_cast<int>(routing.tx_payments.size()) ||
      t >= routing.allocation.num_transactions()) {
    throw MalformedInput("unknown transaction index " + std::to_string(t));
  }
  Rational u = -routing.tx_payments[t];
  if (routing.allocation.nodes_of(t) != 0) u += value;
  return u;
}

Rational NodeUtility(NodeIndex n, const Routing& routing,
                     const CostFunction& cost,
                     const MarketInstance& instance) {
  if (n < 0 || n >= static_cast<int>(routing.node_payments.size())) {
    throw MalformedInput("unknown node index " + std::to_string(n));
  }
  return routing.node_payments[n] -
         EvaluateCost(cost, routing.allocation.Inverse(n), instance);
}

Rational Surplus(const Routing& routing, const ReportProfile& types,
                 const MarketInstance& instance) {
  Rational total;
  for (int t = 0; t < instance.num_transactions(); ++t) {
    total += TxUtility(t, routing, types.tx_reports[t]);
  }
  for (int n = 0; n < instance.num_nodes(); ++n) {
    total += NodeUtility(n, routing, types.node_reports[n], instance);
  }
  return total;
}

Rational Welfare(const Allocation& allocation, const ReportProfile& types,
                 const MarketInstance& instance) {
  Rational total;
  const TxSet allocated = allocation.Transactions();
  for (int t = 0; t < instance.num_transactions(); ++t) {
    if (Contains(allocated, t)) total += types.tx_reports[t];
  }
  for (int n = 0; n < instance.num_nodes(); ++n) {
    const TxSet bundle = allocation.Inverse(n);
    if (bundle != 0) {
      total -= EvaluateCost(types.node_reports[n], bundle, instance);
    }
  }
  return total;
}

bool IsBudgetBalanced(const Routing& routing) {
  return Margin(routing).Sign() >= 0;
}

}  // namespace resonance
