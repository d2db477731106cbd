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

#include "resonance/validity.h"

#include <algorithm>
#include <string>
#include <variant>

#include "overloaded.h"
#include "resonance/errors.h"

namespace resonance {
namespace {

using internal::Overloaded;

void CheckTx(TxIndex t, const MarketInstance& instance) {
  if (t < 0 || t >= instance.num_transactions()) {
    throw MalformedInput("validity spec references unknown transaction");
  }
}

void CheckNode(NodeIndex n, const MarketInstance& instance) {
  if (n < 0 || n >= instance.num_nodes()) {
    throw MalformedInput("validity spec references unknown node");
  }
}

const std::vector<Rational>& ResourcesOf(const MarketInstance& instance,
                                         TxIndex t, std::size_t dims) {
  const auto& g = instance.transactions[t].resources;
  if (!g || g->size() != dims) {
    throw MalformedInput("transaction '" + instance.transactions[t].id +
                         "' lacks a resource vector of length " +
                         std::to_string(dims));
  }
  return *g;
}

const std::vector<Rational>& CapacityOf(const MarketInstance& instance,
                                        NodeIndex n) {
  const auto& r = instance.nodes[n].capacity;
  if (!r) {
    throw MalformedInput("node '" + instance.nodes[n].id +
                         "' has a capacity constraint but no capacity");
  }
  return *r;
}

bool Satisfies(const Allocation& a, const Constraint& constraint,
               const MarketInstance& instance) {
  return std::visit(
      Overloaded{
          [&](const NodeCapacityConstraint& c) {
            CheckNode(c.node, instance);
            const auto& cap = CapacityOf(instance, c.node);
            const TxSet bundle = a.Inverse(c.node);
            for (std::size_t i = 0; i < cap.size(); ++i) {
              Rational used;
              for (int t = 0; t < instance.num_transactions(); ++t) {
                if (Contains(bundle, t)) {
                  used += ResourcesOf(instance, t, cap.size())[i];
                }
              }
              if (used > cap[i]) return false;
            }
            return true;
          },
          [&](const MaxTxPerNodeConstraint& c) {
            CheckNode(c.node, instance);
            return PopCount(a.Inverse(c.node)) <= c.max_transactions;
          },
          [&](const RequiredNodeCountConstraint& c) {
            CheckTx(c.tx, instance);
            const int count = PopCount(a.nodes_of(c.tx));
            return count == 0 || (count >= c.min_nodes && count <= c.max_nodes);
          },
          [&](const MustShareNodeConstraint& c) {
            if ((a.Transactions() & c.transactions) != c.transactions) {
              return true;
            }
            NodeSet common = ~NodeSet{0};
            for (int t = 0; t < a.num_transactions(); ++t) {
              if (Contains(c.transactions, t)) common &= a.nodes_of(t);
            }
            return c.transactions == 0 || common != 0;
          },
          [&](const MutualExclusionConstraint& c) {
            CheckTx(c.first, instance);
            CheckTx(c.second, instance);
            return a.nodes_of(c.first) == 0 || a.nodes_of(c.second) == 0;
          },
          [&](const SingleAssignmentConstraint&) {
            for (int t = 0; t < a.num_transactions(); ++t) {
              if (PopCount(a.nodes_of(t)) > 1) return false;
            }
            return true;
          },
      },
      constraint);
}

// Depth-first search over per-transaction node sets with incremental
// pruning. Constraints that only make sense on complete allocations are
// checked at the leaves.
class Enumerator {
 public:
  Enumerator(const MarketInstance& instance,
             const std::vector<Constraint>& constraints)
      : instance_(instance),
        constraints_(constraints),
        current_(instance.num_transactions()),
        tx_count_(instance.num_nodes(), 0),
        max_tx_(instance.num_nodes(), -1),
        exclusions_(instance.num_transactions(), 0),
        usage_(instance.num_nodes()) {
    for (const Constraint& c : constraints_) {
      if (const auto* cap = std::get_if<NodeCapacityConstraint>(&c)) {
        CheckNode(cap->node, instance);
        const auto& r = CapacityOf(instance, cap->node);
        if (std::find(capacity_nodes_.begin(), capacity_nodes_.end(),
                      cap->node) == capacity_nodes_.end()) {
          capacity_nodes_.push_back(cap->node);
          usage_[cap->node].assign(r.size(), Rational());
        }
      } else if (const auto* m = std::get_if<MaxTxPerNodeConstraint>(&c)) {
        CheckNode(m->node, instance);
        int& bound = max_tx_[m->node];
        bound = bound < 0 ? m->max_transactions
                          : std::min(bound, m->max_transactions);
      } else if (const auto* r = std::get_if<RequiredNodeCountConstraint>(&c)) {
        CheckTx(r->tx, instance);
        required_.push_back(*r);
      } else if (const auto* x = std::get_if<MutualExclusionConstraint>(&c)) {
        CheckTx(x->first, instance);
        CheckTx(x->second, instance);
        exclusions_[std::max(x->first, x->second)] |=
            Bit(std::min(x->first, x->second));
        if (x->first == x->second) self_excluded_ |= Bit(x->first);
      } else if (std::holds_alternative<SingleAssignmentConstraint>(c)) {
        single_assignment_ = true;
      } else {
        leaf_checks_.push_back(c);
      }
    }
  }

  std::vector<Allocation> Run() {
    Recurse(0);
    return std::move(results_);
  }

 private:
  bool Admissible(TxIndex t, NodeSet nodes) const {
    if (nodes == 0) return true;
    if (Contains(self_excluded_, t)) return false;
    const int count = PopCount(nodes);
    if (single_assignment_ && count > 1) return false;
    for (const auto& r : required_) {
      if (r.tx == t && (count < r.min_nodes || count > r.max_nodes)) {
        return false;
      }
    }
    for (int s = 0; s < t; ++s) {
      if (Contains(exclusions_[t], s) && current_.nodes_of(s) != 0) {
        return false;
      }
    }
    for (int n = 0; n < instance_.num_nodes(); ++n) {
      if (!Contains(nodes, n)) continue;
      if (max_tx_[n] >= 0 && tx_count_[n] + 1 > max_tx_[n]) return false;
    }
    for (NodeIndex n : capacity_nodes_) {
      if (!Contains(nodes, n)) continue;
      const auto& cap = *instance_.nodes[n].capacity;
      const auto& g = ResourcesOf(instance_, t, cap.size());
      for (std::size_t i = 0; i < cap.size(); ++i) {
        if (usage_[n][i] + g[i] > cap[i]) return false;
      }
    }
    return true;
  }

  void Apply(TxIndex t, NodeSet nodes, int direction) {
    for (int n = 0; n < instance_.num_nodes(); ++n) {
      if (Contains(nodes, n)) tx_count_[n] += direction;
    }
    for (NodeIndex n : capacity_nodes_) {
      if (!Contains(nodes, n)) continue;
      const auto& g = *instance_.transactions[t].resources;
      for (std::size_t i = 0; i < usage_[n].size(); ++i) {
        if (direction > 0) {
          usage_[n][i] += g[i];
        } else {
          usage_[n][i] -= g[i];
        }
      }
    }
  }

  void Recurse(TxIndex t) {
    if (t == instance_.num_transactions()) {
      for (const Constraint& c : leaf_checks_) {
        if (!Satisfies(current_, c, instance_)) return;
      }
      results_.push_back(current_);
      return;
    }
    const NodeSet limit = NodeSet{1} << instance_.num_nodes();
    for (NodeSet nodes = 0; nodes < limit; ++nodes) {
      if (!Admissible(t, nodes)) continue;
      current_.Assign(t, nodes);
      Apply(t, nodes, +1);
      Recurse(t + 1);
      Apply(t, nodes, -1);
    }
    current_.Assign(t, 0);
  }

  const MarketInstance& instance_;
  const std::vector<Constraint>& constraints_;
  Allocation current_;
  std::vector<int> tx_count_;
  std::vector<int> max_tx_;
  std::vector<TxSet> exclusions_;
  TxSet self_excluded_ = 0;
  bool single_assignment_ = false;
  std::vector<RequiredNodeCountConstraint> required_;
  std::vector<NodeIndex> capacity_nodes_;
  std::vector<std::vector<Rational>> usage_;
  std::vector<Constraint> leaf_checks_;
  std::vector<Allocation> results_;
};

}  // namespace

bool IsValid(const Allocation& allocation, const ValiditySpec& spec,
             const MarketInstance& instance) {
  if (allocation.num_transactions() != instance.num_transactions()) {
    throw MalformedInput("allocation does not match the instance");
  }
  if (allocation.IsEmpty()) return true;
  if (const auto* list = std::get_if<ExtensionalValidity>(&spec)) {
    return std::find(list->allocations.begin(), list->allocations.end(),
                     allocation) != list->allocations.end();
  }
  for (const Constraint& c : std::get<ConstraintValidity>(spec).constraints) {
    if (!Satisfies(allocation, c, instance)) return false;
  }
  return true;
}

std::vector<Allocation> EnumerateValid(const MarketInstance& instance,
                                       const ValiditySpec& spec,
                                       const EnumerationOptions& options) {
  const CanonicalOrder order(instance);
  if (const auto* list = std::get_if<ExtensionalValidity>(&spec)) {
    std::vector<Allocation> result = list->allocations;
    const Allocation empty = EmptyAllocation(instance);
    if (std::find(result.begin(), result.end(), empty) == result.end()) {
      result.push_back(empty);
    }
    std::sort(result.begin(), result.end(), order);
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
  }
  const long bits =
      static_cast<long>(instance.num_nodes()) * instance.num_transactions();
  if (bits >= 64 || (std::uint64_t{1} << bits) > options.max_candidates) {
    throw InstanceTooLarge(
        "search space (2^" + std::to_string(instance.num_nodes()) + ")^" +
        std::to_string(instance.num_transactions()) +
        " exceeds the enumeration cap of " +
        std::to_string(options.max_candidates) + " candidate assignments");
  }
  Enumerator enumerator(instance,
                        std::get<ConstraintValidity>(spec).constraints);
  std::vector<Allocation> result = enumerator.Run();
  std::sort(result.begin(), result.end(), order);
  return result;
}

}  // namespace resonance
