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

#include "resonance/model.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "overloaded.h"
#include "resonance/errors.h"

namespace resonance {
namespace {

using internal::Overloaded;

void RequireNonNegative(const Rational& value, const std::string& what) {
  if (value.Sign() < 0) {
    throw MalformedInput(what + " must be non-negative, got " +
                         value.ToString());
  }
}

void RequireNonNegative(const std::vector<Rational>& values,
                        const std::string& what) {
  for (const Rational& v : values) RequireNonNegative(v, what);
}

void ValidateCost(const CostFunction& cost, const MarketInstance& instance,
                  const std::string& node_id) {
  const std::string where = "cost of node '" + node_id + "'";
  std::visit(
      Overloaded{
          [](const ZeroCost&) {},
          [&](const ConstantNonemptyCost& c) {
            RequireNonNegative(c.cost, where);
          },
          [&](const PerTransactionCost& c) {
            if (static_cast<int>(c.costs.size()) !=
                instance.num_transactions()) {
              throw MalformedInput(where + ": per-transaction costs size " +
                                   "does not match transaction count");
            }
            RequireNonNegative(c.costs, where);
          },
          [&](const LinearResourceCost& c) {
            RequireNonNegative(c.unit_costs, where);
            for (const TransactionSpec& t : instance.transactions) {
              if (!t.resources ||
                  t.resources->size() != c.unit_costs.size()) {
                throw MalformedInput(
                    where + ": linear resource costs need every " +
                    "transaction to carry a resource vector of length " +
                    std::to_string(c.unit_costs.size()));
              }
            }
          },
          [&](const SubsetTableCost& c) {
            if (instance.num_transactions() > kMaxSubsetTableTransactions) {
              throw MalformedInput(where +
                                   ": subset tables support at most 16 "
                                   "transactions");
            }
            if (c.costs.size() != (std::size_t{1}
                                   << instance.num_transactions())) {
              throw MalformedInput(where + ": subset table is not total");
            }
            if (!c.costs[0].IsZero()) {
              throw MalformedInput(where + ": cost of the empty bundle must "
                                           "be 0");
            }
            RequireNonNegative(c.costs, where);
          },
      },
      cost);
}

}  // namespace

int PopCount(std::uint32_t set) { return std::popcount(set); }

TxSet Allocation::Inverse(NodeIndex n) const {
  TxSet result = 0;
  for (int t = 0; t < num_transactions(); ++t) {
    if (Contains(assignment_[t], n)) result |= Bit(t);
  }
  return result;
}

TxSet Allocation::Transactions() const {
  TxSet result = 0;
  for (int t = 0; t < num_transactions(); ++t) {
    if (assignment_[t] != 0) result |= Bit(t);
  }
  return result;
}

NodeSet Allocation::Nodes() const {
  NodeSet result = 0;
  for (NodeSet s : assignment_) result |= s;
  return result;
}

TxIndex MarketInstance::TxIndexOf(const std::string& id) const {
  for (int t = 0; t < num_transactions(); ++t) {
    if (transactions[t].id == id) return t;
  }
  throw MalformedInput("unknown transaction id '" + id + "'");
}

NodeIndex MarketInstance::NodeIndexOf(const std::string& id) const {
  for (int n = 0; n < num_nodes(); ++n) {
    if (nodes[n].id == id) return n;
  }
  throw MalformedInput("unknown node id '" + id + "'");
}

void MarketInstance::Validate() {
  if (num_transactions() > kMaxAgentsPerSide ||
      num_nodes() > kMaxAgentsPerSide) {
    throw MalformedInput("at most 32 transactions and 32 nodes supported");
  }
  std::set<std::string> ids;
  for (const TransactionSpec& t : transactions) {
    if (t.id.empty()) throw MalformedInput("empty transaction id");
    if (!ids.insert(t.id).second) {
      throw MalformedInput("duplicate agent id '" + t.id + "'");
    }
    RequireNonNegative(t.value, "value of transaction '" + t.id + "'");
    if (t.resources) {
      RequireNonNegative(*t.resources,
                         "resources of transaction '" + t.id + "'");
    }
  }
  for (const NodeSpec& n : nodes) {
    if (n.id.empty()) throw MalformedInput("empty node id");
    if (!ids.insert(n.id).second) {
      throw MalformedInput("duplicate agent id '" + n.id + "'");
    }
    ValidateCost(n.cost, *this, n.id);
    if (n.capacity) {
      RequireNonNegative(*n.capacity, "capacity of node '" + n.id + "'");
    }
  }

  const int num_tx = num_transactions();
  const int num_node = num_nodes();
  auto check_tx = [&](TxIndex t) {
    if (t < 0 || t >= num_tx) {
      throw MalformedInput("constraint references unknown transaction");
    }
  };
  auto check_node = [&](NodeIndex n) {
    if (n < 0 || n >= num_node) {
      throw MalformedInput("constraint references unknown node");
    }
  };

  if (auto* spec = std::get_if<ConstraintValidity>(&validity)) {
    for (const Constraint& c : spec->constraints) {
      std::visit(
          Overloaded{
              [&](const NodeCapacityConstraint& x) {
                check_node(x.node);
                const NodeSpec& node = nodes[x.node];
                if (!node.capacity) {
                  throw MalformedInput("node_capacity on node '" + node.id +
                                       "' which declares no capacity");
                }
                for (const TransactionSpec& t : transactions) {
                  if (!t.resources ||
                      t.resources->size() != node.capacity->size()) {
                    throw MalformedInput(
                        "node_capacity on node '" + node.id +
                        "' needs every transaction to carry a resource "
                        "vector of matching length");
                  }
                }
              },
              [&](const MaxTxPerNodeConstraint& x) {
                check_node(x.node);
                if (x.max_transactions < 0) {
                  throw MalformedInput("max_tx_per_node needs k >= 0");
                }
              },
              [&](const RequiredNodeCountConstraint& x) {
                check_tx(x.tx);
                if (x.min_nodes < 0 || x.max_nodes < x.min_nodes) {
                  throw MalformedInput("required_node_count needs "
                                       "0 <= min <= max");
                }
              },
              [&](const MustShareNodeConstraint& x) {
                if (num_tx < 32 && (x.transactions >> num_tx) != 0) {
                  throw MalformedInput(
                      "constraint references unknown transaction");
                }
              },
              [&](const MutualExclusionConstraint& x) {
                check_tx(x.first);
                check_tx(x.second);
              },
              [](const SingleAssignmentConstraint&) {},
          },
          c);
    }
    // Every primitive only restricts allocated transactions, so the empty
    // allocation is always valid under a constraint spec.
  } else {
    auto& list = std::get<ExtensionalValidity>(validity).allocations;
    const NodeSet node_mask =
        num_node >= 32 ? ~NodeSet{0} : (NodeSet{1} << num_node) - 1;
    for (const Allocation& a : list) {
      if (a.num_transactions() != num_tx) {
        throw MalformedInput("extensional allocation has wrong size");
      }
      if ((a.Nodes() & ~node_mask) != 0) {
        throw MalformedInput("extensional allocation references unknown "
                             "node");
      }
    }
    const Allocation empty = EmptyAllocation(*this);
    if (std::find(list.begin(), list.end(), empty) == list.end()) {
      list.push_back(empty);
    }
    const CanonicalOrder order(*this);
    std::sort(list.begin(), list.end(), order);
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

Allocation EmptyAllocation(const MarketInstance& instance) {
  return Allocation(instance.num_transactions());
}

Routing EmptyRouting(const MarketInstance& instance) {
  return Routing{EmptyAllocation(instance),
                 std::vector<Rational>(instance.num_transactions()),
                 std::vector<Rational>(instance.num_nodes())};
}

ReportProfile TruthfulReports(const MarketInstance& instance) {
  ReportProfile reports;
  for (const TransactionSpec& t : instance.transactions) {
    reports.tx_reports.push_back(t.value);
  }
  for (const NodeSpec& n : instance.nodes) {
    reports.node_reports.push_back(n.cost);
  }
  return reports;
}

void CheckRouting(const MarketInstance& instance, const Routing& routing) {
  if (routing.allocation.num_transactions() != instance.num_transactions() ||
      static_cast<int>(routing.tx_payments.size()) !=
          instance.num_transactions() ||
      static_cast<int>(routing.node_payments.size()) !=
          instance.num_nodes()) {
    throw MalformedInput("routing does not match the instance's agents");
  }
  const int num_node = instance.num_nodes();
  const NodeSet node_mask =
      num_node >= 32 ? ~NodeSet{0} : (NodeSet{1} << num_node) - 1;
  if ((routing.allocation.Nodes() & ~node_mask) != 0) {
    throw MalformedInput("routing allocation references unknown node");
  }
  for (const Rational& p : routing.tx_payments) {
    RequireNonNegative(p, "transaction payment");
  }
  for (const Rational& p : routing.node_payments) {
    RequireNonNegative(p, "node payment");
  }
}

void CheckReports(const MarketInstance& instance,
                  const ReportProfile& reports) {
  if (static_cast<int>(reports.tx_reports.size()) !=
          instance.num_transactions() ||
      static_cast<int>(reports.node_reports.size()) != instance.num_nodes()) {
    throw MalformedInput("report profile is not total over the agents");
  }
  for (const Rational& v : reports.tx_reports) {
    RequireNonNegative(v, "reported value");
  }
  for (int n = 0; n < instance.num_nodes(); ++n) {
    ValidateCost(reports.node_reports[n], instance, instance.nodes[n].id);
  }
}

CanonicalOrder::CanonicalOrder(const MarketInstance& instance) {
  tx_by_id_.resize(instance.num_transactions());
  std::iota(tx_by_id_.begin(), tx_by_id_.end(), 0);
  std::sort(tx_by_id_.begin(), tx_by_id_.end(), [&](int a, int b) {
    return instance.transactions[a].id < instance.transactions[b].id;
  });
  node_by_id_.resize(instance.num_nodes());
  std::iota(node_by_id_.begin(), node_by_id_.end(), 0);
  std::sort(node_by_id_.begin(), node_by_id_.end(), [&](int a, int b) {
    return instance.nodes[a].id < instance.nodes[b].id;
  });
}

// Flattened key: for each allocated tx in id order, its rank followed by
// the ranks of its nodes and a -1 terminator. Lexicographic comparison of
// the flat keys matches lexicographic comparison of the pair sequences.
std::vector<int> CanonicalOrder::Key(const Allocation& a) const {
  std::vector<int> key;
  for (int rank = 0; rank < static_cast<int>(tx_by_id_.size()); ++rank) {
    const NodeSet nodes = a.nodes_of(tx_by_id_[rank]);
    if (nodes == 0) continue;
    key.push_back(rank);
    for (int node_rank = 0; node_rank < static_cast<int>(node_by_id_.size());
         ++node_rank) {
      if (Contains(nodes, node_by_id_[node_rank])) key.push_back(node_rank);
    }
    key.push_back(-1);
  }
  return key;
}

bool CanonicalOrder::Less(const Allocation& a, const Allocation& b) const {
  return Key(a) < Key(b);
}

}  // namespace resonance
