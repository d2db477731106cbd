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

// Plain data types of the two-sided market: transactions, nodes, cost
// functions, allocations, routings, report profiles and validity specs.
//
// Agents are addressed by index inside a MarketInstance. Transaction sets
// and node sets are bitmasks, which caps each side at 32 agents; the
// exhaustive searches built on top cap far below that anyway.

#ifndef RESONANCE_MODEL_H_
#define RESONANCE_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "resonance/rational.h"

namespace resonance {

using TxIndex = int;
using NodeIndex = int;
using TxSet = std::uint32_t;
using NodeSet = std::uint32_t;

inline constexpr int kMaxAgentsPerSide = 32;
inline constexpr int kMaxSubsetTableTransactions = 16;

inline constexpr TxSet Bit(int index) { return TxSet{1} << index; }
inline bool Contains(std::uint32_t set, int index) {
  return (set >> index) & 1u;
}
int PopCount(std::uint32_t set);

struct TransactionSpec {
  std::string id;
  Rational value;
  // g(t); only resource markets and NodeCapacity constraints read it.
  std::optional<std::vector<Rational>> resources;
};

struct ZeroCost {};

// Cost c for every non-empty bundle.
struct ConstantNonemptyCost {
  Rational cost;
};

// Additive cost; costs[t] is the cost of transaction t (0 if never listed).
struct PerTransactionCost {
  std::vector<Rational> costs;
};

// Cost of a bundle is the sum over its transactions of g(t) . unit_costs.
struct LinearResourceCost {
  std::vector<Rational> unit_costs;
};

// costs[mask] is the cost of the bundle whose members are the set bits of
// mask. Total over 2^|T| by construction; costs[0] must be 0.
struct SubsetTableCost {
  std::vector<Rational> costs;
};

using CostFunction = std::variant<ZeroCost, ConstantNonemptyCost,
                                  PerTransactionCost, LinearResourceCost,
                                  SubsetTableCost>;

struct NodeSpec {
  std::string id;
  CostFunction cost;
  std::optional<std::vector<Rational>> capacity;
};

// Maps each transaction to a (possibly empty) set of nodes.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(int num_transactions)
      : assignment_(num_transactions, 0) {}

  int num_transactions() const {
    return static_cast<int>(assignment_.size());
  }
  NodeSet nodes_of(TxIndex t) const { return assignment_[t]; }
  void Assign(TxIndex t, NodeSet nodes) { assignment_[t] = nodes; }

  // alpha^{-1}(n): the transactions node n executes.
  TxSet Inverse(NodeIndex n) const;
  // T(alpha).
  TxSet Transactions() const;
  // N(alpha).
  NodeSet Nodes() const;
  bool IsEmpty() const { return Transactions() == 0; }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<NodeSet> assignment_;
};

// Allocation plus total payment maps (zero for uninvolved agents).
struct Routing {
  Allocation allocation;
  std::vector<Rational> tx_payments;
  std::vector<Rational> node_payments;

  friend bool operator==(const Routing&, const Routing&) = default;
};

// Reported (possibly untruthful) types of every transaction and node.
struct ReportProfile {
  std::vector<Rational> tx_reports;
  std::vector<CostFunction> node_reports;
};

// Validity constraint primitives.
struct NodeCapacityConstraint {
  NodeIndex node;
};
struct MaxTxPerNodeConstraint {
  NodeIndex node;
  int max_transactions;
};
// Node count of an allocated transaction must lie in [min, max]; an
// unallocated transaction always satisfies it.
struct RequiredNodeCountConstraint {
  TxIndex tx;
  int min_nodes;
  int max_nodes;
};
// If every listed transaction is allocated, some node runs all of them.
struct MustShareNodeConstraint {
  TxSet transactions;
};
struct MutualExclusionConstraint {
  TxIndex first;
  TxIndex second;
};
struct SingleAssignmentConstraint {};

using Constraint =
    std::variant<NodeCapacityConstraint, MaxTxPerNodeConstraint,
                 RequiredNodeCountConstraint, MustShareNodeConstraint,
                 MutualExclusionConstraint, SingleAssignmentConstraint>;

struct ExtensionalValidity {
  std::vector<Allocation> allocations;
};
struct ConstraintValidity {
  std::vector<Constraint> constraints;
};
using ValiditySpec = std::variant<ConstraintValidity, ExtensionalValidity>;

struct MarketInstance {
  std::vector<TransactionSpec> transactions;
  std::vector<NodeSpec> nodes;
  ValiditySpec validity = ConstraintValidity{};

  int num_transactions() const {
    return static_cast<int>(transactions.size());
  }
  int num_nodes() const { return static_cast<int>(nodes.size()); }

  // Index lookups; throw MalformedInput on unknown ids.
  TxIndex TxIndexOf(const std::string& id) const;
  NodeIndex NodeIndexOf(const std::string& id) const;

  // Throws MalformedInput unless ids are unique and non-empty, values and
  // costs are non-negative, vectors have consistent lengths, subset tables
  // are total, every constraint references existing agents and the empty
  // allocation is valid. Extensional lists gain the empty allocation.
  void Validate();
};

Allocation EmptyAllocation(const MarketInstance& instance);
Routing EmptyRouting(const MarketInstance& instance);
ReportProfile TruthfulReports(const MarketInstance& instance);

// Checks a routing or report profile against the instance's dimensions.
void CheckRouting(const MarketInstance& instance, const Routing& routing);
void CheckReports(const MarketInstance& instance,
                  const ReportProfile& reports);

// Canonical allocation order: an allocation is the sequence of
// (tx id, sorted node ids) pairs of its allocated transactions, sorted by
// tx id, compared lexicographically. The empty allocation comes first.
// This order is the global tie-breaker.
class CanonicalOrder {
 public:
  explicit CanonicalOrder(const MarketInstance& instance);

  bool Less(const Allocation& a, const Allocation& b) const;
  bool operator()(const Allocation& a, const Allocation& b) const {
    return Less(a, b);
  }

  // Transactions and nodes sorted by id.
  const std::vector<TxIndex>& transactions() const { return tx_by_id_; }
  const std::vector<NodeIndex>& nodes() const { return node_by_id_; }

 private:
  std::vector<int> Key(const Allocation& a) const;

  std::vector<TxIndex> tx_by_id_;
  std::vector<NodeIndex> node_by_id_;
};

}  // namespace resonance

#endif  // RESONANCE_MODEL_H_
