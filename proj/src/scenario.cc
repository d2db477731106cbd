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

#include "resonance/scenario.h"

#include <fstream>
#include <sstream>
#include <variant>

#include "json_io.h"
#include "overloaded.h"
#include "resonance/errors.h"

namespace resonance {
namespace {

using internal::CheckKeys;
using internal::Fail;
using internal::Field;
using internal::Json;
using internal::ReadInteger;
using internal::ReadRational;
using internal::ReadRationals;
using internal::ReadString;
using internal::ToJson;

std::string Child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

const Json& ArrayField(const Json& root, const char* key,
                       const std::string& path) {
  const Json& j = Field(root, key, path);
  if (!j.is_array()) Fail(path + "/" + key, "expected an array");
  return j;
}

std::vector<TransactionSpec> ReadTransactions(const Json& root,
                                              bool need_resources) {
  std::vector<TransactionSpec> out;
  const Json& list = ArrayField(root, "transactions", "");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = Child("/transactions", i);
    CheckKeys(list[i], {"id", "value", "resources"}, p);
    TransactionSpec t;
    t.id = ReadString(Field(list[i], "id", p), p + "/id");
    t.value = ReadRational(Field(list[i], "value", p), p + "/value");
    if (list[i].contains("resources")) {
      t.resources = ReadRationals(list[i]["resources"], p + "/resources");
    } else if (need_resources) {
      Fail(p, "missing field 'resources'");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<NodeSpec> ReadNodes(const Json& root,
                                const MarketInstance& partial) {
  std::vector<NodeSpec> out;
  const Json& list = ArrayField(root, "nodes", "");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = Child("/nodes", i);
    CheckKeys(list[i], {"id", "cost", "capacity"}, p);
    NodeSpec n;
    n.id = ReadString(Field(list[i], "id", p), p + "/id");
    n.cost = list[i].contains("cost")
                 ? internal::ReadCost(list[i]["cost"], partial, p + "/cost")
                 : CostFunction{ZeroCost{}};
    if (list[i].contains("capacity")) {
      n.capacity = ReadRationals(list[i]["capacity"], p + "/capacity");
    }
    out.push_back(std::move(n));
  }
  return out;
}

TxIndex TxAt(const Json& j, const MarketInstance& instance,
             const std::string& path) {
  const std::string id = ReadString(j, path);
  for (int t = 0; t < instance.num_transactions(); ++t) {
    if (instance.transactions[t].id == id) return t;
  }
  Fail(path, "unknown transaction '" + id + "'");
}

NodeIndex NodeAt(const Json& j, const MarketInstance& instance,
                 const std::string& path) {
  const std::string id = ReadString(j, path);
  for (int n = 0; n < instance.num_nodes(); ++n) {
    if (instance.nodes[n].id == id) return n;
  }
  Fail(path, "unknown node '" + id + "'");
}

Constraint ReadConstraint(const Json& j, const MarketInstance& instance,
                          const std::string& p) {
  const std::string type = ReadString(Field(j, "type", p), p + "/type");
  if (type == "node_capacity") {
    CheckKeys(j, {"type", "node"}, p);
    return NodeCapacityConstraint{NodeAt(Field(j, "node", p), instance,
                                         p + "/node")};
  }
  if (type == "max_tx_per_node") {
    CheckKeys(j, {"type", "node", "max"}, p);
    const long max = ReadInteger(Field(j, "max", p), p + "/max");
    if (max < 0) Fail(p + "/max", "must be non-negative");
    return MaxTxPerNodeConstraint{
        NodeAt(Field(j, "node", p), instance, p + "/node"),
        static_cast<int>(max)};
  }
  if (type == "required_node_count") {
    CheckKeys(j, {"type", "tx", "count", "min", "max"}, p);
    const TxIndex t = TxAt(Field(j, "tx", p), instance, p + "/tx");
    long lo, hi;
    if (j.contains("count")) {
      if (j.contains("min") || j.contains("max")) {
        Fail(p, "give either 'count' or 'min'/'max'");
      }
      lo = hi = ReadInteger(j["count"], p + "/count");
    } else {
      lo = ReadInteger(Field(j, "min", p), p + "/min");
      hi = ReadInteger(Field(j, "max", p), p + "/max");
    }
    if (lo < 1 || hi < lo) Fail(p, "node count range must satisfy 1 <= min <= max");
    return RequiredNodeCountConstraint{t, static_cast<int>(lo),
                                       static_cast<int>(hi)};
  }
  if (type == "must_share_node") {
    CheckKeys(j, {"type", "transactions"}, p);
    const Json& list = ArrayField(j, "transactions", p);
    TxSet set = 0;
    for (std::size_t k = 0; k < list.size(); ++k) {
      set |= Bit(TxAt(list[k], instance, Child(p + "/transactions", k)));
    }
    return MustShareNodeConstraint{set};
  }
  if (type == "mutual_exclusion") {
    CheckKeys(j, {"type", "transactions"}, p);
    const Json& list = ArrayField(j, "transactions", p);
    if (list.size() != 2) Fail(p + "/transactions", "expected two ids");
    return MutualExclusionConstraint{
        TxAt(list[0], instance, p + "/transactions/0"),
        TxAt(list[1], instance, p + "/transactions/1")};
  }
  if (type == "single_assignment") {
    CheckKeys(j, {"type"}, p);
    return SingleAssignmentConstraint{};
  }
  Fail(p + "/type", "unknown constraint type '" + type + "'");
}

ValiditySpec ReadValidity(const Json& j, const MarketInstance& instance) {
  const std::string p = "/validity";
  CheckKeys(j, {"constraints", "allocations"}, p);
  if (j.contains("constraints") && j.contains("allocations")) {
    Fail(p, "give either 'constraints' or 'allocations'");
  }
  if (j.contains("allocations")) {
    const Json& list = ArrayField(j, "allocations", p);
    ExtensionalValidity out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.allocations.push_back(internal::ReadAllocation(
          list[i], instance, Child(p + "/allocations", i)));
    }
    return out;
  }
  ConstraintValidity out;
  if (j.contains("constraints")) {
    const Json& list = ArrayField(j, "constraints", p);
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.constraints.push_back(
          ReadConstraint(list[i], instance, Child(p + "/constraints", i)));
    }
  }
  return out;
}

ReportProfile ReadReports(const Json& j, const MarketInstance& instance) {
  const std::string p = "/reports";
  CheckKeys(j, {"transactions", "nodes"}, p);
  ReportProfile out = TruthfulReports(instance);
  if (j.contains("transactions")) {
    const Json& tx = j["transactions"];
    if (!tx.is_object()) Fail(p + "/transactions", "expected an object");
    for (auto it = tx.begin(); it != tx.end(); ++it) {
      const std::string q = p + "/transactions/" + it.key();
      out.tx_reports[TxAt(it.key(), instance, q)] = ReadRational(*it, q);
    }
  }
  if (j.contains("nodes")) {
    const Json& nodes = j["nodes"];
    if (!nodes.is_object()) Fail(p + "/nodes", "expected an object");
    for (auto it = nodes.begin(); it != nodes.end(); ++it) {
      const std::string q = p + "/nodes/" + it.key();
      out.node_reports[NodeAt(it.key(), instance, q)] =
          internal::ReadCost(*it, instance, q);
    }
  }
  return out;
}

Json ConstraintToJson(const Constraint& c, const MarketInstance& instance) {
  const auto tx = [&](TxIndex t) { return instance.transactions[t].id; };
  const auto node = [&](NodeIndex n) { return instance.nodes[n].id; };
  return std::visit(
      internal::Overloaded{
          [&](const NodeCapacityConstraint& x) {
            return Json{{"type", "node_capacity"}, {"node", node(x.node)}};
          },
          [&](const MaxTxPerNodeConstraint& x) {
            return Json{{"type", "max_tx_per_node"},
                        {"node", node(x.node)},
                        {"max", x.max_transactions}};
          },
          [&](const RequiredNodeCountConstraint& x) {
            if (x.min_nodes == x.max_nodes) {
              return Json{{"type", "required_node_count"},
                          {"tx", tx(x.tx)},
                          {"count", x.min_nodes}};
            }
            return Json{{"type", "required_node_count"},
                        {"tx", tx(x.tx)},
                        {"min", x.min_nodes},
                        {"max", x.max_nodes}};
          },
          [&](const MustShareNodeConstraint& x) {
            Json ids = Json::array();
            for (int t = 0; t < instance.num_transactions(); ++t) {
              if (Contains(x.transactions, t)) ids.push_back(tx(t));
            }
            return Json{{"type", "must_share_node"}, {"transactions", ids}};
          },
          [&](const MutualExclusionConstraint& x) {
            return Json{{"type", "mutual_exclusion"},
                        {"transactions", {tx(x.first), tx(x.second)}}};
          },
          [&](const SingleAssignmentConstraint&) {
            return Json{{"type", "single_assignment"}};
          },
      },
      c);
}

std::uint64_t ToUnsigned(long v, const std::string& path) {
  if (v < 0) Fail(path, "must be non-negative");
  return static_cast<std::uint64_t>(v);
}

void ReadParams(const Json& j, RunParams& params) {
  const std::string p = "/params";
  CheckKeys(j,
            {"quantum", "enum_cap", "seed", "others_cap", "max_iters",
             "node_bundle_cap", "fee_grid_steps"},
            p);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string q = p + "/" + it.key();
    if (it.key() == "quantum") {
      params.quantum = ReadRational(*it, q);
      if (params.quantum.Sign() <= 0) Fail(q, "must be positive");
    } else {
      const long v = ReadInteger(*it, q);
      if (it.key() == "enum_cap") {
        params.enum_cap = ToUnsigned(v, q);
      } else if (it.key() == "seed") {
        params.seed = ToUnsigned(v, q);
      } else if (it.key() == "others_cap") {
        params.others_cap = static_cast<std::int64_t>(ToUnsigned(v, q));
      } else if (it.key() == "max_iters") {
        params.max_iters = static_cast<int>(ToUnsigned(v, q));
      } else if (it.key() == "node_bundle_cap") {
        params.node_bundle_cap = static_cast<int>(ToUnsigned(v, q));
      } else {
        params.fee_grid_steps = static_cast<int>(ToUnsigned(v, q));
      }
    }
  }
}

Json TransactionsToJson(const std::vector<TransactionSpec>& txs) {
  Json out = Json::array();
  for (const TransactionSpec& t : txs) {
    Json j = {{"id", t.id}, {"value", ToJson(t.value)}};
    if (t.resources) j["resources"] = ToJson(*t.resources);
    out.push_back(std::move(j));
  }
  return out;
}

Json NodesToJson(const std::vector<NodeSpec>& nodes,
                 const MarketInstance& instance) {
  Json out = Json::array();
  for (const NodeSpec& n : nodes) {
    Json j = {{"id", n.id}, {"cost", ToJson(n.cost, instance)}};
    if (n.capacity) j["capacity"] = ToJson(*n.capacity);
    out.push_back(std::move(j));
  }
  return out;
}

void Rethrow(const std::string& path, const std::exception& e) {
  Fail(path, e.what());
}

}  // namespace

ReportProfile Scenario::EffectiveReports() const {
  return reports ? *reports : TruthfulReports(instance);
}

std::vector<std::string> Scenario::EffectiveBrokerOrder() const {
  if (!broker_order.empty()) return broker_order;
  std::vector<std::string> order;
  for (const Proposal& p : proposals) order.push_back(p.broker);
  return order;
}

Scenario ParseScenario(std::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInput(std::string("invalid JSON: ") + e.what());
  }
  CheckKeys(root,
            {"kind", "dimensions", "transactions", "nodes", "validity",
             "proposals", "reports", "broker_order", "params"},
            "");
  Scenario s;
  const std::string kind = ReadString(Field(root, "kind", ""), "/kind");
  if (kind == "market") {
    s.kind = ScenarioKind::kMarket;
    if (root.contains("dimensions")) {
      Fail("/dimensions", "only resource markets have dimensions");
    }
    s.instance.transactions = ReadTransactions(root, false);
    s.instance.nodes = ReadNodes(root, s.instance);
    if (root.contains("validity")) {
      s.instance.validity = ReadValidity(root["validity"], s.instance);
    }
    try {
      s.instance.Validate();
    } catch (const MalformedInput& e) {
      Rethrow("", e);
    }
  } else if (kind == "resource_market") {
    s.kind = ScenarioKind::kResourceMarket;
    if (root.contains("validity")) {
      Fail("/validity",
           "resource markets imply single assignment and node capacities");
    }
    ResourceMarket market;
    const long d = ReadInteger(Field(root, "dimensions", ""), "/dimensions");
    if (d < 1 || d > 64) Fail("/dimensions", "must lie in [1, 64]");
    market.dimensions = static_cast<int>(d);
    market.transactions = ReadTransactions(root, true);
    MarketInstance partial;
    partial.transactions = market.transactions;
    market.nodes = ReadNodes(root, partial);
    try {
      s.instance = market.ToInstance();
    } catch (const MalformedInput& e) {
      Rethrow("", e);
    }
    s.resource_market = std::move(market);
  } else {
    Fail("/kind", "expected 'market' or 'resource_market', got '" + kind +
                      "'");
  }

  if (root.contains("proposals")) {
    const Json& list = ArrayField(root, "proposals", "");
    for (std::size_t i = 0; i < list.size(); ++i) {
      s.proposals.push_back(
          internal::ReadProposal(list[i], s.instance, Child("/proposals", i)));
    }
  }
  if (root.contains("reports")) {
    s.reports = ReadReports(root["reports"], s.instance);
  }
  if (root.contains("broker_order")) {
    const Json& list = ArrayField(root, "broker_order", "");
    for (std::size_t i = 0; i < list.size(); ++i) {
      s.broker_order.push_back(
          ReadString(list[i], Child("/broker_order", i)));
    }
  }
  if (root.contains("params")) ReadParams(root["params"], s.params);
  return s;
}

Scenario LoadScenarioFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str());
}

std::string SerializeScenario(const Scenario& s) {
  Json root;
  if (s.kind == ScenarioKind::kResourceMarket) {
    const ResourceMarket& m = *s.resource_market;
    root["kind"] = "resource_market";
    root["dimensions"] = m.dimensions;
    root["transactions"] = TransactionsToJson(m.transactions);
    root["nodes"] = NodesToJson(m.nodes, s.instance);
  } else {
    root["kind"] = "market";
    root["transactions"] = TransactionsToJson(s.instance.transactions);
    root["nodes"] = NodesToJson(s.instance.nodes, s.instance);
    if (const auto* list =
            std::get_if<ExtensionalValidity>(&s.instance.validity)) {
      Json allocations = Json::array();
      for (const Allocation& a : list->allocations) {
        allocations.push_back(ToJson(a, s.instance));
      }
      root["validity"] = {{"allocations", allocations}};
    } else {
      Json constraints = Json::array();
      for (const Constraint& c :
           std::get<ConstraintValidity>(s.instance.validity).constraints) {
        constraints.push_back(ConstraintToJson(c, s.instance));
      }
      root["validity"] = {{"constraints", constraints}};
    }
  }
  if (!s.proposals.empty()) {
    Json list = Json::array();
    for (const Proposal& p : s.proposals) list.push_back(ToJson(p, s.instance));
    root["proposals"] = list;
  }
  if (s.reports) root["reports"] = ToJson(*s.reports, s.instance);
  if (!s.broker_order.empty()) root["broker_order"] = s.broker_order;
  const RunParams defaults;
  Json params = Json::object();
  if (!(s.params.quantum == defaults.quantum)) {
    params["quantum"] = ToJson(s.params.quantum);
  }
  if (s.params.enum_cap != defaults.enum_cap) {
    params["enum_cap"] = s.params.enum_cap;
  }
  if (s.params.seed) params["seed"] = *s.params.seed;
  if (s.params.others_cap != defaults.others_cap) {
    params["others_cap"] = s.params.others_cap;
  }
  if (s.params.max_iters != defaults.max_iters) {
    params["max_iters"] = s.params.max_iters;
  }
  if (s.params.node_bundle_cap != defaults.node_bundle_cap) {
    params["node_bundle_cap"] = s.params.node_bundle_cap;
  }
  if (s.params.fee_grid_steps != defaults.fee_grid_steps) {
    params["fee_grid_steps"] = s.params.fee_grid_steps;
  }
  if (!params.empty()) root["params"] = params;
  return root.dump(2) + "\n";
}

Scenario MarketScenario(MarketInstance instance) {
  Scenario s;
  s.kind = ScenarioKind::kMarket;
  instance.Validate();
  s.instance = std::move(instance);
  return s;
}

Scenario ResourceMarketScenario(ResourceMarket market) {
  Scenario s;
  s.kind = ScenarioKind::kResourceMarket;
  s.instance = market.ToInstance();
  s.resource_market = std::move(market);
  return s;
}

void SetRunParam(RunParams& params, std::string_view name,
                 std::string_view value) {
  Json patch = Json::object();
  patch[std::string(name)] = std::string(value);
  RunParams updated = params;
  ReadParams(patch, updated);
  params = updated;
}

}  // namespace resonance
