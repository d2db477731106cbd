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

#include "json_io.h"

#include <algorithm>
#include <variant>

#include "overloaded.h"
#include "resonance/errors.h"

namespace resonance::internal {
namespace {

std::vector<std::string> SortedNodeIds(NodeSet nodes,
                                       const MarketInstance& instance) {
  std::vector<std::string> ids;
  for (int n = 0; n < instance.num_nodes(); ++n) {
    if (Contains(nodes, n)) ids.push_back(instance.nodes[n].id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string Child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

std::string Child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

TxIndex LookupTx(const std::string& id, const MarketInstance& instance,
                 const std::string& path) {
  for (int t = 0; t < instance.num_transactions(); ++t) {
    if (instance.transactions[t].id == id) return t;
  }
  Fail(path, "unknown transaction '" + id + "'");
}

NodeIndex LookupNode(const std::string& id, const MarketInstance& instance,
                     const std::string& path) {
  for (int n = 0; n < instance.num_nodes(); ++n) {
    if (instance.nodes[n].id == id) return n;
  }
  Fail(path, "unknown node '" + id + "'");
}

}  // namespace

void Fail(const std::string& path, const std::string& message) {
  throw MalformedInput((path.empty() ? std::string("/") : path) + ": " +
                       message);
}

Json ToJson(const Rational& value) { return value.ToString(); }

Json ToJson(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const Rational& v : values) out.push_back(ToJson(v));
  return out;
}

Json ToJson(const CostFunction& cost, const MarketInstance& instance) {
  return std::visit(
      Overloaded{
          [](const ZeroCost&) { return Json{{"type", "zero"}}; },
          [](const ConstantNonemptyCost& c) {
            return Json{{"type", "constant_nonempty"}, {"cost", ToJson(c.cost)}};
          },
          [&](const PerTransactionCost& c) {
            Json costs = Json::object();
            for (std::size_t t = 0; t < c.costs.size(); ++t) {
              costs[instance.transactions[t].id] = ToJson(c.costs[t]);
            }
            return Json{{"type", "per_transaction"}, {"costs", costs}};
          },
          [](const LinearResourceCost& c) {
            return Json{{"type", "linear_resources"},
                        {"unit_costs", ToJson(c.unit_costs)}};
          },
          [&](const SubsetTableCost& c) {
            Json entries = Json::array();
            for (std::size_t mask = 1; mask < c.costs.size(); ++mask) {
              Json bundle = Json::array();
              for (int t = 0; t < instance.num_transactions(); ++t) {
                if (Contains(static_cast<TxSet>(mask), t)) {
                  bundle.push_back(instance.transactions[t].id);
                }
              }
              entries.push_back(
                  Json{{"bundle", bundle}, {"cost", ToJson(c.costs[mask])}});
            }
            return Json{{"type", "subset_table"}, {"entries", entries}};
          },
      },
      cost);
}

Json ToJson(const Allocation& allocation, const MarketInstance& instance) {
  Json out = Json::object();
  for (int t = 0; t < allocation.num_transactions(); ++t) {
    const NodeSet nodes = allocation.nodes_of(t);
    if (nodes != 0) {
      out[instance.transactions[t].id] = SortedNodeIds(nodes, instance);
    }
  }
  return out;
}

Json ToJson(const Routing& routing, const MarketInstance& instance) {
  Json tx = Json::object();
  for (int t = 0; t < instance.num_transactions(); ++t) {
    tx[instance.transactions[t].id] = ToJson(routing.tx_payments[t]);
  }
  Json node = Json::object();
  for (int n = 0; n < instance.num_nodes(); ++n) {
    node[instance.nodes[n].id] = ToJson(routing.node_payments[n]);
  }
  return Json{{"allocation", ToJson(routing.allocation, instance)},
              {"tx_payments", tx},
              {"node_payments", node}};
}

Json ToJson(const Proposal& proposal, const MarketInstance& instance) {
  Json out = Json{{"broker", proposal.broker}};
  const Json routing = ToJson(proposal.routing, instance);
  for (const auto& [key, value] : routing.items()) out[key] = value;
  return out;
}

Json ToJson(const ReportProfile& reports, const MarketInstance& instance) {
  Json tx = Json::object();
  for (int t = 0; t < instance.num_transactions(); ++t) {
    tx[instance.transactions[t].id] = ToJson(reports.tx_reports[t]);
  }
  Json node = Json::object();
  for (int n = 0; n < instance.num_nodes(); ++n) {
    node[instance.nodes[n].id] = ToJson(reports.node_reports[n], instance);
  }
  return Json{{"transactions", tx}, {"nodes", node}};
}

Rational ReadRational(const Json& j, const std::string& path) {
  try {
    if (j.is_string()) return Rational::Parse(j.get<std::string>());
    if (j.is_number_integer()) {
      return Rational::Parse(j.dump());
    }
    if (j.is_number_float()) {
      Fail(path, "floating-point literal " + j.dump() +
                     " is inexact; write it as a string");
    }
    if (j.is_object()) {
      CheckKeys(j, {"num", "den"}, path);
      auto part = [&](const char* key) {
        const Json& p = Field(j, key, path);
        if (p.is_string()) return p.get<std::string>();
        if (p.is_number_integer()) return p.dump();
        Fail(Child(path, key), "expected an integer");
      };
      return Rational::FromParts(part("num"), part("den"));
    }
  } catch (const MalformedInput& e) {
    const std::string what = e.what();
    if (what.rfind(path + ":", 0) == 0) throw;
    Fail(path, what);
  } catch (const PreconditionViolation& e) {
    Fail(path, e.what());
  }
  Fail(path, "expected a number (string, integer or {num, den})");
}

std::vector<Rational> ReadRationals(const Json& j, const std::string& path) {
  if (!j.is_array()) Fail(path, "expected an array of numbers");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(ReadRational(j[i], Child(path, i)));
  }
  return out;
}

std::string ReadString(const Json& j, const std::string& path) {
  if (!j.is_string()) Fail(path, "expected a string");
  return j.get<std::string>();
}

long ReadInteger(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<long>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t used = 0;
      const long v = std::stol(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  Fail(path, "expected an integer");
}

const Json& Field(const Json& object, const char* key,
                  const std::string& path) {
  if (!object.is_object()) Fail(path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) Fail(path, std::string("missing field '") + key + "'");
  return *it;
}

void CheckKeys(const Json& object, std::initializer_list<const char*> allowed,
               const std::string& path) {
  if (!object.is_object()) Fail(path, "expected an object");
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return it.key() == k; })) {
      Fail(path, "unknown field '" + it.key() + "'");
    }
  }
}

CostFunction ReadCost(const Json& j, const MarketInstance& instance,
                      const std::string& path) {
  const std::string type = ReadString(Field(j, "type", path), path + "/type");
  if (type == "zero") {
    CheckKeys(j, {"type"}, path);
    return ZeroCost{};
  }
  if (type == "constant_nonempty") {
    CheckKeys(j, {"type", "cost"}, path);
    return ConstantNonemptyCost{
        ReadRational(Field(j, "cost", path), path + "/cost")};
  }
  if (type == "per_transaction") {
    CheckKeys(j, {"type", "costs"}, path);
    const Json& costs = Field(j, "costs", path);
    if (!costs.is_object()) Fail(path + "/costs", "expected an object");
    PerTransactionCost out;
    out.costs.assign(instance.num_transactions(), Rational());
    for (auto it = costs.begin(); it != costs.end(); ++it) {
      const std::string p = Child(path + "/costs", it.key());
      out.costs[LookupTx(it.key(), instance, p)] = ReadRational(*it, p);
    }
    return out;
  }
  if (type == "linear_resources") {
    CheckKeys(j, {"type", "unit_costs"}, path);
    return LinearResourceCost{
        ReadRationals(Field(j, "unit_costs", path), path + "/unit_costs")};
  }
  if (type == "subset_table") {
    CheckKeys(j, {"type", "entries"}, path);
    if (instance.num_transactions() > kMaxSubsetTableTransactions) {
      Fail(path, "subset tables support at most " +
                     std::to_string(kMaxSubsetTableTransactions) +
                     " transactions");
    }
    const Json& entries = Field(j, "entries", path);
    if (!entries.is_array()) Fail(path + "/entries", "expected an array");
    const std::size_t size = std::size_t{1} << instance.num_transactions();
    SubsetTableCost out;
    out.costs.assign(size, Rational());
    std::vector<bool> seen(size, false);
    seen[0] = true;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string p = Child(path + "/entries", i);
      CheckKeys(entries[i], {"bundle", "cost"}, p);
      const Json& bundle = Field(entries[i], "bundle", p);
      if (!bundle.is_array()) Fail(p + "/bundle", "expected an array");
      TxSet mask = 0;
      for (std::size_t k = 0; k < bundle.size(); ++k) {
        const std::string bp = Child(p + "/bundle", k);
        mask |= Bit(LookupTx(ReadString(bundle[k], bp), instance, bp));
      }
      const Rational cost = ReadRational(Field(entries[i], "cost", p),
                                         p + "/cost");
      if (mask == 0) {
        if (!cost.IsZero()) Fail(p, "the empty bundle must cost 0");
        continue;
      }
      if (seen[mask]) Fail(p, "bundle listed twice");
      seen[mask] = true;
      out.costs[mask] = cost;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      Fail(path, "subset table must list every non-empty bundle");
    }
    return out;
  }
  Fail(path + "/type", "unknown cost type '" + type + "'");
}

Allocation ReadAllocation(const Json& j, const MarketInstance& instance,
                          const std::string& path) {
  if (!j.is_object()) Fail(path, "expected an object of tx id -> node ids");
  Allocation a(instance.num_transactions());
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string p = Child(path, it.key());
    const TxIndex t = LookupTx(it.key(), instance, p);
    if (!it->is_array()) Fail(p, "expected an array of node ids");
    NodeSet nodes = 0;
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string np = Child(p, k);
      nodes |= Bit(LookupNode(ReadString((*it)[k], np), instance, np));
    }
    a.Assign(t, nodes);
  }
  return a;
}

Proposal ReadProposal(const Json& j, const MarketInstance& instance,
                      const std::string& path) {
  CheckKeys(j, {"broker", "allocation", "tx_payments", "node_payments"},
            path);
  Proposal p;
  p.broker = ReadString(Field(j, "broker", path), path + "/broker");
  p.routing = EmptyRouting(instance);
  if (j.contains("allocation")) {
    p.routing.allocation =
        ReadAllocation(j["allocation"], instance, path + "/allocation");
  }
  if (j.contains("tx_payments")) {
    const Json& pay = j["tx_payments"];
    if (!pay.is_object()) Fail(path + "/tx_payments", "expected an object");
    for (auto it = pay.begin(); it != pay.end(); ++it) {
      const std::string pp = Child(path + "/tx_payments", it.key());
      p.routing.tx_payments[LookupTx(it.key(), instance, pp)] =
          ReadRational(*it, pp);
    }
  }
  if (j.contains("node_payments")) {
    const Json& pay = j["node_payments"];
    if (!pay.is_object()) Fail(path + "/node_payments", "expected an object");
    for (auto it = pay.begin(); it != pay.end(); ++it) {
      const std::string pp = Child(path + "/node_payments", it.key());
      p.routing.node_payments[LookupNode(it.key(), instance, pp)] =
          ReadRational(*it, pp);
    }
  }
  try {
    CheckRouting(instance, p.routing);
  } catch (const MalformedInput& e) {
    Fail(path, e.what());
  }
  return p;
}

}  // namespace resonance::internal
