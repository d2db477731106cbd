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

#include "resonance/mdfm.h"

#include <algorithm>
#include <map>
#include <utility>
#include <variant>

#include "resonance/core.h"
#include "resonance/errors.h"
#include "resonance/strategy.h"

namespace resonance {
namespace {

Rational Dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) {
    throw MalformedInput("vector lengths " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()) + " differ");
  }
  Rational total;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

std::vector<Rational> UnitCosts(const ResourceMarket& market, NodeIndex n) {
  if (const auto* linear =
          std::get_if<LinearResourceCost>(&market.nodes[n].cost)) {
    return linear->unit_costs;
  }
  return std::vector<Rational>(market.dimensions);
}

// Sum of g(t) over the bundle.
std::vector<Rational> BundleUsage(const ResourceMarket& market, TxSet bundle) {
  std::vector<Rational> total(market.dimensions);
  for (int t = 0; t < market.num_transactions(); ++t) {
    if (!Contains(bundle, t)) continue;
    const auto& g = *market.transactions[t].resources;
    for (int i = 0; i < market.dimensions; ++i) total[i] += g[i];
  }
  return total;
}

// Valid allocations with the data every cell evaluation needs.
struct Catalog {
  std::vector<Allocation> allocations;
  std::vector<Rational> welfare;
  std::vector<TxSet> transactions;
  // Resource total of T(alpha), only for d == 1.
  std::vector<Rational> size;
  // Hyperplane index of every (node, bundle) an allocation uses.
  std::vector<std::vector<int>> hyperplanes;
};

struct Arrangement {
  std::vector<NodeHyperplane> hyperplanes;
  std::map<std::pair<NodeIndex, TxSet>, int> index;
};

Arrangement BuildHyperplanes(const ResourceMarket& market,
                             const std::vector<Allocation>& allocations) {
  Arrangement arrangement;
  std::map<std::pair<std::vector<Rational>, Rational>, int> seen;
  for (const Allocation& a : allocations) {
    for (int n = 0; n < market.num_nodes(); ++n) {
      const TxSet bundle = a.Inverse(n);
      if (bundle == 0 || arrangement.index.count({n, bundle})) continue;
      std::vector<Rational> normal = BundleUsage(market, bundle);
      Rational offset = Dot(normal, UnitCosts(market, n));
      if (offset.IsZero()) {
        arrangement.index[{n, bundle}] = -1;
        continue;
      }
      Rational scale;
      for (const Rational& x : normal) {
        if (!x.IsZero()) {
          scale = x;
          break;
        }
      }
      for (Rational& x : normal) x /= scale;
      offset /= scale;
      auto [it, inserted] = seen.try_emplace(
          {normal, offset}, static_cast<int>(arrangement.hyperplanes.size()));
      if (inserted) {
        arrangement.hyperplanes.push_back({n, bundle, normal, offset});
      }
      arrangement.index[{n, bundle}] = it->second;
    }
  }
  return arrangement;
}

Catalog BuildCatalog(const ResourceMarket& market,
                     const MarketInstance& instance,
                     const Arrangement& arrangement,
                     std::vector<Allocation> allocations) {
  Catalog catalog;
  const ReportProfile truth = TruthfulReports(instance);
  catalog.allocations = std::move(allocations);
  for (const Allocation& a : catalog.allocations) {
    catalog.welfare.push_back(Welfare(a, truth, instance));
    catalog.transactions.push_back(a.Transactions());
    if (market.dimensions == 1) {
      catalog.size.push_back(BundleUsage(market, a.Transactions())[0]);
    }
    std::vector<int> used;
    for (int n = 0; n < market.num_nodes(); ++n) {
      const TxSet bundle = a.Inverse(n);
      if (bundle == 0) continue;
      const int h = arrangement.index.at({n, bundle});
      if (h >= 0) used.push_back(h);
    }
    catalog.hyperplanes.push_back(std::move(used));
  }
  return catalog;
}

void AddTxSign(LinearSystem& system, const TransactionSpec& tx,
               bool willing) {
  if (willing) {
    system.AddLessEqual(*tx.resources, tx.value);
  } else {
    system.AddGreater(*tx.resources, tx.value);
  }
}

void AddNodeSign(LinearSystem& system, const NodeHyperplane& h, bool paid) {
  if (paid) {
    system.AddGreaterEqual(h.normal, h.offset);
  } else {
    system.AddLess(h.normal, h.offset);
  }
}

LinearSystem CellSystem(const ResourceMarket& market,
                        const std::vector<NodeHyperplane>& hyperplanes,
                        const WillingnessPattern& pattern) {
  LinearSystem system(market.dimensions);
  system.AddNonNegativity();
  for (int t = 0; t < market.num_transactions(); ++t) {
    AddTxSign(system, market.transactions[t], Contains(pattern.willing, t));
  }
  for (std::size_t h = 0; h < hyperplanes.size(); ++h) {
    AddNodeSign(system, hyperplanes[h], pattern.node_paid[h]);
  }
  return system;
}

void AddPositivity(LinearSystem& system) {
  for (int i = 0; i < system.num_variables(); ++i) {
    std::vector<Rational> row(system.num_variables());
    row[i] = Rational(1);
    system.AddGreater(std::move(row), Rational());
  }
}

class PatternSearch {
 public:
  PatternSearch(const ResourceMarket& market,
                const std::vector<NodeHyperplane>& hyperplanes)
      : market_(market),
        hyperplanes_(hyperplanes),
        depth_(market.num_transactions() +
               static_cast<int>(hyperplanes.size())) {}

  std::vector<WillingnessPattern> Run() {
    LinearSystem system(market_.dimensions);
    system.AddNonNegativity();
    current_.node_paid.assign(hyperplanes_.size(), false);
    Recurse(0, system);
    return std::move(patterns_);
  }

 private:
  void Recurse(int level, const LinearSystem& system) {
    if (level == depth_) {
      WillingnessPattern pattern = current_;
      pattern.witness = *FindFeasiblePoint(system);
      pattern.contains_origin =
          system.IsSatisfiedBy(PriceVector(market_.dimensions));
      LinearSystem positive = system;
      AddPositivity(positive);
      pattern.admits_positive = IsFeasible(positive);
      patterns_.push_back(std::move(pattern));
      return;
    }
    for (bool sign : {true, false}) {
      LinearSystem next = system;
      if (level < market_.num_transactions()) {
        AddTxSign(next, market_.transactions[level], sign);
        if (sign) {
          current_.willing |= Bit(level);
        } else {
          current_.willing &= ~Bit(level);
        }
      } else {
        const int h = level - market_.num_transactions();
        AddNodeSign(next, hyperplanes_[h], sign);
        current_.node_paid[h] = sign;
      }
      if (IsFeasible(next)) Recurse(level + 1, next);
    }
  }

  const ResourceMarket& market_;
  const std::vector<NodeHyperplane>& hyperplanes_;
  const int depth_;
  WillingnessPattern current_;
  std::vector<WillingnessPattern> patterns_;
};

bool Admissible(const Catalog& catalog, std::size_t i,
                const WillingnessPattern& pattern) {
  if ((catalog.transactions[i] & ~pattern.willing) != 0) return false;
  for (int h : catalog.hyperplanes[i]) {
    if (!pattern.node_paid[h]) return false;
  }
  return true;
}

// Indices in `members` whose transaction set has no strict superset among
// the members.
std::vector<int> InclusionMaximal(const std::vector<TxSet>& sets,
                                  const std::vector<int>& members) {
  std::vector<int> out;
  for (int i : members) {
    bool maximal = true;
    for (int j : members) {
      if ((sets[j] & sets[i]) == sets[i] && sets[j] != sets[i]) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(i);
  }
  return out;
}

// Index of the minimal welfare member (canonically first on ties).
int ArgMinWelfare(const Catalog& catalog, const std::vector<int>& members) {
  int best = members.front();
  for (int i : members) {
    if (catalog.welfare[i] < catalog.welfare[best]) best = i;
  }
  return best;
}

int ArgMaxWelfare(const Catalog& catalog, const std::vector<int>& members) {
  int best = members.front();
  for (int i : members) {
    if (catalog.welfare[i] > catalog.welfare[best]) best = i;
  }
  return best;
}

void CheckPatternCaps(const ResourceMarket& market) {
  if (market.num_transactions() > kMaxPatternTransactions) {
    throw InstanceTooLarge("pattern enumeration supports at most " +
                           std::to_string(kMaxPatternTransactions) +
                           " transactions");
  }
  if (market.dimensions > kMaxPatternDimensions) {
    throw InstanceTooLarge("pattern enumeration supports at most " +
                           std::to_string(kMaxPatternDimensions) +
                           " dimensions");
  }
}

std::string Numbered(const char* prefix, int i) {
  return prefix + std::to_string(i + 1);
}

}  // namespace

void ResourceMarket::Validate() const {
  if (dimensions < 1) {
    throw MalformedInput("resource market needs at least one dimension");
  }
  auto check_vector = [&](const std::vector<Rational>& v,
                          const std::string& what) {
    if (static_cast<int>(v.size()) != dimensions) {
      throw MalformedInput(what + " must have length " +
                           std::to_string(dimensions));
    }
    for (const Rational& x : v) {
      if (x.Sign() < 0) throw MalformedInput(what + " has a negative entry");
    }
  };
  for (const TransactionSpec& t : transactions) {
    if (!t.resources) {
      throw MalformedInput("transaction '" + t.id + "' lacks resources");
    }
    check_vector(*t.resources, "resources of transaction '" + t.id + "'");
  }
  for (const NodeSpec& n : nodes) {
    if (const auto* linear = std::get_if<LinearResourceCost>(&n.cost)) {
      check_vector(linear->unit_costs, "unit costs of node '" + n.id + "'");
    } else if (!std::holds_alternative<ZeroCost>(n.cost)) {
      throw MalformedInput("node '" + n.id +
                           "' must have a zero or linear_resources cost");
    }
    if (n.capacity) {
      check_vector(*n.capacity, "capacity of node '" + n.id + "'");
    }
  }
}

MarketInstance ResourceMarket::ToInstance() const {
  Validate();
  MarketInstance instance;
  instance.transactions = transactions;
  instance.nodes = nodes;
  ConstraintValidity validity;
  validity.constraints.push_back(SingleAssignmentConstraint{});
  for (int n = 0; n < num_nodes(); ++n) {
    if (nodes[n].capacity) {
      validity.constraints.push_back(NodeCapacityConstraint{n});
    }
  }
  instance.validity = std::move(validity);
  instance.Validate();
  return instance;
}

Rational Basefee(const TransactionSpec& tx, const PriceVector& p) {
  if (!tx.resources) {
    throw MalformedInput("transaction '" + tx.id + "' lacks resources");
  }
  return Dot(*tx.resources, p);
}

FeePayments MdfmPayments(const ResourceMarket& market,
                         const Allocation& allocation, const PriceVector& p) {
  FeePayments out;
  out.tx_payments.assign(market.num_transactions(), Rational());
  out.node_payments.assign(market.num_nodes(), Rational());
  for (int t = 0; t < market.num_transactions(); ++t) {
    const NodeSet nodes = allocation.nodes_of(t);
    if (nodes == 0) continue;
    const Rational fee = Basefee(market.transactions[t], p);
    out.tx_payments[t] = fee;
    if (PopCount(nodes) > 1) out.multi_assigned = true;
    for (int n = 0; n < market.num_nodes(); ++n) {
      if (Contains(nodes, n)) out.node_payments[n] += fee;
    }
  }
  for (const Rational& x : out.tx_payments) out.margin += x;
  for (const Rational& x : out.node_payments) out.margin -= x;
  return out;
}

PatternSet FeasiblePatterns(const ResourceMarket& market,
                            const MdfmOptions& options) {
  CheckPatternCaps(market);
  const MarketInstance instance = market.ToInstance();
  const std::vector<Allocation> allocations =
      EnumerateValid(instance, options.enumeration);
  Arrangement arrangement = BuildHyperplanes(market, allocations);
  PatternSet set;
  set.hyperplanes = std::move(arrangement.hyperplanes);
  set.patterns = PatternSearch(market, set.hyperplanes).Run();
  return set;
}

PricedClasses ClassesAt(const ResourceMarket& market,
                        const std::vector<Allocation>& allocations,
                        const PriceVector& p) {
  PricedClasses classes;
  std::vector<Rational> fee(market.num_transactions());
  for (int t = 0; t < market.num_transactions(); ++t) {
    fee[t] = Basefee(market.transactions[t], p);
    if (fee[t] <= market.transactions[t].value) classes.willing |= Bit(t);
  }
  std::vector<TxSet> sets;
  std::vector<Rational> revenue;
  for (int i = 0; i < static_cast<int>(allocations.size()); ++i) {
    const Allocation& a = allocations[i];
    sets.push_back(a.Transactions());
    Rational total;
    for (int t = 0; t < market.num_transactions(); ++t) {
      if (Contains(sets.back(), t)) total += fee[t];
    }
    revenue.push_back(total);
    if ((sets.back() & ~classes.willing) != 0) continue;
    bool paid = true;
    for (int n = 0; n < market.num_nodes() && paid; ++n) {
      const TxSet bundle = a.Inverse(n);
      if (bundle == 0) continue;
      const std::vector<Rational> usage = BundleUsage(market, bundle);
      paid = Dot(usage, p) >= Dot(usage, UnitCosts(market, n));
    }
    if (paid) classes.admissible.push_back(i);
  }
  classes.inclusion_maximal = InclusionMaximal(sets, classes.admissible);
  Rational best;
  for (int i : classes.admissible) best = Max(best, revenue[i]);
  for (int i : classes.admissible) {
    if (revenue[i] == best) classes.fee_maximal.push_back(i);
  }
  return classes;
}

BenchmarkResult ComputeBenchmarks(const ResourceMarket& market,
                                  const MdfmOptions& options) {
  CheckPatternCaps(market);
  const MarketInstance instance = market.ToInstance();
  std::vector<Allocation> allocations =
      EnumerateValid(instance, options.enumeration);
  Arrangement arrangement = BuildHyperplanes(market, allocations);
  const Catalog catalog =
      BuildCatalog(market, instance, arrangement, std::move(allocations));
  const std::vector<NodeHyperplane>& hyperplanes = arrangement.hyperplanes;
  const std::vector<WillingnessPattern> patterns =
      PatternSearch(market, hyperplanes).Run();

  BenchmarkResult result;
  result.num_patterns = static_cast<int>(patterns.size());
  std::vector<int> everything(catalog.allocations.size());
  for (std::size_t i = 0; i < everything.size(); ++i) {
    everything[i] = static_cast<int>(i);
  }
  const int opt = ArgMaxWelfare(catalog, everything);
  result.opt = catalog.welfare[opt];
  result.opt_witness.allocation = catalog.allocations[opt];

  bool have_inc = false, have_fee = false, have_ora = false;
  auto offer = [&](bool& have, Rational& value, BenchmarkWitness& witness,
                   const Rational& candidate, const PriceVector& price,
                   int allocation) {
    if (have && candidate <= value) return;
    have = true;
    value = candidate;
    witness.price = price;
    witness.allocation = catalog.allocations[allocation];
  };

  for (const WillingnessPattern& pattern : patterns) {
    std::vector<int> admissible;
    for (std::size_t i = 0; i < catalog.allocations.size(); ++i) {
      if (Admissible(catalog, i, pattern)) {
        admissible.push_back(static_cast<int>(i));
      }
    }
    const int ora = ArgMaxWelfare(catalog, admissible);
    offer(have_ora, result.ora, result.ora_witness, catalog.welfare[ora],
          pattern.witness, ora);
    const int inc = ArgMinWelfare(
        catalog, InclusionMaximal(catalog.transactions, admissible));
    offer(have_inc, result.inc, result.inc_witness, catalog.welfare[inc],
          pattern.witness, inc);

    if (market.dimensions != 1) continue;
    if (pattern.contains_origin) {
      const int worst = ArgMinWelfare(catalog, admissible);
      offer(have_fee, result.fee, result.fee_witness, catalog.welfare[worst],
            PriceVector(1), worst);
    }
    if (pattern.admits_positive) {
      Rational largest;
      for (int i : admissible) largest = Max(largest, catalog.size[i]);
      std::vector<int> fee_maximal;
      for (int i : admissible) {
        if (catalog.size[i] == largest) fee_maximal.push_back(i);
      }
      LinearSystem positive = CellSystem(market, hyperplanes, pattern);
      AddPositivity(positive);
      const int worst = ArgMinWelfare(catalog, fee_maximal);
      offer(have_fee, result.fee, result.fee_witness, catalog.welfare[worst],
            *FindFeasiblePoint(positive), worst);
    }
  }

  if (market.dimensions != 1) {
    result.fee_exact = false;
    std::vector<PriceVector> samples;
    const int steps = std::max(1, options.fee_grid_steps);
    for (const WillingnessPattern& pattern : patterns) {
      samples.push_back(pattern.witness);
      if (pattern.admits_positive) {
        LinearSystem positive = CellSystem(market, hyperplanes, pattern);
        AddPositivity(positive);
        samples.push_back(*FindFeasiblePoint(positive));
      }
      for (int j = 1; j < steps; ++j) {
        PriceVector p = pattern.witness;
        for (Rational& x : p) x *= Rational(j, steps);
        samples.push_back(std::move(p));
      }
    }
    for (const PriceVector& p : samples) {
      const PricedClasses classes = ClassesAt(market, catalog.allocations, p);
      const int worst = ArgMinWelfare(catalog, classes.fee_maximal);
      offer(have_fee, result.fee, result.fee_witness, catalog.welfare[worst],
            p, worst);
    }
  }
  return result;
}

Rational OptBenchmark(const ResourceMarket& market,
                      const MdfmOptions& options) {
  const MarketInstance instance = market.ToInstance();
  return WelfareMaxAllocation(instance, TruthfulReports(instance),
                              options.enumeration)
      .welfare;
}

Rational IncBenchmark(const ResourceMarket& market,
                      const MdfmOptions& options) {
  return ComputeBenchmarks(market, options).inc;
}

FeeValue FeeBenchmark(const ResourceMarket& market,
                      const MdfmOptions& options) {
  const BenchmarkResult r = ComputeBenchmarks(market, options);
  return {r.fee, r.fee_exact};
}

Rational OraBenchmark(const ResourceMarket& market,
                      const MdfmOptions& options) {
  return ComputeBenchmarks(market, options).ora;
}

ResourceMarket GenThmOfInstance(int d) {
  if (d < 3) {
    throw PreconditionViolation(
        "the inclusion-maximal family needs d >= 3 (at d = 2 two of its "
        "transactions coincide)");
  }
  ResourceMarket market;
  market.dimensions = d;
  for (int j = 0; j + 1 < d; ++j) {
    std::vector<Rational> g(d);
    g[j] = Rational(1);
    g[d - 1] = Rational(1);
    market.transactions.push_back({Numbered("t", j), Rational(2, d), g});
  }
  market.transactions.push_back(
      {Numbered("t", d - 1), Rational(1), std::vector<Rational>(d, 1)});
  market.nodes.push_back(
      {"n1", ZeroCost{}, std::vector<Rational>(d, Rational(1))});
  return market;
}

ResourceMarket GenThmFeeInstance(int k) {
  if (k < 2) throw PreconditionViolation("the fee family needs k >= 2");
  ResourceMarket market;
  market.dimensions = 1;
  for (int j = 0; j < k; ++j) {
    market.transactions.push_back(
        {Numbered("t", j), Rational(1, 2 * (k - 1)), PriceVector{1}});
  }
  market.transactions.push_back(
      {Numbered("t", k), Rational(1, 2), PriceVector{1}});
  market.nodes.push_back({"n1", ZeroCost{}, PriceVector{Rational(k)}});
  return market;
}

ResourceMarket GenThmWoInstance(int k,
                                const std::vector<Rational>& resource_values,
                                const Rational& epsilon) {
  if (k < 2) throw PreconditionViolation("the oracle family needs k >= 2");
  if (static_cast<int>(resource_values.size()) != k) {
    throw PreconditionViolation("expected " + std::to_string(k) +
                                " resource values");
  }
  if (epsilon.Sign() <= 0) {
    throw PreconditionViolation("epsilon must be positive");
  }
  for (int j = 0; j < k; ++j) {
    if (resource_values[j].Sign() <= 0) {
      throw PreconditionViolation("resource values must be positive");
    }
    if (j > 0 && !(resource_values[j - 1] < resource_values[j])) {
      throw PreconditionViolation(
          "resource values must be strictly increasing");
    }
  }
  ResourceMarket market;
  market.dimensions = 1;
  Rational unit_cost(1);
  for (int j = 0; j < k; ++j) {
    const Rational& g = resource_values[j];
    if (j > 0) {
      unit_cost = market.transactions[j - 1].value / resource_values[j - 1] +
                  epsilon;
    }
    market.transactions.push_back(
        {Numbered("t", j), unit_cost * g + Rational(1), PriceVector{g}});
    market.nodes.push_back({Numbered("n", j),
                            LinearResourceCost{PriceVector{unit_cost}},
                            PriceVector{g}});
  }
  return market;
}

MarketInstance GenFigure1Instance() {
  MarketInstance instance;
  instance.transactions = {{"t1", Rational(6), std::nullopt},
                           {"t2", Rational(4), std::nullopt}};
  instance.nodes = {{"n1", ConstantNonemptyCost{Rational(1)}, std::nullopt},
                    {"n2", ConstantNonemptyCost{Rational(1)}, std::nullopt}};
  instance.validity = ConstraintValidity{{
      RequiredNodeCountConstraint{0, 2, 2},
      RequiredNodeCountConstraint{1, 1, 1},
      MaxTxPerNodeConstraint{0, 1},
      MaxTxPerNodeConstraint{1, 1},
  }};
  instance.Validate();
  return instance;
}

CollusionCertificate CertifyCollusionExample(
    const MarketInstance& instance, const EnumerationOptions& options) {
  CollusionCertificate cert;
  const ReportProfile truth = TruthfulReports(instance);
  const AllocationTable table = BuildAllocationTable(instance, truth, options);
  cert.num_valid_allocations = static_cast<int>(table.allocations.size());
  const WelfareMaximum best = WelfareMaxAllocation(instance, table);
  cert.surplus_max_allocation = best.allocation;
  cert.max_surplus = best.welfare;

  // Variables: pi(t) for every transaction, then phi(n) for every node.
  const int num_tx = instance.num_transactions();
  const int width = num_tx + instance.num_nodes();
  LinearSystem system(width);
  system.AddNonNegativity();
  const TxSet allocated = best.allocation.Transactions();
  std::vector<Rational> margin(width);
  std::vector<Rational> node_total(width);
  for (int t = 0; t < num_tx; ++t) {
    std::vector<Rational> row(width);
    row[t] = Rational(1);
    system.AddLessEqual(row, Contains(allocated, t)
                                 ? instance.transactions[t].value
                                 : Rational());
    margin[t] = Rational(1);
  }
  for (int n = 0; n < instance.num_nodes(); ++n) {
    margin[num_tx + n] = Rational(-1);
    node_total[num_tx + n] = Rational(1);
  }
  system.AddGreaterEqual(margin, Rational());

  const Supremum sup = Maximize(system, node_total);
  if (sup.value) cert.max_node_payments = *sup.value;

  LinearSystem colluding = system;
  const NodeSet used = best.allocation.Nodes();
  for (int n = 0; n < instance.num_nodes(); ++n) {
    if (!Contains(used, n)) continue;
    std::vector<Rational> row(width);
    row[num_tx + n] = Rational(1);
    colluding.AddGreaterEqual(row, best.welfare);
  }
  cert.colluding_nodes_unpayable = !IsFeasible(colluding);
  return cert;
}

}  // namespace resonance
