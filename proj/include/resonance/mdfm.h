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

// Multi-dimensional fee markets: d-dimensional resource markets cleared by a
// vector of unit base fees, the OPT/INC/FEE/ORA welfare benchmarks, and the
// generators of the worst-case families.
//
// Surplus under fee payments equals welfare for single-node assignments, so
// the allocation classes depend on the price vector only through the cell of
// the price arrangement that contains it: which transactions are willing to
// pay their fee (g(t).p <= v_t) and which node bundles are paid at least
// their cost (G_X.p >= G_X.c_n, where G_X sums g over bundle X). The
// benchmarks maximize over these cells, enumerated exactly with
// Fourier-Motzkin feasibility.

#ifndef RESONANCE_MDFM_H_
#define RESONANCE_MDFM_H_

#include <optional>
#include <string>
#include <vector>

#include "resonance/fourier_motzkin.h"
#include "resonance/model.h"
#include "resonance/rational.h"
#include "resonance/validity.h"

namespace resonance {

inline constexpr int kMaxPatternTransactions = 16;
inline constexpr int kMaxPatternDimensions = 8;

using PriceVector = std::vector<Rational>;

// Transactions carry resource vectors of length `dimensions`; nodes carry
// Zero or LinearResources costs and optional capacities of that length.
// Valid allocations place each transaction on at most one node and respect
// every capacity.
struct ResourceMarket {
  int dimensions = 1;
  std::vector<TransactionSpec> transactions;
  std::vector<NodeSpec> nodes;

  int num_transactions() const {
    return static_cast<int>(transactions.size());
  }
  int num_nodes() const { return static_cast<int>(nodes.size()); }

  // Throws MalformedInput on missing or mis-sized vectors, negative entries
  // or unsupported cost variants.
  void Validate() const;
  MarketInstance ToInstance() const;
};

// g(t) . p.
Rational Basefee(const TransactionSpec& tx, const PriceVector& p);

struct FeePayments {
  std::vector<Rational> tx_payments;
  std::vector<Rational> node_payments;
  Rational margin;
  // Some transaction runs on several nodes, each of which is paid its fee.
  bool multi_assigned = false;
};

FeePayments MdfmPayments(const ResourceMarket& market,
                         const Allocation& allocation, const PriceVector& p);

// Node participation boundary G_X . p >= offset for node `node` holding
// bundle `bundle`.
struct NodeHyperplane {
  NodeIndex node = 0;
  TxSet bundle = 0;
  std::vector<Rational> normal;
  Rational offset;
};

struct WillingnessPattern {
  TxSet willing = 0;
  // One flag per distinct node hyperplane: true if the bundle is paid at
  // least its cost everywhere in the cell.
  std::vector<bool> node_paid;
  PriceVector witness;
  bool contains_origin = false;
  // Some strictly positive price vector lies in the cell.
  bool admits_positive = false;
};

struct PatternSet {
  std::vector<NodeHyperplane> hyperplanes;
  std::vector<WillingnessPattern> patterns;
};

struct MdfmOptions {
  EnumerationOptions enumeration;
  // In-cell sample prices per witness for the d >= 2 fee bound.
  int fee_grid_steps = 4;
};

// Every non-empty cell of the price arrangement over p >= 0, with a witness
// price. Requires |T| <= 16 and d <= 8.
PatternSet FeasiblePatterns(const ResourceMarket& market,
                            const MdfmOptions& options = {});

// V_p, I_p and F_p at an explicit price, as indices into `allocations`.
struct PricedClasses {
  TxSet willing = 0;
  std::vector<int> admissible;
  std::vector<int> inclusion_maximal;
  std::vector<int> fee_maximal;
};

PricedClasses ClassesAt(const ResourceMarket& market,
                        const std::vector<Allocation>& allocations,
                        const PriceVector& p);

struct BenchmarkWitness {
  std::optional<PriceVector> price;
  Allocation allocation;
};

struct BenchmarkResult {
  Rational opt;
  Rational inc;
  Rational fee;
  bool fee_exact = true;
  Rational ora;
  BenchmarkWitness opt_witness;
  BenchmarkWitness inc_witness;
  BenchmarkWitness fee_witness;
  BenchmarkWitness ora_witness;
  int num_patterns = 0;
};

BenchmarkResult ComputeBenchmarks(const ResourceMarket& market,
                                  const MdfmOptions& options = {});

Rational OptBenchmark(const ResourceMarket& market,
                      const MdfmOptions& options = {});
Rational IncBenchmark(const ResourceMarket& market,
                      const MdfmOptions& options = {});
struct FeeValue {
  Rational value;
  bool exact = true;
};
FeeValue FeeBenchmark(const ResourceMarket& market,
                      const MdfmOptions& options = {});
Rational OraBenchmark(const ResourceMarket& market,
                      const MdfmOptions& options = {});

// One zero-cost node with unit capacities; for j < d, t^j uses one unit of
// dimensions j and d and is worth 2/d; t^d uses one unit of everything and
// is worth 1. Requires d >= 3.
ResourceMarket GenThmOfInstance(int d);

// One zero-cost node with capacity k in a single dimension; k transactions
// worth 1/(2(k-1)) and one worth 1/2, all of unit size. Requires k >= 2.
ResourceMarket GenThmFeeInstance(int k);

// One dimension, k transactions of strictly increasing sizes g_j and k
// nodes with capacities g_j. Unit costs and values follow c_1 = 1,
// v_j = c_j g_j + 1, c_{j+1} = v_j / g_j + epsilon.
ResourceMarket GenThmWoInstance(int k,
                                const std::vector<Rational>& resource_values,
                                const Rational& epsilon = Rational(1, 2));

// Two transactions (worth 6 and 4) and two nodes of cost 1 that can each
// run one transaction; the first transaction needs both nodes.
MarketInstance GenFigure1Instance();

struct CollusionCertificate {
  int num_valid_allocations = 0;
  Allocation surplus_max_allocation;
  Rational max_surplus;
  // Supremum of total node payments over budget-balanced routings on the
  // surplus-max allocation that are individually rational for transactions.
  Rational max_node_payments;
  // No such routing pays every used node at least the maximal surplus.
  bool colluding_nodes_unpayable = false;
};

CollusionCertificate CertifyCollusionExample(
    const MarketInstance& instance, const EnumerationOptions& options = {});

}  // namespace resonance

#endif  // RESONANCE_MDFM_H_
