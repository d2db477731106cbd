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

// Fourier-Motzkin elimination over exact rationals with mixed strict and
// non-strict inequalities.

#ifndef RESONANCE_FOURIER_MOTZKIN_H_
#define RESONANCE_FOURIER_MOTZKIN_H_

#include <optional>
#include <vector>

#include "resonance/rational.h"

namespace resonance {

enum class Relation { kLessEqual, kLess };

// coefficients . x  (<= | <)  bound
struct LinearConstraint {
  std::vector<Rational> coefficients;
  Relation relation = Relation::kLessEqual;
  Rational bound;
};

class LinearSystem {
 public:
  explicit LinearSystem(int num_variables) : num_variables_(num_variables) {}

  int num_variables() const { return num_variables_; }
  const std::vector<LinearConstraint>& constraints() const {
    return constraints_;
  }

  void Add(LinearConstraint constraint);
  void AddLessEqual(std::vector<Rational> coefficients, Rational bound);
  void AddLess(std::vector<Rational> coefficients, Rational bound);
  void AddGreaterEqual(std::vector<Rational> coefficients, Rational bound);
  void AddGreater(std::vector<Rational> coefficients, Rational bound);
  // x_i >= 0 for every variable.
  void AddNonNegativity();

  bool IsSatisfiedBy(const std::vector<Rational>& point) const;

 private:
  int num_variables_;
  std::vector<LinearConstraint> constraints_;
};

// A point satisfying every constraint, or nullopt if none exists. Each
// variable is chosen during back-substitution as its tightest non-strict
// lower bound when one exists, so boundary points such as the origin are
// preferred.
std::optional<std::vector<Rational>> FindFeasiblePoint(
    const LinearSystem& system);

inline bool IsFeasible(const LinearSystem& system) {
  return FindFeasiblePoint(system).has_value();
}

struct Supremum {
  bool feasible = false;
  // Unset when the objective is unbounded above.
  std::optional<Rational> value;
  // False when the supremum is only approached through strict constraints.
  bool attained = false;
};

// Supremum of objective . x over the system, by projecting onto the
// objective value.
Supremum Maximize(const LinearSystem& system,
                  const std::vector<Rational>& objective);

}  // namespace resonance

#endif  // RESONANCE_FOURIER_MOTZKIN_H_
