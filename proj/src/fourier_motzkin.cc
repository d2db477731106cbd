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

#include "resonance/fourier_motzkin.h"

#include <map>
#include <utility>

#include "resonance/errors.h"

namespace resonance {
namespace {

using Constraints = std::vector<LinearConstraint>;

bool Holds(const Rational& lhs, Relation relation, const Rational& bound) {
  return relation == Relation::kLess ? lhs < bound : lhs <= bound;
}

// Scales each constraint so its first nonzero coefficient has magnitude 1,
// drops trivially true constant rows and keeps only the tightest row per
// direction. Returns false if a constant row is violated.
bool Simplify(Constraints& rows) {
  std::map<std::vector<Rational>, std::pair<Relation, Rational>> tightest;
  for (LinearConstraint& row : rows) {
    Rational scale;
    for (const Rational& a : row.coefficients) {
      if (!a.IsZero()) {
        scale = a.Sign() > 0 ? a : -a;
        break;
      }
    }
    if (scale.IsZero()) {
      if (!Holds(Rational(), row.relation, row.bound)) return false;
      continue;
    }
    for (Rational& a : row.coefficients) a /= scale;
    row.bound /= scale;
    auto [it, inserted] = tightest.try_emplace(
        row.coefficients, std::make_pair(row.relation, row.bound));
    if (inserted) continue;
    auto& [relation, bound] = it->second;
    if (row.bound < bound ||
        (row.bound == bound && row.relation == Relation::kLess)) {
      relation = row.relation;
      bound = row.bound;
    }
  }
  rows.clear();
  for (auto& [coefficients, rb] : tightest) {
    rows.push_back({coefficients, rb.first, rb.second});
  }
  return true;
}

Constraints Eliminate(const Constraints& rows, int var) {
  Constraints upper, lower, result;
  for (const LinearConstraint& row : rows) {
    const int sign = row.coefficients[var].Sign();
    if (sign > 0) {
      upper.push_back(row);
    } else if (sign < 0) {
      lower.push_back(row);
    } else {
      result.push_back(row);
    }
  }
  for (const LinearConstraint& u : upper) {
    for (const LinearConstraint& l : lower) {
      const Rational mu = -l.coefficients[var];
      const Rational ml = u.coefficients[var];
      LinearConstraint combined;
      combined.coefficients.resize(u.coefficients.size());
      for (std::size_t i = 0; i < u.coefficients.size(); ++i) {
        combined.coefficients[i] = mu * u.coefficients[i] +
                                   ml * l.coefficients[i];
      }
      combined.coefficients[var] = Rational();
      combined.bound = mu * u.bound + ml * l.bound;
      combined.relation = (u.relation == Relation::kLess ||
                           l.relation == Relation::kLess)
                              ? Relation::kLess
                              : Relation::kLessEqual;
      result.push_back(std::move(combined));
    }
  }
  return result;
}

struct Bound {
  std::optional<Rational> value;
  bool strict = false;
};

// Bounds on x_var implied by `rows` once x_0..x_{var-1} are fixed.
void BoundsOn(const Constraints& rows, int var,
              const std::vector<Rational>& point, Bound& lower,
              Bound& upper) {
  for (const LinearConstraint& row : rows) {
    const Rational& a = row.coefficients[var];
    if (a.IsZero()) continue;
    Rational rest;
    for (int i = 0; i < var; ++i) rest += row.coefficients[i] * point[i];
    const Rational limit = (row.bound - rest) / a;
    const bool strict = row.relation == Relation::kLess;
    if (a.Sign() > 0) {
      if (!upper.value || limit < *upper.value ||
          (limit == *upper.value && strict)) {
        upper.value = limit;
        upper.strict = strict;
      }
    } else {
      if (!lower.value || limit > *lower.value ||
          (limit == *lower.value && strict)) {
        lower.value = limit;
        lower.strict = strict;
      }
    }
  }
}

Rational Choose(const Bound& lower, const Bound& upper) {
  if (lower.value) {
    if (!lower.strict) return *lower.value;
    if (upper.value) return (*lower.value + *upper.value) / Rational(2);
    return *lower.value + Rational(1);
  }
  if (!upper.value) return Rational();
  if (Holds(Rational(), upper.strict ? Relation::kLess : Relation::kLessEqual,
            *upper.value)) {
    return Rational();
  }
  return upper.strict ? *upper.value - Rational(1) : *upper.value;
}

void CheckWidth(const LinearSystem& system, const LinearConstraint& c) {
  if (static_cast<int>(c.coefficients.size()) != system.num_variables()) {
    throw PreconditionViolation("constraint width does not match system");
  }
}

}  // namespace

void LinearSystem::Add(LinearConstraint constraint) {
  CheckWidth(*this, constraint);
  constraints_.push_back(std::move(constraint));
}

void LinearSystem::AddLessEqual(std::vector<Rational> coefficients,
                                Rational bound) {
  Add({std::move(coefficients), Relation::kLessEqual, std::move(bound)});
}

void LinearSystem::AddLess(std::vector<Rational> coefficients,
                           Rational bound) {
  Add({std::move(coefficients), Relation::kLess, std::move(bound)});
}

void LinearSystem::AddGreaterEqual(std::vector<Rational> coefficients,
                                   Rational bound) {
  for (Rational& a : coefficients) a = -a;
  AddLessEqual(std::move(coefficients), -bound);
}

void LinearSystem::AddGreater(std::vector<Rational> coefficients,
                              Rational bound) {
  for (Rational& a : coefficients) a = -a;
  AddLess(std::move(coefficients), -bound);
}

void LinearSystem::AddNonNegativity() {
  for (int i = 0; i < num_variables_; ++i) {
    std::vector<Rational> row(num_variables_);
    row[i] = Rational(-1);
    AddLessEqual(std::move(row), Rational());
  }
}

bool LinearSystem::IsSatisfiedBy(const std::vector<Rational>& point) const {
  for (const LinearConstraint& c : constraints_) {
    Rational lhs;
    for (int i = 0; i < num_variables_; ++i) {
      lhs += c.coefficients[i] * point[i];
    }
    if (!Holds(lhs, c.relation, c.bound)) return false;
  }
  return true;
}

std::optional<std::vector<Rational>> FindFeasiblePoint(
    const LinearSystem& system) {
  const int n = system.num_variables();
  std::vector<Constraints> levels(n + 1);
  levels[n] = system.constraints();
  if (!Simplify(levels[n])) return std::nullopt;
  for (int var = n - 1; var >= 0; --var) {
    levels[var] = Eliminate(levels[var + 1], var);
    if (!Simplify(levels[var])) return std::nullopt;
  }
  std::vector<Rational> point(n);
  for (int var = 0; var < n; ++var) {
    Bound lower, upper;
    BoundsOn(levels[var + 1], var, point, lower, upper);
    point[var] = Choose(lower, upper);
  }
  return point;
}

Supremum Maximize(const LinearSystem& system,
                  const std::vector<Rational>& objective) {
  const int n = system.num_variables();
  if (static_cast<int>(objective.size()) != n) {
    throw PreconditionViolation("objective width does not match system");
  }
  Supremum result;
  if (!IsFeasible(system)) return result;
  result.feasible = true;

  // Append z = objective . x as variable n and project onto it.
  Constraints rows;
  for (const LinearConstraint& c : system.constraints()) {
    LinearConstraint wide = c;
    wide.coefficients.push_back(Rational());
    rows.push_back(std::move(wide));
  }
  std::vector<Rational> link = objective;
  link.push_back(Rational(-1));
  rows.push_back({link, Relation::kLessEqual, Rational()});
  for (Rational& a : link) a = -a;
  rows.push_back({link, Relation::kLessEqual, Rational()});
  Simplify(rows);
  for (int var = n - 1; var >= 0; --var) {
    rows = Eliminate(rows, var);
    Simplify(rows);
  }
  Bound upper;
  for (const LinearConstraint& row : rows) {
    const Rational& a = row.coefficients[n];
    if (a.Sign() <= 0) continue;
    const Rational limit = row.bound / a;
    const bool strict = row.relation == Relation::kLess;
    if (!upper.value || limit < *upper.value ||
        (limit == *upper.value && strict)) {
      upper.value = limit;
      upper.strict = strict;
    }
  }
  if (upper.value) {
    result.value = upper.value;
    result.attained = !upper.strict;
  }
  return result;
}

}  // namespace resonance
