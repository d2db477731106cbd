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

#ifndef RESONANCE_RATIONAL_H_
#define RESONANCE_RATIONAL_H_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace resonance {

// Exact rational number, always kept in lowest terms with a positive
// denominator. Every money and resource quantity in the library is one of
// these; nothing is ever rounded.
class Rational {
 public:
  Rational() = default;
  Rational(long value);  // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator);

  // Accepts integers ("3", "-2"), decimals ("1.25", "-.5") and fractions
  // ("7/4"). Throws MalformedInput on anything else.
  static Rational Parse(std::string_view text);
  // Builds num/den from two integer strings. den must be non-zero.
  static Rational FromParts(std::string_view numerator,
                            std::string_view denominator);

  // "n" for integers, "n/d" otherwise. Parse(ToString()) == *this.
  std::string ToString() const;
  double ToDouble() const { return value_.get_d(); }

  int Sign() const { return sgn(value_); }
  bool IsZero() const { return Sign() == 0; }
  bool IsInteger() const;
  std::string NumeratorString() const;
  std::string DenominatorString() const;

  // Largest integer <= *this and smallest integer >= *this.
  Rational Floor() const;
  Rational Ceil() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& other);
  Rational& operator-=(const Rational& other);
  Rational& operator*=(const Rational& other);
  Rational& operator/=(const Rational& other);

  friend Rational operator+(Rational lhs, const Rational& rhs) {
    return lhs += rhs;
  }
  friend Rational operator-(Rational lhs, const Rational& rhs) {
    return lhs -= rhs;
  }
  friend Rational operator*(Rational lhs, const Rational& rhs) {
    return lhs *= rhs;
  }
  friend Rational operator/(Rational lhs, const Rational& rhs) {
    return lhs /= rhs;
  }

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return cmp(lhs.value_, rhs.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& lhs,
                                          const Rational& rhs) {
    const int c = cmp(lhs.value_, rhs.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  const mpq_class& raw() const { return value_; }

 private:
  explicit Rational(mpq_class value);

  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& value);

Rational Min(const Rational& a, const Rational& b);
Rational Max(const Rational& a, const Rational& b);

}  // namespace resonance

#endif  // RESONANCE_RATIONAL_H_
