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

#include "resonance/rational.h"

#include <cctype>
#include <utility>

#include "resonance/errors.h"

namespace resonance {
namespace {

bool IsDigits(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Optional sign followed by at least one digit.
bool IsSignedInteger(std::string_view text) {
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    text.remove_prefix(1);
  }
  return IsDigits(text);
}

mpz_class ParseInteger(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  return mpz_class(std::string(text), 10);
}

[[noreturn]] void Malformed(std::string_view text) {
  throw MalformedInput("malformed number '" + std::string(text) + "'");
}

}  // namespace

Rational::Rational(long value) : value_(value) {}

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw MalformedInput("zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
  value_.canonicalize();
}

Rational Rational::Parse(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return FromParts(text.substr(0, slash), text.substr(slash + 1));
  }
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto dot = body.find('.');
  std::string_view whole = body.substr(0, dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view() : body.substr(dot + 1);
  if (dot != std::string_view::npos) {
    if (whole.empty() && frac.empty()) Malformed(text);
    if (!whole.empty() && !IsDigits(whole)) Malformed(text);
    if (!frac.empty() && !IsDigits(frac)) Malformed(text);
  } else if (!IsDigits(whole)) {
    Malformed(text);
  }
  mpz_class numerator = whole.empty() ? mpz_class(0) : ParseInteger(whole);
  mpz_class denominator = 1;
  for (char c : frac) {
    numerator = numerator * 10 + (c - '0');
    denominator *= 10;
  }
  if (negative) numerator = -numerator;
  return Rational(mpq_class(numerator, denominator));
}

Rational Rational::FromParts(std::string_view numerator,
                             std::string_view denominator) {
  if (!IsSignedInteger(numerator) || !IsSignedInteger(denominator)) {
    Malformed(std::string(numerator) + "/" + std::string(denominator));
  }
  mpz_class den = ParseInteger(denominator);
  if (den == 0) throw MalformedInput("zero denominator");
  return Rational(mpq_class(ParseInteger(numerator), den));
}

std::string Rational::ToString() const {
  return value_.get_str(10);
}

bool Rational::IsInteger() const { return value_.get_den() == 1; }

std::string Rational::NumeratorString() const {
  return value_.get_num().get_str(10);
}

std::string Rational::DenominatorString() const {
  return value_.get_den().get_str(10);
}

Rational Rational::Floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return Rational(mpq_class(q));
}

Rational Rational::Ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return Rational(mpq_class(q));
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

Rational& Rational::operator+=(const Rational& other) {
  value_ += other.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& other) {
  value_ -= other.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& other) {
  value_ *= other.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.IsZero()) throw PreconditionViolation("division by zero");
  value_ /= other.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) {
  return os << value.ToString();
}

Rational Min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational Max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace resonance
