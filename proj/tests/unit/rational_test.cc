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

#include <gtest/gtest.h>

#include "resonance/errors.h"

namespace resonance {
namespace {

TEST(RationalTest, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(Rational::Parse("7"), Rational(7));
  EXPECT_EQ(Rational::Parse("-3/6"), Rational(-1, 2));
  EXPECT_EQ(Rational::Parse("0.25"), Rational(1, 4));
  EXPECT_EQ(Rational::Parse("-1.5"), Rational(-3, 2));
}

TEST(RationalTest, RejectsMalformedText) {
  EXPECT_THROW(Rational::Parse("1.0.0"), MalformedInput);
  EXPECT_THROW(Rational::Parse(""), MalformedInput);
  EXPECT_THROW(Rational::Parse("1/0"), MalformedInput);
  EXPECT_THROW(Rational::Parse("abc"), MalformedInput);
}

TEST(RationalTest, CanonicalStringForm) {
  EXPECT_EQ(Rational(6, 4).ToString(), "3/2");
  EXPECT_EQ(Rational(4, 2).ToString(), "2");
  EXPECT_EQ(Rational(-2, 6).ToString(), "-1/3");
  EXPECT_EQ(Rational().ToString(), "0");
}

TEST(RationalTest, FromPartsNormalizes) {
  EXPECT_EQ(Rational::FromParts("10", "-4"), Rational(-5, 2));
  EXPECT_THROW(Rational::FromParts("1", "0"), MalformedInput);
}

TEST(RationalTest, ExactArithmetic) {
  const Rational third(1, 3);
  EXPECT_EQ(third + third + third, Rational(1));
  EXPECT_EQ(Rational(3, 4) * Rational(2, 3), Rational(1, 2));
  EXPECT_EQ(Rational(1) / Rational(3) - third, Rational(0));
  EXPECT_EQ(-Rational(2, 5), Rational(-2, 5));
}

TEST(RationalTest, FloorAndCeil) {
  EXPECT_EQ(Rational(7, 2).Floor(), Rational(3));
  EXPECT_EQ(Rational(7, 2).Ceil(), Rational(4));
  EXPECT_EQ(Rational(-7, 2).Floor(), Rational(-4));
  EXPECT_EQ(Rational(-7, 2).Ceil(), Rational(-3));
  EXPECT_EQ(Rational(5).Floor(), Rational(5));
}

TEST(RationalTest, OrderingAndHelpers) {
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Min(Rational(2), Rational(1, 2)), Rational(1, 2));
  EXPECT_EQ(Max(Rational(2), Rational(1, 2)), Rational(2));
  EXPECT_EQ(Rational(-3).Sign(), -1);
  EXPECT_TRUE(Rational(0, 5).IsZero());
  EXPECT_TRUE(Rational(4, 2).IsInteger());
}

}  // namespace
}  // namespace resonance
