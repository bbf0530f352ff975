// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <random>

#include "drc/constraint.hpp"
#include "drc/errors.hpp"

namespace drc {
namespace {

using CT = ConstraintType;

TEST(ConstraintEncode, WorkedCombinationCodes) {
  EXPECT_EQ(encode({CT::Asymmetric}), 8);
  EXPECT_EQ(encode({CT::Asymmetric, CT::InEuclidean}), 136);
  EXPECT_EQ(encode({CT::Intransitive, CT::Asymmetric, CT::Reflexive}), 41);
  EXPECT_EQ(encode({CT::Euclidean, CT::Reflexive}), 65);
}

TEST(ConstraintEncode, WeightsArePowersOfTwoInColumnOrder) {
  int expected = 1;
  for (auto t : kAllConstraintTypes) {
    EXPECT_EQ(weight(t), expected) << abbreviation(t);
    expected *= 2;
  }
}

TEST(ConstraintDecode, KnownCodes) {
  EXPECT_EQ(decode(41), (ConstraintSet{CT::Reflexive, CT::Asymmetric, CT::Intransitive}));
  EXPECT_TRUE(decode(0).empty());
  EXPECT_EQ(decode(2047).size(), 11);
  EXPECT_EQ(decode(2047), ConstraintSet::all());
}

TEST(ConstraintDecode, OutOfRange) {
  EXPECT_THROW(decode(-1), OutOfRange);
  EXPECT_THROW(decode(2048), OutOfRange);
}

TEST(ConstraintDecode, RoundTripAllCodes) {
  for (int x = 0; x <= 2047; ++x) EXPECT_EQ(encode(decode(x)), x);
}

TEST(ConstraintEncode, UnionIsBitwiseOr) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> code(0, 2047);
  for (int i = 0; i < 2000; ++i) {
    auto a = decode(code(rng)), b = decode(code(rng));
    ConstraintSet u = a;
    for (auto t : b.members()) u = u.with(t);
    EXPECT_EQ(encode(u), encode(a) | encode(b));
  }
}

TEST(TrivialContradiction, Pairs) {
  EXPECT_TRUE(has_trivial_contradiction({CT::Reflexive, CT::Irreflexive}));
  EXPECT_TRUE(has_trivial_contradiction({CT::Symmetric, CT::Asymmetric, CT::Transitive}));
  EXPECT_FALSE(has_trivial_contradiction({CT::Reflexive, CT::Symmetric, CT::Transitive}));
}

TEST(ParseAbbrev, Grammar) {
  EXPECT_EQ(parse_abbrev("AS,IE"), (ConstraintSet{CT::Asymmetric, CT::InEuclidean}));
  EXPECT_EQ(encode(parse_abbrev("AS,IE")), 136);
  EXPECT_TRUE(parse_abbrev("").empty());
  EXPECT_TRUE(parse_abbrev("  ").empty());
  EXPECT_EQ(parse_abbrev("as, as"), ConstraintSet{CT::Asymmetric});
  EXPECT_EQ(parse_abbrev("r,Ir , c"), (ConstraintSet{CT::Reflexive, CT::Irreflexive, CT::Connected}));
}

TEST(ParseAbbrev, UnknownAbbreviation) {
  EXPECT_THROW(parse_abbrev("AS,XX"), UnknownAbbreviation);
  EXPECT_THROW(parse_abbrev("AS,"), UnknownAbbreviation);
}

TEST(ConstraintSet, DisplayIsAscendingWeight) {
  EXPECT_EQ((ConstraintSet{CT::Connected, CT::Transitive, CT::Asymmetric}).to_string(), "AS,T,C");
  EXPECT_EQ(parse_abbrev(decode(1234).to_string()), decode(1234));
}

}  // namespace
}  // namespace drc
