// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "brute_force.hpp"
#include "drc/errors.hpp"
#include "drc/oracle.hpp"

namespace drc {
namespace {

using CT = ConstraintType;
using testing::BruteRelation;
using testing::bf_mask;

constexpr auto kStrong = InEuclideanReading::Strong;
constexpr auto kWeak = InEuclideanReading::Weak;

const AchievableMaskIndex& index4() {
  static const AchievableMaskIndex ix = build_index(4);
  return ix;
}

int code(std::initializer_list<CT> types) { return encode(ConstraintSet(types)); }

TEST(BuildIndex, RelationCounts) {
  EXPECT_EQ(index4().relation_count(), 65535u);
  std::uint64_t total = 0;
  for (const auto& r : index4().extended()) total += r.count;
  EXPECT_EQ(total, 65535u);
  EXPECT_EQ(build_index(2).relation_count(), 15u);
}

// Frozen from the first verified enumeration.
TEST(BuildIndex, AchievableMaskCountAtFour) {
  EXPECT_EQ(index4().masks(kStrong).size(), 28u);
  EXPECT_EQ(index4().masks(kWeak).size(), 30u);
}

TEST(BuildIndex, SizeLimits) {
  EXPECT_THROW(build_index(1), OutOfRange);
  EXPECT_THROW(build_index(6), SizeTooLarge);
  EXPECT_THROW(build_index(7, {.threads = 1, .allow_size_six = true}), SizeTooLarge);
}

TEST(BuildIndex, IndependentOfPartitioning) {
  EXPECT_EQ(build_index(4, {.threads = 1}), build_index(4, {.threads = 3}));
  EXPECT_EQ(build_index(3, {.threads = 2}), build_index(3, {.threads = 1}));
}

// Re-enumerates with the literal brute-force definitions and compares every
// record field.
void expect_matches_brute_force(int n) {
  const auto ix = build_index(n);
  for (auto reading : {kStrong, kWeak}) {
    std::map<int, MaskRecord> expected;
    const std::uint64_t total = std::uint64_t{1} << (n * n);
    for (std::uint64_t id = 1; id < total; ++id) {
      const auto rel = BruteRelation::from_id(n, id);
      auto& r = expected[bf_mask(rel, reading == kWeak).code()];
      if (r.count++ == 0) r.witness = r.minimal = id;
      if (rel.pairs.size() < static_cast<std::size_t>(std::popcount(r.minimal))) r.minimal = id;
      if (id == total - 1)
        r.has_universal_model = true;
      else if (!r.non_universal)
        r.non_universal = id;
    }
    const auto masks = ix.masks(reading);
    ASSERT_EQ(masks.size(), expected.size()) << "n=" << n;
    for (auto m : masks) {
      ASSERT_TRUE(expected.count(m.code())) << m.to_string();
      EXPECT_EQ(ix.record(m, reading), expected[m.code()]) << "n=" << n << " mask " << m.to_string();
    }
  }
}

TEST(BuildIndex, MatchesBruteForceAtThree) { expect_matches_brute_force(3); }
TEST(BuildIndex, MatchesBruteForceAtFour) { expect_matches_brute_force(4); }

TEST(BuildIndex, WitnessesRealiseTheirMasks) {
  const auto& ix = index4();
  for (auto reading : {kStrong, kWeak}) {
    for (auto m : ix.masks(reading)) {
      const auto& r = ix.record(m, reading);
      EXPECT_EQ(property_mask(ix.relation(r.witness), reading), m);
      EXPECT_EQ(property_mask(ix.relation(r.minimal), reading), m);
      if (r.non_universal) {
        const auto rel = ix.relation(*r.non_universal);
        EXPECT_EQ(property_mask(rel, reading), m);
        EXPECT_FALSE(is_universal(rel));
      }
    }
  }
}

TEST(SemanticQueries, Coherence) {
  const auto& ix = index4();
  EXPECT_FALSE(is_coherent_semantic(41, ix));
  EXPECT_TRUE(is_coherent_semantic(8, ix));
  EXPECT_TRUE(is_coherent_semantic(136, ix));
  EXPECT_FALSE(is_coherent_semantic(code({CT::Reflexive, CT::Irreflexive}), ix));
  EXPECT_THROW(is_coherent_semantic(0, ix), OutOfRange);
  EXPECT_THROW(is_coherent_semantic(2048, ix), OutOfRange);
}

TEST(SemanticQueries, Implication) {
  const auto& ix = index4();
  EXPECT_TRUE(implied_constraints(512, ix).contains(CT::Irreflexive));
  EXPECT_TRUE(implied_constraints(24, ix).contains(CT::Acyclic));
  const auto rst = implied_constraints(code({CT::Reflexive, CT::Symmetric, CT::Transitive}), ix);
  EXPECT_TRUE(rst.contains(CT::Equivalence));
  EXPECT_TRUE(rst.contains(CT::Euclidean));
  EXPECT_THROW(implied_constraints(41, ix), IncoherentSet);
}

TEST(SemanticQueries, ImplicationContainsItsPremise) {
  const auto& ix = index4();
  for (auto reading : {kStrong, kWeak})
    for (int x = 1; x <= 2047; ++x)
      if (is_coherent_semantic(x, ix, reading))
        EXPECT_TRUE(implied_constraints(x, ix, reading).contains_all(decode(x))) << x;
}

// Implication straight from Definition-level brute force at n=3, without
// the index.
TEST(SemanticQueries, ImplicationMatchesDirectScanAtThree) {
  const auto ix = build_index(3);
  std::vector<ConstraintSet> models;
  for (std::uint64_t id = 1; id < 512; ++id) models.push_back(bf_mask(BruteRelation::from_id(3, id)));
  for (int x = 1; x <= 2047; ++x) {
    const auto want = decode(x);
    std::optional<ConstraintSet> meet;
    for (auto m : models)
      if (m.contains_all(want)) meet = meet ? (*meet & m) : m;
    ASSERT_EQ(is_coherent_semantic(x, ix), meet.has_value()) << x;
    if (meet) EXPECT_EQ(implied_constraints(x, ix), *meet) << x;
  }
}

TEST(SemanticQueries, Redundancy) {
  const auto& ix = index4();
  EXPECT_TRUE(is_redundant_semantic(CT::Irreflexive, code({CT::Acyclic, CT::Irreflexive}), ix));
  EXPECT_FALSE(is_redundant_semantic(CT::Acyclic, code({CT::Acyclic}), ix));
  EXPECT_TRUE(is_redundant_semantic(CT::Euclidean, code({CT::Symmetric, CT::Transitive, CT::Euclidean}), ix));
  EXPECT_THROW(is_redundant_semantic(CT::Reflexive, code({CT::Acyclic}), ix), NotAMember);
}

TEST(SemanticQueries, Universality) {
  const auto& ix = index4();
  EXPECT_TRUE(is_universal_semantic(code({CT::Connected, CT::Reflexive, CT::Symmetric}), ix));
  EXPECT_TRUE(is_universal_semantic(code({CT::Connected, CT::Equivalence}), ix));
  EXPECT_FALSE(is_universal_semantic(8, ix));
  EXPECT_FALSE(is_universal_semantic(code({CT::Connected, CT::Reflexive}), ix));
  EXPECT_THROW(is_universal_semantic(41, ix), IncoherentSet);
}

TEST(IndexFile, RoundTrip) {
  std::stringstream buf;
  save_index(index4(), buf);
  const auto text = buf.str();
  EXPECT_EQ(text.rfind("drc-achievable-masks 1\nn 4\n", 0), 0u);
  const auto loaded = load_index(buf);
  EXPECT_EQ(loaded, index4());
  std::stringstream again;
  save_index(loaded, again);
  EXPECT_EQ(again.str(), text);
}

TEST(IndexFile, RejectsDamage) {
  std::stringstream buf;
  save_index(build_index(3), buf);
  const auto text = buf.str();

  std::stringstream bad_magic("something-else 1\n");
  EXPECT_THROW(load_index(bad_magic), SchemaMismatch);
  std::stringstream bad_version("drc-achievable-masks 9\nn 3\nrecords 0\n");
  EXPECT_THROW(load_index(bad_version), SchemaMismatch);
  std::stringstream truncated(text.substr(0, text.size() / 2));
  EXPECT_THROW(load_index(truncated), SchemaMismatch);

  // Point the first record's witness at a relation with another mask.
  auto lines = text;
  const auto first = lines.find('\n', lines.find("records")) + 1;
  const auto tab1 = lines.find('\t', first);
  const auto tab2 = lines.find('\t', tab1 + 1);
  lines.replace(tab2 + 1, lines.find('\t', tab2 + 1) - tab2 - 1, "511");
  std::stringstream tampered(lines);
  EXPECT_THROW(load_index(tampered), SchemaMismatch);
}

class Verification : public ::testing::Test {
 protected:
  static const VerificationReport& report() {
    static const VerificationReport r = verify_claims(index4());
    return r;
  }
  static bool holds(const std::string& id, const std::string& reading = "", const std::string& variant = "") {
    const auto* c = report().find(id, reading, variant);
    EXPECT_NE(c, nullptr) << id;
    return c && c->holds_everywhere();
  }
};

TEST_F(Verification, SpecExamples) {
  EXPECT_TRUE(holds("Prop 2(i)"));
  EXPECT_TRUE(holds("Prop 16"));
  EXPECT_TRUE(holds("Cor 1(ii)"));
}

TEST_F(Verification, EveryPropositionHasALine) {
  const auto text = report().to_text();
  for (int p = 1; p <= 20; ++p) {
    const std::string prefix = "\nProp " + std::to_string(p);
    const auto at = text.find(prefix);
    ASSERT_NE(at, std::string::npos) << p;
    const char next = text[at + prefix.size()];
    EXPECT_TRUE(next == ' ' || next == '(') << p;
  }
  for (int c = 1; c <= 19; ++c) EXPECT_NE(text.find("\nCor " + std::to_string(c)), std::string::npos) << c;
}

TEST_F(Verification, KnownCounterexamples) {
  const auto* p2iii = report().find("Prop 2(iii)", "strong");
  ASSERT_NE(p2iii, nullptr);
  ASSERT_FALSE(p2iii->outcomes[0].holds);
  EXPECT_EQ(index4().relation(*p2iii->outcomes[0].counterexample).to_string(), "{(a,b)}");

  const auto* p3 = report().find("Prop 3", "strong");
  ASSERT_NE(p3, nullptr);
  EXPECT_EQ(index4().relation(*p3->outcomes[0].counterexample).to_string(), "{(a,b), (a,c), (b,c)}");
  EXPECT_TRUE(holds("Prop 3", "weak"));
  EXPECT_FALSE(holds("Prop 18", "weak"));
  EXPECT_FALSE(holds("Prop 11(i)"));
}

// Counterexamples re-checked with the brute-force definitions: their mask
// must be the one reported and they must have the fewest pairs among the
// violating relations of their claim.
TEST_F(Verification, CounterexamplesReverify) {
  for (const auto& c : report().claims) {
    for (const auto& o : c.outcomes) {
      EXPECT_EQ(o.holds, !o.counterexample.has_value()) << c.id;
      if (!o.counterexample) continue;
      EXPECT_TRUE(o.reverified) << c.id;
      const auto rel = BruteRelation::from_id(o.n, *o.counterexample);
      EXPECT_EQ(bf_mask(rel, c.reading == "weak"), o.counterexample_mask) << c.id;
      EXPECT_GT(o.violating_relations, 0u);
    }
  }
}

TEST_F(Verification, Deterministic) {
  const auto again = verify_claims(build_index(4, {.threads = 2}), {.threads = 3});
  EXPECT_EQ(again.to_text(), report().to_text());
}

TEST_F(Verification, TensionsAreListed) {
  const auto text = report().to_text();
  EXPECT_NE(text.find("known tensions"), std::string::npos);
  EXPECT_NE(text.find("Prop 3"), std::string::npos);
  EXPECT_NE(text.find("Cor 2(v) declares C & IE incoherent"), std::string::npos);
  EXPECT_NE(text.find("Cor 12 and Cor 14"), std::string::npos);
}

TEST(VerificationSizes, CrossSizeDiscrepanciesAndRejectsDuplicates) {
  const auto ix3 = build_index(3);
  const auto r = verify_claims({&ix3, &index4()});
  EXPECT_EQ(r.sizes, (std::vector<int>{3, 4}));
  EXPECT_FALSE(r.cross_size_discrepancies.empty());
  EXPECT_FALSE(r.embedding.has_value());
  EXPECT_THROW(verify_claims({&index4(), &index4()}), OutOfRange);
}

}  // namespace
}  // namespace drc
