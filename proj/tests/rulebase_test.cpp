// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "drc/errors.hpp"
#include "drc/oracle.hpp"
#include "drc/rulebase.hpp"

namespace drc {
namespace {

using CT = ConstraintType;

int code(std::initializer_list<CT> types) { return encode(ConstraintSet(types)); }

const CatalogTables& tables() {
  static const CatalogTables t = generate_rulebase_tables();
  return t;
}

const Catalog& catalog() {
  static const Catalog c(tables(), "rulebase");
  return c;
}

const AchievableMaskIndex& index4() {
  static const AchievableMaskIndex ix = build_index(4);
  return ix;
}

TEST(CoherenceTable, OneRowPerNonTrivialCombination) {
  const auto& rows = tables().coherencies;
  ASSERT_EQ(rows.size(), 1151u);
  int expected = 0;
  for (int x = 1; x <= kMaxCombination; ++x)
    if (!has_trivial_contradiction(decode(x))) ++expected;
  EXPECT_EQ(static_cast<int>(rows.size()), expected);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].flags, decode(rows[i].x));
    EXPECT_FALSE(has_trivial_contradiction(rows[i].flags));
    if (i > 0) EXPECT_LT(rows[i - 1].x, rows[i].x);
    if (!rows[i].coherent) EXPECT_EQ(rows[i].notes, *incoherence_rule(rows[i].flags));
  }
}

TEST(CoherenceTable, Examples) {
  const auto r41 = catalog().lookup(41);
  ASSERT_FALSE(r41.missing());
  EXPECT_FALSE(r41.record->coherent);
  EXPECT_EQ(r41.record->notes, "A.5.2.2 (i)");
  EXPECT_EQ(r41.record->flags, ConstraintSet({CT::Reflexive, CT::Asymmetric, CT::Intransitive}));

  const auto r9 = catalog().lookup(9);
  EXPECT_FALSE(r9.record->coherent);
  EXPECT_EQ(r9.record->notes, "A.5.2.2 (i)");

  const auto r2 = catalog().lookup(2);
  EXPECT_TRUE(r2.record->coherent);
  EXPECT_EQ(r2.record->notes, "");
  EXPECT_TRUE(r2.redundancies.empty());
}

TEST(CoherenceTable, TrivialCombinationsAreNotStored) {
  EXPECT_TRUE(catalog().lookup(3).missing());
  EXPECT_TRUE(catalog().lookup(code({CT::Symmetric, CT::Asymmetric})).missing());
  EXPECT_THROW(catalog().lookup(0), OutOfRange);
  EXPECT_THROW(catalog().lookup(2048), OutOfRange);
}

TEST(CoherenceTable, CoherentSetsAreDownwardClosed) {
  std::map<int, bool> coherent;
  for (const auto& r : tables().coherencies) coherent[r.x] = r.coherent;
  for (const auto& [x, ok] : coherent) {
    if (!ok) continue;
    for (int y = (x - 1) & x; y > 0; y = (y - 1) & x) {
      ASSERT_TRUE(coherent.count(y));
      EXPECT_TRUE(coherent[y]) << "x=" << x << " y=" << y;
    }
  }
}

TEST(Closure, IrreflexiveTransitiveNeedsTwoPasses) {
  const auto trace = closure({CT::Irreflexive, CT::Transitive});
  ASSERT_NE(trace.primary(CT::Asymmetric), nullptr);
  ASSERT_NE(trace.primary(CT::Acyclic), nullptr);
  EXPECT_EQ(trace.primary(CT::Asymmetric)->rule, "A.5.2.8 (ii)");
  EXPECT_EQ(trace.primary(CT::Asymmetric)->pass, 1);
  EXPECT_EQ(trace.primary(CT::Acyclic)->rule, "A.5.2.9");
  EXPECT_EQ(trace.primary(CT::Acyclic)->pass, 2);
  EXPECT_GE(trace.passes, 2);
  EXPECT_TRUE(trace.result.contains_all({CT::Irreflexive, CT::Transitive, CT::Asymmetric, CT::Acyclic}));
}

TEST(Closure, PropertiesOverAllCoherentCombinations) {
  for (const auto& rec : tables().coherencies) {
    if (!rec.coherent) continue;
    const auto trace = closure(rec.flags);
    EXPECT_TRUE(trace.result.contains_all(rec.flags));
    EXPECT_LE(trace.passes, 11);
    EXPECT_FALSE(incoherence_rule(trace.result).has_value()) << rec.x;
    EXPECT_EQ(closure(trace.result).result, trace.result) << rec.x;
    for (const auto& d : trace.derivations) {
      EXPECT_FALSE(rec.flags.contains(d.type));
      EXPECT_GE(d.pass, 1);
    }
  }
  EXPECT_LE(generate_redundancy_tables(tables().coherencies).max_passes, 11);
}

TEST(Closure, GuardListsBlockedDerivations) {
  // {A, E} matches A.5.2.11 (ii); {A, IE, E} is stopped only by A.5.2.2 (iii),
  // so start from acyclic and transitive, where A.5.2.3 (i) offers IE.
  const auto trace = closure({CT::Acyclic, CT::Transitive});
  EXPECT_FALSE(trace.result.contains(CT::InEuclidean));
  ASSERT_FALSE(trace.blocked.empty());
  EXPECT_EQ(trace.blocked.front().type, CT::InEuclidean);
  EXPECT_EQ(trace.blocked.front().blocked_by, "A.5.2.2 (iv)");
}

TEST(RedundancyTable, Examples) {
  const auto r10 = catalog().lookup(10);
  ASSERT_NE(r10.row_for(CT::Irreflexive), nullptr);
  EXPECT_EQ(r10.row_for(CT::Irreflexive)->notes, "A.5.2.2 (vii)");

  const auto r65 = catalog().lookup(65);
  ASSERT_EQ(r65.redundancies.size(), 3u);
  EXPECT_EQ(r65.redundancies[0].token(), "S");
  EXPECT_EQ(r65.redundancies[0].notes, "A.5.2.3 (ii) 1");
  EXPECT_EQ(r65.redundancies[1].token(), "T");
  EXPECT_EQ(r65.redundancies[1].notes, "A.5.2.3 (ii) 1");
  EXPECT_EQ(r65.redundancies[2].token(), "Q");
  EXPECT_EQ(r65.redundancies[2].notes, "A.5.2.3 (ii) 2");
  EXPECT_TRUE(std::any_of(r65.additional.begin(), r65.additional.end(),
                          [](const auto& r) { return r.notes == "A.5.2.3 (ii) 0"; }));
  EXPECT_EQ(r65.record->notes, "A.5.2.3 (ii) 1");
}

TEST(RedundancyTable, MemberRowsComeFromTheRemainingSet) {
  // {AS, T, A}: A follows from AS and T.
  const auto r = catalog().lookup(code({CT::Asymmetric, CT::Transitive, CT::Acyclic}));
  ASSERT_NE(r.row_for(CT::Acyclic), nullptr);
  EXPECT_EQ(r.row_for(CT::Acyclic)->notes, "A.5.2.9");
  EXPECT_EQ(r.row_for(CT::Transitive), nullptr);
}

TEST(RedundancyTable, UniversalRow) {
  const auto r = catalog().lookup(code({CT::Connected, CT::Reflexive, CT::Symmetric}));
  ASSERT_NE(r.universal_row(), nullptr);
  EXPECT_EQ(r.universal_row()->notes, "A.5.2.19");
  EXPECT_EQ(r.universal_row()->token(), "Universal");
  EXPECT_EQ(catalog().lookup(code({CT::Connected, CT::Reflexive})).universal_row(), nullptr);
  EXPECT_NE(catalog().lookup(code({CT::Connected, CT::Equivalence})).universal_row(), nullptr);
}

TEST(RedundancyTable, RowInvariants) {
  std::map<int, bool> coherent;
  for (const auto& r : tables().coherencies) coherent[r.x] = r.coherent;
  std::set<std::pair<int, std::string>> primary_keys;
  std::set<std::tuple<int, std::string, std::string>> all;
  for (const auto& r : tables().redundancies) {
    EXPECT_TRUE(coherent.at(r.x));
    EXPECT_TRUE(primary_keys.emplace(r.x, r.token()).second) << r.x << " " << r.token();
    EXPECT_TRUE(all.emplace(r.x, r.token(), r.notes).second);
    const auto* c = catalog().corollary(r.notes);
    ASSERT_NE(c, nullptr) << r.notes;
    EXPECT_EQ(c->kind, r.universal() ? CorollaryKind::Universality : CorollaryKind::Redundancy);
  }
  for (const auto& r : tables().additional) {
    EXPECT_TRUE(primary_keys.count({r.x, r.token()})) << r.x << " " << r.token();
    EXPECT_TRUE(all.emplace(r.x, r.token(), r.notes).second);
    ASSERT_NE(catalog().corollary(r.notes), nullptr);
  }
  EXPECT_TRUE(std::is_sorted(tables().redundancies.begin(), tables().redundancies.end(), redundancy_less));
  EXPECT_TRUE(std::is_sorted(tables().additional.begin(), tables().additional.end(), redundancy_less));
}

TEST(RedundancyTable, NonMemberRowsMatchClosure) {
  std::map<int, ConstraintSet> derived;
  for (const auto& r : tables().redundancies)
    if (r.type && !decode(r.x).contains(*r.type)) derived[r.x] = derived[r.x].with(*r.type);
  for (const auto& rec : tables().coherencies) {
    if (!rec.coherent) continue;
    EXPECT_EQ(derived[rec.x], closure(rec.flags).result - rec.flags) << rec.x;
  }
}

TEST(RedundancyTable, CoherentNotesNameEarliestRule) {
  // x=24 is {AS, T}: IR via A.5.2.2 (vii), A via A.5.2.9.
  EXPECT_EQ(catalog().lookup(24).record->notes, "A.5.2.2 (vii)");
  for (const auto& rec : tables().coherencies) {
    if (!rec.coherent) continue;
    const auto rows = catalog().lookup(rec.x).redundancies;
    if (rows.empty()) {
      EXPECT_EQ(rec.notes, "");
    } else {
      EXPECT_TRUE(std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.notes == rec.notes; }));
    }
  }
}

TEST(Corollaries, SeedIsOrderedAndComplete) {
  const auto seed = seed_corollaries();
  std::set<std::string> ids;
  int incoherence = 0;
  for (const auto& c : seed) {
    EXPECT_TRUE(ids.insert(c.id).second) << c.id;
    EXPECT_EQ(c.volume, 2);
    if (c.section == "A.5.2" && c.kind == CorollaryKind::Incoherence) ++incoherence;
  }
  EXPECT_EQ(incoherence, 19);
  EXPECT_TRUE(ids.count("A.5.1.8 (vi)"));
  EXPECT_TRUE(ids.count("A.5.2.3 (ii) 0"));
  EXPECT_FALSE(ids.count("A.5.2.3 (i) 0"));
  for (std::size_t i = 1; i < seed.size(); ++i) EXPECT_TRUE(corollary_id_less(seed[i - 1].id, seed[i].id));
  EXPECT_EQ(catalog().notes_text("A.5.2.2 (i)"),
            "A.5.2.2 (i). reflexive ^ (asymmetric v intransitive v inEuclidean v acyclic)");
  EXPECT_EQ(catalog().notes_text("nope"), "nope");
}

TEST(Corollaries, NaturalIdOrder) {
  EXPECT_TRUE(corollary_id_less("A.5.2.9", "A.5.2.10"));
  EXPECT_TRUE(corollary_id_less("A.5.2.2 (iv)", "A.5.2.2 (v)"));
  EXPECT_TRUE(corollary_id_less("A.5.2.2 (ix)", "A.5.2.2 (x)"));
  EXPECT_TRUE(corollary_id_less("A.5.2.3 (ii)", "A.5.2.3 (ii) 0"));
  EXPECT_TRUE(corollary_id_less("A.5.2.3 (ii) 1", "A.5.2.3 (ii) 2"));
  EXPECT_TRUE(corollary_id_less("A.5.1.8 (vi)", "A.5.2.1 (i)"));
  EXPECT_FALSE(corollary_id_less("A.5.2.12", "A.5.2.12"));
}

TEST(Corollaries, KindParsing) {
  EXPECT_EQ(corollary_kind_from_string("Universality"), CorollaryKind::Universality);
  EXPECT_THROW(corollary_kind_from_string("universality"), SchemaMismatch);
}

TEST(Catalog, CountsLookups) {
  const Catalog c(tables(), "rulebase");
  EXPECT_EQ(c.lookup_count(), 0u);
  c.lookup(5);
  c.lookup(3);
  EXPECT_EQ(c.lookup_count(), 2u);
  EXPECT_EQ(c.backend(), "rulebase");
}

TEST(OracleTables, AgreeWithIndex) {
  const auto t = generate_oracle_tables(index4());
  ASSERT_EQ(t.coherencies.size(), 1151u);
  const Catalog c(t, "oracle");
  for (const auto& rec : t.coherencies) {
    EXPECT_EQ(rec.coherent, index4().coherent(rec.x, InEuclideanReading::Strong));
    if (!rec.coherent) continue;
    const auto implied = *index4().implied(rec.x, InEuclideanReading::Strong);
    const auto r = c.lookup(rec.x);
    for (auto ty : kAllConstraintTypes)
      if (!rec.flags.contains(ty)) EXPECT_EQ(r.row_for(ty) != nullptr, implied.contains(ty));
    EXPECT_EQ(r.universal_row() != nullptr, index4().universal_only(rec.x, InEuclideanReading::Strong));
  }
  EXPECT_NE(c.corollary("ORACLE.IMPLIED"), nullptr);
}

TEST(Diff, CoherenceLinesMatchIndependentCount) {
  const auto d = diff_against_oracle(tables(), index4());
  EXPECT_EQ(d.n, 4);
  std::size_t mismatches = 0;
  for (const auto& rec : tables().coherencies)
    if (rec.coherent != index4().coherent(rec.x, InEuclideanReading::Strong)) ++mismatches;
  EXPECT_EQ(d.coherence.size(), mismatches);
  EXPECT_FALSE(d.preamble.empty());
  EXPECT_EQ(d.to_text(), diff_against_oracle(tables(), index4()).to_text());
  EXPECT_NE(d.to_text().find("n=4"), std::string::npos);
}

TEST(Diff, OracleTablesAgreeWithThemselves) {
  const auto d = diff_against_oracle(generate_oracle_tables(index4()), index4());
  EXPECT_TRUE(d.coherence.empty());
  EXPECT_TRUE(d.universality.empty());
}

TEST(Diff, SizesFourAndFiveGiveTheSameBody) {
  const auto five = build_index(5);
  const auto a = diff_against_oracle(tables(), index4());
  const auto b = diff_against_oracle(tables(), five);
  EXPECT_TRUE(compare_diff_reports(a, b).empty());
}

TEST(Diff, SizeThreeDiffersFromFour) {
  const auto a = diff_against_oracle(tables(), build_index(3));
  const auto b = diff_against_oracle(tables(), index4());
  EXPECT_FALSE(compare_diff_reports(a, b).empty());
}

}  // namespace
}  // namespace drc
