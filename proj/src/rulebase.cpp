// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include "drc/rulebase.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <tuple>

#include "drc/errors.hpp"
#include "drc/oracle.hpp"

namespace drc {

namespace {

using CT = ConstraintType;
using M = ConstraintSet;

namespace p {
bool R(M m) { return m.contains(CT::Reflexive); }
bool IR(M m) { return m.contains(CT::Irreflexive); }
bool S(M m) { return m.contains(CT::Symmetric); }
bool AS(M m) { return m.contains(CT::Asymmetric); }
bool T(M m) { return m.contains(CT::Transitive); }
bool IT(M m) { return m.contains(CT::Intransitive); }
bool E(M m) { return m.contains(CT::Euclidean); }
bool IE(M m) { return m.contains(CT::InEuclidean); }
bool Q(M m) { return m.contains(CT::Equivalence); }
bool A(M m) { return m.contains(CT::Acyclic); }
bool C(M m) { return m.contains(CT::Connected); }
}  // namespace p

struct IncoherenceRule {
  const char* id;
  bool (*matches)(M);
};

struct Clause {
  bool (*premise)(M);
  M conclusions;
};

struct RedundancyRule {
  const char* id;
  std::vector<Clause> clauses;
};

constexpr const char* kUniversalityId = "A.5.2.19";

// In natural id order.
const std::vector<IncoherenceRule>& incoherence_rules() {
  using namespace p;
  static const std::vector<IncoherenceRule> rules = {
      {"A.5.2.1 (i)", [](M m) { return R(m) && IR(m); }},
      {"A.5.2.1 (ii)", [](M m) { return S(m) && AS(m); }},
      {"A.5.2.2 (i)", [](M m) { return R(m) && (AS(m) || IT(m) || IE(m) || A(m)); }},
      {"A.5.2.2 (ii)", [](M m) { return A(m) && S(m); }},
      {"A.5.2.2 (iii)", [](M m) { return E(m) && (AS(m) || IT(m) || A(m)); }},
      {"A.5.2.2 (iv)", [](M m) { return T(m) && IE(m); }},
      {"A.5.2.2 (v)", [](M m) { return C(m) && (IT(m) || IE(m)); }},
      {"A.5.2.2 (vi)", [](M m) { return Q(m) && (IR(m) || AS(m) || IT(m) || IE(m) || A(m)); }},
      {"A.5.2.4 (i)", [](M m) { return (R(m) || S(m) || E(m) || Q(m) || C(m)) && T(m) && IT(m); }},
      {"A.5.2.5 (i)", [](M m) { return E(m) && IE(m) && Q(m); }},
      {"A.5.2.7 (i)", [](M m) { return S(m) && IE(m) && C(m); }},
      {"A.5.2.8 (i)", [](M m) { return IR(m) && S(m) && T(m); }},
      {"A.5.2.10 (i)", [](M m) { return S(m) && IT(m) && C(m); }},
      {"A.5.2.11 (i)", [](M m) { return IT(m) && E(m) && !IE(m); }},
      {"A.5.2.11 (ii)", [](M m) { return A(m) && E(m) && !IE(m); }},
      {"A.5.2.11 (iii)", [](M m) { return C(m) && IE(m) && !E(m); }},
      {"A.5.2.12", [](M m) { return T(m) && IE(m) && C(m); }},
      {"A.5.2.14", [](M m) { return T(m) && IE(m) && C(m); }},
      {"A.5.2.16", [](M m) { return IT(m) && A(m) && C(m); }},
  };
  return rules;
}

// In natural id order.
const std::vector<RedundancyRule>& redundancy_rules() {
  using namespace p;
  static const std::vector<RedundancyRule> rules = {
      {"A.5.2.2 (vii)", {{[](M m) { return AS(m) || IT(m) || IE(m) || A(m); }, {CT::Irreflexive}}}},
      {"A.5.2.3 (i)", {{[](M m) { return A(m); }, {CT::Irreflexive, CT::Asymmetric, CT::InEuclidean}}}},
      {"A.5.2.3 (ii) 0",
       {{[](M m) { return R(m) && S(m) && T(m); }, {CT::Equivalence}},
        {[](M m) { return Q(m); }, {CT::Reflexive, CT::Symmetric, CT::Transitive}}}},
      {"A.5.2.3 (ii) 1",
       {{[](M m) { return E(m); }, {CT::Symmetric, CT::Transitive}},
        {[](M m) { return S(m) && T(m); }, {CT::Euclidean}}}},
      {"A.5.2.3 (ii) 2",
       {{[](M m) { return R(m) && E(m); }, {CT::Equivalence}},
        {[](M m) { return Q(m); }, {CT::Reflexive, CT::Euclidean}}}},
      {"A.5.2.4 (ii)",
       {{[](M m) { return T(m) && IT(m); }, {CT::Irreflexive, CT::Asymmetric, CT::InEuclidean}}}},
      {"A.5.2.5 (ii)", {{[](M m) { return E(m) && IE(m); }, {CT::Intransitive}}}},
      {"A.5.2.6 (i)", {{[](M m) { return S(m) && IT(m); }, {CT::InEuclidean}}}},
      {"A.5.2.6 (ii)", {{[](M m) { return S(m) && T(m) && IT(m); }, {CT::Euclidean, CT::InEuclidean}}}},
      {"A.5.2.7 (ii)", {{[](M m) { return S(m) && IE(m); }, {CT::Intransitive}}}},
      {"A.5.2.7 (iii)", {{[](M m) { return S(m) && E(m) && IE(m); }, {CT::Transitive, CT::Intransitive}}}},
      {"A.5.2.8 (ii)", {{[](M m) { return IR(m) && T(m); }, {CT::Asymmetric}}}},
      {"A.5.2.9", {{[](M m) { return AS(m) && T(m); }, {CT::Acyclic}}}},
      {"A.5.2.10 (ii)", {{[](M m) { return S(m) && C(m); }, {CT::Euclidean}}}},
      {"A.5.2.10 (iii)", {{[](M m) { return S(m) && C(m); }, {CT::Transitive}}}},
      {"A.5.2.10 (iv)", {{[](M m) { return R(m) && S(m) && C(m); }, {CT::Equivalence}}}},
      {"A.5.2.13", {{[](M m) { return IT(m) && E(m); }, {CT::InEuclidean}}}},
      {"A.5.2.15", {{[](M m) { return A(m) && C(m); }, {CT::Transitive}}}},
      {"A.5.2.17", {{[](M m) { return IE(m) && C(m); }, {CT::Asymmetric, CT::Acyclic}}}},
      {"A.5.2.18",
       {{[](M m) { return IE(m) && C(m); }, {CT::Acyclic}}, {[](M m) { return A(m) && C(m); }, {CT::InEuclidean}}}},
  };
  return rules;
}

/// Rank of a rule id among the redundancy rules followed by universality.
int rule_rank(std::string_view id) {
  const auto& rules = redundancy_rules();
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (rules[i].id == id) return static_cast<int>(i);
  return static_cast<int>(rules.size());
}

int roman_value(std::string_view s) {
  int total = 0, prev = 0;
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    int v = 0;
    switch (*it) {
      case 'i': v = 1; break;
      case 'v': v = 5; break;
      case 'x': v = 10; break;
      case 'l': v = 50; break;
      default: return -1;
    }
    total += v < prev ? -v : v;
    prev = std::max(prev, v);
  }
  return total;
}

using IdToken = std::tuple<int, long, std::string>;

std::vector<IdToken> tokenize_id(std::string_view id) {
  std::vector<IdToken> out;
  std::size_t i = 0;
  while (i < id.size()) {
    const char c = id[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < id.size() && std::isdigit(static_cast<unsigned char>(id[j]))) ++j;
      out.emplace_back(0, std::stol(std::string(id.substr(i, j - i))), "");
      i = j;
    } else if (c == '(') {
      const auto close = id.find(')', i);
      const auto inner = id.substr(i + 1, close == std::string_view::npos ? id.size() : close - i - 1);
      const int r = roman_value(inner);
      if (r > 0)
        out.emplace_back(1, r, "");
      else
        out.emplace_back(2, 0, std::string(inner));
      i = close == std::string_view::npos ? id.size() : close + 1;
    } else if (c == '.' || c == ' ') {
      ++i;
    } else {
      std::size_t j = i;
      while (j < id.size() && !std::isdigit(static_cast<unsigned char>(id[j])) && id[j] != '.' && id[j] != ' ' &&
             id[j] != '(')
        ++j;
      out.emplace_back(2, 0, std::string(id.substr(i, j - i)));
      i = j;
    }
  }
  return out;
}

Corollary cor(const char* id, CorollaryKind kind, const char* description, const char* section = "A.5.2") {
  return Corollary{id, kind, description, 2, section};
}

}  // namespace

std::string_view to_string(CorollaryKind kind) {
  switch (kind) {
    case CorollaryKind::Incoherence: return "Incoherence";
    case CorollaryKind::Redundancy: return "Redundancy";
    case CorollaryKind::Universality: return "Universality";
  }
  return "?";
}

CorollaryKind corollary_kind_from_string(std::string_view text) {
  for (auto k : {CorollaryKind::Incoherence, CorollaryKind::Redundancy, CorollaryKind::Universality})
    if (to_string(k) == text) return k;
  throw SchemaMismatch("unknown corollary type '" + std::string(text) + "'");
}

bool corollary_id_less(std::string_view a, std::string_view b) {
  return tokenize_id(a) < tokenize_id(b);
}

std::string RedundancyRecord::token() const {
  return type ? std::string(abbreviation(*type)) : std::string("Universal");
}

bool redundancy_less(const RedundancyRecord& a, const RedundancyRecord& b) {
  auto key = [](const RedundancyRecord& r) {
    return std::make_tuple(r.x, r.type ? static_cast<int>(*r.type) : kConstraintTypeCount);
  };
  if (key(a) != key(b)) return key(a) < key(b);
  return corollary_id_less(a.notes, b.notes);
}

// ---------------------------------------------------------------------------
// LookupResult / Catalog

const RedundancyRecord* LookupResult::row_for(ConstraintType t) const {
  for (const auto& r : redundancies)
    if (r.type == t) return &r;
  return nullptr;
}

const RedundancyRecord* LookupResult::universal_row() const {
  for (const auto& r : redundancies)
    if (r.universal()) return &r;
  return nullptr;
}

ConstraintSet LookupResult::redundant_types() const {
  ConstraintSet s;
  for (const auto& r : redundancies)
    if (r.type) s = s.with(*r.type);
  return s;
}

Catalog::Catalog(CatalogTables tables, std::string backend)
    : tables_(std::move(tables)), backend_(std::move(backend)) {
  for (std::size_t i = 0; i < tables_.coherencies.size(); ++i) coherence_at_[tables_.coherencies[i].x] = i;
  auto index_rows = [](const std::vector<RedundancyRecord>& rows, auto& at) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto [it, fresh] = at.try_emplace(rows[i].x, i, i + 1);
      if (!fresh) it->second.second = i + 1;
    }
  };
  index_rows(tables_.redundancies, primary_at_);
  index_rows(tables_.additional, additional_at_);
  for (std::size_t i = 0; i < tables_.corollaries.size(); ++i) corollary_at_[tables_.corollaries[i].id] = i;
}

LookupResult Catalog::lookup(int x) const {
  auto out = peek(x);
  ++lookups_;
  return out;
}

LookupResult Catalog::peek(int x) const {
  if (x < 1 || x > kMaxCombination)
    throw OutOfRange("combination code " + std::to_string(x) + " outside 1..2047");
  LookupResult out;
  if (auto it = coherence_at_.find(x); it != coherence_at_.end()) out.record = tables_.coherencies[it->second];
  if (auto it = primary_at_.find(x); it != primary_at_.end())
    out.redundancies.assign(tables_.redundancies.begin() + it->second.first,
                            tables_.redundancies.begin() + it->second.second);
  if (auto it = additional_at_.find(x); it != additional_at_.end())
    out.additional.assign(tables_.additional.begin() + it->second.first,
                          tables_.additional.begin() + it->second.second);
  return out;
}

const Corollary* Catalog::corollary(std::string_view id) const {
  auto it = corollary_at_.find(id);
  return it == corollary_at_.end() ? nullptr : &tables_.corollaries[it->second];
}

std::string Catalog::notes_text(std::string_view id) const {
  const auto* c = corollary(id);
  return c ? c->id + ". " + c->description : std::string(id);
}

// ---------------------------------------------------------------------------
// Seed

std::vector<Corollary> seed_corollaries() {
  using K = CorollaryKind;
  std::vector<Corollary> out = {
      cor("A.5.1.2", K::Redundancy, "Inclusion between two equal sets is redundant.", "A.5.1"),
      cor("A.5.1.4 (i)", K::Incoherence,
          "Any constraint set containing disjointness and inclusion between same two sets is incoherent.", "A.5.1"),
      cor("A.5.1.4 (ii)", K::Incoherence,
          "Any constraint set containing disjointness and equality between same two sets is incoherent.", "A.5.1"),
      cor("A.5.1.5", K::Redundancy,
          "Union and disjointness of two sets are redundant iff they are operands of a direct sum.", "A.5.1"),
      cor("A.5.1.8 (i)", K::Incoherence,
          "Any constraint set containing inclusion and not inclusion between same two sets is incoherent.", "A.5.1"),
      cor("A.5.1.8 (ii)", K::Incoherence,
          "Any constraint set containing equality and not equality between same two sets is incoherent.", "A.5.1"),
      cor("A.5.1.8 (iii)", K::Incoherence,
          "Any constraint set containing disjointness and not disjointness between same two sets is incoherent.",
          "A.5.1"),
      cor("A.5.1.8 (iv)", K::Incoherence,
          "Any constraint set containing direct sum and inclusion between same two sets is incoherent.", "A.5.1"),
      cor("A.5.1.8 (v)", K::Incoherence,
          "Any constraint set containing direct sum and equality between same two sets is incoherent.", "A.5.1"),
      cor("A.5.1.8 (vi)", K::Incoherence,
          "Any constraint set containing direct sum between same two sets is incoherent.", "A.5.1"),

      cor("A.5.2.1 (i)", K::Incoherence, "reflexive ^ irreflexive"),
      cor("A.5.2.1 (ii)", K::Incoherence, "symmetric ^ asymmetric"),
      cor("A.5.2.2 (i)", K::Incoherence, "reflexive ^ (asymmetric v intransitive v inEuclidean v acyclic)"),
      cor("A.5.2.2 (ii)", K::Incoherence, "acyclic ^ symmetric"),
      cor("A.5.2.2 (iii)", K::Incoherence, "Euclidean ^ (asymmetric v intransitive v acyclic)"),
      cor("A.5.2.2 (iv)", K::Incoherence, "transitive ^ inEuclidean"),
      cor("A.5.2.2 (v)", K::Incoherence, "connected ^ (intransitive v inEuclidean)"),
      cor("A.5.2.2 (vi)", K::Incoherence,
          "equivalence ^ (irreflexive v asymmetric v intransitive v inEuclidean v acyclic)"),
      cor("A.5.2.2 (vii)", K::Redundancy, "(asymmetric v intransitive v inEuclidean v acyclic) => irreflexive"),
      cor("A.5.2.3 (i)", K::Redundancy, "acyclic => (irreflexive ^ asymmetric ^ inEuclidean)"),
      cor("A.5.2.3 (ii) 0", K::Redundancy, "reflexivity ^ symmetry ^ transitivity <=> equivalence"),
      cor("A.5.2.3 (ii) 1", K::Redundancy, "Euclidean <=> (symmetric ^ transitive)"),
      cor("A.5.2.3 (ii) 2", K::Redundancy, "reflexive ^ Euclidean <=> equivalence"),
      cor("A.5.2.4 (i)", K::Incoherence,
          "(reflexive v symmetric v Euclidean v equivalence v connected) ^ transitive ^ intransitive"),
      cor("A.5.2.4 (ii)", K::Redundancy, "transitive ^ intransitive => irreflexive ^ asymmetric ^ inEuclidean"),
      cor("A.5.2.5 (i)", K::Incoherence, "Euclidean ^ inEuclidean ^ equivalence"),
      cor("A.5.2.5 (ii)", K::Redundancy, "Euclidean ^ inEuclidean => intransitive"),
      cor("A.5.2.6 (i)", K::Redundancy, "symmetric ^ intransitive => inEuclidean"),
      cor("A.5.2.6 (ii)", K::Redundancy, "symmetric ^ transitive ^ intransitive => Euclidean ^ inEuclidean"),
      cor("A.5.2.7 (i)", K::Incoherence, "symmetric ^ inEuclidean ^ connected"),
      cor("A.5.2.7 (ii)", K::Redundancy, "symmetric ^ inEuclidean => intransitive"),
      cor("A.5.2.7 (iii)", K::Redundancy, "symmetric ^ Euclidean ^ inEuclidean => transitive ^ intransitive"),
      cor("A.5.2.8 (i)", K::Incoherence, "irreflexive ^ symmetric ^ transitive"),
      cor("A.5.2.8 (ii)", K::Redundancy, "irreflexive ^ transitive => asymmetric"),
      cor("A.5.2.9", K::Redundancy, "asymmetric ^ transitive => acyclic"),
      cor("A.5.2.10 (i)", K::Incoherence, "symmetric ^ intransitive ^ connected"),
      cor("A.5.2.10 (ii)", K::Redundancy, "symmetric ^ connected => Euclidean"),
      cor("A.5.2.10 (iii)", K::Redundancy, "symmetric ^ connected => transitive"),
      cor("A.5.2.10 (iv)", K::Redundancy, "reflexive ^ symmetric ^ connected => equivalence"),
      cor("A.5.2.11 (i)", K::Incoherence, "intransitive ^ Euclidean ^ not inEuclidean"),
      cor("A.5.2.11 (ii)", K::Incoherence, "acyclic ^ Euclidean ^ not inEuclidean"),
      cor("A.5.2.11 (iii)", K::Incoherence, "connected ^ inEuclidean ^ not Euclidean"),
      cor("A.5.2.12", K::Incoherence, "transitive ^ inEuclidean ^ connected"),
      cor("A.5.2.13", K::Redundancy, "intransitive ^ Euclidean => inEuclidean"),
      cor("A.5.2.14", K::Incoherence, "transitive ^ inEuclidean ^ connected"),
      cor("A.5.2.15", K::Redundancy, "acyclic ^ connected => transitive"),
      cor("A.5.2.16", K::Incoherence, "intransitive ^ acyclic ^ connected"),
      cor("A.5.2.17", K::Redundancy, "inEuclidean ^ connected => asymmetric ^ acyclic"),
      cor("A.5.2.18", K::Redundancy,
          "(inEuclidean ^ connected => acyclic) ^ (acyclic ^ connected => inEuclidean)"),
      cor(kUniversalityId, K::Universality,
          "connected ^ reflexive ^ (symmetric v Euclidean) v connected ^ equivalence => universality"),
  };
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return corollary_id_less(a.id, b.id); });
  return out;
}

// ---------------------------------------------------------------------------
// Generation

std::optional<std::string> incoherence_rule(ConstraintSet set) {
  for (const auto& r : incoherence_rules())
    if (r.matches(set)) return std::string(r.id);
  return std::nullopt;
}

std::vector<CoherenceRecord> generate_coherence_table() {
  std::vector<CoherenceRecord> out;
  for (int x = 1; x <= kMaxCombination; ++x) {
    const auto flags = decode(x);
    if (has_trivial_contradiction(flags)) continue;
    CoherenceRecord r{x, flags, true, ""};
    if (auto id = incoherence_rule(flags)) {
      r.coherent = false;
      r.notes = *id;
    }
    out.push_back(std::move(r));
  }
  return out;
}

const Derivation* ClosureTrace::primary(ConstraintType t) const {
  for (const auto& d : derivations)
    if (d.type == t) return &d;
  return nullptr;
}

bool universality_premise(ConstraintSet m) {
  using namespace p;
  return (C(m) && R(m) && (S(m) || E(m))) || (C(m) && Q(m));
}

ClosureTrace closure(ConstraintSet start) {
  ClosureTrace trace;
  trace.start = start;
  ConstraintSet grown = start;
  auto known = [&](ConstraintType t, std::string_view rule) {
    return std::any_of(trace.derivations.begin(), trace.derivations.end(),
                       [&](const auto& d) { return d.type == t && d.rule == rule; });
  };
  for (int pass = 1;; ++pass) {
    const ConstraintSet snapshot = grown;
    bool added = false;
    for (const auto& rule : redundancy_rules()) {
      for (const auto& clause : rule.clauses) {
        if (!clause.premise(snapshot)) continue;
        for (auto t : clause.conclusions.members()) {
          if (start.contains(t) || known(t, rule.id)) continue;
          if (grown.contains(t)) {
            trace.derivations.push_back({t, rule.id, pass});
            continue;
          }
          if (auto blocker = incoherence_rule(grown.with(t))) {
            BlockedDerivation b{t, rule.id, *blocker};
            if (std::find(trace.blocked.begin(), trace.blocked.end(), b) == trace.blocked.end())
              trace.blocked.push_back(b);
            continue;
          }
          grown = grown.with(t);
          trace.derivations.push_back({t, rule.id, pass});
          added = true;
        }
      }
    }
    if (!added) break;
    trace.passes = pass;
  }
  trace.result = grown;
  return trace;
}

RedundancyTables generate_redundancy_tables(const std::vector<CoherenceRecord>& coherencies) {
  RedundancyTables out;
  for (const auto& rec : coherencies) {
    if (!rec.coherent) continue;
    const int x = rec.x;
    const ConstraintSet set = decode(x);
    auto emit = [&](ConstraintType t, const ClosureTrace& trace) {
      bool first = true;
      for (const auto& d : trace.derivations) {
        if (d.type != t) continue;
        (first ? out.primary : out.additional).push_back({x, t, d.rule});
        first = false;
      }
    };

    const auto whole = closure(set);
    out.max_passes = std::max(out.max_passes, whole.passes);
    for (const auto& b : whole.blocked) out.blocked.emplace_back(x, b);
    for (auto t : kAllConstraintTypes) {
      if (set.contains(t)) {
        const auto without = closure(set.without(t));
        out.max_passes = std::max(out.max_passes, without.passes);
        if (without.result.contains(t)) emit(t, without);
      } else if (whole.result.contains(t)) {
        emit(t, whole);
      }
    }
    if (universality_premise(whole.result)) out.primary.push_back({x, std::nullopt, kUniversalityId});
  }
  std::stable_sort(out.primary.begin(), out.primary.end(), redundancy_less);
  std::stable_sort(out.additional.begin(), out.additional.end(), redundancy_less);
  return out;
}

CatalogTables generate_rulebase_tables() {
  CatalogTables t;
  t.corollaries = seed_corollaries();
  t.coherencies = generate_coherence_table();
  auto red = generate_redundancy_tables(t.coherencies);
  // A coherent row's Notes names its earliest-ranked redundancy rule.
  std::map<int, std::string> first;
  for (const auto& r : red.primary) {
    auto it = first.find(r.x);
    if (it == first.end() || rule_rank(r.notes) < rule_rank(it->second)) first[r.x] = r.notes;
  }
  for (auto& rec : t.coherencies)
    if (rec.coherent)
      if (auto it = first.find(rec.x); it != first.end()) rec.notes = it->second;
  t.redundancies = std::move(red.primary);
  t.additional = std::move(red.additional);
  return t;
}

CatalogTables generate_oracle_tables(const AchievableMaskIndex& index, InEuclideanReading reading) {
  using K = CorollaryKind;
  const std::string n = std::to_string(index.n());
  CatalogTables t;
  t.corollaries = seed_corollaries();
  t.corollaries.push_back({"ORACLE.IMPLIED", K::Redundancy,
                           "implied in every non-empty model on " + n + " elements", 0, "ORACLE"});
  t.corollaries.push_back({"ORACLE.INCOHERENT", K::Incoherence, "no non-empty model on " + n + " elements", 0,
                           "ORACLE"});
  t.corollaries.push_back({"ORACLE.UNIVERSAL", K::Universality,
                           "every non-empty model on " + n + " elements is S x S", 0, "ORACLE"});
  for (int x = 1; x <= kMaxCombination; ++x) {
    const auto set = decode(x);
    if (has_trivial_contradiction(set)) continue;
    CoherenceRecord rec{x, set, index.coherent(x, reading), ""};
    if (!rec.coherent) {
      rec.notes = "ORACLE.INCOHERENT";
    } else {
      const auto implied = *index.implied(x, reading);
      for (auto ty : kAllConstraintTypes) {
        const bool row = set.contains(ty) ? is_redundant_semantic(ty, x, index, reading) : implied.contains(ty);
        if (row) t.redundancies.push_back({x, ty, "ORACLE.IMPLIED"});
      }
      if (index.universal_only(x, reading)) t.redundancies.push_back({x, std::nullopt, "ORACLE.UNIVERSAL"});
      if (!t.redundancies.empty() && t.redundancies.back().x == x) {
        const bool any_type = std::any_of(t.redundancies.rbegin(), t.redundancies.rend(),
                                          [&](const auto& r) { return r.x == x && r.type; });
        rec.notes = any_type ? "ORACLE.IMPLIED" : "ORACLE.UNIVERSAL";
      }
    }
    t.coherencies.push_back(std::move(rec));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Diff

DiffReport diff_against_oracle(const CatalogTables& tables, const AchievableMaskIndex& index) {
  constexpr auto reading = InEuclideanReading::Strong;
  DiffReport d;
  d.n = index.n();

  std::size_t incoherence = 0, redundancy = 0, universality = 0;
  for (const auto& c : tables.corollaries) {
    if (c.section != "A.5.2") continue;
    if (c.kind == CorollaryKind::Incoherence) ++incoherence;
    if (c.kind == CorollaryKind::Redundancy) ++redundancy;
    if (c.kind == CorollaryKind::Universality) ++universality;
  }
  d.preamble.push_back("oracle reading: strong inEuclidean; models are the non-empty relations on n elements");
  d.preamble.push_back("rule partition: " + std::to_string(incoherence) + " incoherence rules (2 of them trivial, "
                       "A.5.2.1 (i) and (ii)), " + std::to_string(redundancy) + " redundancy rules, " +
                       std::to_string(universality) + " universality rule");
  d.preamble.push_back("A.5.2.4 (ii) concludes redundancies and runs as a redundancy rule; counted as an "
                       "incoherence rule the non-trivial incoherence rules would number 18");
  d.preamble.push_back("A.5.2.12 and A.5.2.14 have the same premise (transitive ^ inEuclidean ^ connected); both run "
                       "and A.5.2.12 keeps the Notes slot");

  const auto red = generate_redundancy_tables(tables.coherencies);
  std::map<std::tuple<int, std::string, std::string>, std::pair<int, int>> blocked;
  for (const auto& [x, b] : red.blocked) {
    auto key = std::make_tuple(static_cast<int>(b.type), b.rule, b.blocked_by);
    auto [it, fresh] = blocked.try_emplace(key, 0, x);
    ++it->second.first;
    it->second.second = std::min(it->second.second, x);
  }
  std::vector<std::string> blocked_lines;
  for (const auto& [key, v] : blocked) {
    const auto& [type, rule, by] = key;
    blocked_lines.push_back("blocked derivation: " + std::string(abbreviation(static_cast<CT>(type))) + " via " +
                            rule + " would trigger " + by + " (" + std::to_string(v.first) +
                            " combinations, first x=" + std::to_string(v.second) + ")");
  }
  std::sort(blocked_lines.begin(), blocked_lines.end());
  d.preamble.insert(d.preamble.end(), blocked_lines.begin(), blocked_lines.end());

  std::map<int, std::vector<const RedundancyRecord*>> rows;
  for (const auto& r : tables.redundancies) rows[r.x].push_back(&r);

  for (const auto& rec : tables.coherencies) {
    const int x = rec.x;
    const auto set = decode(x);
    const std::string label = "x=" + std::to_string(x) + " {" + set.to_string() + "}";
    const bool sem = index.coherent(x, reading);
    if (rec.coherent != sem) {
      d.coherence.push_back(label + ": rulebase " +
                            (rec.coherent ? std::string("coherent") : "incoherent (" + rec.notes + ")") +
                            ", oracle " + (sem ? "coherent" : "incoherent"));
      continue;
    }
    if (!rec.coherent) continue;

    const auto implied = *index.implied(x, reading);
    bool rule_universal = false;
    ConstraintSet rule_types;
    std::map<CT, std::string> why;
    for (const auto* r : rows[x]) {
      if (r->universal()) {
        rule_universal = true;
      } else {
        rule_types = rule_types.with(*r->type);
        why[*r->type] = r->notes;
      }
    }
    for (auto t : kAllConstraintTypes) {
      const bool oracle = set.contains(t) ? is_redundant_semantic(t, x, index, reading) : implied.contains(t);
      const bool rule = rule_types.contains(t);
      if (oracle == rule) continue;
      const std::string role = set.contains(t) ? "redundant member " : "implied ";
      d.redundancy.push_back(label + " " + std::string(abbreviation(t)) + ": rulebase " +
                             (rule ? role + "(" + why[t] + ")" : std::string("no row")) + ", oracle " +
                             (oracle ? role.substr(0, role.size() - 1) : std::string("not ") + role.substr(0, role.size() - 1)));
    }
    const bool oracle_universal = index.universal_only(x, reading);
    if (oracle_universal != rule_universal)
      d.universality.push_back(label + ": rulebase " + (rule_universal ? "universal" : "not universal") +
                               ", oracle " + (oracle_universal ? "universal" : "not universal"));
  }
  return d;
}

std::string DiffReport::to_text() const {
  std::ostringstream out;
  out << "drc rulebase-vs-oracle diff\n";
  out << "n=" << n << "\n";
  out << "\npreamble:\n";
  for (const auto& l : preamble) out << "  " << l << "\n";
  auto section = [&](const char* name, const std::vector<std::string>& lines) {
    out << "\n" << name << " disagreements: " << lines.size() << "\n";
    for (const auto& l : lines) out << "  " << l << "\n";
  };
  section("coherence", coherence);
  section("redundancy", redundancy);
  section("universality", universality);
  return out.str();
}

std::vector<std::string> compare_diff_reports(const DiffReport& a, const DiffReport& b) {
  auto body = [](const DiffReport& d) {
    std::vector<std::string> lines;
    for (const auto* s : {&d.preamble, &d.coherence, &d.redundancy, &d.universality})
      lines.insert(lines.end(), s->begin(), s->end());
    return lines;
  };
  const auto la = body(a), lb = body(b);
  const std::multiset<std::string> sa(la.begin(), la.end()), sb(lb.begin(), lb.end());
  std::vector<std::string> out;
  for (const auto& l : la)
    if (!sb.count(l)) out.push_back("- n=" + std::to_string(a.n) + ": " + l);
  for (const auto& l : lb)
    if (!sa.count(l)) out.push_back("+ n=" + std::to_string(b.n) + ": " + l);
  return out;
}

}  // namespace drc
