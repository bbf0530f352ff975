// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DRC_RULEBASE_HPP_
#define DRC_RULEBASE_HPP_

#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drc/constraint.hpp"
#include "drc/relation.hpp"

namespace drc {

class AchievableMaskIndex;

enum class CorollaryKind { Incoherence, Redundancy, Universality };

std::string_view to_string(CorollaryKind kind);
/// Throws SchemaMismatch.
CorollaryKind corollary_kind_from_string(std::string_view text);

struct Corollary {
  std::string id;           ///< "A.5.2.2 (i)"
  CorollaryKind kind = CorollaryKind::Redundancy;
  std::string description;  ///< "reflexive ^ irreflexive"
  int volume = 2;
  std::string section;      ///< "A.5.2"
  friend bool operator==(const Corollary&, const Corollary&) = default;
};

/// Natural order on corollary ids: numbers and parenthesised roman
/// numerals compare by value, so "A.5.2.9" < "A.5.2.10" and "(iv)" < "(v)".
bool corollary_id_less(std::string_view a, std::string_view b);

struct CoherenceRecord {
  int x = 0;
  ConstraintSet flags;  ///< always decode(x)
  bool coherent = true;
  std::string notes;    ///< corollary id or empty
  friend bool operator==(const CoherenceRecord&, const CoherenceRecord&) = default;
};

struct RedundancyRecord {
  int x = 0;
  std::optional<ConstraintType> type;  ///< nullopt encodes "Universal"
  std::string notes;
  bool universal() const { return !type.has_value(); }
  /// Abbreviation or "Universal".
  std::string token() const;
  friend bool operator==(const RedundancyRecord&, const RedundancyRecord&) = default;
};

/// Orders redundancy rows by (x, type weight), Universal last, then notes.
bool redundancy_less(const RedundancyRecord& a, const RedundancyRecord& b);

/// The four metacatalog tables plus the backend that produced them.
struct CatalogTables {
  std::vector<Corollary> corollaries;
  std::vector<CoherenceRecord> coherencies;
  std::vector<RedundancyRecord> redundancies;
  std::vector<RedundancyRecord> additional;
  friend bool operator==(const CatalogTables&, const CatalogTables&) = default;
};

struct LookupResult {
  std::optional<CoherenceRecord> record;  ///< nullopt: combination not stored
  std::vector<RedundancyRecord> redundancies;
  std::vector<RedundancyRecord> additional;

  bool missing() const { return !record.has_value(); }
  /// Primary row for `t`, if any.
  const RedundancyRecord* row_for(ConstraintType t) const;
  const RedundancyRecord* universal_row() const;
  /// Types named by the primary rows.
  ConstraintSet redundant_types() const;
};

/// Read-only view over a CatalogTables with keyed lookups. Counts lookups.
class Catalog {
 public:
  Catalog(CatalogTables tables, std::string backend);

  const CatalogTables& tables() const { return tables_; }
  const std::string& backend() const { return backend_; }

  /// Throws OutOfRange unless 1 <= x <= 2047.
  LookupResult lookup(int x) const;
  /// lookup() without touching the counter.
  LookupResult peek(int x) const;
  std::uint64_t lookup_count() const { return lookups_.load(); }

  const Corollary* corollary(std::string_view id) const;
  /// "CorId. CorDescription", or the id alone when unknown.
  std::string notes_text(std::string_view id) const;

 private:
  CatalogTables tables_;
  std::string backend_;
  std::map<int, std::size_t> coherence_at_;
  std::map<int, std::pair<std::size_t, std::size_t>> primary_at_;
  std::map<int, std::pair<std::size_t, std::size_t>> additional_at_;
  std::map<std::string, std::size_t, std::less<>> corollary_at_;
  mutable std::atomic<std::uint64_t> lookups_{0};
};

// --- generation --------------------------------------------------------------

/// All shipped corollary records in natural id order.
std::vector<Corollary> seed_corollaries();

/// Id of the first incoherence corollary matching `set`, counting the
/// trivial contradictions; nullopt when no rule fires.
std::optional<std::string> incoherence_rule(ConstraintSet set);

/// One row per non-trivial combination 1..2047 (1151 rows).
std::vector<CoherenceRecord> generate_coherence_table();

struct Derivation {
  ConstraintType type;
  std::string rule;
  int pass = 0;  ///< 1-based pass that first produced this justification
  friend bool operator==(const Derivation&, const Derivation&) = default;
};

struct BlockedDerivation {
  ConstraintType type;
  std::string rule;          ///< redundancy rule proposing `type`
  std::string blocked_by;    ///< incoherence rule the addition would trigger
  friend bool operator==(const BlockedDerivation&, const BlockedDerivation&) = default;
};

/// Fixpoint of the redundancy rules starting from `start`. Each pass
/// evaluates every rule against the set as it stood when the pass began;
/// conclusions that would make the set incoherent are skipped and listed.
struct ClosureTrace {
  ConstraintSet start;
  ConstraintSet result;
  /// Justifications in discovery order; the first one per type is primary.
  std::vector<Derivation> derivations;
  std::vector<BlockedDerivation> blocked;
  int passes = 0;  ///< passes that added a type
  const Derivation* primary(ConstraintType t) const;
};

ClosureTrace closure(ConstraintSet start);

/// True when the universality corollary's premise holds for `set`.
bool universality_premise(ConstraintSet set);

struct RedundancyTables {
  std::vector<RedundancyRecord> primary;
  std::vector<RedundancyRecord> additional;
  int max_passes = 0;
  /// (x, derivation) pairs the coherence guard refused.
  std::vector<std::pair<int, BlockedDerivation>> blocked;
};

/// Rows for every coherent record: each type implied but not asserted, each
/// asserted type implied by the others, and Universal where it applies.
/// The first justification of a (x, type) is primary; later distinct ones go
/// to the additional table.
RedundancyTables generate_redundancy_tables(const std::vector<CoherenceRecord>& coherencies);

/// Corollaries plus the three generated tables.
CatalogTables generate_rulebase_tables();

/// Tables with the same shape computed from the enumeration index. Notes
/// point at synthetic corollaries "ORACLE.INCOHERENT", "ORACLE.IMPLIED" and
/// "ORACLE.UNIVERSAL".
CatalogTables generate_oracle_tables(const AchievableMaskIndex& index,
                                     InEuclideanReading reading = InEuclideanReading::Strong);

// --- diff ---------------------------------------------------------------------

struct DiffReport {
  int n = 0;
  std::vector<std::string> preamble;
  std::vector<std::string> coherence;   ///< one line per disagreeing x
  std::vector<std::string> redundancy;  ///< one line per disagreeing (x, type)
  std::vector<std::string> universality;
  bool agrees() const { return coherence.empty() && redundancy.empty() && universality.empty(); }
  /// Deterministic text; the body after the header is size-independent.
  std::string to_text() const;
};

/// Compares rulebase verdicts with the oracle for every stored combination.
DiffReport diff_against_oracle(const CatalogTables& tables, const AchievableMaskIndex& index);

/// Rows present in one report body and not the other, prefixed "-" / "+".
std::vector<std::string> compare_diff_reports(const DiffReport& a, const DiffReport& b);

}  // namespace drc

#endif  // DRC_RULEBASE_HPP_
