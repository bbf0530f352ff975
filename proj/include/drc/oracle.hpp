// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DRC_ORACLE_HPP_
#define DRC_ORACLE_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "drc/constraint.hpp"
#include "drc/relation.hpp"

namespace drc {

/// What the enumeration knows about one property mask.
struct MaskRecord {
  std::uint64_t count = 0;    ///< non-empty relations achieving the mask
  std::uint64_t witness = 0;  ///< lowest relation id
  std::uint64_t minimal = 0;  ///< fewest pairs, ties to the lowest id
  std::optional<std::uint64_t> non_universal;  ///< lowest non-universal id
  bool has_universal_model = false;

  bool achieved() const { return count != 0; }
  bool has_non_universal_model() const { return non_universal.has_value(); }
  friend bool operator==(const MaskRecord&, const MaskRecord&) = default;
};

struct IndexOptions {
  int threads = 0;              ///< 0 = hardware concurrency
  bool allow_size_six = false;  ///< 2^36 relations; hours of CPU
};

/// Every property mask realised by a non-empty relation on n elements.
///
/// One enumeration pass records a 12-bit extended mask per relation (the
/// eleven properties plus the weak inEuclidean bit); the per-reading views
/// are projections of it. Relation ids are n*n-bit integers (bit i*n+j is
/// the pair (i, j)), and every witness is the minimum under a total order,
/// so the index does not depend on how the enumeration was partitioned.
class AchievableMaskIndex {
 public:
  using ExtendedTable = std::array<MaskRecord, 4096>;

  AchievableMaskIndex(int n, ExtendedTable extended);

  int n() const { return n_; }
  std::shared_ptr<const Domain> domain() const { return domain_; }
  std::uint64_t relation_count() const;

  const ExtendedTable& extended() const { return extended_; }

  /// Record for an eleven-bit mask under `reading`.
  const MaskRecord& record(PropertyMask mask,
                           InEuclideanReading reading = InEuclideanReading::Strong) const;
  /// Achieved masks in ascending code order.
  std::vector<PropertyMask> masks(InEuclideanReading reading = InEuclideanReading::Strong) const;

  DyadicRelation relation(std::uint64_t id) const { return DyadicRelation::from_id(domain_, id); }

  friend bool operator==(const AchievableMaskIndex& a, const AchievableMaskIndex& b) {
    return a.n_ == b.n_ && a.extended_ == b.extended_;
  }

  // Cached per-combination answers, filled at construction.
  bool coherent(int x, InEuclideanReading reading) const;
  /// Intersection of all achieved supersets of x; nullopt when none.
  std::optional<PropertyMask> implied(int x, InEuclideanReading reading) const;
  bool universal_only(int x, InEuclideanReading reading) const;

 private:
  struct View {
    std::array<MaskRecord, 2048> records;
    std::array<std::optional<PropertyMask>, 2048> implied;
    std::array<bool, 2048> universal_only{};
  };
  static View project(const ExtendedTable& ext, bool weak);
  const View& view(InEuclideanReading reading) const { return reading == InEuclideanReading::Strong ? strong_ : weak_; }

  int n_;
  std::shared_ptr<const Domain> domain_;
  ExtendedTable extended_;
  View strong_;
  View weak_;
};

/// Enumerates all 2^(n*n) - 1 non-empty relations. Throws SizeTooLarge for
/// n > 5 (n = 6 only with allow_size_six) and OutOfRange for n < 2.
AchievableMaskIndex build_index(int n, const IndexOptions& options = {});

/// Text listing; layout in docs/index-format.md. Throws IoFailure or
/// SchemaMismatch on load.
void save_index(const AchievableMaskIndex& index, std::ostream& out);
AchievableMaskIndex load_index(std::istream& in);

// --- semantic queries --------------------------------------------------------

/// Some achieved mask contains decode(x). Throws OutOfRange unless 1..2047.
bool is_coherent_semantic(int x, const AchievableMaskIndex& index,
                          InEuclideanReading reading = InEuclideanReading::Strong);

/// Types true in every non-empty model of decode(x). Throws IncoherentSet.
ConstraintSet implied_constraints(int x, const AchievableMaskIndex& index,
                                  InEuclideanReading reading = InEuclideanReading::Strong);

/// decode(x) - {c} implies c (vacuously true when decode(x) - {c} has no
/// model). Throws NotAMember when c is not in decode(x).
bool is_redundant_semantic(ConstraintType c, int x, const AchievableMaskIndex& index,
                           InEuclideanReading reading = InEuclideanReading::Strong);

/// Every non-empty model of decode(x) is S x S. Throws IncoherentSet.
bool is_universal_semantic(int x, const AchievableMaskIndex& index,
                           InEuclideanReading reading = InEuclideanReading::Strong);

// --- claim verification ------------------------------------------------------

struct ClaimOutcome {
  int n = 0;
  bool holds = true;
  std::uint64_t violating_relations = 0;
  std::optional<std::uint64_t> counterexample;  ///< relation id, fewest pairs
  PropertyMask counterexample_mask;
  bool reverified = true;  ///< counterexample re-checked through property_mask
};

struct ClaimResult {
  std::string id;         ///< "Prop 2(iii)", "Cor 11(i)"
  std::string statement;  ///< formula over abbreviations
  /// Empty for claims not mentioning inEuclidean; otherwise "strong"/"weak".
  std::string reading;
  /// Non-empty for an alternative reading reported for information only.
  std::string variant;
  std::vector<ClaimOutcome> outcomes;  ///< one per verified size
  bool holds_everywhere() const;
};

struct EmbeddingCheck {
  std::uint64_t relations_checked = 0;
  std::uint64_t failures = 0;
  std::optional<std::uint64_t> first_failure;
};

struct VerificationReport {
  std::vector<int> sizes;
  std::vector<ClaimResult> claims;
  /// Claims (with reading) whose verdict differs across sizes.
  std::vector<std::string> cross_size_discrepancies;
  /// Masks achieved at one verified size but not at another.
  std::vector<std::string> mask_discrepancies;
  std::optional<EmbeddingCheck> embedding;  ///< set when sizes include 4 and 5
  std::vector<std::string> tensions;

  const ClaimResult* find(const std::string& id, const std::string& reading = "",
                          const std::string& variant = "") const;
  std::string to_text() const;
};

/// Evaluates every proposition and corollary template against each index.
/// Indexes must have distinct sizes.
VerificationReport verify_claims(const std::vector<const AchievableMaskIndex*>& indexes,
                                 const IndexOptions& options = {});

/// Convenience overload for a single size.
VerificationReport verify_claims(const AchievableMaskIndex& index, const IndexOptions& options = {});

}  // namespace drc

#endif  // DRC_ORACLE_HPP_
