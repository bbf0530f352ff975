// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DRC_RELATION_HPP_
#define DRC_RELATION_HPP_

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "drc/constraint.hpp"

namespace drc {

/// Largest supported domain; one row of the adjacency matrix is a uint64_t.
inline constexpr int kMaxDomainSize = 64;

/// A finite, ordered set of distinct element identifiers.
class Domain {
 public:
  /// Throws MalformedRelation on an empty list, duplicates, or more than
  /// kMaxDomainSize elements.
  explicit Domain(std::vector<std::string> elements);

  /// Elements named a, b, c, ... (then e26, e27, ...).
  static Domain of_size(int n);

  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& element(int index) const { return elements_.at(index); }

  std::optional<int> index_of(std::string_view name) const;
  /// Throws UnknownElement.
  int require_index(std::string_view name) const;

  friend bool operator==(const Domain& a, const Domain& b) { return a.elements_ == b.elements_; }

 private:
  std::vector<std::string> elements_;
  std::unordered_map<std::string, int> index_;
};

struct Pair {
  int from = 0;
  int to = 0;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// R ⊆ S × S over a shared, immutable domain. Stored as one successor bitmask
/// per element.
class DyadicRelation {
 public:
  explicit DyadicRelation(std::shared_ptr<const Domain> domain);

  /// Throws MalformedRelation on a duplicate pair or an index out of range.
  static DyadicRelation from_pairs(std::shared_ptr<const Domain> domain, std::span<const Pair> pairs);
  static DyadicRelation universal(std::shared_ptr<const Domain> domain);
  /// Bit i*n+j of `id` is the pair (i, j). Requires n*n <= 64.
  static DyadicRelation from_id(std::shared_ptr<const Domain> domain, std::uint64_t id);

  const Domain& domain() const { return *domain_; }
  const std::shared_ptr<const Domain>& domain_ptr() const { return domain_; }
  int n() const { return domain_->size(); }

  bool contains(int from, int to) const { return (rows_[from] >> to) & 1u; }
  /// Returns false if already present.
  bool insert(int from, int to);
  /// Returns false if absent.
  bool erase(int from, int to);

  std::size_t pair_count() const;
  bool empty() const { return pair_count() == 0; }
  /// Pairs sorted lexicographically by (from, to).
  std::vector<Pair> pairs() const;
  std::span<const std::uint64_t> rows() const { return rows_; }
  /// Inverse of from_id. Requires n*n <= 64.
  std::uint64_t id() const;

  /// Renders "{(a,b), (b,c)}" with element names.
  std::string to_string() const;

  friend bool operator==(const DyadicRelation& a, const DyadicRelation& b) {
    return *a.domain_ == *b.domain_ && a.rows_ == b.rows_;
  }

 private:
  std::shared_ptr<const Domain> domain_;
  std::vector<std::uint64_t> rows_;
};

/// Which conclusion the inEuclidean checker uses. Strong: siblings of any
/// element are unrelated in both directions. Weak: no two siblings are
/// related in both directions. Strong is the engine default.
enum class InEuclideanReading { Strong, Weak };

std::string_view to_string(InEuclideanReading reading);

/// Eleven booleans, one per ConstraintType, laid out like a combination code.
using PropertyMask = ConstraintSet;

bool check_property(const DyadicRelation& rel, ConstraintType t,
                    InEuclideanReading reading = InEuclideanReading::Strong);
PropertyMask property_mask(const DyadicRelation& rel,
                           InEuclideanReading reading = InEuclideanReading::Strong);
bool is_universal(const DyadicRelation& rel);

/// Pairs demonstrating a violation: `present` pairs are in R, `missing`
/// pairs are required by the property but absent.
struct Witness {
  std::vector<Pair> present;
  std::vector<Pair> missing;
  friend bool operator==(const Witness&, const Witness&) = default;
};

/// A witness of `rel` violating `t`, or nullopt if `rel` satisfies it.
std::optional<Witness> find_violation(const DyadicRelation& rel, ConstraintType t,
                                      InEuclideanReading reading = InEuclideanReading::Strong);

std::string to_string(const Witness& w, const Domain& domain);

struct NamedPair {
  std::string from;
  std::string to;
  friend bool operator==(const NamedPair&, const NamedPair&) = default;
};

struct Transaction {
  std::vector<NamedPair> inserts;
  std::vector<NamedPair> deletes;
};

struct Violation {
  ConstraintType type;
  Witness witness;
};

struct ViolationReport {
  std::vector<Violation> violations;
  bool empty() const { return violations.empty(); }
  std::string to_string(const Domain& domain) const;
};

struct TransactionResult {
  /// The committed relation, or the unchanged input when rejected.
  DyadicRelation relation;
  ViolationReport report;
  bool committed() const { return report.empty(); }
};

enum class Validation { Incremental, Full };

/// Applies deletes then inserts and re-validates `enforced`. Equivalence is
/// validated through its reflexive, symmetric and transitive parts.
/// Incremental validation assumes `rel` already satisfies `enforced`; it
/// then reports exactly what Full validation reports.
/// Throws UnknownElement and InvalidTransaction (a pair both inserted and
/// deleted, or an insert of a present / delete of an absent pair is allowed
/// and is a no-op).
TransactionResult apply_transaction(const DyadicRelation& rel, const Transaction& tx,
                                    ConstraintSet enforced,
                                    Validation mode = Validation::Incremental);

/// Adds an isolated element to the domain. Only reflexivity, connectivity
/// and equivalence can break.
TransactionResult grow_domain(const DyadicRelation& rel, const std::string& element,
                              ConstraintSet enforced);

/// Relation instance document: {"elements": [...], "pairs": [["a","b"], ...]}.
/// Throws MalformedRelation on duplicate pairs or bad shape, UnknownElement on
/// a pair endpoint outside `elements`.
DyadicRelation parse_relation_document(std::string_view text);
std::string relation_document(const DyadicRelation& rel);

}  // namespace drc

#endif  // DRC_RELATION_HPP_
