// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DRC_ENGINE_HPP_
#define DRC_ENGINE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "drc/constraint.hpp"
#include "drc/relation.hpp"
#include "drc/rulebase.hpp"

namespace drc {

/// Stand-in for a relation dropped in favour of the view S x S.
struct ViewMarker {
  std::shared_ptr<const Domain> domain;
  DyadicRelation computed() const { return DyadicRelation::universal(domain); }
  friend bool operator==(const ViewMarker& a, const ViewMarker& b) { return *a.domain == *b.domain; }
};

/// A universality confirmation waiting for an answer.
struct PendingUniversal {
  ConstraintType type;
  ConstraintSet checked;    ///< state after a yes
  ConstraintSet redundant;
  std::string notes;        ///< universality corollary id
  friend bool operator==(const PendingUniversal&, const PendingUniversal&) = default;
};

struct SchemaState {
  std::string name;
  std::string set_name = "S";  ///< carrier set, used in the view question
  std::variant<DyadicRelation, ViewMarker> relation;
  ConstraintSet checked;
  /// Checked types held because others imply them; never enforced.
  ConstraintSet redundant;
  std::string backend = "rulebase";
  std::optional<PendingUniversal> pending;

  bool is_view() const { return std::holds_alternative<ViewMarker>(relation); }
  /// Stored pairs, or S x S for a view.
  DyadicRelation instance() const;
  const Domain& domain() const;
  std::shared_ptr<const Domain> domain_ptr() const;
  /// checked - redundant; empty for a view.
  ConstraintSet enforced() const;

  friend bool operator==(const SchemaState&, const SchemaState&) = default;
};

/// Empty constraint set over an empty instance.
SchemaState make_schema(std::string name, std::shared_ptr<const Domain> domain, std::string backend = "rulebase");

enum class OutcomeStatus { Accepted, Rejected, NeedsConfirmation };
std::string_view to_string(OutcomeStatus status);

struct Outcome {
  OutcomeStatus status = OutcomeStatus::Accepted;
  std::string message;
  std::string backend;       ///< catalog that decided
  std::uint64_t lookups = 0; ///< catalog lookups this operation made
  SchemaState state;         ///< unchanged input unless Accepted or pending
  ViolationReport violations;
};

// Message templates. The ids are the names accepted by render_message.
inline constexpr std::string_view kRemoveImplied = "remove-implied";
inline constexpr std::string_view kAddIncoherent = "add-incoherent";
inline constexpr std::string_view kAddImpliesNegation = "add-implies-negation";
inline constexpr std::string_view kAddUniversal = "add-universal";
inline constexpr std::string_view kAddUnsatisfied = "add-unsatisfied";

/// Fills a template. `notes` is the rendered "id. description" text and is
/// ignored by templates that do not cite a corollary. Throws UnknownTemplate.
std::string render_message(std::string_view template_id, ConstraintType c, std::string_view relation,
                           std::string_view set_name, std::string_view notes);

/// Same, with Notes taken from combination x of `catalog`: the coherence
/// Notes for add-incoherent, the row for c (else the coherence Notes) for
/// remove-implied, the Universal row for add-universal.
std::string render_message(const Catalog& catalog, std::string_view template_id, int x, ConstraintType c,
                           std::string_view relation, std::string_view set_name = "S");

/// Validated add/remove of constraint types against a catalog. Every
/// operation is a pure function of its input state.
class Engine {
 public:
  explicit Engine(std::shared_ptr<const Catalog> catalog);

  const Catalog& catalog() const { return *catalog_; }
  const std::string& backend() const { return catalog_->backend(); }

  /// Throws AlreadyMember, PendingConfirmationConflict.
  Outcome add_constraint(const SchemaState& state, ConstraintType c) const;
  /// Throws NotAMember, PendingConfirmationConflict.
  Outcome remove_constraint(const SchemaState& state, ConstraintType c) const;
  /// Throws NoPendingConfirmation.
  Outcome confirm_universal(const SchemaState& state, bool yes) const;
  /// Pair edits validated against the enforced set. Throws ViewMutation,
  /// PendingConfirmationConflict, UnknownElement, InvalidTransaction.
  Outcome apply_pairs(const SchemaState& state, const Transaction& tx) const;

 private:
  std::shared_ptr<const Catalog> catalog_;
};

}  // namespace drc

#endif  // DRC_ENGINE_HPP_
