// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include "drc/engine.hpp"

#include "drc/errors.hpp"

namespace drc {

namespace {

std::string name_of(ConstraintType t) { return std::string(long_name(t)); }

/// Counts the lookups of one operation.
class Lookups {
 public:
  explicit Lookups(const Catalog& catalog) : catalog_(catalog) {}
  LookupResult operator()(ConstraintSet s) {
    ++count_;
    return catalog_.lookup(encode(s));
  }
  std::uint64_t count() const { return count_; }

 private:
  const Catalog& catalog_;
  std::uint64_t count_ = 0;
};

Outcome make(OutcomeStatus status, std::string message, const Engine& engine, const Lookups& lk,
             SchemaState state) {
  return Outcome{status, std::move(message), engine.backend(), lk.count(), std::move(state), {}};
}

void require_no_pending(const SchemaState& state) {
  if (state.pending)
    throw PendingConfirmationConflict("relation " + state.name + " has a pending universality confirmation for " +
                                      name_of(state.pending->type));
}

}  // namespace

DyadicRelation SchemaState::instance() const {
  if (const auto* v = std::get_if<ViewMarker>(&relation)) return v->computed();
  return std::get<DyadicRelation>(relation);
}

std::shared_ptr<const Domain> SchemaState::domain_ptr() const {
  if (const auto* v = std::get_if<ViewMarker>(&relation)) return v->domain;
  return std::get<DyadicRelation>(relation).domain_ptr();
}

const Domain& SchemaState::domain() const { return *domain_ptr(); }

ConstraintSet SchemaState::enforced() const { return is_view() ? ConstraintSet{} : checked - redundant; }

SchemaState make_schema(std::string name, std::shared_ptr<const Domain> domain, std::string backend) {
  SchemaState s{std::move(name), "S", DyadicRelation(std::move(domain)), {}, {}, std::move(backend), std::nullopt};
  return s;
}

std::string_view to_string(OutcomeStatus status) {
  switch (status) {
    case OutcomeStatus::Accepted: return "Accepted";
    case OutcomeStatus::Rejected: return "Rejected";
    case OutcomeStatus::NeedsConfirmation: return "NeedsConfirmation";
  }
  return "?";
}

std::string render_message(std::string_view template_id, ConstraintType c, std::string_view relation,
                           std::string_view set_name, std::string_view notes) {
  const std::string cn = name_of(c);
  const std::string r(relation), s(set_name), n(notes);
  if (template_id == kRemoveImplied)
    return cn + " cannot be removed as it is implied by other constraints, according to " + n;
  if (template_id == kAddIncoherent)
    return cn + " cannot be added, as, according to " + n + ", the constraint set of " + r +
           " would become incoherent!";
  if (template_id == kAddImpliesNegation)
    return cn + " cannot be added, as the constraint set of " + r + " implies ¬" + cn +
           ", so it would become incoherent!";
  if (template_id == kAddUniversal)
    return "Adding " + cn + " to the current constraint set of " + r + " would make it universal, according to " + n +
           "\nAre you sure you want to drop " + r + " and replace it with a view having same name and computing " + s +
           " × " + s + "?";
  if (template_id == kAddUnsatisfied)
    return cn + " cannot be added to the constraint set of " + r + ", as its current instance does not satisfy it!";
  throw UnknownTemplate("unknown message template '" + std::string(template_id) + "'");
}

std::string render_message(const Catalog& catalog, std::string_view template_id, int x, ConstraintType c,
                           std::string_view relation, std::string_view set_name) {
  std::string notes;
  if (template_id == kAddIncoherent || template_id == kRemoveImplied || template_id == kAddUniversal) {
    const auto found = catalog.peek(x);
    std::string id = found.record ? found.record->notes : "";
    if (template_id == kRemoveImplied) {
      if (const auto* row = found.row_for(c)) id = row->notes;
    } else if (template_id == kAddUniversal) {
      if (const auto* row = found.universal_row()) id = row->notes;
    }
    notes = catalog.notes_text(id);
  }
  return render_message(template_id, c, relation, set_name, notes);
}

Engine::Engine(std::shared_ptr<const Catalog> catalog) : catalog_(std::move(catalog)) {}

Outcome Engine::add_constraint(const SchemaState& state, ConstraintType c) const {
  require_no_pending(state);
  if (state.checked.contains(c))
    throw AlreadyMember(name_of(c) + " is already in the constraint set of " + state.name);
  Lookups lookup(*catalog_);
  const ConstraintSet target = state.checked.with(c);
  const auto first = lookup(target);

  if (first.missing())
    return make(OutcomeStatus::Rejected,
                render_message(kAddImpliesNegation, c, state.name, state.set_name, ""), *this, lookup, state);
  if (!first.record->coherent)
    return make(OutcomeStatus::Rejected,
                render_message(kAddIncoherent, c, state.name, state.set_name,
                               catalog_->notes_text(first.record->notes)),
                *this, lookup, state);

  const ConstraintSet derived = first.redundant_types() - target;
  const ConstraintSet core = state.checked - state.redundant;
  const ConstraintSet grown = core.with(c);

  // Members of the grown core that the rest of it implies become redundant,
  // one at a time, each demotion re-checked against the smaller core.
  ConstraintSet demoted;
  {
    const auto rows = encode(grown) == encode(target) ? first : lookup(grown);
    ConstraintSet current = grown;
    bool fresh = true;
    for (auto m : (rows.redundant_types() & grown).members()) {
      if (!fresh && !lookup(current).redundant_types().contains(m)) continue;
      current = current.without(m);
      demoted = demoted.with(m);
      fresh = false;
    }
  }

  SchemaState next = state;
  next.checked = target | derived;
  next.redundant = state.redundant | derived | demoted;
  next.backend = backend();

  if (const auto* row = first.universal_row()) {
    next = state;
    next.pending = PendingUniversal{c, target | derived, state.redundant | derived | demoted, row->notes};
    return make(OutcomeStatus::NeedsConfirmation,
                render_message(kAddUniversal, c, state.name, state.set_name, catalog_->notes_text(row->notes)),
                *this, lookup, std::move(next));
  }

  const auto instance = state.instance();
  ViolationReport violations;
  for (auto t : derived.with(c).members()) {
    if (auto w = find_violation(instance, t)) violations.violations.push_back({t, *w});
  }
  if (!violations.empty()) {
    auto o = make(OutcomeStatus::Rejected, render_message(kAddUnsatisfied, c, state.name, state.set_name, ""),
                  *this, lookup, state);
    o.violations = std::move(violations);
    return o;
  }
  return make(OutcomeStatus::Accepted,
              name_of(c) + " added to the constraint set of " + state.name, *this, lookup, std::move(next));
}

Outcome Engine::remove_constraint(const SchemaState& state, ConstraintType c) const {
  require_no_pending(state);
  if (!state.checked.contains(c))
    throw NotAMember(name_of(c) + " is not in the constraint set of " + state.name);
  Lookups lookup(*catalog_);
  const ConstraintSet core = state.checked - state.redundant;

  if (state.redundant.contains(c)) {
    const auto here = lookup(state.checked);
    const RedundancyRecord* row = here.row_for(c);
    std::optional<LookupResult> below;
    if (!row && !core.empty()) {
      below = lookup(core);
      row = below->row_for(c);
    }
    const std::string id = row ? row->notes : (here.record ? here.record->notes : "");
    return make(OutcomeStatus::Rejected,
                render_message(kRemoveImplied, c, state.name, state.set_name, catalog_->notes_text(id)), *this,
                lookup, state);
  }

  SchemaState next = state;
  next.backend = backend();
  const ConstraintSet rest = core.without(c);
  if (rest.empty()) {
    next.checked = {};
    next.redundant = {};
  } else {
    const auto rows = lookup(rest);
    next.redundant = state.redundant & rows.redundant_types();
    next.checked = rest | next.redundant;
  }
  return make(OutcomeStatus::Accepted, name_of(c) + " removed from the constraint set of " + state.name, *this,
              lookup, std::move(next));
}

Outcome Engine::confirm_universal(const SchemaState& state, bool yes) const {
  if (!state.pending) throw NoPendingConfirmation("relation " + state.name + " has no pending confirmation");
  Lookups none(*catalog_);
  const auto pending = *state.pending;
  SchemaState next = state;
  next.pending.reset();
  if (!yes)
    return make(OutcomeStatus::Rejected,
                name_of(pending.type) + " was not added to the constraint set of " + state.name, *this, none,
                std::move(next));
  next.relation = ViewMarker{state.domain_ptr()};
  next.checked = pending.checked;
  next.redundant = pending.redundant;
  next.backend = backend();
  return make(OutcomeStatus::Accepted,
              state.name + " replaced by a view computing " + state.set_name + " × " + state.set_name, *this,
              none, std::move(next));
}

Outcome Engine::apply_pairs(const SchemaState& state, const Transaction& tx) const {
  require_no_pending(state);
  if (state.is_view()) throw ViewMutation(state.name + " is a view computing " + state.set_name + " × " + state.set_name);
  Lookups none(*catalog_);
  auto result = apply_transaction(std::get<DyadicRelation>(state.relation), tx, state.enforced());
  if (!result.committed()) {
    auto o = make(OutcomeStatus::Rejected, result.report.to_string(state.domain()), *this, none, state);
    o.violations = std::move(result.report);
    return o;
  }
  SchemaState next = state;
  next.relation = std::move(result.relation);
  return make(OutcomeStatus::Accepted, "transaction committed on " + state.name, *this, none, std::move(next));
}

}  // namespace drc
