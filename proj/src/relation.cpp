// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include "drc/relation.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "drc/detail/kernel.hpp"
#include "drc/errors.hpp"

namespace drc {

// ---------------------------------------------------------------------------
// Domain

Domain::Domain(std::vector<std::string> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw MalformedRelation("a domain needs at least one element");
  if (size() > kMaxDomainSize)
    throw MalformedRelation("domain of " + std::to_string(size()) + " elements exceeds the limit of " +
                            std::to_string(kMaxDomainSize));
  for (int i = 0; i < size(); ++i) {
    if (!index_.emplace(elements_[i], i).second)
      throw MalformedRelation("duplicate domain element '" + elements_[i] + "'");
  }
}

Domain Domain::of_size(int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i)
    names.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "e" + std::to_string(i));
  return Domain(std::move(names));
}

std::optional<int> Domain::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Domain::require_index(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw UnknownElement("'" + std::string(name) + "' is not an element of the domain");
  return *i;
}

// ---------------------------------------------------------------------------
// DyadicRelation

DyadicRelation::DyadicRelation(std::shared_ptr<const Domain> domain)
    : domain_(std::move(domain)), rows_(domain_->size(), 0) {}

DyadicRelation DyadicRelation::from_pairs(std::shared_ptr<const Domain> domain,
                                          std::span<const Pair> pairs) {
  DyadicRelation rel(std::move(domain));
  for (const auto& p : pairs) {
    if (p.from < 0 || p.to < 0 || p.from >= rel.n() || p.to >= rel.n())
      throw MalformedRelation("pair index outside the domain");
    if (!rel.insert(p.from, p.to))
      throw MalformedRelation("duplicate pair (" + rel.domain().element(p.from) + "," +
                              rel.domain().element(p.to) + ")");
  }
  return rel;
}

DyadicRelation DyadicRelation::universal(std::shared_ptr<const Domain> domain) {
  DyadicRelation rel(std::move(domain));
  const auto full = detail::full_row<std::uint64_t>(rel.n());
  std::fill(rel.rows_.begin(), rel.rows_.end(), full);
  return rel;
}

DyadicRelation DyadicRelation::from_id(std::shared_ptr<const Domain> domain, std::uint64_t id) {
  DyadicRelation rel(std::move(domain));
  const int n = rel.n();
  if (n * n > 64) throw SizeTooLarge("relation ids need n*n <= 64");
  const auto row_mask = detail::full_row<std::uint64_t>(n);
  for (int i = 0; i < n; ++i) rel.rows_[i] = (id >> (i * n)) & row_mask;
  return rel;
}

std::uint64_t DyadicRelation::id() const {
  const int n = this->n();
  if (n * n > 64) throw SizeTooLarge("relation ids need n*n <= 64");
  std::uint64_t id = 0;
  for (int i = 0; i < n; ++i) id |= rows_[i] << (i * n);
  return id;
}

bool DyadicRelation::insert(int from, int to) {
  const auto bit = std::uint64_t{1} << to;
  if (rows_.at(from) & bit) return false;
  rows_[from] |= bit;
  return true;
}

bool DyadicRelation::erase(int from, int to) {
  const auto bit = std::uint64_t{1} << to;
  if (!(rows_.at(from) & bit)) return false;
  rows_[from] &= ~bit;
  return true;
}

std::size_t DyadicRelation::pair_count() const {
  std::size_t total = 0;
  for (auto r : rows_) total += std::popcount(r);
  return total;
}

std::vector<Pair> DyadicRelation::pairs() const {
  std::vector<Pair> out;
  for (int i = 0; i < n(); ++i)
    for (auto m = rows_[i]; m; m &= m - 1) out.push_back({i, std::countr_zero(m)});
  return out;
}

std::string DyadicRelation::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& p : pairs()) {
    if (!first) out += ", ";
    first = false;
    out += "(" + domain().element(p.from) + "," + domain().element(p.to) + ")";
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Checkers

std::string_view to_string(InEuclideanReading reading) {
  return reading == InEuclideanReading::Strong ? "strong" : "weak";
}

namespace {

std::vector<std::uint64_t> columns(const DyadicRelation& rel) {
  std::vector<std::uint64_t> cols(rel.n());
  detail::transpose(rel.rows().data(), cols.data(), rel.n());
  return cols;
}

}  // namespace

PropertyMask property_mask(const DyadicRelation& rel, InEuclideanReading reading) {
  auto cols = columns(rel);
  auto ext = detail::extended_mask(rel.rows().data(), cols.data(), rel.n());
  return ConstraintSet::from_code(detail::project_mask(ext, reading == InEuclideanReading::Weak));
}

bool check_property(const DyadicRelation& rel, ConstraintType t, InEuclideanReading reading) {
  return property_mask(rel, reading).contains(t);
}

bool is_universal(const DyadicRelation& rel) {
  const auto n = static_cast<std::size_t>(rel.n());
  return rel.pair_count() == n * n;
}

// find_violation scans the definitions element by element. It deliberately
// does not share code with the bitset kernel so each can check the other.
namespace {

using CT = ConstraintType;

std::optional<Witness> reflexive_violation(const DyadicRelation& r) {
  for (int x = 0; x < r.n(); ++x)
    if (!r.contains(x, x)) return Witness{{}, {{x, x}}};
  return std::nullopt;
}

std::optional<Witness> irreflexive_violation(const DyadicRelation& r) {
  for (int x = 0; x < r.n(); ++x)
    if (r.contains(x, x)) return Witness{{{x, x}}, {}};
  return std::nullopt;
}

std::optional<Witness> symmetric_violation(const DyadicRelation& r) {
  for (int x = 0; x < r.n(); ++x)
    for (int y = 0; y < r.n(); ++y)
      if (r.contains(x, y) && !r.contains(y, x)) return Witness{{{x, y}}, {{y, x}}};
  return std::nullopt;
}

std::optional<Witness> asymmetric_violation(const DyadicRelation& r) {
  for (int x = 0; x < r.n(); ++x)
    for (int y = 0; y < r.n(); ++y)
      if (r.contains(x, y) && r.contains(y, x)) {
        if (x == y) return Witness{{{x, x}}, {}};
        return Witness{{{x, y}, {y, x}}, {}};
      }
  return std::nullopt;
}

std::optional<Witness> transitive_violation(const DyadicRelation& r) {
  const int n = r.n();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n && r.contains(x, y); ++z)
        if (r.contains(y, z) && !r.contains(x, z)) return Witness{{{x, y}, {y, z}}, {{x, z}}};
  return std::nullopt;
}

std::optional<Witness> intransitive_violation(const DyadicRelation& r) {
  const int n = r.n();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n && r.contains(x, y); ++z)
        if (r.contains(y, z) && r.contains(x, z)) {
          std::set<Pair> ps{{x, y}, {y, z}, {x, z}};
          return Witness{{ps.begin(), ps.end()}, {}};
        }
  return std::nullopt;
}

std::optional<Witness> euclidean_violation(const DyadicRelation& r) {
  const int n = r.n();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        if (r.contains(x, y) && r.contains(x, z) && !r.contains(y, z)) {
          std::set<Pair> ps{{x, y}, {x, z}};
          return Witness{{ps.begin(), ps.end()}, {{y, z}}};
        }
        if (r.contains(y, x) && r.contains(z, x) && !r.contains(y, z)) {
          std::set<Pair> ps{{y, x}, {z, x}};
          return Witness{{ps.begin(), ps.end()}, {{y, z}}};
        }
      }
  return std::nullopt;
}

std::optional<Witness> ineuclidean_violation(const DyadicRelation& r, InEuclideanReading reading) {
  const int n = r.n();
  auto siblings_related = [&](int y, int z) {
    return reading == InEuclideanReading::Strong ? (r.contains(y, z) || r.contains(z, y))
                                                 : (r.contains(y, z) && r.contains(z, y));
  };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        bool co_successors = r.contains(x, y) && r.contains(x, z);
        bool co_predecessors = r.contains(y, x) && r.contains(z, x);
        if ((co_successors || co_predecessors) && siblings_related(y, z)) {
          std::set<Pair> ps;
          if (co_successors) ps.insert({{x, y}, {x, z}});
          else ps.insert({{y, x}, {z, x}});
          if (r.contains(y, z)) ps.insert({y, z});
          if (r.contains(z, y)) ps.insert({z, y});
          return Witness{{ps.begin(), ps.end()}, {}};
        }
      }
  return std::nullopt;
}

std::optional<Witness> connected_violation(const DyadicRelation& r) {
  for (int x = 0; x < r.n(); ++x)
    for (int y = x + 1; y < r.n(); ++y)
      if (!r.contains(x, y) && !r.contains(y, x)) return Witness{{}, {{x, y}, {y, x}}};
  return std::nullopt;
}

/// A directed cycle as a list of edges, found by depth-first search.
std::optional<Witness> acyclic_violation(const DyadicRelation& r) {
  const int n = r.n();
  std::vector<int> state(n, 0), parent(n, -1);
  for (int root = 0; root < n; ++root) {
    if (state[root]) continue;
    std::vector<std::pair<int, int>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == n) {
        state[v] = 2;
        stack.pop_back();
        continue;
      }
      int w = next++;
      if (!r.contains(v, w)) continue;
      if (state[w] == 1) {
        std::vector<Pair> cycle{{v, w}};
        for (int u = v; u != w; u = parent[u]) cycle.push_back({parent[u], u});
        std::sort(cycle.begin(), cycle.end());
        return Witness{cycle, {}};
      }
      if (state[w] == 0) {
        state[w] = 1;
        parent[w] = v;
        stack.push_back({w, 0});
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Witness> find_violation(const DyadicRelation& rel, ConstraintType t,
                                      InEuclideanReading reading) {
  switch (t) {
    case CT::Reflexive: return reflexive_violation(rel);
    case CT::Irreflexive: return irreflexive_violation(rel);
    case CT::Symmetric: return symmetric_violation(rel);
    case CT::Asymmetric: return asymmetric_violation(rel);
    case CT::Transitive: return transitive_violation(rel);
    case CT::Intransitive: return intransitive_violation(rel);
    case CT::Euclidean: return euclidean_violation(rel);
    case CT::InEuclidean: return ineuclidean_violation(rel, reading);
    case CT::Equivalence:
      if (auto w = reflexive_violation(rel)) return w;
      if (auto w = symmetric_violation(rel)) return w;
      return transitive_violation(rel);
    case CT::Acyclic: return acyclic_violation(rel);
    case CT::Connected: return connected_violation(rel);
  }
  return std::nullopt;
}

std::string to_string(const Witness& w, const Domain& domain) {
  auto render = [&domain](const std::vector<Pair>& ps) {
    std::string out;
    for (const auto& p : ps) {
      if (!out.empty()) out += ", ";
      out += "(" + domain.element(p.from) + "," + domain.element(p.to) + ")";
    }
    return out;
  };
  std::string out;
  if (!w.present.empty()) out += "present " + render(w.present);
  if (!w.missing.empty()) out += std::string(out.empty() ? "" : "; ") + "missing " + render(w.missing);
  return out;
}

std::string ViolationReport::to_string(const Domain& domain) const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "\n";
    out += std::string(long_name(v.type)) + " violated: " + drc::to_string(v.witness, domain);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transactions

namespace {

/// Equivalence is validated through its parts.
ConstraintSet expand_validators(ConstraintSet enforced) {
  if (enforced.contains(CT::Equivalence))
    enforced = enforced | ConstraintSet{CT::Reflexive, CT::Symmetric, CT::Transitive};
  return enforced.without(CT::Equivalence);
}

bool reaches(const DyadicRelation& r, int from, int target) {
  std::uint64_t seen = std::uint64_t{1} << from;
  std::uint64_t frontier = seen;
  const auto rows = r.rows();
  while (frontier) {
    std::uint64_t next = 0;
    for (auto m = frontier; m; m &= m - 1) next |= rows[std::countr_zero(m)];
    if (next & (std::uint64_t{1} << target)) return true;
    frontier = next & ~seen;
    seen |= next;
  }
  return false;
}

/// Checks type `t` on `after` by looking only at the changed pairs.
bool incremental_ok(ConstraintType t, const DyadicRelation& after, std::span<const Pair> inserted,
                    std::span<const Pair> deleted, const std::vector<std::uint64_t>& cols) {
  const auto rows = after.rows();
  switch (t) {
    case CT::Reflexive:
      return std::none_of(deleted.begin(), deleted.end(), [](const Pair& p) { return p.from == p.to; });
    case CT::Irreflexive:
      return std::none_of(inserted.begin(), inserted.end(), [](const Pair& p) { return p.from == p.to; });
    case CT::Symmetric:
      for (const auto& p : inserted)
        if (!after.contains(p.to, p.from)) return false;
      for (const auto& p : deleted)
        if (after.contains(p.to, p.from)) return false;
      return true;
    case CT::Asymmetric:
      for (const auto& p : inserted)
        if (after.contains(p.to, p.from)) return false;
      return true;
    case CT::Connected:
      for (const auto& p : deleted)
        if (p.from != p.to && !after.contains(p.to, p.from)) return false;
      return true;
    case CT::Transitive:
      for (const auto& [a, b] : inserted) {
        if (cols[a] & ~cols[b]) return false;   // xRa ∧ aRb → xRb
        if (rows[b] & ~rows[a]) return false;   // aRb ∧ bRz → aRz
      }
      for (const auto& [a, b] : deleted)
        if (rows[a] & cols[b]) return false;    // aRy ∧ yRb still present
      return true;
    case CT::Intransitive:
      for (const auto& [a, b] : inserted) {
        if (rows[b] & rows[a]) return false;
        if (cols[a] & cols[b]) return false;
        if (rows[a] & cols[b]) return false;
      }
      return true;
    case CT::InEuclidean:
      for (const auto& [a, b] : inserted) {
        if (rows[a] & (rows[b] | cols[b])) return false;  // b against a's other successors
        if (cols[b] & (rows[a] | cols[a])) return false;  // a against b's other predecessors
        if (cols[a] & cols[b]) return false;              // a, b share a predecessor
        if (rows[a] & rows[b]) return false;              // a, b share a successor
      }
      return true;
    case CT::Acyclic:
      for (const auto& [a, b] : inserted)
        if (a == b || reaches(after, b, a)) return false;
      return true;
    case CT::Euclidean:
      // Euclidean iff symmetric and transitive.
      return incremental_ok(CT::Symmetric, after, inserted, deleted, cols) &&
             incremental_ok(CT::Transitive, after, inserted, deleted, cols);
    case CT::Equivalence:
      break;
  }
  return true;
}

std::vector<Pair> resolve(const Domain& d, const std::vector<NamedPair>& named) {
  std::vector<Pair> out;
  out.reserve(named.size());
  for (const auto& p : named) out.push_back({d.require_index(p.from), d.require_index(p.to)});
  return out;
}

}  // namespace

TransactionResult apply_transaction(const DyadicRelation& rel, const Transaction& tx,
                                    ConstraintSet enforced, Validation mode) {
  auto inserts = resolve(rel.domain(), tx.inserts);
  auto deletes = resolve(rel.domain(), tx.deletes);
  for (const auto& p : inserts)
    if (std::find(deletes.begin(), deletes.end(), p) != deletes.end())
      throw InvalidTransaction("pair (" + rel.domain().element(p.from) + "," + rel.domain().element(p.to) +
                               ") is both inserted and deleted");

  DyadicRelation after = rel;
  std::vector<Pair> deleted, inserted;
  for (const auto& p : deletes)
    if (after.erase(p.from, p.to)) deleted.push_back(p);
  for (const auto& p : inserts)
    if (after.insert(p.from, p.to)) inserted.push_back(p);

  ViolationReport report;
  const auto validators = expand_validators(enforced);
  std::vector<std::uint64_t> cols;
  if (mode == Validation::Incremental) cols = columns(after);
  for (auto t : validators.members()) {
    bool ok = mode == Validation::Full ? !find_violation(after, t).has_value()
                                       : incremental_ok(t, after, inserted, deleted, cols);
    if (!ok) report.violations.push_back({t, find_violation(after, t).value_or(Witness{})});
  }
  if (!report.empty()) return {rel, std::move(report)};
  return {std::move(after), {}};
}

TransactionResult grow_domain(const DyadicRelation& rel, const std::string& element,
                              ConstraintSet enforced) {
  auto names = rel.domain().elements();
  names.push_back(element);
  auto domain = std::make_shared<const Domain>(std::move(names));
  DyadicRelation after(domain);
  for (const auto& p : rel.pairs()) after.insert(p.from, p.to);

  ViolationReport report;
  for (auto t : expand_validators(enforced).members())
    if (auto w = find_violation(after, t)) report.violations.push_back({t, *w});
  if (!report.empty()) return {rel, std::move(report)};
  return {std::move(after), {}};
}

}  // namespace drc
