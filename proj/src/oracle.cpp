// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include "drc/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "drc/detail/kernel.hpp"
#include "drc/errors.hpp"

namespace drc {

namespace {

using Row = std::uint32_t;
constexpr int kMaxIndexedSize = 6;

int worker_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(lo, hi, chunk) over [first, last) split into equal chunks,
/// handing chunks to workers through an atomic cursor.
template <class Body>
void parallel_chunks(std::uint64_t first, std::uint64_t last, int chunks, int threads, Body&& body) {
  const std::uint64_t span = last - first;
  const std::uint64_t step = (span + chunks - 1) / chunks;
  std::atomic<int> next{0};
  auto work = [&] {
    for (int c = next++; c < chunks; c = next++) {
      const std::uint64_t lo = first + step * c;
      const std::uint64_t hi = std::min(last, lo + step);
      if (lo < hi) body(lo, hi, c);
    }
  };
  threads = std::min(threads, chunks);
  if (threads <= 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

void unpack(std::uint64_t id, int n, Row* rows, Row* cols) {
  const Row full = detail::full_row<Row>(n);
  for (int i = 0; i < n; ++i) rows[i] = static_cast<Row>(id >> (i * n)) & full;
  detail::transpose(rows, cols, n);
}

bool fewer_pairs(std::uint64_t a, std::uint64_t b) {
  const int pa = std::popcount(a), pb = std::popcount(b);
  return pa != pb ? pa < pb : a < b;
}

void merge_into(MaskRecord& into, const MaskRecord& from) {
  if (!from.achieved()) return;
  if (!into.achieved()) {
    into = from;
    return;
  }
  into.count += from.count;
  into.witness = std::min(into.witness, from.witness);
  if (fewer_pairs(from.minimal, into.minimal)) into.minimal = from.minimal;
  if (from.non_universal && (!into.non_universal || *from.non_universal < *into.non_universal))
    into.non_universal = from.non_universal;
  into.has_universal_model = into.has_universal_model || from.has_universal_model;
}

void check_x(int x) {
  if (x < 1 || x > kMaxCombination)
    throw OutOfRange("combination code " + std::to_string(x) + " outside 1..2047");
}

}  // namespace

// ---------------------------------------------------------------------------
// AchievableMaskIndex

AchievableMaskIndex::AchievableMaskIndex(int n, ExtendedTable extended)
    : n_(n),
      domain_(std::make_shared<const Domain>(Domain::of_size(n))),
      extended_(std::move(extended)),
      strong_(project(extended_, false)),
      weak_(project(extended_, true)) {}

std::uint64_t AchievableMaskIndex::relation_count() const {
  return (std::uint64_t{1} << (n_ * n_)) - 1;
}

AchievableMaskIndex::View AchievableMaskIndex::project(const ExtendedTable& ext, bool weak) {
  View v;
  for (unsigned e = 0; e < ext.size(); ++e)
    merge_into(v.records[detail::project_mask(static_cast<std::uint16_t>(e), weak)], ext[e]);
  for (int x = 0; x <= kMaxCombination; ++x) {
    std::uint16_t meet = kMaxCombination;
    bool any = false, universal_only = true;
    for (int m = 0; m <= kMaxCombination; ++m) {
      const auto& r = v.records[m];
      if (!r.achieved() || (m & x) != x) continue;
      any = true;
      meet &= static_cast<std::uint16_t>(m);
      if (r.has_non_universal_model()) universal_only = false;
    }
    if (any) v.implied[x] = ConstraintSet::from_code(meet);
    v.universal_only[x] = any && universal_only;
  }
  return v;
}

const MaskRecord& AchievableMaskIndex::record(PropertyMask mask, InEuclideanReading reading) const {
  return view(reading).records[mask.code()];
}

std::vector<PropertyMask> AchievableMaskIndex::masks(InEuclideanReading reading) const {
  std::vector<PropertyMask> out;
  const auto& v = view(reading);
  for (int m = 0; m <= kMaxCombination; ++m)
    if (v.records[m].achieved()) out.push_back(ConstraintSet::from_code(m));
  return out;
}

bool AchievableMaskIndex::coherent(int x, InEuclideanReading reading) const {
  return view(reading).implied[x].has_value();
}

std::optional<PropertyMask> AchievableMaskIndex::implied(int x, InEuclideanReading reading) const {
  return view(reading).implied[x];
}

bool AchievableMaskIndex::universal_only(int x, InEuclideanReading reading) const {
  return view(reading).universal_only[x];
}

AchievableMaskIndex build_index(int n, const IndexOptions& options) {
  if (n < 2) throw OutOfRange("index size must be at least 2");
  if (n > kMaxIndexedSize || (n == kMaxIndexedSize && !options.allow_size_six))
    throw SizeTooLarge("index size " + std::to_string(n) + " exceeds the supported maximum of " +
                       std::to_string(options.allow_size_six ? kMaxIndexedSize : 5));

  const std::uint64_t total = std::uint64_t{1} << (n * n);
  const std::uint64_t universal = total - 1;
  const int chunks = static_cast<int>(std::min<std::uint64_t>(total / 2, 256));
  std::vector<AchievableMaskIndex::ExtendedTable> partial(chunks);

  parallel_chunks(1, total, chunks, worker_count(options.threads),
                  [&](std::uint64_t lo, std::uint64_t hi, int chunk) {
                    auto& table = partial[chunk];
                    std::array<int, 4096> minimal_pairs{};
                    Row rows[kMaxIndexedSize], cols[kMaxIndexedSize];
                    for (std::uint64_t id = lo; id < hi; ++id) {
                      unpack(id, n, rows, cols);
                      const auto ext = detail::extended_mask(rows, cols, n);
                      auto& r = table[ext];
                      const int pairs = std::popcount(id);
                      if (r.count++ == 0) {
                        r.witness = r.minimal = id;
                        minimal_pairs[ext] = pairs;
                      } else if (pairs < minimal_pairs[ext]) {
                        r.minimal = id;
                        minimal_pairs[ext] = pairs;
                      }
                      if (id == universal)
                        r.has_universal_model = true;
                      else if (!r.non_universal)
                        r.non_universal = id;
                    }
                  });

  AchievableMaskIndex::ExtendedTable merged{};
  for (const auto& t : partial)
    for (std::size_t e = 0; e < merged.size(); ++e) merge_into(merged[e], t[e]);
  return AchievableMaskIndex(n, std::move(merged));
}

// ---------------------------------------------------------------------------
// Index file

namespace {
constexpr std::string_view kIndexMagic = "drc-achievable-masks";
constexpr int kIndexVersion = 1;

std::uint16_t extended_mask_of(std::uint64_t id, int n) {
  Row rows[kMaxIndexedSize], cols[kMaxIndexedSize];
  unpack(id, n, rows, cols);
  return detail::extended_mask(rows, cols, n);
}
}  // namespace

void save_index(const AchievableMaskIndex& index, std::ostream& out) {
  const auto& ext = index.extended();
  const auto achieved = std::count_if(ext.begin(), ext.end(), [](const auto& r) { return r.achieved(); });
  out << kIndexMagic << ' ' << kIndexVersion << '\n';
  out << "n " << index.n() << '\n';
  out << "records " << achieved << '\n';
  for (std::size_t e = 0; e < ext.size(); ++e) {
    const auto& r = ext[e];
    if (!r.achieved()) continue;
    out << e << '\t' << r.count << '\t' << r.witness << '\t' << r.minimal << '\t';
    if (r.non_universal)
      out << *r.non_universal;
    else
      out << '-';
    out << '\t' << (r.has_universal_model ? 1 : 0) << '\t' << index.relation(r.witness).to_string() << '\n';
  }
  if (!out) throw IoFailure("failed to write index");
}

AchievableMaskIndex load_index(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kIndexMagic)
    throw SchemaMismatch("not a mask index file");
  if (version != kIndexVersion)
    throw SchemaMismatch("unsupported index version " + std::to_string(version));
  std::string key;
  int n = 0;
  std::size_t records = 0;
  if (!(in >> key >> n) || key != "n") throw SchemaMismatch("missing size line");
  if (n < 2 || n > kMaxIndexedSize) throw SchemaMismatch("index size out of range");
  if (!(in >> key >> records) || key != "records") throw SchemaMismatch("missing record count");

  AchievableMaskIndex::ExtendedTable table{};
  std::string line;
  std::getline(in, line);
  const auto domain = std::make_shared<const Domain>(Domain::of_size(n));
  for (std::size_t i = 0; i < records; ++i) {
    if (!std::getline(in, line)) throw SchemaMismatch("truncated index file");
    std::istringstream fields(line);
    std::size_t e = 0;
    MaskRecord r;
    std::string non_universal, pairs;
    int universal = 0;
    if (!(fields >> e >> r.count >> r.witness >> r.minimal >> non_universal >> universal))
      throw SchemaMismatch("malformed index record: " + line);
    std::getline(fields >> std::ws, pairs);
    if (e >= table.size() || r.count == 0) throw SchemaMismatch("bad index record: " + line);
    if (non_universal != "-") r.non_universal = std::stoull(non_universal);
    r.has_universal_model = universal != 0;
    for (auto id : {r.witness, r.minimal}) {
      if (extended_mask_of(id, n) != e) throw SchemaMismatch("witness does not realise its mask: " + line);
    }
    if (DyadicRelation::from_id(domain, r.witness).to_string() != pairs)
      throw SchemaMismatch("witness pair list disagrees with its id: " + line);
    table[e] = r;
  }
  return AchievableMaskIndex(n, std::move(table));
}

// ---------------------------------------------------------------------------
// Queries

bool is_coherent_semantic(int x, const AchievableMaskIndex& index, InEuclideanReading reading) {
  check_x(x);
  return index.coherent(x, reading);
}

ConstraintSet implied_constraints(int x, const AchievableMaskIndex& index, InEuclideanReading reading) {
  if (x < 0 || x > kMaxCombination) check_x(x);
  auto implied = index.implied(x, reading);
  if (!implied)
    throw IncoherentSet("{" + decode(x).to_string() + "} has no non-empty model on " +
                        std::to_string(index.n()) + " elements");
  return *implied;
}

bool is_redundant_semantic(ConstraintType c, int x, const AchievableMaskIndex& index,
                           InEuclideanReading reading) {
  check_x(x);
  const auto set = decode(x);
  if (!set.contains(c))
    throw NotAMember(std::string(abbreviation(c)) + " is not in {" + set.to_string() + "}");
  const auto rest = index.implied(set.without(c).code(), reading);
  return !rest || rest->contains(c);
}

bool is_universal_semantic(int x, const AchievableMaskIndex& index, InEuclideanReading reading) {
  check_x(x);
  if (!index.coherent(x, reading))
    throw IncoherentSet("{" + decode(x).to_string() + "} has no non-empty model on " +
                        std::to_string(index.n()) + " elements");
  return index.universal_only(x, reading);
}

// ---------------------------------------------------------------------------
// Claims

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

/// holds(mask, relation is universal)
using MaskPredicate = bool (*)(M, bool);

struct MaskClaim {
  const char* id;
  const char* statement;
  bool mentions_ie;
  const char* variant;
  MaskPredicate holds;
};

// clang-format off
const std::vector<MaskClaim>& mask_claims() {
  using namespace p;
  static const std::vector<MaskClaim> claims = {
    {"Prop 1(i)", "(R => !IR) & (IR => !R)", false, "", [](M m, bool) { return !(R(m) && IR(m)); }},
    {"Prop 1(ii)", "(S => !AS) & (AS => !S)", false, "", [](M m, bool) { return !(S(m) && AS(m)); }},
    {"Prop 2(i)", "AS => IR", false, "", [](M m, bool) { return !AS(m) || IR(m); }},
    {"Prop 2(ii)", "AS => !E", false, "", [](M m, bool) { return !AS(m) || !E(m); }},
    {"Prop 2(iii)", "T => !IE", true, "", [](M m, bool) { return !T(m) || !IE(m); }},
    {"Prop 2(iv)", "IT => IR", false, "", [](M m, bool) { return !IT(m) || IR(m); }},
    {"Prop 2(v)", "IT => !E", false, "", [](M m, bool) { return !IT(m) || !E(m); }},
    {"Prop 2(vi)", "IE => IR", true, "", [](M m, bool) { return !IE(m) || IR(m); }},
    {"Prop 2(vii)", "C => !IT", false, "", [](M m, bool) { return !C(m) || !IT(m); }},
    {"Prop 2(viii)", "C => !IE", true, "", [](M m, bool) { return !C(m) || !IE(m); }},
    {"Prop 3", "A => AS & IE", true, "", [](M m, bool) { return !A(m) || (AS(m) && IE(m)); }},
    {"Prop 4", "E <=> S & T", false, "", [](M m, bool) { return E(m) == (S(m) && T(m)); }},
    {"Prop 5(ii)", "T & IT => IE", true, "", [](M m, bool) { return !(T(m) && IT(m)) || IE(m); }},
    {"Prop 5(iii)", "T & IT => !C", false, "", [](M m, bool) { return !(T(m) && IT(m)) || !C(m); }},
    {"Prop 6(ii)", "E & IE => IT", true, "", [](M m, bool) { return !(E(m) && IE(m)) || IT(m); }},
    {"Prop 7", "IR & T => AS", false, "", [](M m, bool) { return !(IR(m) && T(m)) || AS(m); }},
    {"Prop 8", "S & IT => IE", true, "", [](M m, bool) { return !(S(m) && IT(m)) || IE(m); }},
    {"Prop 9(i)", "S & IE => IT", true, "", [](M m, bool) { return !(S(m) && IE(m)) || IT(m); }},
    {"Prop 9(ii)", "S & IE => !C", true, "", [](M m, bool) { return !(S(m) && IE(m)) || !C(m); }},
    {"Prop 10", "AS & T => A", false, "", [](M m, bool) { return !(AS(m) && T(m)) || A(m); }},
    {"Prop 11(i)", "S & C => E", false, "", [](M m, bool) { return !(S(m) && C(m)) || E(m); }},
    {"Prop 11(ii)", "S & C => !IT", false, "", [](M m, bool) { return !(S(m) && C(m)) || !IT(m); }},
    {"Prop 12(i)", "E & !IE => !IT", true, "", [](M m, bool) { return !(E(m) && !IE(m)) || !IT(m); }},
    {"Prop 12(ii)", "E & !IE => !A", true, "", [](M m, bool) { return !(E(m) && !IE(m)) || !A(m); }},
    {"Prop 12(iii)", "IE & !E => !C", true, "", [](M m, bool) { return !(IE(m) && !E(m)) || !C(m); }},
    {"Prop 13", "T & IE => !C", true, "", [](M m, bool) { return !(T(m) && IE(m)) || !C(m); }},
    {"Prop 14", "IT & E => IE", true, "", [](M m, bool) { return !(IT(m) && E(m)) || IE(m); }},
    {"Prop 15", "IT & IE => !C", true, "", [](M m, bool) { return !(IT(m) && IE(m)) || !C(m); }},
    {"Prop 16", "A & C => T", false, "", [](M m, bool) { return !(A(m) && C(m)) || T(m); }},
    {"Prop 17", "IT & A => !C", false, "", [](M m, bool) { return !(IT(m) && A(m)) || !C(m); }},
    {"Prop 18", "IE & C => A", true, "", [](M m, bool) { return !(IE(m) && C(m)) || A(m); }},
    {"Prop 19", "A & C => IE", true, "", [](M m, bool) { return !(A(m) && C(m)) || IE(m); }},
    {"Prop 20", "(C & R & (S | E)) | (C & Q) <=> universal", false, "",
     [](M m, bool u) { return ((C(m) && R(m) && (S(m) || E(m))) || (C(m) && Q(m))) == u; }},
    {"Prop 20", "(C & R & (S | E)) | C | Q <=> universal", false, "as-printed",
     [](M m, bool u) { return ((C(m) && R(m) && (S(m) || E(m))) || C(m) || Q(m)) == u; }},

    {"Cor 1(i)", "R & IR incoherent", false, "", [](M m, bool) { return !(R(m) && IR(m)); }},
    {"Cor 1(ii)", "S & AS incoherent", false, "", [](M m, bool) { return !(S(m) && AS(m)); }},
    {"Cor 2(i)", "R & (AS | IT | IE | A) incoherent", true, "",
     [](M m, bool) { return !(R(m) && (AS(m) || IT(m) || IE(m) || A(m))); }},
    {"Cor 2(ii)", "A & S incoherent", false, "", [](M m, bool) { return !(A(m) && S(m)); }},
    {"Cor 2(iii)", "E & (AS | IT | A) incoherent", false, "",
     [](M m, bool) { return !(E(m) && (AS(m) || IT(m) || A(m))); }},
    {"Cor 2(iv)", "T & IE incoherent", true, "", [](M m, bool) { return !(T(m) && IE(m)); }},
    {"Cor 2(v)", "C & (IT | IE) incoherent", true, "", [](M m, bool) { return !(C(m) && (IT(m) || IE(m))); }},
    {"Cor 2(vi)", "Q & (IR | AS | IT | IE | A) incoherent", true, "",
     [](M m, bool) { return !(Q(m) && (IR(m) || AS(m) || IT(m) || IE(m) || A(m))); }},
    {"Cor 2(vii)", "AS | IT | IE | A => IR", true, "",
     [](M m, bool) { return !(AS(m) || IT(m) || IE(m) || A(m)) || IR(m); }},
    {"Cor 3(i)", "A => IR & AS & IE", true, "", [](M m, bool) { return !A(m) || (IR(m) && AS(m) && IE(m)); }},
    {"Cor 3(ii)", "(E <=> S & T) & (E & R <=> Q) & (R & S & T <=> Q)", false, "",
     [](M m, bool) {
       return E(m) == (S(m) && T(m)) && (E(m) && R(m)) == Q(m) && (R(m) && S(m) && T(m)) == Q(m);
     }},
    {"Cor 4(i)", "(R | S | E | Q | C) & T & IT incoherent", false, "",
     [](M m, bool) { return !((R(m) || S(m) || E(m) || Q(m) || C(m)) && T(m) && IT(m)); }},
    {"Cor 4(ii)", "T & IT => IR & AS & IE", true, "",
     [](M m, bool) { return !(T(m) && IT(m)) || (IR(m) && AS(m) && IE(m)); }},
    {"Cor 5(i)", "E & IE & Q incoherent", true, "", [](M m, bool) { return !(E(m) && IE(m) && Q(m)); }},
    {"Cor 5(ii)", "E & IE => IT", true, "", [](M m, bool) { return !(E(m) && IE(m)) || IT(m); }},
    {"Cor 6(i)", "IR & S & T incoherent", false, "", [](M m, bool) { return !(IR(m) && S(m) && T(m)); }},
    {"Cor 6(ii)", "IR & T => AS", false, "", [](M m, bool) { return !(IR(m) && T(m)) || AS(m); }},
    {"Cor 7(i)", "S & IT => IE", true, "", [](M m, bool) { return !(S(m) && IT(m)) || IE(m); }},
    {"Cor 7(ii)", "S & T & IT => E & IE", true, "",
     [](M m, bool) { return !(S(m) && T(m) && IT(m)) || (E(m) && IE(m)); }},
    {"Cor 8(i)", "S & IE & C incoherent", true, "", [](M m, bool) { return !(S(m) && IE(m) && C(m)); }},
    {"Cor 8(ii)", "S & IE => IT", true, "", [](M m, bool) { return !(S(m) && IE(m)) || IT(m); }},
    {"Cor 8(iii)", "S & E & IE => T & IT", true, "",
     [](M m, bool) { return !(S(m) && E(m) && IE(m)) || (T(m) && IT(m)); }},
    {"Cor 9", "AS & T => A", false, "", [](M m, bool) { return !(AS(m) && T(m)) || A(m); }},
    {"Cor 10(i)", "S & IT & C incoherent", false, "", [](M m, bool) { return !(S(m) && IT(m) && C(m)); }},
    {"Cor 10(ii)", "S & C => E", false, "", [](M m, bool) { return !(S(m) && C(m)) || E(m); }},
    {"Cor 10(iii)", "S & C => T", false, "", [](M m, bool) { return !(S(m) && C(m)) || T(m); }},
    {"Cor 10(iv)", "R & S & C => Q", false, "", [](M m, bool) { return !(R(m) && S(m) && C(m)) || Q(m); }},
    {"Cor 11(i)", "IT & E & !IE incoherent", true, "", [](M m, bool) { return !(IT(m) && E(m) && !IE(m)); }},
    {"Cor 11(ii)", "A & E & !IE incoherent", true, "", [](M m, bool) { return !(A(m) && E(m) && !IE(m)); }},
    {"Cor 11(iii)", "C & IE & !E incoherent", true, "", [](M m, bool) { return !(C(m) && IE(m) && !E(m)); }},
    {"Cor 12", "T & IE & C incoherent", true, "", [](M m, bool) { return !(T(m) && IE(m) && C(m)); }},
    {"Cor 13", "IT & E => IE", true, "", [](M m, bool) { return !(IT(m) && E(m)) || IE(m); }},
    {"Cor 14", "T & IE & C incoherent", true, "", [](M m, bool) { return !(T(m) && IE(m) && C(m)); }},
    {"Cor 15", "A & C => T", false, "", [](M m, bool) { return !(A(m) && C(m)) || T(m); }},
    {"Cor 16", "IT & A & C incoherent", false, "", [](M m, bool) { return !(IT(m) && A(m) && C(m)); }},
    {"Cor 17", "IE & C => AS & A", true, "", [](M m, bool) { return !(IE(m) && C(m)) || (AS(m) && A(m)); }},
    {"Cor 18", "(IE & C => A) & (A & C => IE)", true, "",
     [](M m, bool) { return (!(IE(m) && C(m)) || A(m)) && (!(A(m) && C(m)) || IE(m)); }},
    {"Cor 19", "(C & R & (S | E)) | (C & Q) => universal", false, "",
     [](M m, bool u) { return !((C(m) && R(m) && (S(m) || E(m))) || (C(m) && Q(m))) || u; }},
  };
  return claims;
}
// clang-format on

/// Pattern facts about one relation that the mask does not capture.
struct Patterns {
  bool path;           // xRy & yRz, any x, y, z
  bool path_distinct;  // same with x, y, z pairwise distinct
  bool fan;            // xRy & xRz or yRx & zRx, any x, y, z
  bool fan_distinct;
};

template <class RowT>
Patterns patterns(const RowT* rows, const RowT* cols, int n) {
  Patterns p{false, false, false, false};
  for (int x = 0; x < n; ++x) {
    const RowT self = RowT(1) << x;
    if (rows[x]) p.fan = true;
    if (std::popcount(static_cast<RowT>(rows[x] & ~self)) >= 2 ||
        std::popcount(static_cast<RowT>(cols[x] & ~self)) >= 2)
      p.fan_distinct = true;
    for (RowT m = rows[x]; m; m &= m - 1) {
      const int y = std::countr_zero(m);
      if (rows[y]) p.path = true;
      if (y != x && (rows[y] & ~(self | (RowT(1) << y)))) p.path_distinct = true;
    }
  }
  return p;
}

struct RelationClaim {
  const char* id;
  const char* statement;
  bool mentions_ie;
  const char* variant;
  bool (*holds)(M, const Patterns&);
};

const std::vector<RelationClaim>& relation_claims() {
  using namespace p;
  static const std::vector<RelationClaim> claims = {
      {"Prop 5(i)", "T & IT <=> no xRy & yRz", false, "",
       [](M m, const Patterns& q) { return (T(m) && IT(m)) == !q.path; }},
      {"Prop 5(i)", "T & IT <=> no xRy & yRz (x, y, z distinct)", false, "distinct-literal",
       [](M m, const Patterns& q) { return (T(m) && IT(m)) == !q.path_distinct; }},
      {"Prop 6(i)", "E & IE <=> no xRy & xRz, no yRx & zRx", true, "",
       [](M m, const Patterns& q) { return (E(m) && IE(m)) == !q.fan; }},
      {"Prop 6(i)", "E & IE <=> no xRy & xRz, no yRx & zRx (x, y, z distinct)", true, "distinct-literal",
       [](M m, const Patterns& q) { return (E(m) && IE(m)) == !q.fan_distinct; }},
  };
  return claims;
}

struct Tally {
  std::uint64_t violating = 0;
  std::optional<std::uint64_t> best;
  void add(std::uint64_t id, std::uint64_t how_many = 1) {
    violating += how_many;
    if (!best || fewer_pairs(id, *best)) best = id;
  }
  void merge(const Tally& o) {
    violating += o.violating;
    if (o.best && (!best || fewer_pairs(*o.best, *best))) best = o.best;
  }
};

constexpr InEuclideanReading kReadings[] = {InEuclideanReading::Strong, InEuclideanReading::Weak};

std::string sizes_label(const std::vector<int>& sizes) {
  std::string s;
  for (int n : sizes) s += (s.empty() ? "" : ",") + std::to_string(n);
  return s;
}

ClaimOutcome finish(const AchievableMaskIndex& index, const Tally& tally, InEuclideanReading reading,
                    const std::function<bool(const DyadicRelation&, M)>& recheck) {
  ClaimOutcome o;
  o.n = index.n();
  o.holds = tally.violating == 0;
  o.violating_relations = tally.violating;
  if (tally.best) {
    o.counterexample = tally.best;
    const auto rel = index.relation(*tally.best);
    o.counterexample_mask = property_mask(rel, reading);
    o.reverified = !recheck(rel, o.counterexample_mask);
  }
  return o;
}

}  // namespace

bool ClaimResult::holds_everywhere() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.holds; });
}

const ClaimResult* VerificationReport::find(const std::string& id, const std::string& reading,
                                            const std::string& variant) const {
  for (const auto& c : claims)
    if (c.id == id && c.reading == reading && c.variant == variant) return &c;
  return nullptr;
}

VerificationReport verify_claims(const AchievableMaskIndex& index, const IndexOptions& options) {
  return verify_claims(std::vector<const AchievableMaskIndex*>{&index}, options);
}

VerificationReport verify_claims(const std::vector<const AchievableMaskIndex*>& indexes_in,
                                 const IndexOptions& options) {
  auto indexes = indexes_in;
  std::sort(indexes.begin(), indexes.end(), [](auto* a, auto* b) { return a->n() < b->n(); });
  VerificationReport report;
  for (const auto* ix : indexes) {
    if (!report.sizes.empty() && report.sizes.back() == ix->n())
      throw OutOfRange("verify_claims needs indexes of distinct sizes");
    report.sizes.push_back(ix->n());
  }

  // Mask-level claims.
  for (const auto& claim : mask_claims()) {
    std::vector<InEuclideanReading> readings = {InEuclideanReading::Strong};
    if (claim.mentions_ie) readings.push_back(InEuclideanReading::Weak);
    for (auto reading : readings) {
      ClaimResult result{claim.id, claim.statement,
                         claim.mentions_ie ? std::string(to_string(reading)) : std::string(), claim.variant, {}};
      for (const auto* ix : indexes) {
        const std::uint64_t universal = ix->relation_count();
        Tally tally;
        for (auto m : ix->masks(reading)) {
          const auto& r = ix->record(m, reading);
          const std::uint64_t non_universal = r.count - (r.has_universal_model ? 1 : 0);
          if (non_universal && !claim.holds(m, false)) tally.add(r.minimal, non_universal);
          if (r.has_universal_model && !claim.holds(m, true)) tally.add(universal);
        }
        auto holds = claim.holds;
        result.outcomes.push_back(finish(*ix, tally, reading, [holds](const DyadicRelation& rel, M m) {
          return holds(m, is_universal(rel));
        }));
      }
      report.claims.push_back(std::move(result));
    }
  }

  // Relation-level claims: one scan per size, all claims and readings at once.
  const auto& rclaims = relation_claims();
  struct Slot {
    std::size_t claim;
    InEuclideanReading reading;
  };
  std::vector<Slot> slots;
  for (std::size_t c = 0; c < rclaims.size(); ++c) {
    slots.push_back({c, InEuclideanReading::Strong});
    if (rclaims[c].mentions_ie) slots.push_back({c, InEuclideanReading::Weak});
  }
  std::vector<ClaimResult> relation_results;
  for (const auto& s : slots) {
    const auto& c = rclaims[s.claim];
    relation_results.push_back(
        {c.id, c.statement, c.mentions_ie ? std::string(to_string(s.reading)) : std::string(), c.variant, {}});
  }
  for (const auto* ix : indexes) {
    const int n = ix->n();
    const std::uint64_t total = std::uint64_t{1} << (n * n);
    const int chunks = static_cast<int>(std::min<std::uint64_t>(total / 2, 256));
    std::vector<std::vector<Tally>> partial(chunks, std::vector<Tally>(slots.size()));
    parallel_chunks(1, total, chunks, worker_count(options.threads),
                    [&](std::uint64_t lo, std::uint64_t hi, int chunk) {
                      Row rows[kMaxIndexedSize], cols[kMaxIndexedSize];
                      auto& tallies = partial[chunk];
                      for (std::uint64_t id = lo; id < hi; ++id) {
                        unpack(id, n, rows, cols);
                        const auto ext = detail::extended_mask(rows, cols, n);
                        const auto pat = patterns(rows, cols, n);
                        for (std::size_t k = 0; k < slots.size(); ++k) {
                          const M m = M::from_code(
                              detail::project_mask(ext, slots[k].reading == InEuclideanReading::Weak));
                          if (!rclaims[slots[k].claim].holds(m, pat)) tallies[k].add(id);
                        }
                      }
                    });
    for (std::size_t k = 0; k < slots.size(); ++k) {
      Tally tally;
      for (const auto& t : partial) tally.merge(t[k]);
      auto holds = rclaims[slots[k].claim].holds;
      relation_results[k].outcomes.push_back(
          finish(*ix, tally, slots[k].reading, [holds](const DyadicRelation& rel, M m) {
            std::vector<std::uint64_t> cols(rel.n());
            detail::transpose(rel.rows().data(), cols.data(), rel.n());
            return holds(m, patterns(rel.rows().data(), cols.data(), rel.n()));
          }));
    }
  }

  // Report order: propositions then corollaries, each by number.
  for (auto& r : relation_results) report.claims.push_back(std::move(r));
  auto key = [](const ClaimResult& c) {
    const bool cor = c.id.rfind("Cor", 0) == 0;
    const auto digits = c.id.find_first_of("0123456789");
    std::size_t end = digits;
    const int num = std::stoi(c.id.substr(digits), &end);
    return std::make_tuple(cor, num, c.id.substr(digits + end), c.variant, c.reading);
  };
  std::stable_sort(report.claims.begin(), report.claims.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });

  // Cross-size discrepancies.
  if (report.sizes.size() > 1) {
    for (const auto& c : report.claims) {
      bool all_same = std::all_of(c.outcomes.begin(), c.outcomes.end(),
                                  [&](const auto& o) { return o.holds == c.outcomes.front().holds; });
      if (all_same) continue;
      std::string line = c.id;
      if (!c.reading.empty()) line += " [" + c.reading + "]";
      if (!c.variant.empty()) line += " [" + c.variant + "]";
      line += ":";
      for (const auto& o : c.outcomes) line += " n=" + std::to_string(o.n) + (o.holds ? " holds" : " fails");
      report.cross_size_discrepancies.push_back(line);
    }
    for (auto reading : kReadings) {
      std::map<std::uint16_t, std::vector<int>> seen;
      for (const auto* ix : indexes)
        for (auto m : ix->masks(reading)) seen[m.code()].push_back(ix->n());
      for (const auto& [m, at] : seen) {
        if (at.size() == indexes.size()) continue;
        report.mask_discrepancies.push_back(std::string(to_string(reading)) + ": {" +
                                            ConstraintSet::from_code(m).to_string() + "} achieved only at n=" +
                                            sizes_label(at));
      }
    }
  }

  // Padding a size-4 relation with an isolated element keeps its mask when
  // the mask has none of R, Q, C.
  const bool has4 = std::any_of(indexes.begin(), indexes.end(), [](auto* i) { return i->n() == 4; });
  const auto five = std::find_if(indexes.begin(), indexes.end(), [](auto* i) { return i->n() == 5; });
  if (has4 && five != indexes.end()) {
    EmbeddingCheck check;
    const std::uint16_t lower = weight(CT::Reflexive) | weight(CT::Equivalence) | weight(CT::Connected);
    for (std::uint64_t id = 1; id < (1u << 16); ++id) {
      Row rows4[4], cols4[4], rows5[5], cols5[5];
      unpack(id, 4, rows4, cols4);
      const auto ext4 = detail::extended_mask(rows4, cols4, 4);
      if (ext4 & lower) continue;
      std::uint64_t padded = 0;
      for (int i = 0; i < 4; ++i) padded |= std::uint64_t{rows4[i]} << (i * 5);
      unpack(padded, 5, rows5, cols5);
      const auto ext5 = detail::extended_mask(rows5, cols5, 5);
      ++check.relations_checked;
      const bool kept = ext5 == ext4 && (*five)->extended()[ext5].achieved();
      if (!kept) {
        ++check.failures;
        if (!check.first_failure) check.first_failure = id;
      }
    }
    report.embedding = check;
  }

  // Known tensions, stated from the verdicts above.
  auto verdict = [&](const std::string& id, const std::string& reading) {
    const auto* c = report.find(id, reading);
    if (!c) return std::string("not evaluated");
    std::string s;
    for (const auto& o : c->outcomes)
      s += (s.empty() ? "" : ", ") + std::string("n=") + std::to_string(o.n) + (o.holds ? " holds" : " fails");
    return s;
  };
  for (const char* reading : {"strong", "weak"}) {
    report.tensions.push_back(std::string("inEuclidean reading ") + reading + ": Prop 3 " + verdict("Prop 3", reading) +
                              "; Prop 18 " + verdict("Prop 18", reading) + "; Prop 19 " +
                              verdict("Prop 19", reading));
  }
  for (const auto reading : kReadings) {
    std::string line = "Cor 2(v) declares C & IE incoherent; Cors 11(iii), 17, 18 treat it as coherent. Oracle (" +
                       std::string(to_string(reading)) + "):";
    const int x = weight(CT::Connected) | weight(CT::InEuclidean);
    for (const auto* ix : indexes)
      line += " n=" + std::to_string(ix->n()) + (ix->coherent(x, reading) ? " coherent" : " incoherent");
    report.tensions.push_back(line);
  }
  report.tensions.push_back("Cor 12 and Cor 14 state the same template: T & IE & C incoherent.");
  return report;
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  out << "drc claim verification\n";
  out << "sizes: " << sizes_label(sizes) << "\n";
  out << "quantifiers: x, y, z range over the whole domain; connectivity and cycles use distinct elements\n";
  out << "inEuclidean: strong reading by default; claims mentioning inEuclidean are also checked under the weak "
         "reading\n\n";

  out << std::left << std::setw(14) << "claim" << std::setw(8) << "reading" << std::setw(18) << "variant";
  for (int n : sizes) out << std::setw(7) << ("n=" + std::to_string(n));
  out << "statement\n";

  std::size_t failing = 0;
  for (const auto& c : claims) {
    out << std::setw(14) << c.id << std::setw(8) << (c.reading.empty() ? "-" : c.reading) << std::setw(18)
        << (c.variant.empty() ? "-" : c.variant);
    for (const auto& o : c.outcomes) out << std::setw(7) << (o.holds ? "holds" : "FAILS");
    out << c.statement << "\n";
    if (!c.holds_everywhere()) ++failing;
    for (const auto& o : c.outcomes) {
      if (o.holds) continue;
      const auto domain = std::make_shared<const Domain>(Domain::of_size(o.n));
      out << "    n=" << o.n << " counterexample " << DyadicRelation::from_id(domain, *o.counterexample).to_string()
          << " mask {" << o.counterexample_mask.to_string() << "}; " << o.violating_relations
          << " violating relations; " << (o.reverified ? "re-verified" : "NOT RE-VERIFIED") << "\n";
    }
  }

  out << "\ncross-size discrepancies (claims):\n";
  if (sizes.size() < 2) out << "  single size verified\n";
  else if (cross_size_discrepancies.empty()) out << "  none\n";
  for (const auto& l : cross_size_discrepancies) out << "  " << l << "\n";

  out << "\ncross-size discrepancies (achievable masks): " << mask_discrepancies.size() << "\n";
  for (const auto& l : mask_discrepancies) out << "  " << l << "\n";

  out << "\npadding embedding n=4 -> n=5 (masks without R, Q, C):\n";
  if (!embedding) {
    out << "  not run (needs sizes 4 and 5)\n";
  } else {
    out << "  " << embedding->relations_checked << " relations checked, " << embedding->failures << " failures\n";
  }

  out << "\nknown tensions:\n";
  for (const auto& t : tensions) out << "  " << t << "\n";

  out << "\nsummary: " << claims.size() << " claim lines, " << failing << " failing\n";
  return out.str();
}

}  // namespace drc
