// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DRC_CONSTRAINT_HPP_
#define DRC_CONSTRAINT_HPP_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace drc {

/// The eleven dyadic relation constraint types. The enumerator value is the
/// bit position of the type inside a combination code, so the weight of a
/// type is `1 << value`.
enum class ConstraintType : std::uint8_t {
  Reflexive = 0,
  Irreflexive = 1,
  Symmetric = 2,
  Asymmetric = 3,
  Transitive = 4,
  Intransitive = 5,
  Euclidean = 6,
  InEuclidean = 7,
  Equivalence = 8,
  Acyclic = 9,
  Connected = 10,
};

inline constexpr int kConstraintTypeCount = 11;
inline constexpr std::uint16_t kMaxCombination = (1u << kConstraintTypeCount) - 1;  // 2047

/// All types in ascending weight order.
inline constexpr std::array<ConstraintType, kConstraintTypeCount> kAllConstraintTypes = {
    ConstraintType::Reflexive,    ConstraintType::Irreflexive, ConstraintType::Symmetric,
    ConstraintType::Asymmetric,   ConstraintType::Transitive,  ConstraintType::Intransitive,
    ConstraintType::Euclidean,    ConstraintType::InEuclidean, ConstraintType::Equivalence,
    ConstraintType::Acyclic,      ConstraintType::Connected,
};

constexpr std::uint16_t weight(ConstraintType t) {
  return static_cast<std::uint16_t>(1u << static_cast<unsigned>(t));
}

/// Column abbreviation: R, IR, S, AS, T, IT, E, IE, Q, A, C.
std::string_view abbreviation(ConstraintType t);

/// Lower-case long name, e.g. "asymmetric", "inEuclidean".
std::string_view long_name(ConstraintType t);

/// Case-insensitive abbreviation lookup.
std::optional<ConstraintType> type_from_abbreviation(std::string_view text);

/// A set of constraint types, stored as its combination code
/// x = [R] + 2[IR] + 4[S] + ... + 1024[C].
class ConstraintSet {
 public:
  constexpr ConstraintSet() = default;
  constexpr ConstraintSet(std::initializer_list<ConstraintType> types) {
    for (auto t : types) code_ |= weight(t);
  }

  /// Throws OutOfRange unless 0 <= x <= 2047.
  static ConstraintSet from_code(int x);

  constexpr std::uint16_t code() const { return code_; }
  constexpr bool empty() const { return code_ == 0; }
  constexpr bool contains(ConstraintType t) const { return (code_ & weight(t)) != 0; }
  constexpr bool contains_all(ConstraintSet other) const {
    return (code_ & other.code_) == other.code_;
  }
  constexpr bool intersects(ConstraintSet other) const { return (code_ & other.code_) != 0; }
  int size() const;

  constexpr ConstraintSet with(ConstraintType t) const { return raw(code_ | weight(t)); }
  constexpr ConstraintSet without(ConstraintType t) const {
    return raw(static_cast<std::uint16_t>(code_ & ~weight(t)));
  }

  constexpr ConstraintSet operator|(ConstraintSet o) const { return raw(code_ | o.code_); }
  constexpr ConstraintSet operator&(ConstraintSet o) const { return raw(code_ & o.code_); }
  constexpr ConstraintSet operator-(ConstraintSet o) const {
    return raw(static_cast<std::uint16_t>(code_ & ~o.code_));
  }
  ConstraintSet& operator|=(ConstraintSet o) {
    code_ |= o.code_;
    return *this;
  }

  friend constexpr bool operator==(ConstraintSet, ConstraintSet) = default;

  /// Members in ascending weight order.
  std::vector<ConstraintType> members() const;

  /// Comma separated abbreviations in ascending weight order, e.g. "AS,T".
  std::string to_string() const;

  /// The universe of all eleven types.
  static constexpr ConstraintSet all() { return raw(kMaxCombination); }

 private:
  static constexpr ConstraintSet raw(unsigned code) {
    ConstraintSet s;
    s.code_ = static_cast<std::uint16_t>(code);
    return s;
  }
  std::uint16_t code_ = 0;
};

inline constexpr int encode(ConstraintSet s) { return s.code(); }
inline ConstraintSet decode(int x) { return ConstraintSet::from_code(x); }

/// True iff the set holds {R, IR} or {S, AS}.
bool has_trivial_contradiction(ConstraintSet s);

/// Parses comma separated abbreviations ("AS, ie"). Whitespace and case are
/// ignored; repeats are idempotent. Throws UnknownAbbreviation.
ConstraintSet parse_abbrev(std::string_view text);

}  // namespace drc

#endif  // DRC_CONSTRAINT_HPP_
