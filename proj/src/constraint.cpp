// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include "drc/constraint.hpp"

#include <bit>
#include <cctype>

#include "drc/errors.hpp"

namespace drc {

namespace {

struct TypeNames {
  std::string_view abbrev;
  std::string_view name;
};

constexpr std::array<TypeNames, kConstraintTypeCount> kNames = {{
    {"R", "reflexive"},
    {"IR", "irreflexive"},
    {"S", "symmetric"},
    {"AS", "asymmetric"},
    {"T", "transitive"},
    {"IT", "intransitive"},
    {"E", "Euclidean"},
    {"IE", "inEuclidean"},
    {"Q", "equivalence"},
    {"A", "acyclic"},
    {"C", "connected"},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view abbreviation(ConstraintType t) { return kNames[static_cast<int>(t)].abbrev; }

std::string_view long_name(ConstraintType t) { return kNames[static_cast<int>(t)].name; }

std::optional<ConstraintType> type_from_abbreviation(std::string_view text) {
  for (auto t : kAllConstraintTypes) {
    auto a = abbreviation(t);
    if (a.size() != text.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(text[i])) != a[i]) {
        same = false;
        break;
      }
    }
    if (same) return t;
  }
  return std::nullopt;
}

ConstraintSet ConstraintSet::from_code(int x) {
  if (x < 0 || x > kMaxCombination)
    throw OutOfRange("combination code " + std::to_string(x) + " outside 0..2047");
  return raw(static_cast<unsigned>(x));
}

int ConstraintSet::size() const { return std::popcount(code_); }

std::vector<ConstraintType> ConstraintSet::members() const {
  std::vector<ConstraintType> out;
  for (auto t : kAllConstraintTypes)
    if (contains(t)) out.push_back(t);
  return out;
}

std::string ConstraintSet::to_string() const {
  std::string out;
  for (auto t : members()) {
    if (!out.empty()) out += ',';
    out += abbreviation(t);
  }
  return out;
}

bool has_trivial_contradiction(ConstraintSet s) {
  using CT = ConstraintType;
  return s.contains_all({CT::Reflexive, CT::Irreflexive}) ||
         s.contains_all({CT::Symmetric, CT::Asymmetric});
}

ConstraintSet parse_abbrev(std::string_view text) {
  ConstraintSet out;
  if (trim(text).empty()) return out;
  while (true) {
    auto comma = text.find(',');
    auto token = trim(text.substr(0, comma));
    auto t = type_from_abbreviation(token);
    if (!t) throw UnknownAbbreviation("unknown constraint abbreviation '" + std::string(token) + "'");
    out = out.with(*t);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace drc
