// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DRC_DETAIL_KERNEL_HPP_
#define DRC_DETAIL_KERNEL_HPP_

#include <bit>
#include <cstdint>

#include "drc/constraint.hpp"

namespace drc::detail {

/// Bit 11 of an extended mask holds the weak inEuclidean reading; bits 0..10
/// are the ordinary property bits with the strong reading.
inline constexpr int kWeakInEuclideanBit = 11;
inline constexpr std::uint16_t kExtendedMaskCount = 1u << 12;

template <class Row>
constexpr Row full_row(int n) {
  return n >= static_cast<int>(sizeof(Row) * 8) ? ~Row(0) : static_cast<Row>((Row(1) << n) - 1);
}

/// Transposes `rows` into `cols`: bit i of cols[j] iff bit j of rows[i].
template <class Row>
inline void transpose(const Row* rows, Row* cols, int n) {
  for (int j = 0; j < n; ++j) cols[j] = 0;
  for (int i = 0; i < n; ++i)
    for (Row m = rows[i]; m; m &= m - 1) cols[std::countr_zero(m)] |= Row(1) << i;
}

template <class Row>
inline bool is_acyclic(const Row* rows, int n) {
  Row remaining = full_row<Row>(n);
  while (remaining) {
    Row sinks = 0;
    for (Row m = remaining; m; m &= m - 1) {
      int j = std::countr_zero(m);
      if ((rows[j] & remaining) == 0) sinks |= Row(1) << j;
    }
    if (!sinks) return false;
    remaining &= ~sinks;
  }
  return true;
}

/// All eleven properties plus the weak inEuclidean bit in one sweep.
/// x, y, z range over the whole domain and may coincide; only connectivity
/// and cycles are stated over distinct elements.
template <class Row>
inline std::uint16_t extended_mask(const Row* rows, const Row* cols, int n) {
  const Row full = full_row<Row>(n);
  bool refl = true, irrefl = true, sym = true, asym = true, trans = true, intrans = true;
  bool eucl = true, ineucl = true, ineucl_weak = true, conn = true;

  for (int i = 0; i < n; ++i) {
    const Row self = Row(1) << i;
    const Row r = rows[i];
    const Row c = cols[i];
    if (r & self)
      irrefl = false;
    else
      refl = false;
    if (r != c) sym = false;
    if (r & c) asym = false;
    if (((r | c | self) & full) != full) conn = false;

    Row two_step = 0;
    for (Row m = r; m; m &= m - 1) {
      const int j = std::countr_zero(m);
      const Row rj = rows[j];
      two_step |= rj;
      if (r & ~rj) eucl = false;               // iRj ∧ iRz → jRz
      if (rj & r) ineucl = false;              // co-successors unrelated
      if (rj & cols[j] & r) ineucl_weak = false;
    }
    if (two_step & ~r) trans = false;
    if (two_step & r) intrans = false;

    for (Row m = c; m; m &= m - 1) {
      const int j = std::countr_zero(m);
      const Row rj = rows[j];
      if (c & ~rj) eucl = false;               // jRi ∧ zRi → jRz
      if (rj & c) ineucl = false;              // co-predecessors unrelated
      if (rj & cols[j] & c) ineucl_weak = false;
    }
  }

  std::uint16_t mask = 0;
  auto set = [&mask](ConstraintType t, bool v) {
    if (v) mask |= weight(t);
  };
  set(ConstraintType::Reflexive, refl);
  set(ConstraintType::Irreflexive, irrefl);
  set(ConstraintType::Symmetric, sym);
  set(ConstraintType::Asymmetric, asym);
  set(ConstraintType::Transitive, trans);
  set(ConstraintType::Intransitive, intrans);
  set(ConstraintType::Euclidean, eucl);
  set(ConstraintType::InEuclidean, ineucl);
  set(ConstraintType::Equivalence, refl && sym && trans);
  set(ConstraintType::Acyclic, is_acyclic(rows, n));
  set(ConstraintType::Connected, conn);
  if (ineucl_weak) mask |= 1u << kWeakInEuclideanBit;
  return mask;
}

/// Projects an extended mask onto the eleven bits of one reading.
inline std::uint16_t project_mask(std::uint16_t extended, bool weak_reading) {
  std::uint16_t mask = extended & kMaxCombination;
  if (weak_reading) {
    mask &= static_cast<std::uint16_t>(~weight(ConstraintType::InEuclidean));
    if (extended & (1u << kWeakInEuclideanBit)) mask |= weight(ConstraintType::InEuclidean);
  }
  return mask;
}

}  // namespace drc::detail

#endif  // DRC_DETAIL_KERNEL_HPP_
