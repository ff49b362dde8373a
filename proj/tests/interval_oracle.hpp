#pragma once

#include <array>
#include <optional>

#include "tgame/board.hpp"

// Brute-force interval realizations: every (a-, a+, b-, b+) on a small
// integer grid with a- < a+ and b- < b+. A grid of 0..3 realizes every order
// type of four points.
namespace tgame::testing {

inline bool allen_holds(IntervalRelation r, int as, int ae, int bs, int be) {
  switch (r) {
    case IntervalRelation::Before: return ae < bs;
    case IntervalRelation::After: return be < as;
    case IntervalRelation::IBefore: return ae == bs;
    case IntervalRelation::IAfter: return be == as;
    case IntervalRelation::Includes: return as < bs && be < ae;
    case IntervalRelation::IsIncluded: return bs < as && ae < be;
    case IntervalRelation::Begins: return as == bs && ae < be;
    case IntervalRelation::BegunBy: return as == bs && be < ae;
    case IntervalRelation::Ends: return ae == be && bs < as;
    case IntervalRelation::EndedBy: return ae == be && as < bs;
    // TempEval convention: DURING / DURING_INV are scored as simultaneous.
    case IntervalRelation::Simultaneous:
    case IntervalRelation::Identity:
    case IntervalRelation::During:
    case IntervalRelation::DuringInv: return as == bs && ae == be;
  }
  return false;
}

// Cross labels indexed [a side][b side] with side 0 = start, 1 = end; nullopt
// when realizations disagree.
using CrossLabels = std::array<std::array<std::optional<PointRelation>, 2>, 2>;

inline CrossLabels realized_cross_labels(IntervalRelation r) {
  std::array<std::array<int, 2>, 2> seen{};  // bitmask: 1 <, 2 =, 4 >
  for (int as = 0; as < 4; ++as)
    for (int ae = as + 1; ae < 4; ++ae)
      for (int bs = 0; bs < 4; ++bs)
        for (int be = bs + 1; be < 4; ++be) {
          if (!allen_holds(r, as, ae, bs, be)) continue;
          const int a[2] = {as, ae};
          const int b[2] = {bs, be};
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              seen[i][j] |= a[i] < b[j] ? 1 : a[i] == b[j] ? 2 : 4;
        }
  CrossLabels out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      switch (seen[i][j]) {
        case 1: out[i][j] = PointRelation::Before; break;
        case 2: out[i][j] = PointRelation::Equal; break;
        case 4: out[i][j] = PointRelation::After; break;
        default: break;
      }
    }
  return out;
}

// Closes interval_to_points(r) on a fresh two-interval board (a then b).
inline CrossLabels mapped_cross_labels(IntervalRelation r, bool* consistent = nullptr) {
  Board board = Board::build({{"a", "a", 0, 1, EntityKind::Interval, false},
                              {"b", "b", 2, 3, EntityKind::Interval, false}});
  bool ok = true;
  for (const auto& pc : interval_to_points(r)) {
    const auto p = *board.endpoint_index({"a", pc.source_side});
    const auto q = *board.endpoint_index({"b", pc.target_side});
    ok = ok && board.assert_label(p, q, pc.relation).consistent();
  }
  if (consistent) *consistent = ok;
  CrossLabels out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto l = board.label(static_cast<std::size_t>(i), static_cast<std::size_t>(2 + j));
      if (is_definite(l)) out[i][j] = l;
    }
  return out;
}

inline IntervalRelation inverse_of(IntervalRelation r) {
  using I = IntervalRelation;
  switch (r) {
    case I::Before: return I::After;
    case I::After: return I::Before;
    case I::IBefore: return I::IAfter;
    case I::IAfter: return I::IBefore;
    case I::Includes: return I::IsIncluded;
    case I::IsIncluded: return I::Includes;
    case I::Begins: return I::BegunBy;
    case I::BegunBy: return I::Begins;
    case I::Ends: return I::EndedBy;
    case I::EndedBy: return I::Ends;
    case I::During: return I::DuringInv;
    case I::DuringInv: return I::During;
    default: return r;
  }
}

}  // namespace tgame::testing
