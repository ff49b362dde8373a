#pragma once

#include <cstddef>
#include <cstdint>

#include "tgame/point_algebra.hpp"

namespace tgame {

inline constexpr std::size_t kOracleMaxPoints = 8;

struct OracleResult {
  bool consistent = false;
  // Minimal labels: a pair is definite iff every surviving weak ordering
  // agrees on it. Vague entries are stored for every other pair.
  PointGraph labels;
  std::uint64_t survivors = 0;
};

// Brute force over all weak orderings (ordered set partitions) of the points.
// Throws Error{TooLarge} when g.size() exceeds max_points.
OracleResult oracle_minimal_labels(const PointGraph& g,
                                   std::size_t max_points = kOracleMaxPoints);

}  // namespace tgame
