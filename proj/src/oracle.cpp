#include "tgame/oracle.hpp"

#include <string>
#include <vector>

#include "tgame/error.hpp"

namespace tgame {

namespace {

constexpr std::uint8_t kSeenBefore = 1;
constexpr std::uint8_t kSeenEqual = 2;
constexpr std::uint8_t kSeenAfter = 4;

struct Enumerator {
  std::size_t n;
  std::vector<PairLabel> constraints;
  std::vector<int> rank;
  std::vector<std::uint8_t> seen;  // per canonical pair, row-major n*n
  std::uint64_t survivors = 0;

  static bool holds(PointRelation r, int a, int b) {
    switch (r) {
      case PointRelation::Before: return a < b;
      case PointRelation::After: return a > b;
      case PointRelation::Equal: return a == b;
      case PointRelation::Vague: return true;
    }
    return true;
  }

  void evaluate() {
    for (const auto& c : constraints) {
      if (!holds(c.relation, rank[c.pair.first], rank[c.pair.second])) return;
    }
    ++survivors;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const int a = rank[p];
        const int b = rank[q];
        seen[p * n + q] |= a < b ? kSeenBefore : a == b ? kSeenEqual : kSeenAfter;
      }
    }
  }

  // Picks the next block of the ordered partition as any non-empty subset of
  // the points not yet placed.
  void place(std::uint32_t remaining, int level) {
    if (remaining == 0) {
      evaluate();
      return;
    }
    for (std::uint32_t block = remaining; block != 0;
         block = (block - 1) & remaining) {
      for (std::size_t p = 0; p < n; ++p) {
        if (block & (1u << p)) rank[p] = level;
      }
      place(remaining & ~block, level + 1);
    }
  }
};

}  // namespace

OracleResult oracle_minimal_labels(const PointGraph& g, std::size_t max_points) {
  const std::size_t n = g.size();
  if (n > max_points) {
    throw Error(ErrorCode::TooLarge,
                "oracle bound is " + std::to_string(max_points) +
                    " points, graph has " + std::to_string(n));
  }
  Enumerator e{n, g.definite_labels(), std::vector<int>(n, 0),
               std::vector<std::uint8_t>(n * n, 0)};
  e.place(n == 0 ? 0u : (1u << n) - 1u, 0);

  OracleResult result;
  result.survivors = e.survivors;
  result.consistent = e.survivors > 0;
  result.labels = PointGraph(n);
  if (!result.consistent) return result;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      PointRelation r = PointRelation::Vague;
      switch (e.seen[p * n + q]) {
        case kSeenBefore: r = PointRelation::Before; break;
        case kSeenEqual: r = PointRelation::Equal; break;
        case kSeenAfter: r = PointRelation::After; break;
        default: break;
      }
      result.labels.set(p, q, r);
    }
  }
  result.labels.mark_closed(true);
  return result;
}

}  // namespace tgame
