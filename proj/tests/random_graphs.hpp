#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tgame/point_algebra.hpp"

namespace tgame::testing {

struct Assertion {
  std::size_t p, q;
  PointRelation r;
};

// Random definite assertions over n points; mixes strict and equal labels.
inline std::vector<Assertion> random_assertions(std::mt19937_64& rng, std::size_t n) {
  std::vector<Assertion> out;
  const std::size_t pairs = n * (n - 1) / 2;
  const std::size_t count = 1 + rng() % (pairs + 1);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t p = rng() % n;
    std::size_t q = rng() % (n - 1);
    if (q >= p) ++q;
    const auto pick = rng() % 5;
    const PointRelation r = pick < 2   ? PointRelation::Before
                            : pick < 4 ? PointRelation::After
                                       : PointRelation::Equal;
    out.push_back({p, q, r});
  }
  return out;
}

// Raw (unclosed) graph; later writes to the same pair win.
inline PointGraph raw_graph(std::size_t n, const std::vector<Assertion>& as) {
  PointGraph g(n);
  for (const auto& a : as) g.set(a.p, a.q, a.r);
  return g;
}

}  // namespace tgame::testing

namespace tgame::testing {

// Assertions read off a hidden random weak order (so mostly consistent), with
// an occasional corrupted label to exercise contradictions.
inline std::vector<Assertion> planted_assertions(std::mt19937_64& rng, std::size_t n,
                                                 double corrupt_probability) {
  std::vector<int> rank(n);
  for (auto& r : rank) r = static_cast<int>(rng() % n);
  std::vector<Assertion> out;
  const std::size_t count = 1 + rng() % (n * (n - 1) / 2);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t p = rng() % n;
    std::size_t q = rng() % (n - 1);
    if (q >= p) ++q;
    PointRelation r = rank[p] < rank[q]    ? PointRelation::Before
                      : rank[p] == rank[q] ? PointRelation::Equal
                                           : PointRelation::After;
    if (coin(rng) < corrupt_probability) {
      r = static_cast<PointRelation>((static_cast<int>(r) + 1 + rng() % 2) % 3);
    }
    out.push_back({p, q, r});
  }
  return out;
}

}  // namespace tgame::testing
