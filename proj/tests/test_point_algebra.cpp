#include <random>
#include <tuple>

#include "doctest.h"
#include "random_graphs.hpp"
#include "tgame/error.hpp"
#include "tgame/oracle.hpp"
#include "tgame/point_algebra.hpp"

using namespace tgame;
using R = PointRelation;

namespace {

PointGraph graph_of(std::size_t n, std::initializer_list<std::tuple<int, int, R>> labels) {
  PointGraph g(n);
  for (auto [p, q, r] : labels) g.set(p, q, r);
  return g;
}

}  // namespace

TEST_CASE("invert swaps before and after only") {
  CHECK(invert(R::Before) == R::After);
  CHECK(invert(R::After) == R::Before);
  CHECK(invert(R::Equal) == R::Equal);
  CHECK(invert(R::Vague) == R::Vague);
}

TEST_CASE("compose follows transitivity") {
  CHECK(compose(R::Before, R::Before) == R::Before);
  CHECK(compose(R::Before, R::After) == R::Vague);
  CHECK(compose(R::Equal, R::Before) == R::Before);
  CHECK(compose(R::After, R::Before) == R::Vague);
  CHECK(compose(R::After, R::Equal) == R::After);
  CHECK(compose(R::Vague, R::Equal) == R::Vague);
}

TEST_CASE("compose agrees with integer semantics") {
  // a->b and b->c realized on small integers; the composed label must be the
  // relation shared by every realization, or Vague.
  auto holds = [](R r, int x, int y) {
    return r == R::Before ? x < y : r == R::After ? x > y : r == R::Equal ? x == y : true;
  };
  for (auto r1 : kAllRelations) {
    for (auto r2 : kAllRelations) {
      bool lt = false, eq = false, gt = false;
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
          for (int c = 0; c < 5; ++c)
            if (holds(r1, a, b) && holds(r2, b, c)) {
              lt |= a < c;
              eq |= a == c;
              gt |= a > c;
            }
      const R expected = (lt + eq + gt) != 1 ? R::Vague : lt ? R::Before : eq ? R::Equal : R::After;
      CHECK(compose(r1, r2) == expected);
    }
  }
}

TEST_CASE("graph reads the inverse in reverse direction") {
  PointGraph g(3);
  g.set(2, 0, R::Before);
  CHECK(g.label(0, 2) == R::After);
  CHECK(g.label(2, 0) == R::Before);
  CHECK(g.label(1, 1) == R::Equal);
  CHECK_FALSE(g.get(0, 1).has_value());
  CHECK(g.label(0, 1) == R::Vague);
  CHECK_THROWS_AS(g.set(1, 1, R::Before), Error);
  CHECK_THROWS_AS(g.get(3, 0), Error);
}

TEST_CASE("close infers a single transitivity step") {
  const auto res = close(graph_of(3, {{0, 1, R::Before}, {1, 2, R::Before}}));
  REQUIRE(res.consistent());
  CHECK(res.labels.label(0, 2) == R::Before);
  REQUIRE(res.newly_inferred.size() == 1);
  CHECK(res.newly_inferred[0] == PairLabel{{0, 2}, R::Before});
}

TEST_CASE("close reports antisymmetry violation on the pair") {
  // a<b written, then b<a read from the other side: a single cell cannot hold
  // both, so build the cycle through a third point.
  const auto res = close(graph_of(3, {{0, 1, R::Before}, {1, 2, R::Before}, {2, 0, R::Before}}));
  REQUIRE_FALSE(res.consistent());
  // First triple in ascending (i,k,j): i=0,k=1,j=2 gives 0<2 against stored 0>2.
  CHECK(res.contradiction->pair == PointPair{0, 2});
  CHECK(res.contradiction->existing == R::After);
  CHECK(res.contradiction->inferred == R::Before);
}

TEST_CASE("assert_relation rejects direct antisymmetry") {
  PointGraph g(2);
  REQUIRE(assert_relation(g, 0, 1, R::Before).consistent());
  const auto res = assert_relation(g, 1, 0, R::Before);
  REQUIRE_FALSE(res.consistent());
  CHECK(res.contradiction->pair == PointPair{0, 1});
  CHECK(res.contradiction->existing == R::Before);
  CHECK(res.contradiction->inferred == R::After);
  CHECK(g.label(0, 1) == R::Before);
}

TEST_CASE("close over equal then strict chain matches the weak-order oracle") {
  // {a=b, b<c, c<d}
  const auto g = graph_of(4, {{0, 1, R::Equal}, {1, 2, R::Before}, {2, 3, R::Before}});
  const auto oracle = oracle_minimal_labels(g);
  REQUIRE(oracle.consistent);
  // Oracle values, frozen: a<c, a<d, b<d in addition to the inputs.
  CHECK(oracle.labels.label(0, 2) == R::Before);
  CHECK(oracle.labels.label(0, 3) == R::Before);
  CHECK(oracle.labels.label(1, 3) == R::Before);

  const auto res = close(g);
  REQUIRE(res.consistent());
  CHECK(res.newly_inferred ==
        std::vector<PairLabel>{{{0, 2}, R::Before}, {{0, 3}, R::Before}, {{1, 3}, R::Before}});
  CHECK(res.labels.definite_labels() == oracle.labels.definite_labels());
}

TEST_CASE("assert_relation propagates and detects conflicts with inferred labels") {
  PointGraph g(3);
  REQUIRE(assert_relation(g, 0, 1, R::Before).consistent());
  auto res = assert_relation(g, 1, 2, R::Before);
  REQUIRE(res.consistent());
  CHECK(res.newly_inferred == std::vector<PairLabel>{{{0, 2}, R::Before}});
  const auto before = g;
  res = assert_relation(g, 0, 2, R::After);
  REQUIRE_FALSE(res.consistent());
  CHECK(g == before);
}

TEST_CASE("assert_relation with vague adds no constraint") {
  PointGraph g(3);
  const auto res = assert_relation(g, 0, 1, R::Vague);
  CHECK(res.consistent());
  CHECK(res.newly_inferred.empty());
  CHECK(g.get(0, 1) == R::Vague);
  // A vague placeholder is overwritten by a later inference.
  REQUIRE(assert_relation(g, 0, 2, R::Before).consistent());
  const auto res2 = assert_relation(g, 2, 1, R::Before);
  REQUIRE(res2.consistent());
  CHECK(g.label(0, 1) == R::Before);
  // Vague never overwrites a definite label.
  CHECK(assert_relation(g, 0, 1, R::Vague).consistent());
  CHECK(g.label(0, 1) == R::Before);
}

TEST_CASE("re-asserting an identical label is a no-op") {
  PointGraph g(3);
  assert_relation(g, 0, 1, R::Before);
  const auto snapshot = g;
  const auto res = assert_relation(g, 1, 0, R::After);
  CHECK(res.consistent());
  CHECK(res.newly_inferred.empty());
  CHECK(g == snapshot);
}

TEST_CASE("assert_relation validates points") {
  PointGraph g(2);
  CHECK_THROWS_AS(assert_relation(g, 0, 2, R::Before), Error);
  CHECK_THROWS_AS(assert_relation(g, 1, 1, R::Before), Error);
}

TEST_CASE("oracle enumerates weak orderings") {
  const auto free3 = oracle_minimal_labels(PointGraph(3));
  CHECK(free3.consistent);
  CHECK(free3.survivors == 13);
  for (const auto& l : free3.labels.labels()) CHECK(l.relation == R::Vague);

  // Fubini numbers.
  CHECK(oracle_minimal_labels(PointGraph(4)).survivors == 75);
  CHECK(oracle_minimal_labels(PointGraph(5)).survivors == 541);

  const auto chain = oracle_minimal_labels(graph_of(3, {{0, 1, R::Before}, {1, 2, R::Before}}));
  CHECK(chain.consistent);
  CHECK(chain.labels.label(0, 2) == R::Before);

  PointGraph cyc3 = graph_of(3, {{0, 1, R::Before}, {1, 2, R::Before}, {0, 2, R::After}});
  CHECK_FALSE(oracle_minimal_labels(cyc3).consistent);

  CHECK_THROWS_AS(oracle_minimal_labels(PointGraph(9)), Error);
}

TEST_CASE("closure is idempotent and deterministic") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 5;
    const auto g = testing::raw_graph(n, testing::random_assertions(rng, n));
    const auto once = close(g);
    const auto again = close(g);
    CHECK(once.labels == again.labels);
    CHECK(once.contradiction == again.contradiction);
    if (once.consistent()) {
      const auto twice = close(once.labels);
      CHECK(twice.consistent());
      CHECK(twice.newly_inferred.empty());
      CHECK(twice.labels == once.labels);
    }
  }
}

TEST_CASE("incremental assertion matches batch closure and is monotone") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 5;
    const auto as = testing::random_assertions(rng, n);
    PointGraph inc(n);
    PointGraph batch(n);
    for (const auto& a : as) {
      const auto prev = inc.definite_labels();
      const auto res = assert_relation(inc, a.p, a.q, a.r);
      PointGraph trial_batch = batch;
      trial_batch.set(a.p, a.q, a.r);
      const auto prev_label = batch.get(a.p, a.q);
      const bool conflicting_cell = prev_label && *prev_label != a.r;
      const auto closed = close(trial_batch);
      if (!res.consistent()) {
        CHECK((conflicting_cell || !closed.consistent()));
        CHECK(inc.definite_labels() == prev);
        break;
      }
      REQUIRE(closed.consistent());
      batch = closed.labels;
      CHECK(inc.definite_labels() == batch.definite_labels());
      // Monotone: every earlier definite label survives.
      for (const auto& l : prev) CHECK(inc.label(l.pair.first, l.pair.second) == l.relation);
    }
  }
}

TEST_CASE("close matches the oracle on random graphs") {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 4;
    const auto g = testing::raw_graph(n, testing::random_assertions(rng, n));
    const auto res = close(g);
    const auto oracle = oracle_minimal_labels(g);
    CHECK(res.consistent() == oracle.consistent);
    if (res.consistent() && oracle.consistent) {
      CHECK(res.labels.definite_labels() == oracle.labels.definite_labels());
      for (const auto& l : res.newly_inferred) CHECK(is_definite(l.relation));
    }
    ++checked;
  }
  CHECK(checked == 300);
}
