#include "tgame/point_algebra.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <utility>

#include "tgame/error.hpp"

namespace tgame {

PointRelation invert(PointRelation r) noexcept {
  switch (r) {
    case PointRelation::Before: return PointRelation::After;
    case PointRelation::After: return PointRelation::Before;
    default: return r;
  }
}

PointRelation compose(PointRelation r1, PointRelation r2) noexcept {
  using R = PointRelation;
  if (r1 == R::Vague || r2 == R::Vague) return R::Vague;
  if (r1 == R::Equal) return r2;
  if (r2 == R::Equal) return r1;
  return r1 == r2 ? r1 : R::Vague;
}

std::string_view symbol(PointRelation r) noexcept {
  switch (r) {
    case PointRelation::Before: return "<";
    case PointRelation::After: return ">";
    case PointRelation::Equal: return "=";
    case PointRelation::Vague: return "-";
  }
  return "-";
}

std::optional<PointRelation> relation_from_symbol(std::string_view s) noexcept {
  if (s == "<") return PointRelation::Before;
  if (s == ">") return PointRelation::After;
  if (s == "=") return PointRelation::Equal;
  if (s == "-") return PointRelation::Vague;
  return std::nullopt;
}

PointGraph::PointGraph(std::size_t n)
    : n_(n), cells_(n < 2 ? 0 : n * (n - 1) / 2, kAbsent) {}

void PointGraph::check_point(std::size_t p) const {
  if (p >= n_) {
    throw Error(ErrorCode::InvalidPoint,
                "point " + std::to_string(p) + " out of range for graph of " +
                    std::to_string(n_) + " points");
  }
}

std::size_t PointGraph::index(std::size_t p, std::size_t q) const {
  // p < q; rows of the strict upper triangle packed back to back.
  return p * (2 * n_ - p - 1) / 2 + (q - p - 1);
}

std::optional<PointRelation> PointGraph::get(std::size_t p,
                                             std::size_t q) const {
  check_point(p);
  check_point(q);
  if (p == q) return PointRelation::Equal;
  const auto raw = cells_[index(std::min(p, q), std::max(p, q))];
  if (raw == kAbsent) return std::nullopt;
  const auto r = static_cast<PointRelation>(raw);
  return p < q ? r : invert(r);
}

PointRelation PointGraph::label(std::size_t p, std::size_t q) const {
  return get(p, q).value_or(PointRelation::Vague);
}

void PointGraph::set(std::size_t p, std::size_t q, PointRelation r) {
  check_point(p);
  check_point(q);
  if (p == q) {
    throw Error(ErrorCode::InvalidPoint, "cannot label a point against itself");
  }
  if (p > q) {
    std::swap(p, q);
    r = invert(r);
  }
  cells_[index(p, q)] = static_cast<std::uint8_t>(r);
  closed_ = false;
}

void PointGraph::erase(std::size_t p, std::size_t q) {
  check_point(p);
  check_point(q);
  if (p == q) return;
  cells_[index(std::min(p, q), std::max(p, q))] = kAbsent;
}

std::vector<PairLabel> PointGraph::labels() const {
  std::vector<PairLabel> out;
  for (std::size_t p = 0; p < n_; ++p) {
    for (std::size_t q = p + 1; q < n_; ++q) {
      const auto raw = cells_[index(p, q)];
      if (raw != kAbsent) {
        out.push_back({{p, q}, static_cast<PointRelation>(raw)});
      }
    }
  }
  return out;
}

std::vector<PairLabel> PointGraph::definite_labels() const {
  auto out = labels();
  std::erase_if(out, [](const PairLabel& l) { return !is_definite(l.relation); });
  return out;
}

namespace {

// Orients a (p, q) reading into canonical first < second form.
Contradiction make_conflict(std::size_t p, std::size_t q,
                            PointRelation existing, PointRelation inferred) {
  if (p < q) return {{p, q}, existing, inferred};
  return {{q, p}, invert(existing), invert(inferred)};
}

PairLabel make_label(std::size_t p, std::size_t q, PointRelation r) {
  if (p < q) return {{p, q}, r};
  return {{q, p}, invert(r)};
}

void sort_labels(std::vector<PairLabel>& v) {
  std::sort(v.begin(), v.end(), [](const PairLabel& a, const PairLabel& b) {
    return a.pair < b.pair;
  });
}

}  // namespace

ClosureResult close(const PointGraph& g) {
  ClosureResult result;
  result.labels = g;
  PointGraph& out = result.labels;
  const std::size_t n = out.size();

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        const auto ik = out.label(i, k);
        if (!is_definite(ik)) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
          if (j == k) continue;
          const auto implied = compose(ik, out.label(k, j));
          if (!is_definite(implied)) continue;
          const auto current = out.get(i, j);
          if (current && is_definite(*current)) {
            if (*current != implied) {
              result.contradiction = Contradiction{{i, j}, *current, implied};
              sort_labels(result.newly_inferred);
              return result;
            }
            continue;
          }
          out.set(i, j, implied);
          result.newly_inferred.push_back({{i, j}, implied});
          changed = true;
        }
      }
    }
  }
  out.mark_closed(true);
  sort_labels(result.newly_inferred);
  return result;
}

ClosureResult assert_relation(PointGraph& g, std::size_t p, std::size_t q,
                              PointRelation r) {
  if (p >= g.size() || q >= g.size()) {
    throw Error(ErrorCode::InvalidPoint, "point out of range");
  }
  if (p == q) {
    throw Error(ErrorCode::InvalidPoint, "cannot relate a point to itself");
  }

  ClosureResult result;
  const auto existing = g.get(p, q);

  if (!is_definite(r)) {
    if (!existing) {
      const bool was_closed = g.closed();
      g.set(p, q, r);
      g.mark_closed(was_closed);
    }
    result.labels = g;
    return result;
  }
  if (existing && is_definite(*existing)) {
    if (*existing != r) {
      result.contradiction = make_conflict(p, q, *existing, r);
    }
    result.labels = g;
    return result;
  }

  if (!g.closed()) {
    PointGraph trial = g;
    trial.set(p, q, r);
    result = close(trial);
    if (result.consistent()) {
      g = result.labels;
    } else {
      result.labels = g;
    }
    return result;
  }

  struct Undo {
    std::size_t p, q;
    std::optional<PointRelation> old;
  };
  std::vector<Undo> undo;
  std::deque<PointPair> queue;

  auto write = [&](std::size_t a, std::size_t b, PointRelation rel) {
    undo.push_back({a, b, g.get(a, b)});
    g.set(a, b, rel);
    queue.push_back(PointPair::canonical(a, b));
  };
  auto rollback = [&] {
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
      if (it->old) {
        g.set(it->p, it->q, *it->old);
      } else {
        g.erase(it->p, it->q);
      }
    }
    g.mark_closed(true);
  };
  // Returns false on conflict.
  auto derive = [&](std::size_t a, std::size_t b, PointRelation implied) {
    if (!is_definite(implied)) return true;
    const auto current = g.get(a, b);
    if (current && is_definite(*current)) {
      if (*current != implied) {
        result.contradiction = make_conflict(a, b, *current, implied);
        return false;
      }
      return true;
    }
    write(a, b, implied);
    result.newly_inferred.push_back(make_label(a, b, implied));
    return true;
  };

  write(p, q, r);
  const std::size_t n = g.size();
  while (!queue.empty()) {
    const auto [a, b] = queue.front();
    queue.pop_front();
    const auto ab = g.label(a, b);
    const auto ba = invert(ab);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == a || k == b) continue;
      if (!derive(a, k, compose(ab, g.label(b, k))) ||
          !derive(b, k, compose(ba, g.label(a, k)))) {
        rollback();
        result.newly_inferred.clear();
        result.labels = g;
        return result;
      }
    }
  }
  g.mark_closed(true);
  sort_labels(result.newly_inferred);
  result.labels = g;
  return result;
}

}  // namespace tgame
