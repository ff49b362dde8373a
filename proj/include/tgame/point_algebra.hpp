#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace tgame {

// The four point labels. Vague means "no constraint", not a fifth ordering.
enum class PointRelation : std::uint8_t { Before, After, Equal, Vague };

inline constexpr PointRelation kAllRelations[] = {
    PointRelation::Before, PointRelation::After, PointRelation::Equal,
    PointRelation::Vague};

PointRelation invert(PointRelation r) noexcept;

// r1 relates a->b, r2 relates b->c; returns the tightest label for a->c.
PointRelation compose(PointRelation r1, PointRelation r2) noexcept;

inline bool is_definite(PointRelation r) noexcept {
  return r != PointRelation::Vague;
}

std::string_view symbol(PointRelation r) noexcept;
std::optional<PointRelation> relation_from_symbol(std::string_view s) noexcept;

// Unordered pair of distinct points, stored with first < second.
struct PointPair {
  std::size_t first = 0;
  std::size_t second = 0;

  static PointPair canonical(std::size_t p, std::size_t q) noexcept {
    return p < q ? PointPair{p, q} : PointPair{q, p};
  }
  friend bool operator==(const PointPair&, const PointPair&) = default;
  friend auto operator<=>(const PointPair&, const PointPair&) = default;
};

struct PairLabel {
  PointPair pair;
  PointRelation relation = PointRelation::Vague;
  friend bool operator==(const PairLabel&, const PairLabel&) = default;
};

// Dense relation matrix over n points. Only the upper triangle is stored;
// reading (p, q) with p > q yields the inverse of the stored label.
class PointGraph {
 public:
  PointGraph() = default;
  explicit PointGraph(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  // nullopt when the pair carries no label at all (distinct from Vague).
  std::optional<PointRelation> get(std::size_t p, std::size_t q) const;
  // Absent pairs read as Vague; (p, p) reads as Equal.
  PointRelation label(std::size_t p, std::size_t q) const;

  // Raw write without propagation; r is read in the p->q direction.
  void set(std::size_t p, std::size_t q, PointRelation r);
  void erase(std::size_t p, std::size_t q);

  // Every stored label in canonical (first < second) orientation, ascending.
  std::vector<PairLabel> labels() const;
  std::vector<PairLabel> definite_labels() const;

  bool closed() const noexcept { return closed_; }
  void mark_closed(bool closed) noexcept { closed_ = closed; }

  friend bool operator==(const PointGraph& a, const PointGraph& b) {
    return a.n_ == b.n_ && a.cells_ == b.cells_;
  }

 private:
  static constexpr std::uint8_t kAbsent = 0xff;
  std::size_t index(std::size_t p, std::size_t q) const;
  void check_point(std::size_t p) const;

  std::size_t n_ = 0;
  std::vector<std::uint8_t> cells_;  // upper triangle, row-major
  bool closed_ = true;
};

struct Contradiction {
  PointPair pair;
  PointRelation existing = PointRelation::Vague;  // read first->second
  PointRelation inferred = PointRelation::Vague;  // read first->second
  friend bool operator==(const Contradiction&, const Contradiction&) = default;
};

struct ClosureResult {
  std::optional<Contradiction> contradiction;
  PointGraph labels;
  std::vector<PairLabel> newly_inferred;

  bool consistent() const noexcept { return !contradiction.has_value(); }
};

// Path-consistency fixed point. Conflicts are reported for the first triple
// found in ascending (i, k, j) order within the first sweep that hits one.
ClosureResult close(const PointGraph& g);

// Sets label(p, q) = r and propagates incrementally. On contradiction the
// graph is left exactly as it was before the call.
ClosureResult assert_relation(PointGraph& g, std::size_t p, std::size_t q,
                              PointRelation r);

}  // namespace tgame
