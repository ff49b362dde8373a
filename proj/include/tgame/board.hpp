#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tgame/point_algebra.hpp"

namespace tgame {

enum class EntityKind { Interval, Instant };

std::string_view to_string(EntityKind kind);
std::optional<EntityKind> entity_kind_from_string(std::string_view s);

struct Entity {
  std::string id;
  std::string text;
  std::size_t start_char = 0;  // code points, end exclusive
  std::size_t end_char = 0;
  EntityKind kind = EntityKind::Interval;
  bool is_dct = false;

  friend bool operator==(const Entity&, const Entity&) = default;
};

enum class Side { Start, End, Point };

std::string_view to_string(Side side);

struct EndpointId {
  std::string entity_id;
  Side side = Side::Start;

  // "<entity_id>.<start|end|point>"
  std::string str() const;
  static std::optional<EndpointId> parse(std::string_view s);

  friend bool operator==(const EndpointId&, const EndpointId&) = default;
};

enum class Provenance { Empty, Axiom, User, Inferred, GoldImport };

std::string_view to_string(Provenance p);

// A label between two named endpoints, read source -> target.
struct EndpointLabel {
  EndpointId source;
  EndpointId target;
  PointRelation relation = PointRelation::Vague;

  friend bool operator==(const EndpointLabel&, const EndpointLabel&) = default;
};

// Checks ids, spans and overlap; throws InvalidSpan / OverlappingSpans /
// InvalidPair (duplicate id).
void validate_entities(const std::vector<Entity>& entities);

class Board {
 public:
  // Empty board: no entities, no cells.
  Board() = default;

  // Throws EmptyEntitySet, InvalidSpan, OverlappingSpans.
  static Board build(std::vector<Entity> entities);

  const std::vector<Entity>& entities() const { return entities_; }
  const std::vector<EndpointId>& endpoints() const { return endpoints_; }
  const PointGraph& graph() const { return graph_; }

  const Entity* find_entity(std::string_view id) const;
  std::optional<std::size_t> endpoint_index(const EndpointId& e) const;

  std::size_t endpoint_count() const { return endpoints_.size(); }
  std::size_t visible_cell_count() const;
  std::size_t count(Provenance p) const;

  PointRelation label(std::size_t p, std::size_t q) const { return graph_.label(p, q); }
  Provenance provenance(std::size_t p, std::size_t q) const;

  // Visible cells still open to play, ascending canonical order.
  std::vector<PointPair> empty_cells() const;

  // Asserts r on (p, q). The asserted cell receives `cell_provenance`;
  // cells filled by closure receive `inferred_provenance`. On contradiction
  // the board is unchanged.
  ClosureResult assert_label(std::size_t p, std::size_t q, PointRelation r,
                             Provenance cell_provenance = Provenance::User,
                             Provenance inferred_provenance = Provenance::Inferred);

  // User cells in canonical order, oriented by board order.
  std::vector<EndpointLabel> user_labels() const;
  // Every labelled cell with its provenance, canonical order.
  struct Cell {
    PointPair pair;
    PointRelation relation;
    Provenance provenance;

    friend bool operator==(const Cell&, const Cell&) = default;
  };
  std::vector<Cell> cells() const;

  // Rebuilds over `entities`, replaying User labels whose endpoints survive
  // `remap` (nullopt drops the label). May yield an empty board.
  Board rebuild(std::vector<Entity> entities,
                const std::function<std::optional<EndpointId>(const EndpointId&)>&
                    remap) const;

  // Interval <-> instant toggle. Throws UnknownEntity.
  Board with_entity_kind(std::string_view entity_id, EntityKind kind) const;

 private:
  void seed_axioms();
  std::size_t cell_index(std::size_t p, std::size_t q) const;

  std::vector<Entity> entities_;
  std::vector<EndpointId> endpoints_;
  PointGraph graph_;
  std::vector<Provenance> provenance_;  // n*n, canonical (p < q) entries used
};

inline Board build_board(std::vector<Entity> entities) {
  return Board::build(std::move(entities));
}

inline Board set_entity_kind(const Board& board, std::string_view entity_id,
                             EntityKind kind) {
  return board.with_entity_kind(entity_id, kind);
}

// TimeML TLINK relTypes.
enum class IntervalRelation {
  Before,
  After,
  IBefore,
  IAfter,
  Includes,
  IsIncluded,
  Begins,
  BegunBy,
  Ends,
  EndedBy,
  Simultaneous,
  Identity,
  During,
  DuringInv,
};

inline constexpr IntervalRelation kAllIntervalRelations[] = {
    IntervalRelation::Before,     IntervalRelation::After,
    IntervalRelation::IBefore,    IntervalRelation::IAfter,
    IntervalRelation::Includes,   IntervalRelation::IsIncluded,
    IntervalRelation::Begins,     IntervalRelation::BegunBy,
    IntervalRelation::Ends,       IntervalRelation::EndedBy,
    IntervalRelation::Simultaneous, IntervalRelation::Identity,
    IntervalRelation::During,     IntervalRelation::DuringInv,
};

std::string_view to_string(IntervalRelation r);
// Throws UnknownRelation.
IntervalRelation interval_relation_from_string(std::string_view s);

// One point constraint between interval a (source) and interval b (target).
// source_side / target_side are Start or End.
struct PointConstraint {
  Side source_side;
  Side target_side;
  PointRelation relation;

  friend bool operator==(const PointConstraint&, const PointConstraint&) = default;
};

std::vector<PointConstraint> interval_to_points(IntervalRelation r);

}  // namespace tgame

namespace tgame {

// A contradiction expressed over board endpoints, read source -> target.
struct EndpointConflict {
  EndpointId source;
  EndpointId target;
  PointRelation existing = PointRelation::Vague;
  PointRelation inferred = PointRelation::Vague;
};

EndpointConflict describe(const Board& board, const Contradiction& c);
std::vector<EndpointLabel> describe(const Board& board, const std::vector<PairLabel>& labels);

}  // namespace tgame
