#include "tgame/board.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "tgame/error.hpp"

namespace tgame {

std::string_view to_string(EntityKind kind) {
  return kind == EntityKind::Interval ? "interval" : "instant";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view s) {
  if (s == "interval") return EntityKind::Interval;
  if (s == "instant") return EntityKind::Instant;
  return std::nullopt;
}

std::string_view to_string(Side side) {
  switch (side) {
    case Side::Start: return "start";
    case Side::End: return "end";
    case Side::Point: return "point";
  }
  return "point";
}

std::string EndpointId::str() const {
  return entity_id + "." + std::string(to_string(side));
}

std::optional<EndpointId> EndpointId::parse(std::string_view s) {
  const auto dot = s.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return std::nullopt;
  const auto suffix = s.substr(dot + 1);
  EndpointId id{std::string(s.substr(0, dot)), Side::Start};
  if (suffix == "start") {
    id.side = Side::Start;
  } else if (suffix == "end") {
    id.side = Side::End;
  } else if (suffix == "point") {
    id.side = Side::Point;
  } else {
    return std::nullopt;
  }
  return id;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Empty: return "empty";
    case Provenance::Axiom: return "axiom";
    case Provenance::User: return "user";
    case Provenance::Inferred: return "inferred";
    case Provenance::GoldImport: return "gold";
  }
  return "empty";
}

void validate_entities(const std::vector<Entity>& entities) {
  std::set<std::string> ids;
  for (const auto& e : entities) {
    if (e.start_char >= e.end_char) {
      throw Error(ErrorCode::InvalidSpan,
                  "entity '" + e.id + "' has an empty or inverted span");
    }
    if (e.id.empty() || !ids.insert(e.id).second) {
      throw Error(ErrorCode::MalformedInput,
                  "entity ids must be unique and non-empty ('" + e.id + "')");
    }
  }
  std::vector<const Entity*> sorted;
  for (const auto& e : entities) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const Entity* a, const Entity* b) {
    return a->start_char < b->start_char;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->start_char < sorted[i - 1]->end_char) {
      throw Error(ErrorCode::OverlappingSpans, "entities '" + sorted[i - 1]->id +
                                                   "' and '" + sorted[i]->id +
                                                   "' overlap");
    }
  }
}

Board Board::build(std::vector<Entity> entities) {
  if (entities.empty()) {
    throw Error(ErrorCode::EmptyEntitySet, "a board needs at least one entity");
  }
  validate_entities(entities);
  std::stable_sort(entities.begin(), entities.end(),
                   [](const Entity& a, const Entity& b) {
                     return a.start_char < b.start_char;
                   });
  Board board;
  board.entities_ = std::move(entities);
  for (const auto& e : board.entities_) {
    if (e.kind == EntityKind::Interval) {
      board.endpoints_.push_back({e.id, Side::Start});
      board.endpoints_.push_back({e.id, Side::End});
    } else {
      board.endpoints_.push_back({e.id, Side::Point});
    }
  }
  const auto n = board.endpoints_.size();
  board.graph_ = PointGraph(n);
  board.provenance_.assign(n * n, Provenance::Empty);
  board.seed_axioms();
  return board;
}

void Board::seed_axioms() {
  for (std::size_t p = 0; p + 1 < endpoints_.size(); ++p) {
    if (endpoints_[p].side == Side::Start) {
      assert_label(p, p + 1, PointRelation::Before, Provenance::Axiom);
    }
  }
}

const Entity* Board::find_entity(std::string_view id) const {
  for (const auto& e : entities_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::optional<std::size_t> Board::endpoint_index(const EndpointId& e) const {
  for (std::size_t i = 0; i < endpoints_.size(); ++i) {
    if (endpoints_[i] == e) return i;
  }
  return std::nullopt;
}

std::size_t Board::visible_cell_count() const {
  const auto n = endpoints_.size();
  return n < 2 ? 0 : n * (n - 1) / 2;
}

std::size_t Board::cell_index(std::size_t p, std::size_t q) const {
  if (p > q) std::swap(p, q);
  return p * endpoints_.size() + q;
}

Provenance Board::provenance(std::size_t p, std::size_t q) const {
  if (p == q || p >= endpoints_.size() || q >= endpoints_.size()) {
    return Provenance::Empty;
  }
  return provenance_[cell_index(p, q)];
}

std::size_t Board::count(Provenance prov) const {
  std::size_t total = 0;
  for (std::size_t p = 0; p < endpoints_.size(); ++p) {
    for (std::size_t q = p + 1; q < endpoints_.size(); ++q) {
      total += provenance_[cell_index(p, q)] == prov;
    }
  }
  return total;
}

std::vector<PointPair> Board::empty_cells() const {
  std::vector<PointPair> out;
  for (std::size_t p = 0; p < endpoints_.size(); ++p) {
    for (std::size_t q = p + 1; q < endpoints_.size(); ++q) {
      if (provenance_[cell_index(p, q)] == Provenance::Empty) out.push_back({p, q});
    }
  }
  return out;
}

ClosureResult Board::assert_label(std::size_t p, std::size_t q, PointRelation r,
                                  Provenance cell_provenance,
                                  Provenance inferred_provenance) {
  auto result = assert_relation(graph_, p, q, r);
  if (!result.consistent()) return result;
  const auto now = graph_.get(p, q);
  if (now && *now == r) provenance_[cell_index(p, q)] = cell_provenance;
  for (const auto& inferred : result.newly_inferred) {
    provenance_[cell_index(inferred.pair.first, inferred.pair.second)] =
        inferred_provenance;
  }
  return result;
}

std::vector<EndpointLabel> Board::user_labels() const {
  std::vector<EndpointLabel> out;
  for (const auto& c : cells()) {
    if (c.provenance == Provenance::User) {
      out.push_back({endpoints_[c.pair.first], endpoints_[c.pair.second], c.relation});
    }
  }
  return out;
}

std::vector<Board::Cell> Board::cells() const {
  std::vector<Cell> out;
  for (const auto& l : graph_.labels()) {
    out.push_back({l.pair, l.relation, provenance(l.pair.first, l.pair.second)});
  }
  return out;
}

Board Board::rebuild(
    std::vector<Entity> entities,
    const std::function<std::optional<EndpointId>(const EndpointId&)>& remap) const {
  if (entities.empty()) {
    validate_entities(entities);
    return Board{};
  }
  Board next = Board::build(std::move(entities));
  for (const auto& label : user_labels()) {
    const auto source = remap(label.source);
    const auto target = remap(label.target);
    if (!source || !target) continue;
    const auto p = next.endpoint_index(*source);
    const auto q = next.endpoint_index(*target);
    if (!p || !q || *p == *q) continue;
    const auto result = next.assert_label(*p, *q, label.relation);
    if (!result.consistent()) {
      throw std::logic_error("replaying a subset of consistent labels failed");
    }
    if (next.graph_.label(*p, *q) == label.relation) {
      next.provenance_[next.cell_index(*p, *q)] = Provenance::User;
    }
  }
  return next;
}

Board Board::with_entity_kind(std::string_view entity_id, EntityKind kind) const {
  const Entity* target = find_entity(entity_id);
  if (target == nullptr) {
    throw Error(ErrorCode::UnknownEntity,
                "no entity '" + std::string(entity_id) + "'");
  }
  if (target->kind == kind) return *this;
  auto entities = entities_;
  for (auto& e : entities) {
    if (e.id == entity_id) e.kind = kind;
  }
  const std::string id(entity_id);
  return rebuild(std::move(entities),
                 [&](const EndpointId& e) -> std::optional<EndpointId> {
                   if (e.entity_id != id) return e;
                   if (kind == EntityKind::Instant) {
                     if (e.side == Side::End) return std::nullopt;
                     return EndpointId{id, Side::Point};
                   }
                   return EndpointId{id, Side::Start};
                 });
}

std::string_view to_string(IntervalRelation r) {
  switch (r) {
    case IntervalRelation::Before: return "BEFORE";
    case IntervalRelation::After: return "AFTER";
    case IntervalRelation::IBefore: return "IBEFORE";
    case IntervalRelation::IAfter: return "IAFTER";
    case IntervalRelation::Includes: return "INCLUDES";
    case IntervalRelation::IsIncluded: return "IS_INCLUDED";
    case IntervalRelation::Begins: return "BEGINS";
    case IntervalRelation::BegunBy: return "BEGUN_BY";
    case IntervalRelation::Ends: return "ENDS";
    case IntervalRelation::EndedBy: return "ENDED_BY";
    case IntervalRelation::Simultaneous: return "SIMULTANEOUS";
    case IntervalRelation::Identity: return "IDENTITY";
    case IntervalRelation::During: return "DURING";
    case IntervalRelation::DuringInv: return "DURING_INV";
  }
  return "";
}

IntervalRelation interval_relation_from_string(std::string_view s) {
  for (auto r : kAllIntervalRelations) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorCode::UnknownRelation,
              "unknown interval relation '" + std::string(s) + "'");
}

std::vector<PointConstraint> interval_to_points(IntervalRelation r) {
  using R = PointRelation;
  constexpr auto S = Side::Start;
  constexpr auto E = Side::End;
  switch (r) {
    case IntervalRelation::Before: return {{E, S, R::Before}};
    case IntervalRelation::After: return {{S, E, R::After}};
    case IntervalRelation::IBefore: return {{E, S, R::Equal}};
    case IntervalRelation::IAfter: return {{S, E, R::Equal}};
    case IntervalRelation::Includes: return {{S, S, R::Before}, {E, E, R::After}};
    case IntervalRelation::IsIncluded: return {{S, S, R::After}, {E, E, R::Before}};
    case IntervalRelation::Begins: return {{S, S, R::Equal}, {E, E, R::Before}};
    case IntervalRelation::BegunBy: return {{S, S, R::Equal}, {E, E, R::After}};
    case IntervalRelation::Ends: return {{S, S, R::After}, {E, E, R::Equal}};
    case IntervalRelation::EndedBy: return {{S, S, R::Before}, {E, E, R::Equal}};
    case IntervalRelation::Simultaneous:
    case IntervalRelation::Identity:
    case IntervalRelation::During:
    case IntervalRelation::DuringInv:
      return {{S, S, R::Equal}, {E, E, R::Equal}};
  }
  throw Error(ErrorCode::UnknownRelation, "unmapped interval relation");
}

}  // namespace tgame

namespace tgame {

EndpointConflict describe(const Board& board, const Contradiction& c) {
  return {board.endpoints()[c.pair.first], board.endpoints()[c.pair.second], c.existing,
          c.inferred};
}

std::vector<EndpointLabel> describe(const Board& board, const std::vector<PairLabel>& labels) {
  std::vector<EndpointLabel> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    out.push_back({board.endpoints()[l.pair.first], board.endpoints()[l.pair.second],
                   l.relation});
  }
  return out;
}

}  // namespace tgame
