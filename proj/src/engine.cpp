#include "tgame/engine.hpp"

#include <fstream>
#include <utility>

#include "json.hpp"

#include "tgame/error.hpp"

namespace tgame {

ScoringPolicy load_scoring_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open scoring config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("scoring config: ") + e.what());
  }
  ScoringPolicy p;
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "scoring config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) {
      throw Error(ErrorCode::MalformedInput, "scoring value '" + key + "' must be a number");
    }
    const double v = value.get<double>();
    if (key == "step_match") {
      p.step_match = v;
    } else if (key == "step_no_gold") {
      p.step_no_gold = v;
    } else if (key == "step_mismatch") {
      p.step_mismatch = v;
    } else if (key == "terminal_coherent") {
      p.terminal_coherent = v;
    } else if (key == "terminal_incoherent") {
      p.terminal_incoherent = v;
    } else {
      throw Error(ErrorCode::MalformedInput, "unknown scoring key '" + key + "'");
    }
  }
  return p;
}

std::string_view to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::InProgress: return "in_progress";
    case EpisodeStatus::WonCoherent: return "won_coherent";
    case EpisodeStatus::LostIncoherent: return "lost_incoherent";
  }
  return "in_progress";
}

Episode Episode::reset(std::shared_ptr<const Game> game, ScoringPolicy policy) {
  Episode ep;
  ep.game_ = std::move(game);
  ep.policy_ = policy;
  ep.board_ = Board::build(ep.game_->entities);
  // Gold lives in its own graph, indexed like the live board.
  const Board gold = gold_board(*ep.game_);
  ep.gold_ = PointGraph(gold.endpoint_count());
  for (const auto& cell : gold.cells()) {
    if (cell.provenance == Provenance::GoldImport) {
      ep.gold_.set(cell.pair.first, cell.pair.second, cell.relation);
    }
  }
  if (ep.board_.empty_cells().empty()) ep.finish(EpisodeStatus::WonCoherent);
  return ep;
}

std::optional<PointRelation> Episode::gold(std::size_t p, std::size_t q) const {
  const auto g = gold_.get(p, q);
  if (g && is_definite(*g)) return g;
  return std::nullopt;
}

bool Episode::playable(std::size_t p, std::size_t q) const {
  return !done() && p != q && board_.provenance(p, q) == Provenance::Empty;
}

void Episode::finish(EpisodeStatus status) {
  status_ = status;
  terminal_reward_ = status == EpisodeStatus::WonCoherent ? policy_.terminal_coherent
                                                          : policy_.terminal_incoherent;
  score_ += terminal_reward_;
}

StepOutcome Episode::step(const EndpointId& source, const EndpointId& target,
                          PointRelation r) {
  if (done()) throw Error(ErrorCode::EpisodeFinished, "episode already finished");
  const auto p = board_.endpoint_index(source);
  const auto q = board_.endpoint_index(target);
  if (!p || !q || *p == *q) {
    throw Error(ErrorCode::InvalidPair,
                "no playable pair " + source.str() + " / " + target.str());
  }
  return step(*p, *q, r);
}

StepOutcome Episode::step(std::size_t p, std::size_t q, PointRelation r) {
  if (done()) throw Error(ErrorCode::EpisodeFinished, "episode already finished");
  if (p == q || p >= board_.endpoint_count() || q >= board_.endpoint_count()) {
    throw Error(ErrorCode::InvalidPair, "invalid endpoint pair");
  }
  if (board_.provenance(p, q) != Provenance::Empty) {
    throw Error(ErrorCode::CellNotPlayable,
                "cell " + board_.endpoints()[p].str() + " / " + board_.endpoints()[q].str() +
                    " is already filled");
  }

  StepOutcome out;
  const auto expected = gold(p, q);
  if (!expected) {
    out.step_reward = policy_.step_no_gold;
  } else {
    out.step_reward = *expected == r ? policy_.step_match : policy_.step_mismatch;
  }
  score_ += out.step_reward;

  StepRecord record{board_.endpoints()[p], board_.endpoints()[q], r, out.step_reward, {}};
  const auto result = board_.assert_label(p, q, r);
  if (!result.consistent()) {
    out.conflict = describe(board_, *result.contradiction);
    steps_.push_back(std::move(record));
    finish(EpisodeStatus::LostIncoherent);
  } else {
    record.inferred = describe(board_, result.newly_inferred);
    out.inferred = record.inferred;
    steps_.push_back(std::move(record));
    if (board_.empty_cells().empty()) finish(EpisodeStatus::WonCoherent);
  }

  out.status = status_;
  out.done = done();
  out.terminal_reward = out.done ? terminal_reward_ : 0.0;
  out.reward = out.step_reward + out.terminal_reward;
  out.score = score_;
  if (out.done) out.comparison = comparison();
  return out;
}

std::vector<CellComparison> Episode::comparison() const {
  if (!done()) throw Error(ErrorCode::EpisodeInProgress, "episode still in progress");
  std::vector<CellComparison> out;
  const auto n = board_.endpoint_count();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const auto prov = board_.provenance(p, q);
      if (prov == Provenance::Axiom) continue;
      CellComparison c;
      c.source = board_.endpoints()[p];
      c.target = board_.endpoints()[q];
      c.provenance = prov;
      c.predicted = prov == Provenance::Empty ? PointRelation::Vague : board_.label(p, q);
      c.gold = gold(p, q);
      c.mismatch = c.gold.has_value() && c.predicted != *c.gold;
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace tgame
