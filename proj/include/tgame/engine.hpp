#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tgame/board.hpp"
#include "tgame/game.hpp"

namespace tgame {

struct ScoringPolicy {
  double step_match = 1.0;
  double step_no_gold = 0.5;
  double step_mismatch = -1.0;
  double terminal_coherent = 10.0;
  double terminal_incoherent = -10.0;

  friend bool operator==(const ScoringPolicy&, const ScoringPolicy&) = default;
};

// Reads overrides from a JSON config file ({"step_match": 1.0, ...}).
// Unknown keys are rejected (MalformedInput).
ScoringPolicy load_scoring_policy(const std::string& path);

enum class EpisodeStatus { InProgress, WonCoherent, LostIncoherent };

std::string_view to_string(EpisodeStatus s);

struct CellComparison {
  EndpointId source;
  EndpointId target;
  PointRelation predicted = PointRelation::Vague;
  std::optional<PointRelation> gold;
  Provenance provenance = Provenance::Empty;
  bool mismatch = false;
};

struct StepRecord {
  EndpointId source;
  EndpointId target;
  PointRelation relation = PointRelation::Vague;
  double reward = 0.0;  // step reward only
  std::vector<EndpointLabel> inferred;
};

struct StepOutcome {
  double reward = 0.0;  // step reward plus terminal reward when done
  double step_reward = 0.0;
  double terminal_reward = 0.0;
  bool done = false;
  EpisodeStatus status = EpisodeStatus::InProgress;
  double score = 0.0;
  std::vector<EndpointLabel> inferred;
  std::optional<EndpointConflict> conflict;
  std::optional<std::vector<CellComparison>> comparison;
};

class Episode {
 public:
  // Fresh board with axioms; finishes immediately when nothing is playable.
  static Episode reset(std::shared_ptr<const Game> game, ScoringPolicy policy = {});

  // Either orientation is accepted. Throws EpisodeFinished, InvalidPair,
  // CellNotPlayable.
  StepOutcome step(const EndpointId& source, const EndpointId& target, PointRelation r);
  StepOutcome step(std::size_t p, std::size_t q, PointRelation r);

  // Throws EpisodeInProgress.
  std::vector<CellComparison> comparison() const;

  const Game& game() const { return *game_; }
  std::shared_ptr<const Game> game_ptr() const { return game_; }
  const Board& board() const { return board_; }
  const ScoringPolicy& policy() const { return policy_; }
  double score() const { return score_; }
  double terminal_reward() const { return terminal_reward_; }
  EpisodeStatus status() const { return status_; }
  bool done() const { return status_ != EpisodeStatus::InProgress; }
  const std::vector<StepRecord>& steps() const { return steps_; }
  std::size_t playable_count() const { return board_.empty_cells().size(); }
  bool playable(std::size_t p, std::size_t q) const;

  // Gold read p -> q, nullopt when the gold has no definite label.
  std::optional<PointRelation> gold(std::size_t p, std::size_t q) const;

 private:
  void finish(EpisodeStatus status);

  std::shared_ptr<const Game> game_;
  ScoringPolicy policy_;
  Board board_;
  PointGraph gold_;
  double score_ = 0.0;
  double terminal_reward_ = 0.0;
  EpisodeStatus status_ = EpisodeStatus::InProgress;
  std::vector<StepRecord> steps_;
};

}  // namespace tgame
