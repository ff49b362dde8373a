#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tgame/board.hpp"
#include "tgame/timeml.hpp"

namespace tgame {

inline constexpr int kMinLevel = 2;
inline constexpr int kMaxLevel = 5;

struct Game {
  std::string game_id;
  std::string doc_id;
  int level = 0;
  std::string text;
  std::vector<Entity> entities;            // text order
  std::vector<EndpointLabel> gold_labels;  // definite, closed, no axioms

  friend bool operator==(const Game&, const Game&) = default;
};

struct BuildReport {
  std::size_t windows = 0;
  std::size_t candidates = 0;           // sum of C(n, l) before filtering
  std::size_t inconsistent = 0;         // dropped: contradictory gold
  std::size_t without_relations = 0;    // dropped: no gold label
  std::vector<std::string> warnings;
};

// FNV-1a over "doc_id|sentence_index|id1,id2,..." (ids sorted), hex.
std::string make_game_id(const std::string& doc_id, std::size_t sentence_index,
                         std::vector<std::string> entity_ids);

// All index subsets of size k from n, lexicographic.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k);

// Throws InvalidLevel outside [2, 5]. Output is sorted by doc_id,
// sentence_index, then the sorted entity-id list.
std::vector<Game> build_games(const std::vector<SentenceWindow>& windows, int level,
                              BuildReport* report = nullptr);

// Board with the gold labels installed (GoldImport provenance).
// Throws InconsistentGold.
Board gold_board(const Game& game);

struct LevelStats {
  std::uint64_t tokens = 0;
  std::uint64_t before = 0;
  std::uint64_t equal = 0;
  std::uint64_t after = 0;
  std::uint64_t vague = 0;
  std::uint64_t games = 0;

  friend bool operator==(const LevelStats&, const LevelStats&) = default;
};

using StatsTable = std::map<int, LevelStats>;

std::size_t whitespace_token_count(std::string_view text);
StatsTable corpus_stats(const std::vector<Game>& games);

// Problems found by validate_game; empty when the game is sound.
std::vector<std::string> validate_game(const Game& game);

}  // namespace tgame
