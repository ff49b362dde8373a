#include "tgame/game.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

#include "tgame/error.hpp"

namespace tgame {

std::string make_game_id(const std::string& doc_id, std::size_t sentence_index,
                         std::vector<std::string> entity_ids) {
  std::sort(entity_ids.begin(), entity_ids.end());
  std::string key = doc_id + "|" + std::to_string(sentence_index) + "|";
  for (std::size_t i = 0; i < entity_ids.size(); ++i) {
    if (i > 0) key += ",";
    key += entity_ids[i];
  }
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

namespace {

EndpointId endpoint_of(const Entity& e, Side side) {
  if (e.kind == EntityKind::Instant) return {e.id, Side::Point};
  return {e.id, side};
}

std::vector<EndpointLabel> gold_from_board(const Board& board) {
  std::vector<EndpointLabel> gold;
  for (const auto& cell : board.cells()) {
    if (cell.provenance == Provenance::GoldImport && is_definite(cell.relation)) {
      gold.push_back({board.endpoints()[cell.pair.first],
                      board.endpoints()[cell.pair.second], cell.relation});
    }
  }
  return gold;
}

}  // namespace

std::vector<Game> build_games(const std::vector<SentenceWindow>& windows, int level,
                              BuildReport* report) {
  if (level < kMinLevel || level > kMaxLevel) {
    throw Error(ErrorCode::InvalidLevel,
                "level must be between 2 and 5, got " + std::to_string(level));
  }
  BuildReport local;
  BuildReport& rep = report ? *report : local;

  struct Keyed {
    std::string doc_id;
    std::size_t sentence_index;
    std::vector<std::string> ids;
    Game game;
  };
  std::vector<Keyed> keyed;

  for (const auto& w : windows) {
    ++rep.windows;
    const auto l = static_cast<std::size_t>(level);
    for (const auto& combo : combinations(w.entities.size(), l)) {
      ++rep.candidates;
      std::vector<Entity> subset;
      std::set<std::string> ids;
      for (auto i : combo) {
        subset.push_back(w.entities[i]);
        ids.insert(w.entities[i].id);
      }
      Board board = Board::build(subset);
      bool consistent = true;
      for (const auto& link : w.gold_interval_links) {
        if (!ids.contains(link.source) || !ids.contains(link.target)) continue;
        const Entity* a = board.find_entity(link.source);
        const Entity* b = board.find_entity(link.target);
        for (const auto& pc : interval_to_points(link.relation)) {
          const auto p = board.endpoint_index(endpoint_of(*a, pc.source_side));
          const auto q = board.endpoint_index(endpoint_of(*b, pc.target_side));
          if (*p == *q) continue;
          const auto result = board.assert_label(*p, *q, pc.relation, Provenance::GoldImport,
                                                 Provenance::GoldImport);
          if (!result.consistent()) {
            consistent = false;
            break;
          }
        }
        if (!consistent) break;
      }
      std::vector<std::string> id_list(ids.begin(), ids.end());
      if (!consistent) {
        ++rep.inconsistent;
        rep.warnings.push_back("skipping " + w.doc_id + " sentence " +
                               std::to_string(w.sentence_index) +
                               ": contradictory gold links");
        continue;
      }
      auto gold = gold_from_board(board);
      if (gold.empty()) {
        ++rep.without_relations;
        continue;
      }
      Game game;
      game.game_id = make_game_id(w.doc_id, w.sentence_index, id_list);
      game.doc_id = w.doc_id;
      game.level = level;
      game.text = w.text;
      game.entities = board.entities();
      game.gold_labels = std::move(gold);
      keyed.push_back({w.doc_id, w.sentence_index, std::move(id_list), std::move(game)});
    }
  }

  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.doc_id, a.sentence_index, a.ids) <
           std::tie(b.doc_id, b.sentence_index, b.ids);
  });
  std::vector<Game> games;
  games.reserve(keyed.size());
  for (auto& k : keyed) games.push_back(std::move(k.game));
  return games;
}

Board gold_board(const Game& game) {
  Board board = Board::build(game.entities);
  for (const auto& g : game.gold_labels) {
    const auto p = board.endpoint_index(g.source);
    const auto q = board.endpoint_index(g.target);
    if (!p || !q || *p == *q) {
      throw Error(ErrorCode::InconsistentGold,
                  "game " + game.game_id + " has gold on unknown endpoints " +
                      g.source.str() + " / " + g.target.str());
    }
    const auto result = board.assert_label(*p, *q, g.relation, Provenance::GoldImport,
                                           Provenance::GoldImport);
    if (!result.consistent()) {
      throw Error(ErrorCode::InconsistentGold,
                  "game " + game.game_id + " has contradictory gold at " +
                      g.source.str() + " / " + g.target.str());
    }
  }
  return board;
}

std::size_t whitespace_token_count(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

StatsTable corpus_stats(const std::vector<Game>& games) {
  StatsTable table;
  for (const auto& g : games) {
    auto& row = table[g.level];
    ++row.games;
    row.tokens += whitespace_token_count(g.text);
    for (const auto& label : g.gold_labels) {
      switch (label.relation) {
        case PointRelation::Before: ++row.before; break;
        case PointRelation::Equal: ++row.equal; break;
        case PointRelation::After: ++row.after; break;
        case PointRelation::Vague: ++row.vague; break;
      }
    }
  }
  return table;
}

std::vector<std::string> validate_game(const Game& game) {
  std::vector<std::string> problems;
  if (game.level < kMinLevel || game.level > kMaxLevel) {
    problems.push_back("level " + std::to_string(game.level) + " outside [2, 5]");
  }
  if (game.entities.size() != static_cast<std::size_t>(game.level)) {
    problems.push_back("entity count differs from level");
  }
  if (game.gold_labels.empty()) problems.push_back("no gold relation");
  for (const auto& g : game.gold_labels) {
    if (!is_definite(g.relation)) {
      problems.push_back("vague gold label " + g.source.str() + " / " + g.target.str());
    }
  }
  if (!problems.empty()) return problems;
  try {
    const Board board = gold_board(game);
    if (board.count(Provenance::GoldImport) != game.gold_labels.size()) {
      problems.push_back("gold labels are not closed");
    }
  } catch (const Error& e) {
    problems.emplace_back(e.what());
  }
  return problems;
}

}  // namespace tgame
