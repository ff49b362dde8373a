// Operator CLI: corpus building, statistics, validation, terminal play and
// the HTTP service.

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "tgame/engine.hpp"
#include "tgame/error.hpp"
#include "tgame/game.hpp"
#include "tgame/json_io.hpp"
#include "tgame/service.hpp"
#include "tgame/timeml.hpp"

namespace fs = std::filesystem;
using namespace tgame;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_levels(const std::string& raw) {
  std::vector<int> levels;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int level = 0;
    try {
      level = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Error(ErrorCode::InvalidLevel, "bad level '" + item + "'");
    }
    if (level < kMinLevel || level > kMaxLevel) {
      throw Error(ErrorCode::InvalidLevel, "level " + item + " outside [2, 5]");
    }
    levels.push_back(level);
  }
  if (levels.empty()) throw Error(ErrorCode::InvalidLevel, "no levels given");
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Game> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot read corpus " + path);
  try {
    return io::read_corpus(in);
  } catch (const Error& e) {
    throw IoFailure(std::string("malformed corpus: ") + e.what());
  }
}

int build_corpus(const std::string& input, const std::string& levels_raw,
                 const std::string& output) {
  const auto levels = parse_levels(levels_raw);
  std::error_code ec;
  if (!fs::is_directory(input, ec)) throw IoFailure("input is not a readable directory: " + input);

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(input, ec)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".tml" || ext == ".xml" || ext == ".timeml") files.push_back(entry.path());
  }
  if (ec) throw IoFailure("cannot walk " + input + ": " + ec.message());
  std::sort(files.begin(), files.end());

  std::vector<TimeMLDoc> docs;
  for (const auto& f : files) {
    auto stem = f.filename().string();
    for (const char* suffix : {".tml", ".xml", ".timeml"}) {
      if (stem.ends_with(suffix)) stem.resize(stem.size() - std::string_view(suffix).size());
    }
    try {
      docs.push_back(parse_timeml(read_file(f), stem));
    } catch (const Error& e) {
      throw Error(e.code(), f.string() + ": " + e.what());
    }
  }
  std::sort(docs.begin(), docs.end(),
            [](const TimeMLDoc& a, const TimeMLDoc& b) { return a.doc_id < b.doc_id; });

  std::vector<SentenceWindow> windows;
  for (const auto& d : docs) {
    auto w = split_sentences(d);
    windows.insert(windows.end(), std::make_move_iterator(w.begin()),
                   std::make_move_iterator(w.end()));
  }

  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + output);
  for (int level : levels) {
    BuildReport report;
    const auto games = build_games(windows, level, &report);
    io::write_corpus(out, games);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    std::cerr << "level " << level << ": " << report.candidates << " candidates, "
              << games.size() << " games (" << report.without_relations
              << " without relations, " << report.inconsistent << " inconsistent)\n";
  }
  if (!out) throw IoFailure("write failed for " + output);
  std::cerr << docs.size() << " documents, " << windows.size() << " sentences\n";
  return kExitOk;
}

int stats(const std::string& path, bool as_json) {
  const auto table = corpus_stats(load_corpus(path));
  if (as_json) {
    std::cout << io::to_json(table).dump(2) << '\n';
  } else {
    std::cout << io::format_stats_table(table);
  }
  return kExitOk;
}

int validate(const std::string& path) {
  const auto games = load_corpus(path);
  std::size_t bad = 0;
  for (const auto& g : games) {
    for (const auto& problem : validate_game(g)) {
      std::cout << g.game_id << ": " << problem << '\n';
      ++bad;
    }
  }
  if (bad > 0) {
    std::cout << bad << " problem(s) in " << games.size() << " games\n";
    return kExitValidation;
  }
  std::cout << "ok: " << games.size() << " games\n";
  return kExitOk;
}

void render_board(const Episode& ep, std::ostream& out) {
  const Board& b = ep.board();
  const auto& eps = b.endpoints();
  const auto j = eps.size();
  out << "endpoints:\n";
  for (std::size_t i = 0; i < j; ++i) {
    const Entity* e = b.find_entity(eps[i].entity_id);
    const char* tag = eps[i].side == Side::Point ? "i " : eps[i].side == Side::Start ? "s " : "e ";
    out << "  [" << i << "] " << tag << e->text << " (" << eps[i].str() << ")\n";
  }
  if (j < 2) return;
  out << "     ";
  for (std::size_t c = 1; c < j; ++c) out << ' ' << std::setw(3) << (c - 1);
  out << '\n';
  for (std::size_t r = 0; r + 1 < j; ++r) {
    out << std::setw(4) << r << ' ';
    for (std::size_t c = 1; c < j; ++c) {
      std::string cell = " ";
      if (c > r) {
        const auto prov = b.provenance(r, c);
        cell = prov == Provenance::Empty ? "." : std::string(symbol(b.label(r, c)));
        if (prov == Provenance::Inferred) cell += '*';
        if (prov == Provenance::Axiom) cell += '#';
      }
      out << ' ' << std::setw(3) << cell;
    }
    out << '\n';
  }
  out << "(. open, * inferred, # axiom; rows are endpoints 0.." << j - 2
      << ", column c is endpoint c+1)\n";
}

void render_comparison(const Episode& ep, std::ostream& out) {
  out << "comparison (predicted / gold):\n";
  for (const auto& c : ep.comparison()) {
    out << "  " << c.source.str() << " " << c.target.str() << "  " << symbol(c.predicted)
        << " / " << (c.gold ? std::string(symbol(*c.gold)) : std::string("none"))
        << (c.mismatch ? "  MISMATCH" : "") << '\n';
  }
}

int play(const std::string& corpus_path, int level, std::uint64_t seed,
         const std::string& scoring_path) {
  if (level < kMinLevel || level > kMaxLevel) {
    throw Error(ErrorCode::InvalidLevel, "level must be between 2 and 5");
  }
  const GameCorpus corpus(load_corpus(corpus_path));
  const auto& pool = corpus.level(level);
  if (pool.empty()) throw Error(ErrorCode::InvalidLevel, "no games at level " + std::to_string(level));
  ScoringPolicy policy;
  if (!scoring_path.empty()) policy = load_scoring_policy(scoring_path);
  std::mt19937_64 rng(seed);
  auto ep = Episode::reset(pool[rng() % pool.size()], policy);

  auto& out = std::cout;
  out << "game " << ep.game().game_id << " (level " << level << ")\n";
  out << ep.game().text << "\n\n";
  std::string line;
  while (!ep.done()) {
    render_board(ep, out);
    out << "score " << ep.score() << "> " << std::flush;
    if (!std::getline(std::cin, line)) {
      out << "\n(input closed)\n";
      return kExitOk;
    }
    std::istringstream in(line);
    std::string row_s, col_s, rel_s;
    if (!(in >> row_s)) continue;
    if (row_s == "quit" || row_s == "q") {
      out << "\n";
      return kExitOk;
    }
    if (!(in >> col_s >> rel_s)) {
      out << "expected: <row> <col> <rel>   (rel one of < > = -)\n";
      continue;
    }
    std::size_t row = 0, col = 0;
    try {
      row = std::stoul(row_s);
      col = std::stoul(col_s) + 1;
    } catch (const std::exception&) {
      out << "row and col must be numbers\n";
      continue;
    }
    const auto rel = relation_from_symbol(rel_s);
    if (!rel) {
      out << "relation must be one of < > = -\n";
      continue;
    }
    if (row >= ep.board().endpoint_count() || col >= ep.board().endpoint_count() || col <= row) {
      out << "no such cell\n";
      continue;
    }
    try {
      const auto o = ep.step(row, col, *rel);
      out << "reward " << o.step_reward;
      if (!o.inferred.empty()) {
        out << ", inferred:";
        for (const auto& l : o.inferred) {
          out << ' ' << l.source.str() << symbol(l.relation) << l.target.str();
        }
      }
      out << '\n';
      if (o.conflict) {
        out << "contradiction: " << o.conflict->source.str() << ' '
            << symbol(o.conflict->existing) << ' ' << o.conflict->target.str()
            << " already holds\n";
      }
      if (o.done) {
        out << "terminal " << (o.terminal_reward > 0 ? "+" : "") << o.terminal_reward << " ("
            << to_string(o.status) << ")\n";
      }
    } catch (const Error& e) {
      out << e.what() << '\n';
    }
  }
  render_board(ep, out);
  render_comparison(ep, out);
  out << "final score " << ep.score() << '\n';
  return kExitOk;
}

httplib::Server* g_server = nullptr;

void handle_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

int serve(const std::string& config_path, const std::string& host, int port,
          const std::string& corpus_path, std::optional<std::uint64_t> seed,
          const std::string& snapshot) {
  ServiceConfig config;
  if (!config_path.empty()) {
    try {
      config = load_service_config(config_path);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotFound) throw IoFailure(e.what());
      throw;
    }
  }
  apply_env_overrides(config);
  if (!host.empty()) config.host = host;
  if (port >= 0) config.port = port;
  if (!corpus_path.empty()) config.corpus_path = corpus_path;
  if (seed) config.seed = *seed;
  if (!snapshot.empty()) config.snapshot_path = snapshot;
  if (config.corpus_path.empty()) throw IoFailure("no corpus configured");

  GameCorpus corpus;
  try {
    corpus = GameCorpus::load(config.corpus_path);
  } catch (const Error& e) {
    throw IoFailure(e.what());
  }
  Api api(config, std::move(corpus));
  api.load_snapshot();

  httplib::Server server;
  mount(server, api);
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  if (!server.bind_to_port(config.host, config.port)) {
    throw IoFailure("cannot bind " + config.host + ":" + std::to_string(config.port));
  }
  std::cerr << "serving " << api.corpus().size() << " games on " << config.host << ":"
            << config.port << std::endl;
  server.listen_after_bind();
  g_server = nullptr;
  api.save_snapshot();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal game: corpus tooling, terminal play and HTTP service"};
  app.require_subcommand(1);

  std::string input, output, levels = "2,3,4,5";
  auto* build = app.add_subcommand("build-corpus", "Generate games from TimeML documents");
  build->add_option("--input", input, "Directory of TimeML files")->required();
  build->add_option("--levels", levels, "Comma-separated levels in [2, 5]");
  build->add_option("--output", output, "Output JSON Lines file")->required();

  std::string stats_path;
  bool stats_json = false;
  auto* stats_cmd = app.add_subcommand("stats", "Per-level corpus statistics");
  stats_cmd->add_option("corpus", stats_path, "Game corpus (JSONL)")->required();
  stats_cmd->add_flag("--json", stats_json, "Emit JSON");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check gold consistency of a corpus");
  validate_cmd->add_option("corpus", validate_path, "Game corpus (JSONL)")->required();

  std::string play_corpus, scoring;
  int play_level = 2;
  std::uint64_t play_seed = 0;
  auto* play_cmd = app.add_subcommand("play", "Play one game in the terminal");
  play_cmd->add_option("--corpus", play_corpus, "Game corpus (JSONL)")->required();
  play_cmd->add_option("--level", play_level, "Level in [2, 5]")->required();
  play_cmd->add_option("--seed", play_seed, "Game sampling seed");
  play_cmd->add_option("--scoring", scoring, "Scoring policy override (JSON)");

  std::string serve_config, serve_host, serve_corpus, serve_snapshot;
  int serve_port = -1;
  std::optional<std::uint64_t> serve_seed;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--config", serve_config, "Service config file (JSON)");
  serve_cmd->add_option("--host", serve_host, "Bind address");
  serve_cmd->add_option("--port", serve_port, "Port");
  serve_cmd->add_option("--corpus", serve_corpus, "Game corpus (JSONL)");
  serve_cmd->add_option("--seed", serve_seed, "Game sampling seed (default TG_SEED)");
  serve_cmd->add_option("--snapshot", serve_snapshot, "Snapshot file (default TG_SNAPSHOT_PATH)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*build) return build_corpus(input, levels, output);
    if (*stats_cmd) return stats(stats_path, stats_json);
    if (*validate_cmd) return validate(validate_path);
    if (*play_cmd) return play(play_corpus, play_level, play_seed, scoring);
    if (*serve_cmd) {
      return serve(serve_config, serve_host, serve_port, serve_corpus, serve_seed,
                   serve_snapshot);
    }
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::NotFound ? kExitIo : kExitValidation;
  }
  return kExitOk;
}
