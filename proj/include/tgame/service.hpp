#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tgame/annotation.hpp"
#include "tgame/engine.hpp"
#include "tgame/game.hpp"

namespace httplib {
class Server;
}

namespace tgame {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string corpus_path;
  std::uint64_t seed = 0;
  std::string snapshot_path;
  std::string cors_origin = "*";
  ScoringPolicy scoring;
};

// JSON config file keys: host, port, corpus, seed, snapshot, cors_origin,
// scoring{...}. Throws MalformedInput / NotFound.
ServiceConfig load_service_config(const std::string& path);
// TG_SEED, TG_SNAPSHOT_PATH, TG_CORPUS, TG_PORT, TG_HOST.
void apply_env_overrides(ServiceConfig& config);

class GameCorpus {
 public:
  GameCorpus() = default;
  explicit GameCorpus(std::vector<Game> games);
  // Throws NotFound when the file cannot be opened, MalformedInput on bad lines.
  static GameCorpus load(const std::string& path);

  const std::vector<std::shared_ptr<const Game>>& level(int l) const;
  std::shared_ptr<const Game> find(std::string_view game_id) const;
  std::map<int, std::size_t> level_counts() const;
  std::size_t size() const { return all_.size(); }

 private:
  std::vector<std::shared_ptr<const Game>> all_;
  std::map<int, std::vector<std::shared_ptr<const Game>>> by_level_;
};

// In-memory store. Entries carry their own mutex so requests against one
// session are serialized while distinct sessions proceed in parallel.
class SessionStore {
 public:
  struct EpisodeEntry {
    std::mutex mutex;
    Episode episode;
  };
  struct AnnotationEntry {
    std::mutex mutex;
    Session session;
  };

  std::string add_episode(Episode ep);
  std::string next_annotation_id();
  void add_annotation(Session s);
  std::shared_ptr<EpisodeEntry> episode(std::string_view id) const;     // NotFound
  std::shared_ptr<AnnotationEntry> annotation(std::string_view id) const;  // NotFound

  // {episodes:[{id, game_id, actions}], annotations:[{id, seed, export}]}
  std::string snapshot() const;
  void restore(std::string_view snapshot, const GameCorpus& corpus, const ScoringPolicy& policy);

 private:
  mutable std::mutex mutex_;
  std::uint64_t episode_counter_ = 0;
  std::uint64_t annotation_counter_ = 0;
  std::map<std::string, std::shared_ptr<EpisodeEntry>, std::less<>> episodes_;
  std::map<std::string, std::shared_ptr<AnnotationEntry>, std::less<>> annotations_;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Transport-independent request handler; the HTTP server is a thin wrapper.
class Api {
 public:
  Api(ServiceConfig config, GameCorpus corpus,
      EntityDetector detector = stub_entity_detector(),
      ConfidenceScorer scorer = stub_confidence_scorer());

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view query,
                     std::string_view body, std::string_view content_type);

  const ServiceConfig& config() const { return config_; }
  SessionStore& store() { return store_; }
  const GameCorpus& corpus() const { return corpus_; }

  // Writes the snapshot file when a snapshot path is configured.
  void save_snapshot() const;
  void load_snapshot();

 private:
  ApiResponse route(std::string_view method, const std::vector<std::string>& parts,
                    std::string_view query, std::string_view body,
                    std::string_view content_type);

  ServiceConfig config_;
  GameCorpus corpus_;
  EntityDetector detector_;
  ConfidenceScorer scorer_;
  SessionStore store_;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
  std::atomic<std::uint64_t> session_seeds_{0};
};

// Registers every /api route (plus CORS preflight) on `server`.
void mount(httplib::Server& server, Api& api);

}  // namespace tgame
