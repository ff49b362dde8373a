#include "tgame/service.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "tgame/error.hpp"
#include "tgame/json_io.hpp"

namespace tgame {

using io::Json;

namespace {

[[noreturn]] void not_found(const std::string& what) { throw Error(ErrorCode::NotFound, what); }

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::CellNotPlayable:
    case ErrorCode::EpisodeFinished:
    case ErrorCode::EpisodeInProgress:
    case ErrorCode::BoardComplete: return 409;
    default: return 422;
  }
}

ApiResponse json_response(int status, const Json& body) {
  return {status, body.dump(), "application/json"};
}

ApiResponse error_response(int status, std::string_view code, std::string_view message) {
  return json_response(status, Json{{"error", code}, {"message", message}});
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    const auto j = path.find('/', i);
    const auto end = j == std::string_view::npos ? path.size() : j;
    if (end > i) parts.emplace_back(path.substr(i, end - i));
    i = end;
  }
  return parts;
}

std::string query_param(std::string_view query, std::string_view key) {
  std::size_t i = 0;
  while (i <= query.size()) {
    const auto amp = query.find('&', i);
    const auto end = amp == std::string_view::npos ? query.size() : amp;
    const auto pair = query.substr(i, end - i);
    const auto eq = pair.find('=');
    if (pair.substr(0, eq) == key) {
      return eq == std::string_view::npos ? "" : std::string(pair.substr(eq + 1));
    }
    if (amp == std::string_view::npos) break;
    i = amp + 1;
  }
  return {};
}

Json parse_body(std::string_view body) {
  try {
    return Json::parse(body.empty() ? std::string_view("{}") : body);
  } catch (const Json::exception&) {
    throw Error(ErrorCode::MalformedInput, "request body is not valid JSON");
  }
}

std::string body_string(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_string()) {
    throw Error(ErrorCode::MalformedInput, std::string("body field '") + key +
                                               "' must be a string");
  }
  return j[key].get<std::string>();
}

EndpointId body_endpoint(const Json& j, const char* key) {
  const auto raw = body_string(j, key);
  const auto id = EndpointId::parse(raw);
  if (!id) throw Error(ErrorCode::InvalidPair, "malformed endpoint '" + raw + "'");
  return *id;
}

PointRelation body_relation(const Json& j) {
  const auto raw = body_string(j, "relation");
  const auto r = relation_from_symbol(raw);
  if (!r) throw Error(ErrorCode::MalformedInput, "unknown relation '" + raw + "'");
  return *r;
}

std::size_t body_size(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer() ||
      j[key].get<long long>() < 0) {
    throw Error(ErrorCode::MalformedInput, std::string("body field '") + key +
                                               "' must be a non-negative integer");
  }
  return j[key].get<std::size_t>();
}

}  // namespace

ServiceConfig load_service_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open config " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "config must be an object");
  ServiceConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "host" && value.is_string()) {
      c.host = value.get<std::string>();
    } else if (key == "port" && value.is_number_integer()) {
      c.port = value.get<int>();
    } else if (key == "corpus" && value.is_string()) {
      c.corpus_path = value.get<std::string>();
    } else if (key == "seed" && value.is_number_unsigned()) {
      c.seed = value.get<std::uint64_t>();
    } else if (key == "snapshot" && value.is_string()) {
      c.snapshot_path = value.get<std::string>();
    } else if (key == "cors_origin" && value.is_string()) {
      c.cors_origin = value.get<std::string>();
    } else if (key == "scoring" && value.is_object()) {
      for (const auto& [k, v] : value.items()) {
        if (!v.is_number()) throw Error(ErrorCode::MalformedInput, "scoring values are numbers");
        const double d = v.get<double>();
        if (k == "step_match") c.scoring.step_match = d;
        else if (k == "step_no_gold") c.scoring.step_no_gold = d;
        else if (k == "step_mismatch") c.scoring.step_mismatch = d;
        else if (k == "terminal_coherent") c.scoring.terminal_coherent = d;
        else if (k == "terminal_incoherent") c.scoring.terminal_incoherent = d;
        else throw Error(ErrorCode::MalformedInput, "unknown scoring key '" + k + "'");
      }
    } else {
      throw Error(ErrorCode::MalformedInput, "unknown or mistyped config key '" + key + "'");
    }
  }
  return c;
}

void apply_env_overrides(ServiceConfig& config) {
  if (const char* v = std::getenv("TG_SEED")) {
    try {
      config.seed = std::stoull(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedInput, "TG_SEED must be an unsigned integer");
    }
  }
  if (const char* v = std::getenv("TG_SNAPSHOT_PATH")) config.snapshot_path = v;
  if (const char* v = std::getenv("TG_CORPUS")) config.corpus_path = v;
  if (const char* v = std::getenv("TG_HOST")) config.host = v;
  if (const char* v = std::getenv("TG_PORT")) {
    try {
      config.port = std::stoi(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedInput, "TG_PORT must be an integer");
    }
  }
}

GameCorpus::GameCorpus(std::vector<Game> games) {
  for (auto& g : games) {
    auto ptr = std::make_shared<const Game>(std::move(g));
    by_level_[ptr->level].push_back(ptr);
    all_.push_back(std::move(ptr));
  }
}

GameCorpus GameCorpus::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open corpus " + path);
  return GameCorpus(io::read_corpus(in));
}

const std::vector<std::shared_ptr<const Game>>& GameCorpus::level(int l) const {
  static const std::vector<std::shared_ptr<const Game>> kNone;
  const auto it = by_level_.find(l);
  return it == by_level_.end() ? kNone : it->second;
}

std::shared_ptr<const Game> GameCorpus::find(std::string_view game_id) const {
  for (const auto& g : all_) {
    if (g->game_id == game_id) return g;
  }
  return nullptr;
}

std::map<int, std::size_t> GameCorpus::level_counts() const {
  std::map<int, std::size_t> out;
  for (const auto& [level, games] : by_level_) out[level] = games.size();
  return out;
}

std::string SessionStore::add_episode(Episode ep) {
  std::lock_guard lock(mutex_);
  auto id = "ep-" + std::to_string(++episode_counter_);
  auto entry = std::make_shared<EpisodeEntry>();
  entry->episode = std::move(ep);
  episodes_.emplace(id, std::move(entry));
  return id;
}

std::string SessionStore::next_annotation_id() {
  std::lock_guard lock(mutex_);
  return "ann-" + std::to_string(++annotation_counter_);
}

void SessionStore::add_annotation(Session s) {
  std::lock_guard lock(mutex_);
  auto entry = std::make_shared<AnnotationEntry>();
  const auto id = s.id();
  entry->session = std::move(s);
  annotations_[id] = std::move(entry);
}

std::shared_ptr<SessionStore::EpisodeEntry> SessionStore::episode(std::string_view id) const {
  std::lock_guard lock(mutex_);
  const auto it = episodes_.find(id);
  if (it == episodes_.end()) not_found("no game episode '" + std::string(id) + "'");
  return it->second;
}

std::shared_ptr<SessionStore::AnnotationEntry> SessionStore::annotation(
    std::string_view id) const {
  std::lock_guard lock(mutex_);
  const auto it = annotations_.find(id);
  if (it == annotations_.end()) not_found("no annotation session '" + std::string(id) + "'");
  return it->second;
}

std::string SessionStore::snapshot() const {
  std::lock_guard lock(mutex_);
  Json episodes = Json::array();
  for (const auto& [id, entry] : episodes_) {
    std::lock_guard entry_lock(entry->mutex);
    Json actions = Json::array();
    for (const auto& s : entry->episode.steps()) {
      actions.push_back(io::to_json(EndpointLabel{s.source, s.target, s.relation}));
    }
    episodes.push_back(Json{{"id", id},
                            {"game_id", entry->episode.game().game_id},
                            {"actions", actions}});
  }
  Json annotations = Json::array();
  for (const auto& [id, entry] : annotations_) {
    std::lock_guard entry_lock(entry->mutex);
    annotations.push_back(Json{{"id", id},
                               {"seed", entry->session.seed()},
                               {"export", io::export_session(entry->session)}});
  }
  return Json{{"version", 1},
              {"episode_counter", episode_counter_},
              {"annotation_counter", annotation_counter_},
              {"episodes", episodes},
              {"annotations", annotations}}
      .dump();
}

void SessionStore::restore(std::string_view snapshot, const GameCorpus& corpus,
                           const ScoringPolicy& policy) {
  Json j;
  try {
    j = Json::parse(snapshot);
  } catch (const Json::exception&) {
    throw Error(ErrorCode::MalformedInput, "snapshot is not valid JSON");
  }
  std::lock_guard lock(mutex_);
  episode_counter_ = j.value("episode_counter", std::uint64_t{0});
  annotation_counter_ = j.value("annotation_counter", std::uint64_t{0});
  for (const auto& e : j.at("episodes")) {
    const auto game = corpus.find(e.at("game_id").get<std::string>());
    if (!game) continue;
    auto entry = std::make_shared<EpisodeEntry>();
    entry->episode = Episode::reset(game, policy);
    for (const auto& a : e.at("actions")) {
      const auto l = io::endpoint_label_from_json(a);
      entry->episode.step(l.source, l.target, l.relation);
    }
    episodes_[e.at("id").get<std::string>()] = std::move(entry);
  }
  for (const auto& a : j.at("annotations")) {
    const auto id = a.at("id").get<std::string>();
    auto entry = std::make_shared<AnnotationEntry>();
    entry->session = io::import_session(a.at("export"), id, a.at("seed").get<std::uint64_t>());
    annotations_[id] = std::move(entry);
  }
}

Api::Api(ServiceConfig config, GameCorpus corpus, EntityDetector detector,
         ConfidenceScorer scorer)
    : config_(std::move(config)),
      corpus_(std::move(corpus)),
      detector_(std::move(detector)),
      scorer_(std::move(scorer)),
      rng_(config_.seed) {}

void Api::save_snapshot() const {
  if (config_.snapshot_path.empty()) return;
  std::ofstream out(config_.snapshot_path);
  if (!out) throw Error(ErrorCode::NotFound, "cannot write snapshot " + config_.snapshot_path);
  out << store_.snapshot() << '\n';
}

void Api::load_snapshot() {
  if (config_.snapshot_path.empty()) return;
  std::ifstream in(config_.snapshot_path);
  if (!in) return;
  std::stringstream buf;
  buf << in.rdbuf();
  store_.restore(buf.str(), corpus_, config_.scoring);
}

ApiResponse Api::handle(std::string_view method, std::string_view path, std::string_view query,
                        std::string_view body, std::string_view content_type) {
  try {
    return route(method, split_path(path), query, body, content_type);
  } catch (const Error& e) {
    return error_response(http_status(e.code()), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

ApiResponse Api::route(std::string_view method, const std::vector<std::string>& parts,
                       std::string_view query, std::string_view body,
                       std::string_view content_type) {
  const auto n = parts.size();
  if (n < 2 || parts[0] != "api") not_found("no such route");
  const auto& area = parts[1];
  auto method_not_allowed = [&] {
    return error_response(405, "MethodNotAllowed", "method not allowed on this route");
  };

  if (area == "health" && n == 2) {
    if (method != "GET") return method_not_allowed();
    return json_response(200, Json{{"status", "ok"}});
  }

  if (area == "levels" && n == 2) {
    if (method != "GET") return method_not_allowed();
    Json levels = Json::array();
    for (int l = kMinLevel; l <= kMaxLevel; ++l) {
      levels.push_back(Json{{"level", l}, {"games", corpus_.level(l).size()}});
    }
    return json_response(200, Json{{"levels", levels}});
  }

  if (area == "games") {
    if (n == 2) {
      if (method != "POST") return method_not_allowed();
      const auto req = parse_body(body);
      if (!req.is_object() || !req.contains("level") || !req["level"].is_number_integer()) {
        throw Error(ErrorCode::MalformedInput, "body field 'level' must be an integer");
      }
      const int level = req["level"].get<int>();
      if (level < kMinLevel || level > kMaxLevel) {
        throw Error(ErrorCode::InvalidLevel, "level must be between 2 and 5");
      }
      const auto& pool = corpus_.level(level);
      if (pool.empty()) not_found("no games at level " + std::to_string(level));
      std::shared_ptr<const Game> game;
      {
        std::lock_guard lock(rng_mutex_);
        game = pool[rng_() % pool.size()];
      }
      auto ep = Episode::reset(game, config_.scoring);
      const auto id = store_.add_episode(std::move(ep));
      auto entry = store_.episode(id);
      std::lock_guard lock(entry->mutex);
      return json_response(200, io::episode_view(id, entry->episode));
    }
    const auto& id = parts[2];
    auto entry = store_.episode(id);
    std::lock_guard lock(entry->mutex);
    if (n == 3) {
      if (method != "GET") return method_not_allowed();
      return json_response(200, io::episode_view(id, entry->episode));
    }
    if (n == 4 && parts[3] == "step") {
      if (method != "POST") return method_not_allowed();
      const auto req = parse_body(body);
      const auto out = entry->episode.step(body_endpoint(req, "source"),
                                           body_endpoint(req, "target"), body_relation(req));
      return json_response(200, io::step_view(out, entry->episode));
    }
    if (n == 4 && parts[3] == "log") {
      if (method != "GET") return method_not_allowed();
      return json_response(200, io::episode_log(entry->episode));
    }
    not_found("no such route");
  }

  if (area == "annotations") {
    if (n == 2) {
      if (method != "POST") return method_not_allowed();
      const bool is_json = content_type.find("json") != std::string_view::npos;
      const auto id = store_.next_annotation_id();
      const auto seed = config_.seed + (++session_seeds_);
      Session s = is_json ? io::import_session(parse_body(body), id, seed)
                          : Session::create(AnnotationImport{std::nullopt, std::string(body),
                                                             std::nullopt},
                                            id, seed);
      auto view = io::session_view(s);
      store_.add_annotation(std::move(s));
      return json_response(200, view);
    }
    const auto& id = parts[2];
    auto entry = store_.annotation(id);
    std::lock_guard lock(entry->mutex);
    Session& s = entry->session;
    if (n == 3) {
      if (method != "GET") return method_not_allowed();
      return json_response(200, io::session_view(s));
    }
    const auto& action = parts[3];
    if (action == "entities" && n == 4) {
      if (method != "POST") return method_not_allowed();
      const auto req = parse_body(body);
      EntityKind kind = EntityKind::Interval;
      if (req.is_object() && req.contains("kind")) {
        const auto k = entity_kind_from_string(body_string(req, "kind"));
        if (!k) throw Error(ErrorCode::MalformedInput, "kind must be interval or instant");
        kind = *k;
      }
      s.add_entity(body_size(req, "start"), body_size(req, "end"), kind);
      return json_response(200, io::session_view(s));
    }
    if (action == "entities" && n == 5) {
      if (method == "DELETE") {
        s.remove_entity(parts[4]);
        return json_response(200, io::session_view(s));
      }
      if (method == "PATCH") {
        const auto req = parse_body(body);
        const auto k = entity_kind_from_string(body_string(req, "kind"));
        if (!k) throw Error(ErrorCode::MalformedInput, "kind must be interval or instant");
        s.set_kind(parts[4], *k);
        return json_response(200, io::session_view(s));
      }
      return method_not_allowed();
    }
    if (action == "relations" && n == 4) {
      if (method != "POST") return method_not_allowed();
      const auto req = parse_body(body);
      const auto out = s.annotate(body_endpoint(req, "source"), body_endpoint(req, "target"),
                                  body_relation(req));
      auto view = io::session_view(s);
      view["inferred"] = io::to_json(out.inferred);
      if (out.conflict) view["conflict"] = io::to_json(*out.conflict);
      return json_response(200, view);
    }
    if (action == "detect-entities" && n == 4) {
      if (method != "POST") return method_not_allowed();
      const auto added = s.detect_entities(detector_);
      auto view = io::session_view(s);
      view["detected"] = added;
      return json_response(200, view);
    }
    if (action == "next-pair" && n == 4) {
      if (method != "GET") return method_not_allowed();
      const auto mode_raw = query_param(query, "mode");
      SuggestionMode mode = SuggestionMode::Random;
      if (mode_raw == "guided") {
        mode = SuggestionMode::Guided;
      } else if (!mode_raw.empty() && mode_raw != "random") {
        throw Error(ErrorCode::MalformedInput, "mode must be random or guided");
      }
      return json_response(200, io::to_json(s.next_pair(mode, scorer_)));
    }
    if (action == "export" && n == 4) {
      if (method != "GET") return method_not_allowed();
      return json_response(200, io::export_session(s));
    }
  }
  not_found("no such route");
}

void mount(httplib::Server& server, Api& api) {
  const std::string origin = api.config().cors_origin;
  auto dispatch = [&api, origin](const httplib::Request& req, httplib::Response& res) {
    std::string query;
    for (const auto& [k, v] : req.params) {
      if (!query.empty()) query += '&';
      query += k + "=" + v;
    }
    const auto out = api.handle(req.method, req.path, query, req.body,
                                req.get_header_value("Content-Type"));
    res.status = out.status;
    res.set_content(out.body, out.content_type);
    if (!origin.empty()) res.set_header("Access-Control-Allow-Origin", origin);
  };
  const auto pattern = R"(/api(/.*)?)";
  server.Get(pattern, dispatch);
  server.Post(pattern, dispatch);
  server.Delete(pattern, dispatch);
  server.Patch(pattern, dispatch);
  server.Put(pattern, dispatch);
  server.Options(pattern, [origin](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    if (!origin.empty()) res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PATCH, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
}

}  // namespace tgame
