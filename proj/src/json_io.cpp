#include "tgame/json_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "tgame/error.hpp"

namespace tgame::io {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::MalformedInput, what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

std::string str_field(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) bad(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::size_t size_field(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_unsigned()) {
    if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::size_t>();
    bad(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool bool_field(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_boolean()) bad(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

const Json& array_field(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_array()) bad(std::string("field '") + key + "' must be an array");
  return v;
}

EndpointId endpoint_field(const Json& j, const char* key) {
  const auto raw = str_field(j, key);
  const auto id = EndpointId::parse(raw);
  if (!id) bad("malformed endpoint '" + raw + "'");
  return *id;
}

PointRelation relation_field(const Json& j, const char* key) {
  const auto raw = str_field(j, key);
  const auto r = relation_from_symbol(raw);
  if (!r) bad("unknown relation '" + raw + "'");
  return *r;
}

std::string header(const Entity& e, Side side) {
  switch (side) {
    case Side::Start: return "s " + e.text;
    case Side::End: return "e " + e.text;
    case Side::Point: return "i " + e.text;
  }
  return e.text;
}

Json optional_relation(std::optional<PointRelation> r) {
  if (!r) return nullptr;
  return std::string(symbol(*r));
}

}  // namespace

Json to_json(const Entity& e) {
  return Json{{"id", e.id},
              {"text", e.text},
              {"start", e.start_char},
              {"end", e.end_char},
              {"kind", std::string(to_string(e.kind))},
              {"is_dct", e.is_dct}};
}

Entity entity_from_json(const Json& j) {
  Entity e;
  e.id = str_field(j, "id");
  e.text = j.contains("text") ? str_field(j, "text") : "";
  e.start_char = size_field(j, "start");
  e.end_char = size_field(j, "end");
  const auto kind = entity_kind_from_string(str_field(j, "kind"));
  if (!kind) bad("unknown entity kind for '" + e.id + "'");
  e.kind = *kind;
  e.is_dct = bool_field(j, "is_dct");
  return e;
}

Json to_json(const EndpointLabel& l) {
  return Json{{"source", l.source.str()},
              {"target", l.target.str()},
              {"relation", std::string(symbol(l.relation))}};
}

EndpointLabel endpoint_label_from_json(const Json& j) {
  return {endpoint_field(j, "source"), endpoint_field(j, "target"),
          relation_field(j, "relation")};
}

Json to_json(const std::vector<EndpointLabel>& labels) {
  Json arr = Json::array();
  for (const auto& l : labels) arr.push_back(to_json(l));
  return arr;
}

Json to_json(const EndpointConflict& c) {
  return Json{{"source", c.source.str()},
              {"target", c.target.str()},
              {"existing", std::string(symbol(c.existing))},
              {"inferred", std::string(symbol(c.inferred))}};
}

Json to_json(const Game& g) {
  Json entities = Json::array();
  for (const auto& e : g.entities) entities.push_back(to_json(e));
  return Json{{"game_id", g.game_id}, {"doc_id", g.doc_id},    {"level", g.level},
              {"text", g.text},       {"entities", entities}, {"gold", to_json(g.gold_labels)}};
}

Game game_from_json(const Json& j) {
  Game g;
  g.game_id = str_field(j, "game_id");
  g.doc_id = str_field(j, "doc_id");
  const auto& level = field(j, "level");
  if (!level.is_number_integer()) bad("field 'level' must be an integer");
  g.level = level.get<int>();
  g.text = str_field(j, "text");
  for (const auto& e : array_field(j, "entities")) g.entities.push_back(entity_from_json(e));
  for (const auto& l : array_field(j, "gold")) g.gold_labels.push_back(endpoint_label_from_json(l));
  return g;
}

std::string to_jsonl_line(const Game& g) { return to_json(g).dump(); }

std::vector<Game> read_corpus(std::istream& in) {
  std::vector<Game> games;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      games.push_back(game_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      bad("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      bad("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return games;
}

void write_corpus(std::ostream& out, const std::vector<Game>& games) {
  for (const auto& g : games) out << to_jsonl_line(g) << '\n';
}

Json to_json(const TimeMLDoc& doc) {
  Json events = Json::array();
  for (const auto& e : doc.events) {
    events.push_back(Json{{"eid", e.eid}, {"start", e.start}, {"end", e.end}, {"text", e.text},
                          {"eiids", e.eiids}});
  }
  Json timexes = Json::array();
  for (const auto& t : doc.timexes) {
    timexes.push_back(Json{{"tid", t.tid}, {"start", t.start}, {"end", t.end}, {"text", t.text},
                           {"value", t.value}});
  }
  Json links = Json::array();
  for (const auto& l : doc.tlinks) {
    links.push_back(Json{{"lid", l.lid}, {"source", l.source}, {"target", l.target},
                         {"relation", std::string(to_string(l.relation))}});
  }
  return Json{{"doc_id", doc.doc_id}, {"dct_value", doc.dct_value},
              {"dct_timex_id", doc.dct_timex_id}, {"text", doc.text},
              {"events", events}, {"timexes", timexes}, {"tlinks", links}};
}

TimeMLDoc timeml_from_json(const Json& j) {
  TimeMLDoc doc;
  doc.doc_id = str_field(j, "doc_id");
  doc.dct_value = str_field(j, "dct_value");
  doc.dct_timex_id = str_field(j, "dct_timex_id");
  doc.text = str_field(j, "text");
  for (const auto& e : array_field(j, "events")) {
    TimeMLEvent ev{str_field(e, "eid"), size_field(e, "start"), size_field(e, "end"),
                   str_field(e, "text"), {}};
    for (const auto& id : array_field(e, "eiids")) {
      if (!id.is_string()) bad("eiids must be strings");
      ev.eiids.push_back(id.get<std::string>());
    }
    doc.events.push_back(std::move(ev));
  }
  for (const auto& t : array_field(j, "timexes")) {
    doc.timexes.push_back({str_field(t, "tid"), size_field(t, "start"), size_field(t, "end"),
                           str_field(t, "text"), str_field(t, "value")});
  }
  for (const auto& l : array_field(j, "tlinks")) {
    doc.tlinks.push_back({str_field(l, "lid"), str_field(l, "source"), str_field(l, "target"),
                          interval_relation_from_string(str_field(l, "relation"))});
  }
  return doc;
}

Json to_json(const StatsTable& table) {
  Json rows = Json::array();
  for (const auto& [level, s] : table) {
    rows.push_back(Json{{"level", level}, {"tokens", s.tokens}, {"<", s.before},
                        {"=", s.equal},   {">", s.after},   {"vague", s.vague},
                        {"games", s.games}});
  }
  return Json{{"levels", rows}};
}

std::string format_stats_table(const StatsTable& table) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-6s %12s %10s %10s %10s %8s %10s\n", "level", "tokens", "<",
                "=", ">", "vague", "games");
  out << line;
  for (const auto& [level, s] : table) {
    std::snprintf(line, sizeof line, "%-6d %12llu %10llu %10llu %10llu %8llu %10llu\n", level,
                  static_cast<unsigned long long>(s.tokens),
                  static_cast<unsigned long long>(s.before),
                  static_cast<unsigned long long>(s.equal),
                  static_cast<unsigned long long>(s.after),
                  static_cast<unsigned long long>(s.vague),
                  static_cast<unsigned long long>(s.games));
    out << line;
  }
  return out.str();
}

Json board_view(const Board& board, const PlayablePredicate& playable) {
  const auto& eps = board.endpoints();
  Json endpoints = Json::array();
  for (const auto& ep : eps) {
    const Entity* e = board.find_entity(ep.entity_id);
    endpoints.push_back(Json{{"id", ep.str()},
                             {"entity", ep.entity_id},
                             {"side", std::string(to_string(ep.side))},
                             {"header", header(*e, ep.side)}});
  }
  Json rows = Json::array();
  Json columns = Json::array();
  for (std::size_t i = 0; i + 1 < eps.size(); ++i) rows.push_back(eps[i].str());
  for (std::size_t i = 1; i < eps.size(); ++i) columns.push_back(eps[i].str());
  Json cells = Json::array();
  for (std::size_t p = 0; p < eps.size(); ++p) {
    for (std::size_t q = p + 1; q < eps.size(); ++q) {
      cells.push_back(Json{{"source", eps[p].str()},
                           {"target", eps[q].str()},
                           {"relation", optional_relation(board.graph().get(p, q))},
                           {"provenance", std::string(to_string(board.provenance(p, q)))},
                           {"playable", playable(p, q)}});
    }
  }
  return Json{{"endpoints", endpoints}, {"rows", rows}, {"columns", columns}, {"cells", cells}};
}

Json to_json(const std::vector<CellComparison>& comparison) {
  Json arr = Json::array();
  for (const auto& c : comparison) {
    arr.push_back(Json{{"source", c.source.str()},
                       {"target", c.target.str()},
                       {"predicted", std::string(symbol(c.predicted))},
                       {"gold", optional_relation(c.gold)},
                       {"provenance", std::string(to_string(c.provenance))},
                       {"mismatch", c.mismatch}});
  }
  return arr;
}

Json episode_view(std::string_view episode_id, const Episode& ep) {
  Json entities = Json::array();
  for (const auto& e : ep.game().entities) entities.push_back(to_json(e));
  Json view{{"episode_id", episode_id},
            {"game_id", ep.game().game_id},
            {"level", ep.game().level},
            {"text", ep.game().text},
            {"entities", entities},
            {"board", board_view(ep.board(), [&](std::size_t p, std::size_t q) {
               return ep.playable(p, q);
             })},
            {"score", ep.score()},
            {"status", std::string(to_string(ep.status()))},
            {"done", ep.done()}};
  if (ep.done()) view["comparison"] = to_json(ep.comparison());
  return view;
}

Json step_view(const StepOutcome& out, const Episode& ep) {
  Json view{{"reward", out.reward},
            {"step_reward", out.step_reward},
            {"terminal_reward", out.terminal_reward},
            {"inferred", to_json(out.inferred)},
            {"done", out.done},
            {"status", std::string(to_string(out.status))},
            {"score", out.score}};
  if (out.conflict) view["conflict"] = to_json(*out.conflict);
  if (out.comparison) view["comparison"] = to_json(*out.comparison);
  view["board"] = board_view(ep.board(), [&](std::size_t p, std::size_t q) {
    return ep.playable(p, q);
  });
  return view;
}

Json episode_log(const Episode& ep) {
  Json steps = Json::array();
  for (const auto& s : ep.steps()) {
    steps.push_back(Json{{"source", s.source.str()},
                         {"target", s.target.str()},
                         {"relation", std::string(symbol(s.relation))},
                         {"reward", s.reward},
                         {"inferred", to_json(s.inferred)}});
  }
  return Json{{"game_id", ep.game().game_id},
              {"steps", steps},
              {"final_score", ep.score()},
              {"status", std::string(to_string(ep.status()))}};
}

Json session_view(const Session& s) {
  Json entities = Json::array();
  for (const auto& e : s.entities()) entities.push_back(to_json(e));
  const Board& board = s.board();
  return Json{{"session_id", s.id()},
              {"dct", s.dct() ? Json(*s.dct()) : Json(nullptr)},
              {"text", s.text()},
              {"prefix", s.prefix()},
              {"entities", entities},
              {"board", board_view(board,
                                   [&](std::size_t p, std::size_t q) {
                                     const auto prov = board.provenance(p, q);
                                     return prov == Provenance::Empty ||
                                            (prov == Provenance::User &&
                                             !is_definite(board.label(p, q)));
                                   })},
              {"coherent", s.coherent()}};
}

Json to_json(const AnnotateOutcome& out) {
  Json j{{"coherent", out.coherent}, {"inferred", to_json(out.inferred)}};
  if (out.conflict) j["conflict"] = to_json(*out.conflict);
  return j;
}

Json to_json(const PairSuggestion& s) {
  return Json{{"source", s.source.str()},
              {"target", s.target.str()},
              {"mode", std::string(to_string(s.mode))},
              {"confidence", s.confidence ? Json(*s.confidence) : Json(nullptr)}};
}

Json export_session(const Session& s) {
  const Board& board = s.board();
  Json entities = Json::array();
  for (const auto& e : s.entities()) {
    entities.push_back(Json{{"id", e.id},
                            {"start", e.start_char},
                            {"end", e.end_char},
                            {"kind", std::string(to_string(e.kind))},
                            {"is_dct", e.is_dct}});
  }
  Json relations = Json::array();
  for (const auto& cell : board.cells()) {
    relations.push_back(Json{{"source", board.endpoints()[cell.pair.first].str()},
                             {"target", board.endpoints()[cell.pair.second].str()},
                             {"relation", std::string(symbol(cell.relation))},
                             {"provenance", std::string(to_string(cell.provenance))}});
  }
  return Json{{"format_version", kExportFormatVersion},
              {"dct", s.dct() ? Json(*s.dct()) : Json(nullptr)},
              {"prefix", s.prefix()},
              {"text", s.original_text()},
              {"entities", entities},
              {"relations", relations},
              {"coherent", s.coherent()}};
}

AnnotationImport annotation_import_from_json(const Json& j) {
  if (!j.is_object()) bad("annotation import must be a JSON object");
  AnnotationImport imp;
  if (j.contains("dct") && !j["dct"].is_null()) imp.dct = str_field(j, "dct");
  imp.text = str_field(j, "text");
  if (j.contains("entities") && !j["entities"].is_null()) {
    std::vector<SpanInput> spans;
    for (const auto& e : array_field(j, "entities")) {
      spans.push_back({size_field(e, "start"), size_field(e, "end")});
    }
    imp.entities = std::move(spans);
  }
  return imp;
}

Session import_session(const Json& j, std::string session_id, std::uint64_t seed) {
  if (!j.is_object() || !j.contains("format_version")) {
    return Session::create(annotation_import_from_json(j), std::move(session_id), seed);
  }
  const auto& version = field(j, "format_version");
  if (version != kExportFormatVersion) bad("unsupported export format_version");
  std::optional<std::string> dct;
  if (!field(j, "dct").is_null()) dct = str_field(j, "dct");
  std::vector<Entity> entities;
  for (const auto& e : array_field(j, "entities")) entities.push_back(entity_from_json(e));
  std::vector<EndpointLabel> users;
  for (const auto& r : array_field(j, "relations")) {
    if (str_field(r, "provenance") == "user") users.push_back(endpoint_label_from_json(r));
  }
  return Session::restore(std::move(dct), str_field(j, "text"), std::move(entities), users,
                          bool_field(j, "coherent"), std::move(session_id), seed);
}

}  // namespace tgame::io
