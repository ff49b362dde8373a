#include "tgame/annotation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <stdexcept>
#include <utility>

#include "tgame/error.hpp"
#include "tgame/timeml.hpp"
#include "tgame/utf8.hpp"

namespace tgame {

namespace {

constexpr std::array<std::string_view, 40> kVerbLexicon = {
    "said",     "says",      "announced", "reported", "ran",      "met",
    "died",     "killed",    "won",       "lost",     "arrived",  "left",
    "began",    "ended",     "started",   "finished", "signed",   "visited",
    "attacked", "elected",   "resigned",  "rose",     "fell",     "opened",
    "closed",   "launched",  "joined",    "bought",   "sold",     "agreed",
    "meeting",  "election",  "war",       "attack",   "visit",    "crash",
    "told",     "expected",  "released",  "arrested"};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool overlaps(std::size_t s1, std::size_t e1, std::size_t s2, std::size_t e2) {
  return s1 < e2 && s2 < e1;
}

}  // namespace

EntityDetector stub_entity_detector() {
  return [](std::string_view text) {
    std::vector<DetectedSpan> spans;
    const std::string s(text);
    auto cp = [&](std::size_t byte) { return utf8::length(std::string_view(s).substr(0, byte)); };
    auto scan = [&](const std::regex& re, std::string_view label) {
      for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator();
           ++it) {
        const auto b = static_cast<std::size_t>(it->position(1));
        const auto e = b + static_cast<std::size_t>(it->length(1));
        const DetectedSpan span{cp(b), cp(e), EntityKind::Interval, std::string(label)};
        const bool clash = std::any_of(spans.begin(), spans.end(), [&](const DetectedSpan& d) {
          return overlaps(d.start, d.end, span.start, span.end);
        });
        if (!clash) spans.push_back(span);
      }
    };
    static const std::regex iso_date(R"((?:^|[^0-9A-Za-z])(\d{4}-\d{2}-\d{2})(?![0-9A-Za-z]))");
    static const std::regex year(R"((?:^|[^0-9A-Za-z\-])((?:18|19|20)\d{2})(?![0-9A-Za-z\-]))");
    static const std::regex word(R"((?:^|[^A-Za-z])([A-Za-z]+)(?![A-Za-z]))");
    scan(iso_date, "timex");
    scan(year, "timex");
    for (auto it = std::sregex_iterator(s.begin(), s.end(), word); it != std::sregex_iterator();
         ++it) {
      std::string w = it->str(1);
      std::transform(w.begin(), w.end(), w.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (std::find(kVerbLexicon.begin(), kVerbLexicon.end(), w) == kVerbLexicon.end()) continue;
      const auto b = static_cast<std::size_t>(it->position(1));
      spans.push_back({cp(b), cp(b + it->length(1)), EntityKind::Interval, "event"});
    }
    std::sort(spans.begin(), spans.end(),
              [](const DetectedSpan& a, const DetectedSpan& b) { return a.start < b.start; });
    return spans;
  };
}

ConfidenceScorer stub_confidence_scorer() {
  return [](const EndpointId& source, const EndpointId& target, std::string_view text,
            const std::vector<Entity>&) {
    const auto h = fnv1a(source.str() + "|" + target.str() + "|" + std::string(text));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  };
}

std::string_view to_string(SuggestionMode m) {
  return m == SuggestionMode::Random ? "random" : "guided";
}

Session Session::create(const AnnotationImport& imp, std::string session_id,
                        std::uint64_t seed) {
  if (imp.text.empty()) throw Error(ErrorCode::EmptyText, "text must not be empty");
  const auto length = utf8::length(imp.text);
  std::vector<Entity> entities;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  if (imp.entities) {
    for (const auto& e : *imp.entities) {
      if (e.start >= e.end || e.end > length) {
        throw Error(ErrorCode::InvalidSpan, "span [" + std::to_string(e.start) + ", " +
                                                std::to_string(e.end) + ") outside text of " +
                                                std::to_string(length) + " characters");
      }
      spans.emplace_back(e.start, e.end);
    }
  }
  std::optional<std::string> dct;
  if (imp.dct && !imp.dct->empty()) dct = imp.dct;

  Session s;
  s.id_ = std::move(session_id);
  s.dct_ = dct;
  s.original_ = imp.text;
  s.prefix_ = dct ? std::string(kDctPrefix) + *dct + " " : "";
  s.text_ = s.prefix_ + s.original_;
  s.seed_ = seed;
  s.rng_.seed(seed);
  s.created_ = s.updated_ = std::chrono::system_clock::now();

  if (dct) {
    const auto start = utf8::length(kDctPrefix);
    entities.push_back({std::string(kDctEntityId), *dct, start, start + utf8::length(*dct),
                        EntityKind::Interval, true});
  }
  const auto shift = s.prefix_length();
  for (const auto& [b, e] : spans) {
    entities.push_back({s.next_entity_id(), utf8::substr(s.text_, b + shift, e + shift),
                        b + shift, e + shift, EntityKind::Interval, false});
  }
  if (!entities.empty()) {
    s.board_ = Board::build(std::move(entities));
  }
  return s;
}

Session Session::restore(std::optional<std::string> dct, std::string original_text,
                         std::vector<Entity> entities,
                         const std::vector<EndpointLabel>& user_labels, bool coherent,
                         std::string session_id, std::uint64_t seed) {
  if (original_text.empty()) throw Error(ErrorCode::EmptyText, "text must not be empty");
  Session s;
  s.id_ = std::move(session_id);
  if (dct && dct->empty()) dct.reset();
  s.dct_ = std::move(dct);
  s.original_ = std::move(original_text);
  s.prefix_ = s.dct_ ? std::string(kDctPrefix) + *s.dct_ + " " : "";
  s.text_ = s.prefix_ + s.original_;
  s.seed_ = seed;
  s.rng_.seed(seed);
  s.created_ = s.updated_ = std::chrono::system_clock::now();
  const auto length = utf8::length(s.text_);
  for (auto& e : entities) {
    if (e.start_char >= e.end_char || e.end_char > length) {
      throw Error(ErrorCode::InvalidSpan, "entity '" + e.id + "' span outside text");
    }
    e.text = utf8::substr(s.text_, e.start_char, e.end_char);
    if (e.id.size() > 1 && e.id[0] == 'e' &&
        std::all_of(e.id.begin() + 1, e.id.end(), [](unsigned char c) { return std::isdigit(c); })) {
      s.entity_counter_ = std::max<std::size_t>(s.entity_counter_, std::stoul(e.id.substr(1)));
    }
  }
  if (!entities.empty()) {
    Board board = Board::build(std::move(entities));
    for (const auto& label : user_labels) {
      const auto p = board.endpoint_index(label.source);
      const auto q = board.endpoint_index(label.target);
      if (!p || !q || *p == *q) {
        throw Error(ErrorCode::InvalidPair, "relation on unknown endpoints " +
                                                label.source.str() + " / " + label.target.str());
      }
      if (!board.assert_label(*p, *q, label.relation).consistent()) {
        throw Error(ErrorCode::MalformedInput, "imported relations are contradictory");
      }
    }
    s.board_ = std::move(board);
  }
  s.coherent_ = coherent;
  return s;
}

std::size_t Session::prefix_length() const { return utf8::length(prefix_); }

std::string Session::next_entity_id() {
  for (;;) {
    auto id = "e" + std::to_string(++entity_counter_);
    if (board_.find_entity(id) == nullptr) return id;
  }
}

void Session::touch() { updated_ = std::chrono::system_clock::now(); }

void Session::set_board(Board board) {
  board_ = std::move(board);
  touch();
}

const Entity& Session::add_entity(std::size_t start, std::size_t end, EntityKind kind) {
  const auto length = utf8::length(text_);
  if (start >= end || end > length) {
    throw Error(ErrorCode::InvalidSpan, "span [" + std::to_string(start) + ", " +
                                            std::to_string(end) + ") outside text of " +
                                            std::to_string(length) + " characters");
  }
  for (const auto& e : board_.entities()) {
    if (overlaps(start, end, e.start_char, e.end_char)) {
      throw Error(ErrorCode::OverlappingSpans, "span overlaps entity '" + e.id + "'");
    }
  }
  auto entities = board_.entities();
  const auto id = next_entity_id();
  entities.push_back({id, utf8::substr(text_, start, end), start, end, kind, false});
  set_board(board_.rebuild(std::move(entities),
                           [](const EndpointId& e) { return std::optional<EndpointId>(e); }));
  return *board_.find_entity(id);
}

void Session::remove_entity(std::string_view entity_id) {
  if (board_.find_entity(entity_id) == nullptr) {
    throw Error(ErrorCode::UnknownEntity, "no entity '" + std::string(entity_id) + "'");
  }
  auto entities = board_.entities();
  std::erase_if(entities, [&](const Entity& e) { return e.id == entity_id; });
  set_board(board_.rebuild(std::move(entities), [&](const EndpointId& e) {
    return e.entity_id == entity_id ? std::nullopt : std::optional<EndpointId>(e);
  }));
}

void Session::set_kind(std::string_view entity_id, EntityKind kind) {
  set_board(board_.with_entity_kind(entity_id, kind));
}

AnnotateOutcome Session::annotate(const EndpointId& source, const EndpointId& target,
                                  PointRelation r) {
  const auto p = board_.endpoint_index(source);
  const auto q = board_.endpoint_index(target);
  if (!p || !q || *p == *q) {
    throw Error(ErrorCode::InvalidPair,
                "no cell for " + source.str() + " / " + target.str());
  }
  const auto prov = board_.provenance(*p, *q);
  const auto current = board_.label(*p, *q);
  const bool vague_placeholder = prov == Provenance::User && !is_definite(current);
  // A different definite label on a filled cell goes through and gets flagged.
  const bool conflicting = is_definite(current) && is_definite(r) && current != r;
  if (prov != Provenance::Empty && !vague_placeholder && !conflicting) {
    throw Error(ErrorCode::CellNotPlayable, "cell " + source.str() + " / " + target.str() +
                                                " is already labelled");
  }
  AnnotateOutcome out;
  const auto result = board_.assert_label(*p, *q, r);
  touch();
  if (!result.consistent()) {
    coherent_ = false;
    out.coherent = false;
    out.conflict = describe(board_, *result.contradiction);
    return out;
  }
  coherent_ = true;
  out.inferred = describe(board_, result.newly_inferred);
  return out;
}

std::vector<PairSuggestion> Session::ranked_pairs(const ConfidenceScorer& scorer) const {
  std::vector<PairSuggestion> out;
  for (const auto& cell : board_.empty_cells()) {
    const auto& a = board_.endpoints()[cell.first];
    const auto& b = board_.endpoints()[cell.second];
    const double c = std::clamp(scorer(a, b, text_, board_.entities()), 0.0, 1.0);
    out.push_back({a, b, SuggestionMode::Guided, c});
  }
  std::stable_sort(out.begin(), out.end(), [](const PairSuggestion& x, const PairSuggestion& y) {
    return *x.confidence > *y.confidence;
  });
  return out;
}

PairSuggestion Session::next_pair(SuggestionMode mode, const ConfidenceScorer& scorer) {
  const auto empty = board_.empty_cells();
  if (empty.empty()) throw Error(ErrorCode::BoardComplete, "no empty cell left");
  if (mode == SuggestionMode::Guided) return ranked_pairs(scorer).front();
  const auto& cell = empty[rng_() % empty.size()];
  return {board_.endpoints()[cell.first], board_.endpoints()[cell.second],
          SuggestionMode::Random, std::nullopt};
}

std::size_t Session::detect_entities(const EntityDetector& detector) {
  std::size_t added = 0;
  for (const auto& span : detector(text_)) {
    const bool clash = std::any_of(
        board_.entities().begin(), board_.entities().end(),
        [&](const Entity& e) { return overlaps(span.start, span.end, e.start_char, e.end_char); });
    if (clash || span.start >= span.end) continue;
    add_entity(span.start, span.end, span.kind);
    ++added;
  }
  return added;
}

}  // namespace tgame
