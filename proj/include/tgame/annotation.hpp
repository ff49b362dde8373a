#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tgame/board.hpp"

namespace tgame {

struct SpanInput {
  std::size_t start = 0;
  std::size_t end = 0;
};

// Upload schema: only `text` is mandatory; offsets index the un-prefixed text.
struct AnnotationImport {
  std::optional<std::string> dct;
  std::string text;
  std::optional<std::vector<SpanInput>> entities;
};

struct DetectedSpan {
  std::size_t start = 0;  // code points into the scanned text
  std::size_t end = 0;
  EntityKind kind = EntityKind::Interval;
  std::string label;  // "timex" | "event" for the stub
};

// text -> candidate spans. Implementations may be remote; the session only
// relies on this signature.
using EntityDetector = std::function<std::vector<DetectedSpan>(std::string_view text)>;

// (source, target, text, entities) -> confidence in [0, 1].
using ConfidenceScorer =
    std::function<double(const EndpointId&, const EndpointId&, std::string_view,
                         const std::vector<Entity>&)>;

// Toy baseline: ISO dates, years 1800-2099 and a closed verb lexicon.
EntityDetector stub_entity_detector();
// Content hash of (source, target, text) scaled to [0, 1].
ConfidenceScorer stub_confidence_scorer();

enum class SuggestionMode { Random, Guided };

std::string_view to_string(SuggestionMode m);

struct PairSuggestion {
  EndpointId source;
  EndpointId target;
  SuggestionMode mode = SuggestionMode::Random;
  std::optional<double> confidence;
};

struct AnnotateOutcome {
  bool coherent = true;
  std::vector<EndpointLabel> inferred;
  std::optional<EndpointConflict> conflict;
};

inline constexpr std::string_view kDctEntityId = "dct";

class Session {
 public:
  // Throws EmptyText, InvalidSpan, OverlappingSpans.
  static Session create(const AnnotationImport& imp, std::string session_id,
                        std::uint64_t seed = 0);

  const std::string& id() const { return id_; }
  const std::optional<std::string>& dct() const { return dct_; }
  const std::string& original_text() const { return original_; }
  // Displayed text: prefix + original.
  const std::string& text() const { return text_; }
  const std::string& prefix() const { return prefix_; }
  std::size_t prefix_length() const;
  const Board& board() const { return board_; }
  const std::vector<Entity>& entities() const { return board_.entities(); }
  bool coherent() const { return coherent_; }
  std::uint64_t seed() const { return seed_; }
  std::chrono::system_clock::time_point created() const { return created_; }
  std::chrono::system_clock::time_point updated() const { return updated_; }

  // Offsets index the displayed text. Throws InvalidSpan, OverlappingSpans.
  const Entity& add_entity(std::size_t start, std::size_t end,
                           EntityKind kind = EntityKind::Interval);
  // Throws UnknownEntity.
  void remove_entity(std::string_view entity_id);
  void set_kind(std::string_view entity_id, EntityKind kind);

  // Throws InvalidPair, CellNotPlayable.
  AnnotateOutcome annotate(const EndpointId& source, const EndpointId& target,
                           PointRelation r);

  // Throws BoardComplete.
  PairSuggestion next_pair(SuggestionMode mode, const ConfidenceScorer& scorer);
  // Empty cells by non-increasing confidence, ties in canonical order.
  std::vector<PairSuggestion> ranked_pairs(const ConfidenceScorer& scorer) const;

  // Returns the number of entities added.
  std::size_t detect_entities(const EntityDetector& detector);

  // Reconstructs a session from its own export (see json_io).
  static Session restore(std::optional<std::string> dct, std::string original_text,
                         std::vector<Entity> entities,
                         const std::vector<EndpointLabel>& user_labels, bool coherent,
                         std::string session_id, std::uint64_t seed);

 private:
  void set_board(Board board);
  std::string next_entity_id();
  void touch();

  std::string id_;
  std::optional<std::string> dct_;
  std::string original_;
  std::string prefix_;
  std::string text_;
  Board board_;
  bool coherent_ = true;
  std::uint64_t seed_ = 0;
  std::mt19937_64 rng_;
  std::size_t entity_counter_ = 0;
  std::chrono::system_clock::time_point created_;
  std::chrono::system_clock::time_point updated_;
};

}  // namespace tgame
