#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tgame/annotation.hpp"
#include "tgame/board.hpp"
#include "tgame/engine.hpp"
#include "tgame/game.hpp"
#include "tgame/timeml.hpp"

// JSON shapes shared by the corpus files, the CLI and the HTTP service.
// Objects keep insertion order so serialized output is byte-stable.
namespace tgame::io {

using Json = nlohmann::ordered_json;

inline constexpr int kExportFormatVersion = 1;

Json to_json(const Entity& e);
Entity entity_from_json(const Json& j);
Json to_json(const EndpointLabel& l);
EndpointLabel endpoint_label_from_json(const Json& j);
Json to_json(const std::vector<EndpointLabel>& labels);
Json to_json(const EndpointConflict& c);

// Game corpus (JSON Lines). Throws MalformedInput.
Json to_json(const Game& g);
Game game_from_json(const Json& j);
std::string to_jsonl_line(const Game& g);
std::vector<Game> read_corpus(std::istream& in);
void write_corpus(std::ostream& out, const std::vector<Game>& games);

Json to_json(const TimeMLDoc& doc);
TimeMLDoc timeml_from_json(const Json& j);

Json to_json(const StatsTable& table);
std::string format_stats_table(const StatsTable& table);

// Board view: endpoints with display headers ("s ", "e ", "i " prefixes),
// row/column header lists and every visible cell.
using PlayablePredicate = std::function<bool(std::size_t, std::size_t)>;
Json board_view(const Board& board, const PlayablePredicate& playable);

Json to_json(const std::vector<CellComparison>& comparison);
Json episode_view(std::string_view episode_id, const Episode& ep);
Json step_view(const StepOutcome& out, const Episode& ep);
// game_id, steps[{source, target, relation, reward, inferred}], final_score, status
Json episode_log(const Episode& ep);

Json session_view(const Session& s);
Json to_json(const AnnotateOutcome& out);
Json to_json(const PairSuggestion& s);

// AnnotationExport, format_version 1.
Json export_session(const Session& s);
// Accepts a plain AnnotationImport or an AnnotationExport. Throws
// MalformedInput, EmptyText, InvalidSpan, OverlappingSpans.
AnnotationImport annotation_import_from_json(const Json& j);
Session import_session(const Json& j, std::string session_id, std::uint64_t seed);

}  // namespace tgame::io
