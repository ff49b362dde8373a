#include "tgame/error.hpp"

namespace tgame {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyEntitySet: return "EmptyEntitySet";
    case ErrorCode::OverlappingSpans: return "OverlappingSpans";
    case ErrorCode::InvalidSpan: return "InvalidSpan";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::MalformedXML: return "MalformedXML";
    case ErrorCode::MissingDCT: return "MissingDCT";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::UnknownRelType: return "UnknownRelType";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::InconsistentGold: return "InconsistentGold";
    case ErrorCode::CellNotPlayable: return "CellNotPlayable";
    case ErrorCode::EpisodeFinished: return "EpisodeFinished";
    case ErrorCode::EpisodeInProgress: return "EpisodeInProgress";
    case ErrorCode::InvalidPair: return "InvalidPair";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::BoardComplete: return "BoardComplete";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "Unknown";
}

}  // namespace tgame
