#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tgame {

enum class ErrorCode {
  InvalidPoint,
  TooLarge,
  EmptyEntitySet,
  OverlappingSpans,
  InvalidSpan,
  UnknownEntity,
  UnknownRelation,
  MalformedXML,
  MissingDCT,
  DanglingReference,
  UnknownRelType,
  InvalidLevel,
  InconsistentGold,
  CellNotPlayable,
  EpisodeFinished,
  EpisodeInProgress,
  InvalidPair,
  EmptyText,
  BoardComplete,
  MalformedInput,
  NotFound,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a stable code; the service maps
// codes onto HTTP statuses and the CLI onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tgame
