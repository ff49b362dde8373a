#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tgame/board.hpp"

namespace tgame {

inline constexpr std::string_view kDctPrefix = "Document creation time: ";

struct TimeMLEvent {
  std::string eid;
  std::size_t start = 0;  // code points into TimeMLDoc::text
  std::size_t end = 0;
  std::string text;
  std::vector<std::string> eiids;  // from MAKEINSTANCE

  friend bool operator==(const TimeMLEvent&, const TimeMLEvent&) = default;
};

struct TimeMLTimex {
  std::string tid;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
  std::string value;

  friend bool operator==(const TimeMLTimex&, const TimeMLTimex&) = default;
};

// Endpoints are resolved to eids / tids (event instances collapse onto their
// event).
struct TimeMLLink {
  std::string lid;
  std::string source;
  std::string target;
  IntervalRelation relation = IntervalRelation::Before;

  friend bool operator==(const TimeMLLink&, const TimeMLLink&) = default;
};

struct TimeMLDoc {
  std::string doc_id;
  std::string dct_value;
  std::string dct_timex_id;
  std::string text;  // character content of <TEXT>, tags stripped
  std::vector<TimeMLEvent> events;
  std::vector<TimeMLTimex> timexes;  // in-text timexes; the DCT is excluded
  std::vector<TimeMLLink> tlinks;

  friend bool operator==(const TimeMLDoc&, const TimeMLDoc&) = default;
};

// `fallback_id` is used when the document has no <DOCID>.
// Throws MalformedXML, MissingDCT, DanglingReference, UnknownRelType.
TimeMLDoc parse_timeml(std::string_view raw, std::string_view fallback_id = "");

struct SentenceWindow {
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::string text;               // DCT-prefixed
  std::vector<Entity> entities;   // DCT first, then text order
  std::vector<TimeMLLink> gold_interval_links;
};

// Rule-based segmentation; each window gets the DCT prefix and DCT entity.
std::vector<SentenceWindow> split_sentences(const TimeMLDoc& doc);

}  // namespace tgame
