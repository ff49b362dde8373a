#include "tgame/timeml.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "tgame/error.hpp"
#include "tgame/utf8.hpp"
#include "xml_reader.hpp"

namespace tgame {

namespace {

struct OpenSpan {
  std::string id;
  std::size_t start = 0;
  std::string value;
  bool is_event = false;
  bool is_dct = false;
};

std::string require_attr(const xml::Event& ev, std::string_view key) {
  const auto* v = ev.attr(key);
  if (v == nullptr || v->empty()) {
    throw Error(ErrorCode::MalformedXML,
                "<" + ev.name + "> is missing attribute '" + std::string(key) + "'");
  }
  return *v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

TimeMLDoc parse_timeml(std::string_view raw, std::string_view fallback_id) {
  TimeMLDoc doc;
  xml::Reader reader(raw);

  struct RawLink {
    std::string lid, source, target, rel;
  };
  std::vector<RawLink> raw_links;
  std::map<std::string, std::string> eiid_to_eid;
  std::vector<OpenSpan> open;  // EVENT/TIMEX3 currently open
  std::vector<std::string> stack;
  std::size_t text_depth = 0;   // >0 while inside <TEXT>
  std::size_t cursor = 0;       // code points appended to doc.text
  std::string docid_text;
  bool in_docid = false;
  bool have_dct = false;

  for (;;) {
    auto ev = reader.next();
    if (ev.kind == xml::Event::Kind::EndOfDocument) break;
    if (ev.kind == xml::Event::Kind::Text) {
      if (text_depth > 0) {
        doc.text += ev.text;
        cursor += utf8::length(ev.text);
      }
      if (in_docid) docid_text += ev.text;
      continue;
    }
    if (ev.kind == xml::Event::Kind::StartElement) {
      stack.push_back(ev.name);
      if (ev.name == "TEXT") {
        ++text_depth;
      } else if (ev.name == "DOCID") {
        in_docid = true;
      } else if (ev.name == "EVENT") {
        open.push_back({require_attr(ev, "eid"), cursor, {}, true, false});
      } else if (ev.name == "TIMEX3") {
        OpenSpan span{require_attr(ev, "tid"), cursor, {}, false, false};
        if (const auto* v = ev.attr("value")) span.value = *v;
        const auto* fn = ev.attr("functionInDocument");
        span.is_dct = fn != nullptr && *fn == "CREATION_TIME";
        if (span.is_dct) {
          if (have_dct) {
            throw Error(ErrorCode::MalformedXML, "more than one CREATION_TIME timex");
          }
          have_dct = true;
          doc.dct_timex_id = span.id;
          doc.dct_value = span.value;
        }
        open.push_back(std::move(span));
      } else if (ev.name == "MAKEINSTANCE") {
        eiid_to_eid[require_attr(ev, "eiid")] = require_attr(ev, "eventID");
      } else if (ev.name == "TLINK") {
        RawLink link;
        if (const auto* v = ev.attr("lid")) link.lid = *v;
        link.rel = require_attr(ev, "relType");
        if (const auto* v = ev.attr("eventInstanceID")) link.source = *v;
        if (const auto* v = ev.attr("timeID")) link.source = *v;
        if (const auto* v = ev.attr("relatedToEventInstance")) link.target = *v;
        if (const auto* v = ev.attr("relatedToTime")) link.target = *v;
        if (link.source.empty() || link.target.empty()) {
          throw Error(ErrorCode::MalformedXML, "TLINK '" + link.lid + "' lacks an endpoint");
        }
        raw_links.push_back(std::move(link));
      }
      continue;
    }
    // EndElement
    stack.pop_back();
    if (ev.name == "TEXT") {
      --text_depth;
    } else if (ev.name == "DOCID") {
      in_docid = false;
    } else if ((ev.name == "EVENT" || ev.name == "TIMEX3") && !open.empty()) {
      auto span = std::move(open.back());
      open.pop_back();
      if (span.is_dct) continue;
      // Tags outside <TEXT> (or empty spans) carry no offsets.
      if (text_depth == 0 || span.start == cursor) continue;
      auto surface = utf8::substr(doc.text, span.start, cursor);
      if (span.is_event) {
        doc.events.push_back({span.id, span.start, cursor, std::move(surface), {}});
      } else {
        doc.timexes.push_back({span.id, span.start, cursor, std::move(surface),
                               std::move(span.value)});
      }
    }
  }

  if (!have_dct || doc.dct_value.empty()) {
    throw Error(ErrorCode::MissingDCT, "document has no CREATION_TIME timex with a value");
  }
  doc.doc_id = trim(docid_text);
  if (doc.doc_id.empty()) doc.doc_id = std::string(fallback_id);

  std::set<std::string> eids;
  std::set<std::string> tids{doc.dct_timex_id};
  for (const auto& e : doc.events) eids.insert(e.eid);
  for (const auto& t : doc.timexes) tids.insert(t.tid);
  for (const auto& [eiid, eid] : eiid_to_eid) {
    if (!eids.contains(eid)) {
      throw Error(ErrorCode::DanglingReference,
                  "MAKEINSTANCE " + eiid + " refers to unknown event " + eid);
    }
    for (auto& e : doc.events) {
      if (e.eid == eid) e.eiids.push_back(eiid);
    }
  }

  auto resolve = [&](const std::string& id) {
    if (auto it = eiid_to_eid.find(id); it != eiid_to_eid.end()) return it->second;
    if (eids.contains(id) || tids.contains(id)) return id;
    throw Error(ErrorCode::DanglingReference, "TLINK refers to unknown id '" + id + "'");
  };
  for (const auto& link : raw_links) {
    IntervalRelation rel;
    try {
      rel = interval_relation_from_string(link.rel);
    } catch (const Error&) {
      throw Error(ErrorCode::UnknownRelType, "unknown relType '" + link.rel + "'");
    }
    doc.tlinks.push_back({link.lid, resolve(link.source), resolve(link.target), rel});
  }
  return doc;
}

namespace {

constexpr std::array<std::string_view, 44> kAbbreviations = {
    "Mr",   "Mrs",  "Ms",   "Dr",   "Prof", "Sr",   "Jr",   "St",   "Inc",
    "Corp", "Co",   "Ltd",  "Gov",  "Sen",  "Rep",  "Gen",  "Col",  "Lt",
    "Sgt",  "Capt", "Jan",  "Feb",  "Mar",  "Apr",  "Jun",  "Jul",  "Aug",
    "Sep",  "Sept", "Oct",  "Nov",  "Dec",  "vs",   "etc",  "No",   "Mt",
    "Ft",   "Ave",  "Blvd", "Rev",  "Pres", "Adm",  "Maj",  "approx"};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

// The period at byte `i` belongs to an abbreviation or initial.
bool guarded_period(std::string_view text, std::size_t i) {
  std::size_t b = i;
  while (b > 0 && !is_space(text[b - 1])) --b;
  while (b < i && is_opener(text[b])) ++b;
  const auto word = text.substr(b, i - b);
  if (word.empty()) return false;
  if (word.size() == 1 && is_upper(word[0])) return true;
  if (word.find('.') != std::string_view::npos) return true;
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

}  // namespace

std::vector<SentenceWindow> split_sentences(const TimeMLDoc& doc) {
  const std::string_view text = doc.text;

  // code-point offset of every byte boundary
  std::vector<std::size_t> cp_at(text.size() + 1, 0);
  for (std::size_t i = 0, cp = 0; i <= text.size(); ++i) {
    cp_at[i] = cp;
    if (i < text.size() && !utf8::is_continuation(static_cast<unsigned char>(text[i]))) {
      ++cp;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> entity_bytes;
  auto to_byte = [&](std::size_t cp) { return utf8::byte_offset(text, cp); };
  for (const auto& e : doc.events) entity_bytes.emplace_back(to_byte(e.start), to_byte(e.end));
  for (const auto& t : doc.timexes) entity_bytes.emplace_back(to_byte(t.start), to_byte(t.end));
  auto inside_entity = [&](std::size_t cut) {
    for (const auto& [s, e] : entity_bytes) {
      if (s < cut && cut < e) return true;
    }
    return false;
  };

  std::vector<std::size_t> cuts;  // byte positions where a new sentence may begin
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < text.size() && text[j] == '\n' && !inside_entity(i)) cuts.push_back(i);
      continue;
    }
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < text.size() && is_closer(text[j])) ++j;
    if (j >= text.size() || !is_space(text[j])) continue;
    std::size_t m = j;
    while (m < text.size() && is_space(text[m])) ++m;
    if (m >= text.size()) continue;
    std::size_t first = m;
    while (first < text.size() && is_opener(text[first])) ++first;
    if (first >= text.size() || !is_upper(text[first])) continue;
    if (c == '.' && guarded_period(text, i)) continue;
    if (inside_entity(j)) continue;
    cuts.push_back(j);
  }
  cuts.push_back(text.size());

  const std::string prefix = std::string(kDctPrefix) + doc.dct_value + " ";
  const std::size_t prefix_cp = utf8::length(prefix);
  const std::size_t dct_start = utf8::length(kDctPrefix);
  const Entity dct_entity{doc.dct_timex_id, doc.dct_value, dct_start,
                          dct_start + utf8::length(doc.dct_value),
                          EntityKind::Interval, true};

  std::vector<SentenceWindow> windows;
  std::size_t begin = 0;
  for (const auto cut : cuts) {
    std::size_t b = begin;
    std::size_t e = cut;
    begin = cut;
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    if (b == e) continue;

    SentenceWindow w;
    w.doc_id = doc.doc_id;
    w.sentence_index = windows.size();
    std::string body(text.substr(b, e - b));
    std::replace_if(body.begin(), body.end(),
                    [](char ch) { return ch == '\n' || ch == '\r' || ch == '\t'; }, ' ');
    w.text = prefix + body;
    w.entities.push_back(dct_entity);

    const std::size_t cb = cp_at[b];
    const std::size_t ce = cp_at[e];
    auto add = [&](const std::string& id, std::size_t s, std::size_t t) {
      if (s < cb || t > ce) return;
      const auto start = s - cb + prefix_cp;
      const auto end = t - cb + prefix_cp;
      w.entities.push_back({id, utf8::substr(w.text, start, end), start, end,
                            EntityKind::Interval, false});
    };
    for (const auto& ev : doc.events) add(ev.eid, ev.start, ev.end);
    for (const auto& tx : doc.timexes) add(tx.tid, tx.start, tx.end);
    std::stable_sort(w.entities.begin(), w.entities.end(),
                     [](const Entity& x, const Entity& y) { return x.start_char < y.start_char; });

    std::set<std::string> ids;
    for (const auto& ent : w.entities) ids.insert(ent.id);
    for (const auto& link : doc.tlinks) {
      if (link.source != link.target && ids.contains(link.source) &&
          ids.contains(link.target)) {
        w.gold_interval_links.push_back(link);
      }
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace tgame
