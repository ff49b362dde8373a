#include "xml_reader.hpp"

#include <cctype>
#include <cstdint>

#include "tgame/error.hpp"

namespace tgame::xml {

namespace {

bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == ':' || c == '-' || c == '.' || u >= 0x80;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

void Reader::fail(const std::string& what) const {
  throw Error(ErrorCode::MalformedXML,
              what + " at byte " + std::to_string(pos_));
}

void Reader::skip_past(std::string_view terminator, const char* what) {
  const auto at = in_.find(terminator, pos_);
  if (at == std::string_view::npos) fail(std::string("unterminated ") + what);
  pos_ = at + terminator.size();
}

void Reader::skip_space() {
  while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) {
    ++pos_;
  }
}

std::string Reader::read_name() {
  const auto begin = pos_;
  while (pos_ < in_.size() && is_name_char(in_[pos_])) ++pos_;
  if (pos_ == begin) fail("expected a name");
  return std::string(in_.substr(begin, pos_ - begin));
}

std::string Reader::decode(std::string_view raw) const {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '<') fail("'<' in character data");
    if (raw[i] != '&') {
      out += raw[i];
      continue;
    }
    const auto semi = raw.find(';', i);
    if (semi == std::string_view::npos) fail("unterminated entity reference");
    const auto ref = raw.substr(i + 1, semi - i - 1);
    if (ref == "amp") {
      out += '&';
    } else if (ref == "lt") {
      out += '<';
    } else if (ref == "gt") {
      out += '>';
    } else if (ref == "quot") {
      out += '"';
    } else if (ref == "apos") {
      out += '\'';
    } else if (ref.size() > 1 && ref[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = ref[1] == 'x' || ref[1] == 'X';
      const auto digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) fail("empty character reference");
      for (char c : digits) {
        const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                      : hex && std::isxdigit(static_cast<unsigned char>(c))
                          ? std::tolower(static_cast<unsigned char>(c)) - 'a' + 10
                          : -1;
        if (v < 0) fail("bad character reference");
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity '&" + std::string(ref) + ";'");
    }
    i = semi;
  }
  return out;
}

Event Reader::read_start_tag() {
  ++pos_;  // '<'
  Event ev;
  ev.kind = Event::Kind::StartElement;
  ev.name = read_name();
  for (;;) {
    skip_space();
    if (pos_ >= in_.size()) fail("unterminated start tag");
    if (in_[pos_] == '>') {
      ++pos_;
      open_.push_back(ev.name);
      return ev;
    }
    if (starts_with("/>")) {
      pos_ += 2;
      pending_end_ = true;
      pending_name_ = ev.name;
      return ev;
    }
    auto key = read_name();
    skip_space();
    if (pos_ >= in_.size() || in_[pos_] != '=') fail("expected '=' after attribute");
    ++pos_;
    skip_space();
    if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) {
      fail("expected quoted attribute value");
    }
    const char quote = in_[pos_++];
    const auto close = in_.find(quote, pos_);
    if (close == std::string_view::npos) fail("unterminated attribute value");
    auto value = decode(in_.substr(pos_, close - pos_));
    pos_ = close + 1;
    for (const auto& [k, v] : ev.attrs) {
      if (k == key) fail("duplicate attribute '" + key + "'");
    }
    ev.attrs.emplace_back(std::move(key), std::move(value));
  }
}

Event Reader::read_end_tag() {
  pos_ += 2;  // "</"
  Event ev;
  ev.kind = Event::Kind::EndElement;
  ev.name = read_name();
  skip_space();
  if (pos_ >= in_.size() || in_[pos_] != '>') fail("unterminated end tag");
  ++pos_;
  if (open_.empty() || open_.back() != ev.name) {
    fail("mismatched end tag </" + ev.name + ">");
  }
  open_.pop_back();
  return ev;
}

Event Reader::next() {
  if (pending_end_) {
    pending_end_ = false;
    Event ev;
    ev.kind = Event::Kind::EndElement;
    ev.name = std::move(pending_name_);
    return ev;
  }
  for (;;) {
    if (pos_ >= in_.size()) {
      if (!open_.empty()) fail("unclosed element <" + open_.back() + ">");
      if (!seen_root_) fail("no root element");
      return {};
    }
    if (in_[pos_] != '<') {
      const auto lt = in_.find('<', pos_);
      const auto end = lt == std::string_view::npos ? in_.size() : lt;
      const auto raw = in_.substr(pos_, end - pos_);
      if (open_.empty()) {
        for (char c : raw) {
          if (!std::isspace(static_cast<unsigned char>(c))) {
            fail("character data outside the root element");
          }
        }
        pos_ = end;
        continue;
      }
      Event ev;
      ev.kind = Event::Kind::Text;
      ev.text = decode(raw);
      pos_ = end;
      return ev;
    }
    if (starts_with("<!--")) {
      skip_past("-->", "comment");
      continue;
    }
    if (starts_with("<?")) {
      skip_past("?>", "processing instruction");
      continue;
    }
    if (starts_with("<![CDATA[")) {
      if (open_.empty()) fail("CDATA outside the root element");
      const auto begin = pos_ + 9;
      skip_past("]]>", "CDATA section");
      Event ev;
      ev.kind = Event::Kind::Text;
      ev.text = std::string(in_.substr(begin, pos_ - 3 - begin));
      return ev;
    }
    if (starts_with("<!DOCTYPE")) {
      if (in_.find('[', pos_) < in_.find('>', pos_)) {
        skip_past("]>", "DOCTYPE");
      } else {
        skip_past(">", "DOCTYPE");
      }
      continue;
    }
    if (starts_with("</")) return read_end_tag();
    if (open_.empty()) {
      if (seen_root_) fail("multiple root elements");
      seen_root_ = true;
    }
    return read_start_tag();
  }
}

}  // namespace tgame::xml
