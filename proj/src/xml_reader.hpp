#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tgame::xml {

// Pull reader for the XML subset TimeML corpora use: elements, attributes,
// character data, CDATA, comments, processing instructions and a DOCTYPE
// without an internal subset. Entity references are decoded.
struct Event {
  enum class Kind { StartElement, EndElement, Text, EndOfDocument };
  Kind kind = Kind::EndOfDocument;
  std::string name;                                        // elements
  std::vector<std::pair<std::string, std::string>> attrs;  // StartElement
  std::string text;                                        // Text

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

class Reader {
 public:
  explicit Reader(std::string_view input) : in_(input) {}

  // Throws Error{MalformedXML}. Self-closing tags yield Start then End.
  Event next();

 private:
  [[noreturn]] void fail(const std::string& what) const;
  bool starts_with(std::string_view s) const { return in_.substr(pos_).starts_with(s); }
  void skip_past(std::string_view terminator, const char* what);
  void skip_space();
  std::string read_name();
  std::string decode(std::string_view raw) const;
  Event read_start_tag();
  Event read_end_tag();

  std::string_view in_;
  std::size_t pos_ = 0;
  std::vector<std::string> open_;
  bool pending_end_ = false;
  std::string pending_name_;
  bool seen_root_ = false;
};

}  // namespace tgame::xml
