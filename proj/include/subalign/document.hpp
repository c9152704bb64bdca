#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "subalign/errors.hpp"

namespace subalign {

enum class language { en, ja };

// A document needs this many well-formed cues to count as legitimate.
inline constexpr int k_min_cues = 5;

inline const char* language_name(language l) { return l == language::en ? "en" : "ja"; }

inline language language_from_name(std::string_view s) {
  if (s == "en") return language::en;
  if (s == "ja") return language::ja;
  raise(errc::format_error, "unknown language tag: " + std::string(s));
}

// One timed cue. text is single-line UTF-8: no CR, LF, or tab.
struct caption {
  int index = 0;  // 1-based ordinal within its document
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string text;
};

struct subtitle_document {
  std::string doc_id;
  std::string title_raw;
  language lang = language::en;
  std::vector<caption> captions;
};

// --- line-oriented interchange format ------------------------------------
//
//   #doc<TAB>doc_id<TAB>language<TAB>title_raw
//   start_ms<TAB>end_ms<TAB>text        (one per caption)

inline void write_document(std::ostream& os, const subtitle_document& doc) {
  os << "#doc\t" << doc.doc_id << '\t' << language_name(doc.lang) << '\t' << doc.title_raw
     << '\n';
  for (const caption& c : doc.captions)
    os << c.start_ms << '\t' << c.end_ms << '\t' << c.text << '\n';
}

inline void write_documents(std::ostream& os, const std::vector<subtitle_document>& docs) {
  for (const auto& d : docs) write_document(os, d);
}

inline std::vector<subtitle_document> read_documents(std::istream& is) {
  std::vector<subtitle_document> docs;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("#doc\t", 0) == 0) {
      size_t p1 = line.find('\t', 5);
      size_t p2 = p1 == std::string::npos ? std::string::npos : line.find('\t', p1 + 1);
      if (p1 == std::string::npos || p2 == std::string::npos)
        raise(errc::format_error, "bad document header at line " + std::to_string(lineno));
      subtitle_document doc;
      doc.doc_id = line.substr(5, p1 - 5);
      doc.lang = language_from_name(line.substr(p1 + 1, p2 - p1 - 1));
      doc.title_raw = line.substr(p2 + 1);
      docs.push_back(std::move(doc));
      continue;
    }
    if (docs.empty())
      raise(errc::format_error, "caption line before any document header");
    size_t p1 = line.find('\t');
    size_t p2 = p1 == std::string::npos ? std::string::npos : line.find('\t', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
      raise(errc::format_error, "bad caption line at line " + std::to_string(lineno));
    caption c;
    try {
      c.start_ms = std::stoll(line.substr(0, p1));
      c.end_ms = std::stoll(line.substr(p1 + 1, p2 - p1 - 1));
    } catch (const std::exception&) {
      raise(errc::format_error, "bad caption timing at line " + std::to_string(lineno));
    }
    c.text = line.substr(p2 + 1);
    c.index = static_cast<int>(docs.back().captions.size()) + 1;
    docs.back().captions.push_back(std::move(c));
  }
  return docs;
}

}  // namespace subalign
