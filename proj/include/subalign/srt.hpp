#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subalign/document.hpp"
#include "subalign/encoding.hpp"
#include "subalign/errors.hpp"
#include "subalign/util.hpp"

namespace subalign {

struct srt_parse_result {
  std::vector<caption> captions;
  int skipped = 0;  // malformed cue blocks
};

namespace detail {

// "HH:MM:SS,mmm" with 1-3 hour digits; period accepted for the millisecond
// separator since both occur in the wild.
inline std::optional<std::int64_t> parse_srt_timestamp(std::string_view s) {
  s = trim(s);
  auto take_int = [&](size_t& i, int min_digits, int max_digits) -> std::optional<int> {
    size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9' &&
           i - start < static_cast<size_t>(max_digits))
      ++i;
    if (i - start < static_cast<size_t>(min_digits)) return std::nullopt;
    int v = 0;
    std::from_chars(s.data() + start, s.data() + i, v);
    return v;
  };
  size_t i = 0;
  auto hh = take_int(i, 1, 3);
  if (!hh || i >= s.size() || s[i] != ':') return std::nullopt;
  ++i;
  auto mm = take_int(i, 1, 2);
  if (!mm || i >= s.size() || s[i] != ':') return std::nullopt;
  ++i;
  auto ss = take_int(i, 1, 2);
  if (!ss) return std::nullopt;
  int ms = 0;
  if (i < s.size()) {
    if (s[i] != ',' && s[i] != '.') return std::nullopt;
    ++i;
    auto frac = take_int(i, 1, 3);
    if (!frac || i != s.size()) return std::nullopt;
    ms = *frac;
  } else {
    return std::nullopt;
  }
  if (*mm > 59 || *ss > 59) return std::nullopt;
  return (((*hh * 60LL) + *mm) * 60LL + *ss) * 1000LL + ms;
}

// Removes complete <...> spans (formatting tags like <i>, <font ...>).
inline std::string strip_markup(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<') {
      size_t close = s.find('>', i + 1);
      if (close != std::string_view::npos) {
        i = close + 1;
        continue;
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

// Joins cue lines with single spaces and squeezes whitespace; the caption
// text invariant forbids CR, LF, and tab.
inline std::string join_cue_lines(const std::vector<std::string_view>& lines) {
  std::string out;
  for (auto line : lines) {
    std::string clean = strip_markup(line);
    for (char& ch : clean)
      if (ch == '\t') ch = ' ';
    auto t = trim(clean);
    if (t.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    size_t i = 0;
    while (i < t.size()) {
      if (t[i] == ' ') {
        out.push_back(' ');
        while (i < t.size() && t[i] == ' ') ++i;
      } else {
        out.push_back(t[i]);
        ++i;
      }
    }
  }
  return out;
}

inline bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

// Parses SubRip text into captions. Cue blocks are separated by blank lines;
// a block is an optional numeric index line, a timing line, and text lines.
// Malformed blocks are skipped and counted. Captions come back sorted by
// start time and re-indexed from 1.
inline srt_parse_result parse_srt(std::string_view text) {
  // Tolerate a BOM remnant.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    std::string_view line =
        nl == std::string_view::npos ? text.substr(start) : text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }

  srt_parse_result result;
  size_t i = 0;
  while (i < lines.size()) {
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
    if (i >= lines.size()) break;
    size_t block_end = i;
    while (block_end < lines.size() && !trim(lines[block_end]).empty()) ++block_end;

    size_t cursor = i;
    if (detail::is_digits(trim(lines[cursor])) && cursor + 1 < block_end) ++cursor;

    bool ok = false;
    if (cursor < block_end) {
      std::string_view timing = trim(lines[cursor]);
      size_t arrow = timing.find("-->");
      if (arrow != std::string_view::npos) {
        auto from = detail::parse_srt_timestamp(timing.substr(0, arrow));
        auto to = detail::parse_srt_timestamp(timing.substr(arrow + 3));
        if (from && to && *from >= 0 && *to >= *from) {
          std::vector<std::string_view> cue_lines(lines.begin() + cursor + 1,
                                                  lines.begin() + block_end);
          std::string body = detail::join_cue_lines(cue_lines);
          if (!body.empty()) {
            caption c;
            c.start_ms = *from;
            c.end_ms = *to;
            c.text = std::move(body);
            result.captions.push_back(std::move(c));
            ok = true;
          }
        }
      }
    }
    if (!ok) ++result.skipped;
    i = block_end;
  }

  std::stable_sort(result.captions.begin(), result.captions.end(),
                   [](const caption& a, const caption& b) { return a.start_ms < b.start_ms; });
  for (size_t k = 0; k < result.captions.size(); ++k)
    result.captions[k].index = static_cast<int>(k) + 1;

  if (static_cast<int>(result.captions.size()) < k_min_cues)
    raise(errc::document_rejected,
          "only " + std::to_string(result.captions.size()) + " well-formed cues recovered");
  return result;
}

inline std::string format_srt_timestamp(std::int64_t ms) {
  std::int64_t h = ms / 3600000;
  int m = static_cast<int>(ms / 60000 % 60);
  int s = static_cast<int>(ms / 1000 % 60);
  int frac = static_cast<int>(ms % 1000);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02d:%02d,%03d", static_cast<long long>(h), m, s, frac);
  return buf;
}

inline std::string serialize_srt(const std::vector<caption>& captions) {
  std::string out;
  for (size_t i = 0; i < captions.size(); ++i) {
    const caption& c = captions[i];
    out += std::to_string(i + 1);
    out += '\n';
    out += format_srt_timestamp(c.start_ms);
    out += " --> ";
    out += format_srt_timestamp(c.end_ms);
    out += '\n';
    out += c.text;
    out += "\n\n";
  }
  return out;
}

// Reads a raw subtitle file: encoding detection, decode, SubRip parse.
inline subtitle_document load_document(const std::string& path, language lang) {
  std::string bytes = read_file_bytes(path);
  std::filesystem::path p(path);
  subtitle_document doc;
  doc.doc_id = p.generic_string();
  doc.title_raw = p.stem().string();
  for (char& c : doc.title_raw)
    if (c == '\t') c = ' ';
  doc.lang = lang;
  if (bytes.empty()) raise(errc::document_rejected, path + ": empty file");
  try {
    encoding_guess guess = detect_encoding(bytes);
    std::string text = decode_to_utf8(bytes, guess.name);
    doc.captions = parse_srt(text).captions;
  } catch (const error& e) {
    raise(e.code(), path + ": " + e.what());
  }
  return doc;
}

}  // namespace subalign
