#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "subalign/document.hpp"
#include "subalign/errors.hpp"
#include "subalign/unicode.hpp"

namespace subalign {

// Caption cleanup rules, applied in a fixed order. Every rule can be switched
// off independently (configuration keys normalize.rules.<name>.enabled).
struct normalize_options {
  bool lowercase = true;
  bool brackets = true;
  bool tags = true;
  bool punctuation = true;
  bool signatures = true;
  bool out_of_language = true;
  bool whitespace = true;
};

struct normalization_report {
  std::map<std::string, int> rules_fired;
  std::int64_t chars_removed = 0;
};

namespace detail {

inline bool is_bracket_open(char32_t c) {
  return c == U'(' || c == U'[' || c == U'{' || c == 0x3010 /*【*/ || c == 0xFF08 /*（*/;
}

inline char32_t bracket_close_for(char32_t open) {
  switch (open) {
    case U'(': return U')';
    case U'[': return U']';
    case U'{': return U'}';
    case 0x3010: return 0x3011;
    case 0xFF08: return 0xFF09;
  }
  return 0;
}

// Deletes matched bracket pairs with their contents. Same-type nesting is
// honored; an opener without its closer is left alone.
inline std::u32string strip_bracketed(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  size_t i = 0;
  while (i < in.size()) {
    char32_t c = in[i];
    if (is_bracket_open(c)) {
      char32_t close = bracket_close_for(c);
      int depth = 1;
      size_t j = i + 1;
      while (j < in.size() && depth > 0) {
        if (in[j] == c)
          ++depth;
        else if (in[j] == close)
          --depth;
        ++j;
      }
      if (depth == 0) {
        i = j;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

inline std::u32string strip_tag_remnants(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  size_t i = 0;
  while (i < in.size()) {
    if (in[i] == U'<') {
      size_t j = i + 1;
      while (j < in.size() && in[j] != U'>') ++j;
      if (j < in.size()) {
        i = j + 1;
        continue;
      }
    }
    out.push_back(in[i]);
    ++i;
  }
  return out;
}

inline bool is_dash(char32_t c) {
  return c == U'-' || c == 0x2010 || c == 0x2013 || c == 0x2014 || c == 0x2015;
}

inline bool is_music_glyph(char32_t c) { return c == 0x266A || c == 0x266B; }

inline std::u32string tidy_punctuation(const std::u32string& in) {
  size_t b = 0;
  while (b < in.size() && (is_dash(in[b]) || is_music_glyph(in[b]) || is_space(in[b]))) ++b;

  // Collapse runs of one punctuation mark; a dot run of three or more is an
  // ellipsis and stays "...".
  std::u32string out;
  out.reserve(in.size() - b);
  size_t i = b;
  while (i < in.size()) {
    char32_t c = in[i];
    if (is_punct(c)) {
      size_t j = i;
      while (j < in.size() && in[j] == c) ++j;
      size_t run = j - i;
      if (c == U'.' && run >= 3) {
        out.append(3, U'.');
      } else {
        out.push_back(c);
      }
      i = j;
    } else {
      out.push_back(c);
      ++i;
    }
  }

  size_t e = out.size();
  while (e > 0 && (is_space(out[e - 1]) || out[e - 1] == U',' || out[e - 1] == 0x3001))
    --e;
  out.resize(e);
  return out;
}

// Case-insensitive search for "<keyword> by" starting at a word boundary;
// returns the keyword position or npos.
inline size_t find_signature_en(const std::u32string& s) {
  static const std::u32string keywords[] = {U"subbed", U"subs", U"synced", U"sync",
                                            U"corrected"};
  auto lower = [](char32_t c) { return to_lower(c); };
  for (size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && is_latin_letter(s[i - 1])) continue;
    for (const auto& kw : keywords) {
      if (i + kw.size() >= s.size()) continue;
      size_t k = 0;
      while (k < kw.size() && lower(s[i + k]) == kw[k]) ++k;
      if (k != kw.size()) continue;
      size_t j = i + k;
      if (j >= s.size() || !is_space(s[j])) continue;
      while (j < s.size() && is_space(s[j])) ++j;
      if (j + 1 < s.size() && lower(s[j]) == U'b' && lower(s[j + 1]) == U'y' &&
          (j + 2 >= s.size() || !is_latin_letter(s[j + 2])))
        return i;
    }
  }
  return std::u32string::npos;
}

inline std::u32string strip_signatures(const std::u32string& in, language lang) {
  if (lang == language::en) {
    size_t pos = find_signature_en(in);
    if (pos != std::u32string::npos) return in.substr(0, pos);
    return in;
  }
  // Japanese credit captions start with 字幕 (e.g. 字幕：someone).
  size_t b = 0;
  while (b < in.size() && is_space(in[b])) ++b;
  if (b + 2 <= in.size() && in[b] == 0x5B57 && in[b + 1] == 0x5E55) return {};
  return in;
}

inline std::u32string strip_out_of_language(const std::u32string& in, language lang) {
  std::u32string out;
  out.reserve(in.size());
  size_t i = 0;
  if (lang == language::en) {
    // Runs of three or more codepoints that are neither Latin nor digits nor
    // punctuation are encoding or OCR junk.
    auto junk = [](char32_t c) {
      return !is_latin_letter(c) && !is_ascii_digit(c) && !is_punct(c) && !is_space(c) &&
             !(c >= 0xFF10 && c <= 0xFF19);
    };
    while (i < in.size()) {
      if (junk(in[i])) {
        size_t j = i;
        while (j < in.size() && junk(in[j])) ++j;
        if (j - i >= 3) {
          i = j;
          continue;
        }
      }
      out.push_back(in[i]);
      ++i;
    }
  } else {
    // Long Latin-letter runs inside Japanese captions; short romaji survives.
    while (i < in.size()) {
      if (is_latin_letter(in[i])) {
        size_t j = i;
        while (j < in.size() && is_latin_letter(in[j])) ++j;
        if (j - i >= 8) {
          i = j;
          continue;
        }
        out.append(in, i, j - i);
        i = j;
        continue;
      }
      out.push_back(in[i]);
      ++i;
    }
  }
  return out;
}

inline std::u32string collapse_whitespace(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  size_t i = 0;
  while (i < in.size()) {
    if (is_space(in[i])) {
      size_t j = i;
      while (j < in.size() && is_space(in[j])) ++j;
      if (!out.empty() && j < in.size()) out.push_back(U' ');
      i = j;
    } else {
      out.push_back(in[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace detail

// Cleans one caption. Rules run in order: lowercase (English), bracketed
// text, tag remnants, punctuation, author signatures, out-of-language runs,
// whitespace. The pass repeats until the text stops changing so that, for
// example, punctuation exposed by a junk-run deletion is still collapsed.
inline std::pair<std::string, normalization_report> normalize_caption(
    std::string_view text, language lang, const normalize_options& opts = {}) {
  normalization_report report;
  std::u32string cur = utf8_decode(text);

  for (int pass = 0; pass < 16; ++pass) {
    std::u32string before_pass = cur;
    auto apply = [&](bool enabled, const char* name, auto&& fn) {
      if (!enabled) return;
      std::u32string next = fn(cur);
      if (next != cur) {
        ++report.rules_fired[name];
        if (next.size() < cur.size())
          report.chars_removed += static_cast<std::int64_t>(cur.size() - next.size());
        cur = std::move(next);
      }
    };
    apply(opts.lowercase && lang == language::en, "lowercase", [](const std::u32string& s) {
      std::u32string out = s;
      for (char32_t& c : out) c = to_lower(c);
      return out;
    });
    apply(opts.brackets, "brackets", detail::strip_bracketed);
    apply(opts.tags, "tags", detail::strip_tag_remnants);
    apply(opts.punctuation, "punctuation", detail::tidy_punctuation);
    apply(opts.signatures, "signatures",
          [&](const std::u32string& s) { return detail::strip_signatures(s, lang); });
    apply(opts.out_of_language, "out_of_language",
          [&](const std::u32string& s) { return detail::strip_out_of_language(s, lang); });
    apply(opts.whitespace, "whitespace", detail::collapse_whitespace);
    if (cur == before_pass) break;
  }
  return {utf8_encode(cur), std::move(report)};
}

// Maps normalize_caption over a document, drops captions that clean to
// nothing, and re-indexes the survivors.
inline std::pair<subtitle_document, normalization_report> normalize_document(
    const subtitle_document& doc, const normalize_options& opts = {}) {
  subtitle_document out;
  out.doc_id = doc.doc_id;
  out.title_raw = doc.title_raw;
  out.lang = doc.lang;
  normalization_report total;
  for (const caption& c : doc.captions) {
    auto [text, rep] = normalize_caption(c.text, doc.lang, opts);
    for (const auto& [rule, n] : rep.rules_fired) total.rules_fired[rule] += n;
    total.chars_removed += rep.chars_removed;
    if (text.empty()) continue;
    caption kept = c;
    kept.text = std::move(text);
    kept.index = static_cast<int>(out.captions.size()) + 1;
    out.captions.push_back(std::move(kept));
  }
  if (static_cast<int>(out.captions.size()) < k_min_cues)
    raise(errc::document_rejected, doc.doc_id + ": fewer than " + std::to_string(k_min_cues) +
                                       " captions survived normalization");
  return {std::move(out), std::move(total)};
}

}  // namespace subalign
