#pragma once

#include <algorithm>
#include <bitset>
#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "subalign/document.hpp"
#include "subalign/unicode.hpp"
#include "subalign/util.hpp"

namespace subalign {

inline constexpr size_t k_temporal_bits = 10000;

struct docalign_config {
  double title_threshold = 0.90;    // keep pairs with similarity strictly above
  double hamming_threshold = 0.04;  // keep pairs with distance at most this
  int shift_range_s = 120;
};

// --- gestalt (Ratcliff-Obershelp) similarity ------------------------------

namespace detail {

struct match_block {
  size_t i = 0, j = 0, len = 0;
};

// Longest common substring of a[lo1,hi1) and b[lo2,hi2); ties resolve to the
// smallest start in a, then in b.
inline match_block find_longest_match(const std::u32string& a, size_t lo1, size_t hi1,
                                      const std::u32string& b, size_t lo2, size_t hi2) {
  match_block best;
  if (lo1 >= hi1 || lo2 >= hi2) return best;
  std::vector<size_t> prev(hi2 - lo2 + 1, 0), cur(hi2 - lo2 + 1, 0);
  for (size_t i = lo1; i < hi1; ++i) {
    for (size_t j = lo2; j < hi2; ++j) {
      size_t len = (a[i] == b[j]) ? prev[j - lo2] + 1 : 0;
      cur[j - lo2 + 1] = len;
      if (len > best.len) best = {i - len + 1, j - len + 1, len};
    }
    std::swap(prev, cur);
    cur.assign(cur.size(), 0);
  }
  return best;
}

inline size_t gestalt_matched(const std::u32string& a, size_t lo1, size_t hi1,
                              const std::u32string& b, size_t lo2, size_t hi2) {
  match_block m = find_longest_match(a, lo1, hi1, b, lo2, hi2);
  if (m.len == 0) return 0;
  return m.len + gestalt_matched(a, lo1, m.i, b, lo2, m.j) +
         gestalt_matched(a, m.i + m.len, hi1, b, m.j + m.len, hi2);
}

}  // namespace detail

// 2*K_m / (|a|+|b|), K_m summed over the recursive longest-common-substring
// decomposition. The greedy decomposition depends on operand order in corner
// cases, so operands are put in a canonical order first; that makes the
// function symmetric by construction.
inline double title_similarity(std::string_view a_utf8, std::string_view b_utf8) {
  std::u32string a = utf8_decode(a_utf8);
  std::u32string b = utf8_decode(b_utf8);
  if (a.empty() && b.empty()) return 1.0;
  if (b < a) std::swap(a, b);
  size_t km = detail::gestalt_matched(a, 0, a.size(), b, 0, b.size());
  return 2.0 * static_cast<double>(km) / static_cast<double>(a.size() + b.size());
}

// --- title metadata --------------------------------------------------------

struct title_meta {
  std::string normalized_title;
  std::optional<int> episode;
  std::optional<int> season;
};

namespace detail {

inline const std::vector<std::string>& release_tags() {
  static const std::vector<std::string> tags = {
      "480p",  "576p",  "720p",   "1080p",  "2160p", "4k",     "x264",   "x265",
      "h264",  "h265",  "hevc",   "xvid",   "divx",  "aac",    "ac3",    "dts",
      "bluray", "blu-ray", "bdrip", "brrip", "webrip", "web-dl", "webdl", "hdtv",
      "dvdrip", "dvd",  "hdrip",  "proper", "repack", "remastered", "10bit", "8bit",
      "srt",   "sub",   "subs"};
  return tags;
}

inline std::string strip_square_groups(std::string_view s) {
  std::u32string in = utf8_decode(s);
  std::u32string out;
  size_t i = 0;
  while (i < in.size()) {
    if (in[i] == U'[' || in[i] == 0x3010) {
      char32_t close = in[i] == U'[' ? U']' : 0x3011;
      size_t j = i + 1;
      while (j < in.size() && in[j] != close) ++j;
      if (j < in.size()) {
        i = j + 1;
        continue;
      }
    }
    out.push_back(in[i]);
    ++i;
  }
  return utf8_encode(out);
}

inline std::string lowercase_utf8(std::string_view s) {
  std::u32string cps = utf8_decode(s);
  for (char32_t& c : cps) c = to_lower(c);
  return utf8_encode(cps);
}

}  // namespace detail

// Pulls show/season/episode structure out of a raw file title. Recognized
// episode patterns are removed from the normalized title; separators become
// spaces and release-tag tokens are dropped.
inline title_meta extract_title_meta(std::string_view title_raw) {
  std::string s = detail::lowercase_utf8(title_raw);
  s = detail::strip_square_groups(s);
  for (char& c : s)
    if (c == '.' || c == '_') c = ' ';

  title_meta meta;

  // Trailing language suffix from file naming ("show.s01e02.en").
  {
    auto tokens = split_ws(s);
    if (!tokens.empty()) {
      const std::string& last = tokens.back();
      if (last == "en" || last == "ja" || last == "eng" || last == "jpn" || last == "jp") {
        tokens.pop_back();
        s = join(tokens, " ");
      }
    }
  }

  static const std::regex patterns[] = {
      std::regex(R"(\bs(\d{1,2})\s?e(\d{1,3}))", std::regex::icase),
      std::regex(R"(\b(\d{1,2})x(\d{1,3})\b)"),
      std::regex(R"(\bepisode[ ]*(\d{1,4})\b)", std::regex::icase),
      std::regex(R"(\bep[ ]*(\d{1,4})\b)", std::regex::icase),
      std::regex(R"(\be(\d{1,3})\b)", std::regex::icase),
      std::regex(R"(\s-\s*(\d{1,4})\s*$)"),
  };
  for (size_t p = 0; p < std::size(patterns); ++p) {
    std::smatch m;
    if (!std::regex_search(s, m, patterns[p])) continue;
    if (p == 0 || p == 1) {
      meta.season = std::stoi(m[1].str());
      meta.episode = std::stoi(m[2].str());
    } else {
      meta.episode = std::stoi(m[1].str());
    }
    s = m.prefix().str() + " " + m.suffix().str();
    break;
  }

  for (char& c : s)
    if (c == '-' || c == '(' || c == ')' || c == '{' || c == '}') c = ' ';

  auto tokens = split_ws(s);
  std::vector<std::string> kept;
  const auto& tags = detail::release_tags();
  for (auto& t : tokens) {
    if (std::find(tags.begin(), tags.end(), t) != tags.end()) continue;
    kept.push_back(t);
  }
  meta.normalized_title = join(kept, " ");

  if (meta.normalized_title.empty()) {
    // Degenerate titles (all structure, no name) fall back to the raw form.
    std::string fallback = detail::lowercase_utf8(title_raw);
    for (char& c : fallback)
      if (c == '.' || c == '_' || c == '-') c = ' ';
    meta.normalized_title = join(split_ws(fallback), " ");
    if (meta.normalized_title.empty()) meta.normalized_title = "untitled";
  }
  return meta;
}

// --- candidate pairing -----------------------------------------------------

struct titled_doc {
  std::string doc_id;
  title_meta meta;
};

// All (en, ja) pairs whose titles agree above the threshold and whose
// episode/season numbers, where both sides have them, are equal.
inline std::vector<std::pair<std::string, std::string>> match_candidates(
    const std::vector<titled_doc>& en_docs, const std::vector<titled_doc>& ja_docs,
    double title_threshold = 0.90) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& en : en_docs) {
    for (const auto& ja : ja_docs) {
      if (en.meta.episode && ja.meta.episode && *en.meta.episode != *ja.meta.episode) continue;
      if (en.meta.season && ja.meta.season && *en.meta.season != *ja.meta.season) continue;
      if (title_similarity(en.meta.normalized_title, ja.meta.normalized_title) <=
          title_threshold)
        continue;
      out.emplace_back(en.doc_id, ja.doc_id);
    }
  }
  return out;
}

// --- temporal fingerprints ---------------------------------------------------

using temporal_bits = std::bitset<k_temporal_bits>;

// Bit k (1-based) is set when some caption's nearest starting second, plus
// the shift, equals k. Rounding is half-up on milliseconds.
inline temporal_bits temporal_vector(const subtitle_document& doc, int shift_s) {
  temporal_bits bits;
  for (const caption& c : doc.captions) {
    std::int64_t k = (c.start_ms + 500) / 1000 + shift_s;
    if (k >= 1 && k <= static_cast<std::int64_t>(k_temporal_bits)) bits.set(k - 1);
  }
  return bits;
}

struct temporal_match {
  double distance = 1.0;
  int best_shift_s = 0;
};

// Minimum normalized Hamming distance between the English fingerprint and
// the Japanese fingerprint over all shifts in [-range, +range]. Ties go to
// the smaller |shift|, negative first.
inline temporal_match temporal_distance(const subtitle_document& en_doc,
                                        const subtitle_document& ja_doc, int shift_range_s) {
  temporal_bits en_bits = temporal_vector(en_doc, 0);
  temporal_match best;
  bool first = true;
  for (int mag = 0; mag <= shift_range_s; ++mag) {
    for (int sign : {-1, +1}) {
      if (mag == 0 && sign == +1) continue;
      int shift = sign * mag;
      double d = static_cast<double>((en_bits ^ temporal_vector(ja_doc, shift)).count()) /
                 static_cast<double>(k_temporal_bits);
      if (first || d < best.distance) {
        best = {d, shift};
        first = false;
      }
    }
  }
  return best;
}

// --- full document alignment -------------------------------------------------

struct document_pair {
  std::string en_doc_id;
  std::string ja_doc_id;
  double title_similarity = 0.0;
  double temporal_distance = 1.0;
  int best_shift_s = 0;
};

struct docalign_stats {
  std::int64_t candidates = 0;  // pairs passing the metadata match
  std::int64_t retained = 0;    // pairs also passing the temporal filter
};

inline std::vector<document_pair> align_documents(const std::vector<subtitle_document>& en_docs,
                                                  const std::vector<subtitle_document>& ja_docs,
                                                  const docalign_config& cfg = {},
                                                  docalign_stats* stats = nullptr) {
  std::vector<document_pair> out;
  std::vector<title_meta> ja_meta(ja_docs.size());
  for (size_t j = 0; j < ja_docs.size(); ++j) ja_meta[j] = extract_title_meta(ja_docs[j].title_raw);

  for (const auto& en : en_docs) {
    title_meta en_meta = extract_title_meta(en.title_raw);
    for (size_t j = 0; j < ja_docs.size(); ++j) {
      const auto& ja = ja_docs[j];
      const auto& jm = ja_meta[j];
      if (en_meta.episode && jm.episode && *en_meta.episode != *jm.episode) continue;
      if (en_meta.season && jm.season && *en_meta.season != *jm.season) continue;
      double sim = title_similarity(en_meta.normalized_title, jm.normalized_title);
      if (sim <= cfg.title_threshold) continue;
      if (en.captions.empty() || ja.captions.empty()) continue;
      if (stats) ++stats->candidates;
      temporal_match tm = temporal_distance(en, ja, cfg.shift_range_s);
      if (tm.distance > cfg.hamming_threshold) continue;
      if (stats) ++stats->retained;
      out.push_back({en.doc_id, ja.doc_id, sim, tm.distance, tm.best_shift_s});
    }
  }
  return out;
}

}  // namespace subalign
