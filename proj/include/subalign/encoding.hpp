#pragma once

#include <array>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "subalign/errors.hpp"
#include "subalign/jis_x0208_table.hpp"
#include "subalign/unicode.hpp"

namespace subalign {

enum class encoding { utf8, utf16le, utf16be, shift_jis, euc_jp, cp1252 };

inline const char* encoding_name(encoding e) {
  switch (e) {
    case encoding::utf8: return "utf-8";
    case encoding::utf16le: return "utf-16le";
    case encoding::utf16be: return "utf-16be";
    case encoding::shift_jis: return "shift-jis";
    case encoding::euc_jp: return "euc-jp";
    case encoding::cp1252: return "cp1252";
  }
  return "?";
}

inline std::optional<encoding> encoding_from_name(std::string_view name) {
  if (name == "utf-8" || name == "utf8") return encoding::utf8;
  if (name == "utf-16le") return encoding::utf16le;
  if (name == "utf-16be") return encoding::utf16be;
  if (name == "shift-jis" || name == "sjis") return encoding::shift_jis;
  if (name == "euc-jp") return encoding::euc_jp;
  if (name == "cp1252" || name == "windows-1252") return encoding::cp1252;
  return std::nullopt;
}

struct encoding_guess {
  encoding name;
  double confidence;  // in [0, 1]
};

namespace detail {

// cp1252 maps 0x80..0x9F to these scalars; 0 marks an unassigned byte.
inline constexpr std::array<char32_t, 32> k_cp1252_high = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, 0,      0x017D, 0,      0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

inline char32_t jis_cell_to_unicode(int cell) {
  static const std::array<char32_t, 94 * 94>& table = [] {
    static std::array<char32_t, 94 * 94> t{};
    for (const auto& e : k_jis_x0208_table) t[e.cell] = e.unicode;
    return t;
  }();
  if (cell < 0 || cell >= 94 * 94) return 0;
  return table[cell];
}

inline int unicode_to_jis_cell(char32_t cp) {
  static const std::unordered_map<char32_t, int>& rev = [] {
    static std::unordered_map<char32_t, int> m;
    m.reserve(sizeof(k_jis_x0208_table) / sizeof(k_jis_x0208_table[0]));
    for (const auto& e : k_jis_x0208_table) m.emplace(e.unicode, e.cell);
    return m;
  }();
  auto it = rev.find(cp);
  return it == rev.end() ? -1 : it->second;
}

// Each decoder walks the byte stream and calls sink(cp, nbytes) for every
// decoded scalar, or bad(nbytes) for bytes it had to skip. Shared by both
// detection scans and actual text conversion.

template <class Sink, class Bad>
void walk_utf8(std::string_view s, Sink&& sink, Bad&& bad) {
  size_t i = 0;
  while (i < s.size()) {
    size_t before = i;
    char32_t cp;
    if (utf8_next(s, i, cp))
      sink(cp, i - before);
    else
      bad(i - before);
  }
}

template <class Sink, class Bad>
void walk_utf16(std::string_view s, bool little_endian, Sink&& sink, Bad&& bad) {
  auto unit = [&](size_t i) -> uint32_t {
    auto a = static_cast<unsigned char>(s[i]);
    auto b = static_cast<unsigned char>(s[i + 1]);
    return little_endian ? (b << 8) | a : (a << 8) | b;
  };
  size_t i = 0;
  while (i + 1 < s.size()) {
    uint32_t u = unit(i);
    if (u >= 0xD800 && u <= 0xDBFF) {
      if (i + 3 < s.size()) {
        uint32_t lo = unit(i + 2);
        if (lo >= 0xDC00 && lo <= 0xDFFF) {
          sink(0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00), 4);
          i += 4;
          continue;
        }
      }
      bad(2);
      i += 2;
    } else if (u >= 0xDC00 && u <= 0xDFFF) {
      bad(2);
      i += 2;
    } else {
      sink(u, 2);
      i += 2;
    }
  }
  if (i < s.size()) bad(s.size() - i);  // trailing odd byte
}

template <class Sink, class Bad>
void walk_shift_jis(std::string_view s, Sink&& sink, Bad&& bad) {
  size_t i = 0;
  while (i < s.size()) {
    auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
      sink(b0, 1);
      ++i;
    } else if (b0 >= 0xA1 && b0 <= 0xDF) {
      sink(0xFF61 + (b0 - 0xA1), 1);  // halfwidth katakana
      ++i;
    } else if ((b0 >= 0x81 && b0 <= 0x9F) || (b0 >= 0xE0 && b0 <= 0xFC)) {
      if (i + 1 >= s.size()) {
        bad(1);
        ++i;
        continue;
      }
      auto b1 = static_cast<unsigned char>(s[i + 1]);
      bool trail_ok = (b1 >= 0x40 && b1 <= 0x7E) || (b1 >= 0x80 && b1 <= 0xFC);
      int cell = -1;
      if (trail_ok) {
        int base = (b0 <= 0x9F) ? b0 - 0x81 : b0 - 0xC1;
        int ku, ten;
        if (b1 >= 0x9F) {
          ku = base * 2 + 2;
          ten = b1 - 0x9E;
        } else {
          ku = base * 2 + 1;
          ten = (b1 <= 0x7E) ? b1 - 0x3F : b1 - 0x40;
        }
        cell = (ku - 1) * 94 + (ten - 1);
      }
      char32_t cp = trail_ok ? jis_cell_to_unicode(cell) : 0;
      if (cp) {
        sink(cp, 2);
        i += 2;
      } else {
        bad(1);
        ++i;
      }
    } else {
      bad(1);
      ++i;
    }
  }
}

template <class Sink, class Bad>
void walk_euc_jp(std::string_view s, Sink&& sink, Bad&& bad) {
  size_t i = 0;
  while (i < s.size()) {
    auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
      sink(b0, 1);
      ++i;
    } else if (b0 == 0x8E && i + 1 < s.size()) {
      auto b1 = static_cast<unsigned char>(s[i + 1]);
      if (b1 >= 0xA1 && b1 <= 0xDF) {
        sink(0xFF61 + (b1 - 0xA1), 2);
        i += 2;
      } else {
        bad(1);
        ++i;
      }
    } else if (b0 >= 0xA1 && b0 <= 0xFE && i + 1 < s.size()) {
      auto b1 = static_cast<unsigned char>(s[i + 1]);
      char32_t cp = 0;
      if (b1 >= 0xA1 && b1 <= 0xFE)
        cp = jis_cell_to_unicode((b0 - 0xA1) * 94 + (b1 - 0xA1));
      if (cp) {
        sink(cp, 2);
        i += 2;
      } else {
        bad(1);
        ++i;
      }
    } else {
      // 0x8F (JIS X 0212) and friends are outside the supported set.
      bad(1);
      ++i;
    }
  }
}

template <class Sink, class Bad>
void walk_cp1252(std::string_view s, Sink&& sink, Bad&& bad) {
  for (size_t i = 0; i < s.size(); ++i) {
    auto b = static_cast<unsigned char>(s[i]);
    if (b < 0x80) {
      sink(b, 1);
    } else if (b < 0xA0) {
      char32_t cp = k_cp1252_high[b - 0x80];
      if (cp)
        sink(cp, 1);
      else
        bad(1);
    } else {
      sink(b, 1);
    }
  }
}

template <class Sink, class Bad>
void walk(encoding e, std::string_view s, Sink&& sink, Bad&& bad) {
  switch (e) {
    case encoding::utf8: walk_utf8(s, sink, bad); break;
    case encoding::utf16le: walk_utf16(s, true, sink, bad); break;
    case encoding::utf16be: walk_utf16(s, false, sink, bad); break;
    case encoding::shift_jis: walk_shift_jis(s, sink, bad); break;
    case encoding::euc_jp: walk_euc_jp(s, sink, bad); break;
    case encoding::cp1252: walk_cp1252(s, sink, bad); break;
  }
}

// Text-likeness weight of a scalar. Zero means "no text file contains this";
// such scalars count against an encoding as if their bytes failed to decode.
inline double cp_weight(char32_t cp) {
  if (cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f') return 1.0;
  if (cp < 0x20 || (cp >= 0x7F && cp <= 0x9F)) return 0.0;            // control chars
  if (cp >= 0xE000 && cp <= 0xF8FF) return 0.0;                       // private use
  if ((cp & 0xFFFE) == 0xFFFE || (cp >= 0xFDD0 && cp <= 0xFDEF)) return 0.0;
  if (cp <= 0x7E) return 1.0;                                         // printable ASCII
  if (is_kana(cp)) return 1.0;
  if (is_latin_letter(cp)) return 1.0;
  if (cp == 0x3000 || is_wide_punct(cp) || (cp >= 0xFF10 && cp <= 0xFF5A)) return 1.0;
  if (is_kanji(cp) && !(cp >= 0x3400 && cp <= 0x4DBF)) return 0.7;    // common ideographs
  if ((cp >= 0x370 && cp <= 0x4FF) || (cp >= 0xAC00 && cp <= 0xD7A3)) return 0.7;
  if (cp >= 0xA0 && cp <= 0xBF) return 0.7;                           // Latin-1 symbols
  if (is_halfwidth_katakana(cp)) return 0.5;
  return 0.3;
}

struct scan_result {
  size_t bytes = 0;
  size_t bytes_rejected = 0;  // undecodable or mapping to weight-0 scalars
  size_t cps = 0;
  double weight_sum = 0.0;
  size_t japanese = 0;
  size_t kana = 0;
  size_t halfwidth_kana = 0;
  size_t non_ascii = 0;
  size_t latin_letter_non_ascii = 0;
  bool multibyte = false;

  double decodable_fraction() const {
    return bytes == 0 ? 0.0 : 1.0 - static_cast<double>(bytes_rejected) / bytes;
  }
  double quality() const { return cps == 0 ? 0.0 : weight_sum / cps; }
};

inline scan_result scan(encoding e, std::string_view s) {
  scan_result r;
  r.bytes = s.size();
  walk(
      e, s,
      [&](char32_t cp, size_t n) {
        double w = cp_weight(cp);
        if (w == 0.0) {
          r.bytes_rejected += n;
          return;
        }
        ++r.cps;
        r.weight_sum += w;
        if (n > 1) r.multibyte = true;
        if (is_kana(cp)) ++r.kana;
        if (is_kana(cp) || is_kanji(cp) || cp == 0x3000 || is_wide_punct(cp) ||
            (cp >= 0xFF01 && cp <= 0xFF5E))
          ++r.japanese;
        if (is_halfwidth_katakana(cp)) {
          ++r.japanese;
          ++r.halfwidth_kana;
        }
        if (cp > 0x7F) {
          ++r.non_ascii;
          if (is_latin_letter(cp)) ++r.latin_letter_non_ascii;
        }
      },
      [&](size_t n) { r.bytes_rejected += n; });
  return r;
}

// How strongly the byte stream looks like UTF-16 of the given endianness:
// the high-order byte of each unit concentrates on few values in real text.
inline double utf16_parity_concentration(std::string_view s, bool little_endian) {
  if (s.size() < 4) return 0.0;
  std::array<size_t, 256> freq{};
  size_t n = 0;
  size_t start = little_endian ? 1 : 0;
  for (size_t i = start; i < s.size(); i += 2) {
    ++freq[static_cast<unsigned char>(s[i])];
    ++n;
  }
  return n == 0 ? 0.0 : static_cast<double>(*std::max_element(freq.begin(), freq.end())) / n;
}

}  // namespace detail

// Decodes bytes to UTF-8, skipping bytes the codec rejects.
inline std::string decode_to_utf8(std::string_view bytes, encoding e) {
  std::string_view body = bytes;
  if (e == encoding::utf8 && body.size() >= 3 && body.substr(0, 3) == "\xEF\xBB\xBF")
    body.remove_prefix(3);
  if ((e == encoding::utf16le || e == encoding::utf16be) && body.size() >= 2) {
    auto b0 = static_cast<unsigned char>(body[0]);
    auto b1 = static_cast<unsigned char>(body[1]);
    if ((b0 == 0xFF && b1 == 0xFE) || (b0 == 0xFE && b1 == 0xFF)) body.remove_prefix(2);
  }
  std::string out;
  out.reserve(body.size());
  detail::walk(
      e, body, [&](char32_t cp, size_t) { utf8_append(out, cp); }, [](size_t) {});
  return out;
}

// Encodes UTF-8 text into the target encoding. Returns nullopt when some
// scalar has no representation there. Used by tests and fixture generators.
inline std::optional<std::string> encode_from_utf8(std::string_view utf8, encoding e) {
  std::u32string cps = utf8_decode(utf8);
  std::string out;
  for (char32_t cp : cps) {
    switch (e) {
      case encoding::utf8: utf8_append(out, cp); break;
      case encoding::utf16le:
      case encoding::utf16be: {
        auto put = [&](uint32_t unit) {
          if (e == encoding::utf16le) {
            out.push_back(static_cast<char>(unit & 0xFF));
            out.push_back(static_cast<char>(unit >> 8));
          } else {
            out.push_back(static_cast<char>(unit >> 8));
            out.push_back(static_cast<char>(unit & 0xFF));
          }
        };
        if (cp >= 0x10000) {
          put(0xD800 + ((cp - 0x10000) >> 10));
          put(0xDC00 + ((cp - 0x10000) & 0x3FF));
        } else {
          put(cp);
        }
        break;
      }
      case encoding::shift_jis: {
        if (cp < 0x80) {
          out.push_back(static_cast<char>(cp));
        } else if (is_halfwidth_katakana(cp)) {
          out.push_back(static_cast<char>(0xA1 + (cp - 0xFF61)));
        } else {
          int cell = detail::unicode_to_jis_cell(cp);
          if (cell < 0) return std::nullopt;
          int ku = cell / 94 + 1, ten = cell % 94 + 1;
          int lead = (ku - 1) / 2 + (ku <= 62 ? 0x81 : 0xC1);
          int trail = (ku % 2 == 1) ? (ten <= 63 ? ten + 0x3F : ten + 0x40) : ten + 0x9E;
          out.push_back(static_cast<char>(lead));
          out.push_back(static_cast<char>(trail));
        }
        break;
      }
      case encoding::euc_jp: {
        if (cp < 0x80) {
          out.push_back(static_cast<char>(cp));
        } else if (is_halfwidth_katakana(cp)) {
          out.push_back(static_cast<char>(0x8E));
          out.push_back(static_cast<char>(0xA1 + (cp - 0xFF61)));
        } else {
          int cell = detail::unicode_to_jis_cell(cp);
          if (cell < 0) return std::nullopt;
          out.push_back(static_cast<char>(0xA1 + cell / 94));
          out.push_back(static_cast<char>(0xA1 + cell % 94));
        }
        break;
      }
      case encoding::cp1252: {
        if (cp < 0x80) {
          out.push_back(static_cast<char>(cp));
        } else if (cp >= 0xA0 && cp <= 0xFF) {
          out.push_back(static_cast<char>(cp));
        } else {
          auto it = std::find(detail::k_cp1252_high.begin(), detail::k_cp1252_high.end(), cp);
          if (it == detail::k_cp1252_high.end()) return std::nullopt;
          out.push_back(static_cast<char>(0x80 + (it - detail::k_cp1252_high.begin())));
        }
        break;
      }
    }
  }
  return out;
}

// Picks the most plausible encoding for a byte stream. A BOM is decisive.
// Otherwise every codec in the supported set decodes the stream; candidates
// that reject more than 1% of the bytes are out, and the rest are ranked by
// how text-like and script-coherent their output is.
inline encoding_guess detect_encoding(std::string_view bytes) {
  if (bytes.empty()) raise(errc::undecodable_input, "empty input");
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF")
    return {encoding::utf8, 1.0};
  if (bytes.size() >= 2) {
    auto b0 = static_cast<unsigned char>(bytes[0]);
    auto b1 = static_cast<unsigned char>(bytes[1]);
    if (b0 == 0xFF && b1 == 0xFE) return {encoding::utf16le, 1.0};
    if (b0 == 0xFE && b1 == 0xFF) return {encoding::utf16be, 1.0};
  }

  constexpr encoding order[] = {encoding::utf8,   encoding::shift_jis, encoding::euc_jp,
                                encoding::cp1252, encoding::utf16le,   encoding::utf16be};
  bool any_decodable = false;
  double best_score = -1.0;
  encoding best = encoding::utf8;
  for (encoding e : order) {
    detail::scan_result r = detail::scan(e, bytes);
    if (r.decodable_fraction() < 0.99) continue;
    any_decodable = true;
    double signal = 0.0;
    switch (e) {
      case encoding::utf8:
        signal = r.multibyte ? 1.0 : 0.8;
        break;
      case encoding::shift_jis:
      case encoding::euc_jp:
        if (r.cps > 0)
          signal = static_cast<double>(r.japanese - r.halfwidth_kana / 2) / r.cps;
        break;
      case encoding::cp1252:
        if (r.non_ascii > 0)
          signal = static_cast<double>(r.latin_letter_non_ascii) / r.non_ascii;
        break;
      case encoding::utf16le:
      case encoding::utf16be:
        signal =
            detail::utf16_parity_concentration(bytes, e == encoding::utf16le) >= 0.5 ? 1.0
                                                                                     : 0.0;
        break;
    }
    double score = 0.6 * r.decodable_fraction() + 0.2 * r.quality() + 0.2 * signal;
    // Kana-coherent UTF-16 without a BOM: the high bytes of one parity all sit
    // in the kana block while the low bytes masquerade as printable ASCII to
    // the single-byte codecs. Strong structural evidence outranks them.
    if ((e == encoding::utf16le || e == encoding::utf16be) && r.bytes_rejected == 0 &&
        r.cps > 0 && r.kana * 10 >= r.cps * 3 &&
        detail::utf16_parity_concentration(bytes, e == encoding::utf16le) >= 0.7)
      score += 0.1;
    if (score > best_score) {
      best_score = score;
      best = e;
    }
  }
  if (!any_decodable)
    raise(errc::undecodable_input, "no supported encoding decodes at least 99% of the input");
  return {best, std::clamp(best_score, 0.0, 1.0)};
}

}  // namespace subalign
