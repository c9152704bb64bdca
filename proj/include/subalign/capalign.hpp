#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "subalign/docalign.hpp"
#include "subalign/document.hpp"
#include "subalign/errors.hpp"
#include "subalign/porter.hpp"
#include "subalign/unicode.hpp"
#include "subalign/util.hpp"

namespace subalign {

// --- lexicon ---------------------------------------------------------------

// Japanese surface form -> English glosses. File lines look like
// "japanese<TAB>english1/english2/...", slash-separated glosses.
struct lexicon {
  std::unordered_map<std::string, std::vector<std::string>> entries;

  static lexicon load(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(errc::resource_error, "cannot open lexicon " + path);
    lexicon lex;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      std::string t(trim(line));
      if (t.empty() || t[0] == '#') continue;
      size_t tab = t.find('\t');
      if (tab == std::string::npos)
        raise(errc::format_error, path + ":" + std::to_string(lineno) + ": missing tab");
      std::string ja(trim(t.substr(0, tab)));
      std::vector<std::string> glosses;
      for (auto& g : split(t.substr(tab + 1), '/')) {
        std::string gt(trim(g));
        if (!gt.empty()) glosses.push_back(ascii_lower(gt));
      }
      if (ja.empty() || glosses.empty())
        raise(errc::format_error, path + ":" + std::to_string(lineno) + ": empty entry");
      auto& slot = lex.entries[ja];
      slot.insert(slot.end(), glosses.begin(), glosses.end());
    }
    return lex;
  }

  const std::vector<std::string>* find(std::string_view ja) const {
    auto it = entries.find(std::string(ja));
    return it == entries.end() ? nullptr : &it->second;
  }
};

// Glosses of every stem that has an entry; stems without one contribute
// nothing. Multi-word glosses fan out into their words.
inline std::vector<std::string> translate_stems(const std::vector<std::string>& stems,
                                                const lexicon& lex) {
  std::vector<std::string> out;
  for (const std::string& s : stems) {
    const auto* glosses = lex.find(s);
    if (!glosses) continue;
    for (const std::string& g : *glosses)
      for (auto& w : split_ws(g)) out.push_back(std::move(w));
  }
  return out;
}

// --- embeddings ------------------------------------------------------------

struct embedding_table {
  size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;

  static embedding_table load(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(errc::resource_error, "cannot open embeddings " + path);
    embedding_table table;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      auto fields = split_ws(line);
      if (fields.empty()) continue;
      std::string where = path + ":" + std::to_string(lineno);
      if (fields.size() < 2) raise(errc::format_error, where + ": no vector components");
      std::vector<double> vec;
      vec.reserve(fields.size() - 1);
      for (size_t i = 1; i < fields.size(); ++i) {
        try {
          vec.push_back(std::stod(fields[i]));
        } catch (const std::exception&) {
          raise(errc::format_error, where + ": bad component '" + fields[i] + "'");
        }
        if (!std::isfinite(vec.back()))
          raise(errc::format_error, where + ": non-finite component");
      }
      if (table.dim == 0)
        table.dim = vec.size();
      else if (vec.size() != table.dim)
        raise(errc::format_error, where + ": dimension mismatch");
      table.vectors[fields[0]] = std::move(vec);
    }
    return table;
  }
};

// Mean of the vectors of the words present in the table; nothing when no
// word is covered. Repeated words count with multiplicity.
inline std::optional<std::vector<double>> caption_embedding(const std::vector<std::string>& words,
                                                            const embedding_table& table) {
  std::vector<double> sum(table.dim, 0.0);
  size_t hits = 0;
  for (const std::string& w : words) {
    auto it = table.vectors.find(w);
    if (it == table.vectors.end()) continue;
    for (size_t i = 0; i < table.dim; ++i) sum[i] += it->second[i];
    ++hits;
  }
  if (hits == 0) return std::nullopt;
  for (double& v : sum) v /= static_cast<double>(hits);
  return sum;
}

inline std::optional<double> cosine_similarity(const std::vector<double>& a,
                                               const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  // Rounding can push the quotient a hair past 1; the contract is [-1, 1].
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

// --- content word extraction -------------------------------------------------

// Turns a normalized caption into content-word stems. Built-in rule-based
// implementations below; external analyzers can slot in through the same
// interface.
class content_word_extractor {
 public:
  virtual ~content_word_extractor() = default;
  virtual language lang() const = 0;
  virtual std::vector<std::string> extract(std::string_view text) const = 0;
};

inline const std::vector<std::string>& default_english_stopwords() {
  static const std::vector<std::string> words = {
      "a",     "about", "after", "again",  "all",   "am",    "an",    "and",   "any",
      "are",   "as",    "at",    "be",     "been",  "being", "but",   "by",    "can",
      "could", "d",     "did",   "do",     "does",  "doing", "don",   "down",  "during",
      "each",  "few",   "for",   "from",   "had",   "has",   "have",  "having","he",
      "her",   "here",  "hers",  "him",    "his",   "how",   "i",     "if",    "in",
      "into",  "is",    "it",    "its",    "just",  "ll",    "m",     "me",    "more",
      "most",  "my",    "no",    "nor",    "not",   "now",   "of",    "off",   "on",
      "once",  "only",  "or",    "other",  "our",   "ours",  "out",   "over",  "own",
      "re",    "s",     "same",  "she",    "so",    "some",  "such",  "t",     "than",
      "that",  "the",   "their", "theirs", "them",  "then",  "there", "these", "they",
      "this",  "those", "through", "to",   "too",   "under", "until", "up",    "ve",
      "very",  "was",   "we",    "were",   "what",  "when",  "where", "which", "while",
      "who",   "whom",  "why",   "will",   "with",  "would", "you",   "your",  "yours"};
  return words;
}

class english_content_extractor : public content_word_extractor {
 public:
  english_content_extractor() : english_content_extractor(default_english_stopwords()) {}

  explicit english_content_extractor(const std::vector<std::string>& stopwords)
      : stopwords_(stopwords.begin(), stopwords.end()) {}

  static english_content_extractor from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(errc::resource_error, "cannot open stopword list " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(f, line)) {
      auto t = trim(line);
      if (!t.empty()) words.push_back(ascii_lower(t));
    }
    return english_content_extractor(words);
  }

  language lang() const override { return language::en; }

  std::vector<std::string> extract(std::string_view text) const override {
    std::vector<std::string> out;
    std::u32string cps = utf8_decode(text);
    size_t i = 0;
    auto is_word_cp = [](char32_t c) { return is_latin_letter(c) || is_ascii_digit(c); };
    while (i < cps.size()) {
      if (!is_word_cp(cps[i])) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j < cps.size() && is_word_cp(cps[j])) ++j;
      std::string token;
      for (size_t k = i; k < j; ++k) utf8_append(token, to_lower(cps[k]));
      i = j;
      if (stopwords_.count(token)) continue;
      out.push_back(is_ascii_alpha_token(token) ? porter_stem(token) : token);
    }
    return out;
  }

 private:
  std::unordered_set<std::string> stopwords_;
};

inline const std::vector<std::string>& default_japanese_particles() {
  static const std::vector<std::string> words = {
      "は",   "が",   "を",   "に",   "へ",   "で",   "と",   "や",   "も",   "の",
      "か",   "ね",   "よ",   "ぞ",   "ぜ",   "わ",   "さ",   "から", "まで", "より",
      "だ",   "です", "ます", "ました", "でした", "する", "した", "して", "いる", "ある",
      "ない", "なかった", "れる", "られる", "など", "って", "ちゃ", "じゃ", "た",   "て",
      "な",   "けど", "でも", "だけ", "ここ", "それ", "これ", "あれ", "この", "その"};
  return words;
}

// Longest-match segmentation against the lexicon key set, with a same-script
// run splitter as the fallback; particles and auxiliaries are dropped.
class japanese_content_extractor : public content_word_extractor {
 public:
  japanese_content_extractor(const lexicon& lex,
                             const std::vector<std::string>& particles =
                                 default_japanese_particles())
      : particles_(particles.begin(), particles.end()) {
    for (const auto& [key, _] : lex.entries) {
      std::u32string k = utf8_decode(key);
      keys_.insert(k);
      max_key_len_ = std::max(max_key_len_, k.size());
    }
  }

  static std::vector<std::string> load_particles(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(errc::resource_error, "cannot open particle list " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(f, line)) {
      auto t = trim(line);
      if (!t.empty()) words.emplace_back(t);
    }
    return words;
  }

  language lang() const override { return language::ja; }

  std::vector<std::string> extract(std::string_view text) const override {
    std::vector<std::string> out;
    std::u32string cps = utf8_decode(text);
    size_t i = 0;
    while (i < cps.size()) {
      if (is_space(cps[i]) || is_punct(cps[i])) {
        ++i;
        continue;
      }
      // Longest lexicon key starting here wins.
      size_t limit = std::min(max_key_len_, cps.size() - i);
      size_t matched = 0;
      for (size_t len = limit; len >= 1; --len) {
        if (keys_.count(cps.substr(i, len))) {
          matched = len;
          break;
        }
      }
      std::u32string token;
      if (matched > 0) {
        token = cps.substr(i, matched);
        i += matched;
      } else {
        size_t j = i + 1;
        int cls = script_class(cps[i]);
        while (j < cps.size() && script_class(cps[j]) == cls && cls != 0) ++j;
        token = cps.substr(i, j - i);
        i = j;
      }
      std::string utf8 = utf8_encode(token);
      if (particles_.count(utf8)) continue;
      out.push_back(std::move(utf8));
    }
    return out;
  }

 private:
  static int script_class(char32_t c) {
    if (is_hiragana(c)) return 1;
    if (is_katakana(c) || c == 0x30FC) return 2;  // ー extends katakana runs
    if (is_kanji(c)) return 3;
    if (is_latin_letter(c)) return 4;
    if (is_ascii_digit(c) || (c >= 0xFF10 && c <= 0xFF19)) return 5;
    return 0;
  }

  std::unordered_set<std::u32string> keys_;
  std::unordered_set<std::string> particles_;
  size_t max_key_len_ = 0;
};

// --- caption scoring and alignment ------------------------------------------

struct capalign_resources {
  const content_word_extractor& en_extractor;
  const content_word_extractor& ja_extractor;
  const lexicon& lex;
  const embedding_table& table;
};

// Content score of a candidate pairing: extract and stem content words on
// both sides, translate the Japanese side into English through the lexicon,
// embed both bags of words, and take the cosine. Nothing comes back when
// either side has no embeddable words.
inline std::optional<double> caption_similarity(std::string_view ja_text,
                                                std::string_view en_text,
                                                const capalign_resources& res) {
  auto ja_words = translate_stems(res.ja_extractor.extract(ja_text), res.lex);
  auto ja_vec = caption_embedding(ja_words, res.table);
  if (!ja_vec) return std::nullopt;
  auto en_vec = caption_embedding(res.en_extractor.extract(en_text), res.table);
  if (!en_vec) return std::nullopt;
  return cosine_similarity(*ja_vec, *en_vec);
}

struct caption_match {
  std::string en_doc_id;
  std::string ja_doc_id;
  int ja_index = 0;
  int en_index = 0;
  double similarity = 0.0;
  std::string ja_text;
  std::string en_text;
};

// For every Japanese caption, scores the English captions whose shifted
// start times fall inside the window and keeps the single best-scoring
// match. Ties break toward the smaller time difference, then the lower
// English index. One Japanese caption yields at most one match; English
// captions may repeat.
inline std::vector<caption_match> align_captions(const document_pair& pair,
                                                 const subtitle_document& en_doc,
                                                 const subtitle_document& ja_doc,
                                                 double window_s,
                                                 const capalign_resources& res) {
  std::vector<caption_match> out;
  const std::int64_t window_ms = static_cast<std::int64_t>(window_s * 1000.0);
  const std::int64_t shift_ms = static_cast<std::int64_t>(pair.best_shift_s) * 1000;

  // Embeddings are per-caption; compute each side once.
  std::vector<std::optional<std::vector<double>>> en_vecs(en_doc.captions.size());
  for (size_t i = 0; i < en_doc.captions.size(); ++i)
    en_vecs[i] = caption_embedding(res.en_extractor.extract(en_doc.captions[i].text), res.table);

  for (const caption& ja : ja_doc.captions) {
    auto ja_vec = caption_embedding(
        translate_stems(res.ja_extractor.extract(ja.text), res.lex), res.table);
    if (!ja_vec) continue;
    const std::int64_t ja_start = ja.start_ms + shift_ms;

    const caption* best_en = nullptr;
    double best_sim = 0.0;
    std::int64_t best_dt = 0;
    for (size_t i = 0; i < en_doc.captions.size(); ++i) {
      const caption& en = en_doc.captions[i];
      std::int64_t dt = std::llabs(en.start_ms - ja_start);
      if (dt > window_ms) continue;
      if (!en_vecs[i]) continue;
      auto sim = cosine_similarity(*ja_vec, *en_vecs[i]);
      if (!sim) continue;
      bool better = best_en == nullptr || *sim > best_sim ||
                    (*sim == best_sim &&
                     (dt < best_dt || (dt == best_dt && en.index < best_en->index)));
      if (better) {
        best_en = &en;
        best_sim = *sim;
        best_dt = dt;
      }
    }
    if (best_en)
      out.push_back({pair.en_doc_id, pair.ja_doc_id, ja.index, best_en->index, best_sim,
                     ja.text, best_en->text});
  }
  return out;
}

}  // namespace subalign
