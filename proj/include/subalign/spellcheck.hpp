#pragma once

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "subalign/document.hpp"
#include "subalign/errors.hpp"
#include "subalign/unicode.hpp"
#include "subalign/util.hpp"

namespace subalign {

// Context marker for the first token of a caption. It never occurs in the
// n-gram files, so its bigram probabilities sit at the Laplace floor.
inline constexpr std::string_view k_sentence_start = "<s>";

inline constexpr int k_max_edit_cost = 4;

struct word_set {
  std::vector<std::string> words;
  std::unordered_set<std::string> index;

  bool contains(std::string_view w) const { return index.count(std::string(w)) > 0; }

  static word_set from_words(std::vector<std::string> list) {
    word_set d;
    d.words = std::move(list);
    d.index.insert(d.words.begin(), d.words.end());
    return d;
  }

  static word_set load(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(errc::resource_error, "cannot open dictionary " + path);
    std::vector<std::string> list;
    std::string line;
    while (std::getline(f, line)) {
      auto t = trim(line);
      if (!t.empty()) list.push_back(ascii_lower(t));
    }
    return from_words(std::move(list));
  }
};

// Laplace-smoothed channel model P(observed | intended) learned from a
// misspelling corpus. A corpus line equal to the intended word itself counts
// as an observation of the correct form.
struct error_model {
  std::unordered_map<std::string, std::unordered_map<std::string, std::int64_t>> confusion;
  std::unordered_map<std::string, std::int64_t> intended_totals;
  double alpha = 1.0;
  std::int64_t vocab_size = 0;

  double log_p(std::string_view observed, std::string_view intended) const {
    std::int64_t count = 0;
    auto it = confusion.find(std::string(intended));
    if (it != confusion.end()) {
      auto jt = it->second.find(std::string(observed));
      if (jt != it->second.end()) count = jt->second;
    }
    std::int64_t total = 0;
    auto tt = intended_totals.find(std::string(intended));
    if (tt != intended_totals.end()) total = tt->second;
    return std::log(count + alpha) - std::log(total + alpha * vocab_size);
  }
};

inline error_model train_error_model(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& corpus) {
  if (corpus.empty()) raise(errc::format_error, "empty misspelling corpus");
  error_model em;
  std::unordered_set<std::string> vocab;
  for (const auto& [intended, observations] : corpus) {
    if (intended.empty()) raise(errc::format_error, "empty intended word in corpus");
    vocab.insert(intended);
    for (const std::string& obs : observations) {
      if (obs.empty()) raise(errc::format_error, "empty observation for " + intended);
      ++em.confusion[intended][obs];
      ++em.intended_totals[intended];
      vocab.insert(obs);
    }
  }
  em.vocab_size = static_cast<std::int64_t>(vocab.size());
  return em;
}

// "$word" opens a block; the following lines are observed spellings of that
// word, the word itself counting as a correct sighting.
inline std::vector<std::pair<std::string, std::vector<std::string>>> load_misspelling_corpus(
    const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(errc::resource_error, "cannot open misspelling corpus " + path);
  std::vector<std::pair<std::string, std::vector<std::string>>> corpus;
  std::string line;
  size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::string t(trim(line));
    if (t.empty()) continue;
    if (t[0] == '$') {
      if (t.size() == 1)
        raise(errc::format_error, path + ":" + std::to_string(lineno) + ": bare '$'");
      corpus.emplace_back(ascii_lower(t.substr(1)), std::vector<std::string>{});
    } else {
      if (corpus.empty())
        raise(errc::format_error,
              path + ":" + std::to_string(lineno) + ": observation before any $word");
      corpus.back().second.push_back(ascii_lower(t));
    }
  }
  if (corpus.empty()) raise(errc::format_error, path + ": empty misspelling corpus");
  return corpus;
}

// Unigram/bigram model with add-alpha smoothing:
//   P(w)            = (c(w) + a) / (N + a*V)
//   P(w | w_prev)   = (c(w_prev, w) + a) / (c(w_prev) + a*V)
struct language_model {
  std::unordered_map<std::string, std::int64_t> unigram_counts;
  std::unordered_map<std::string, std::unordered_map<std::string, std::int64_t>> bigram_counts;
  std::int64_t total_tokens = 0;
  double alpha = 1.0;
  std::int64_t vocab_size = 0;

  double log_unigram(std::string_view w) const {
    std::int64_t c = 0;
    auto it = unigram_counts.find(std::string(w));
    if (it != unigram_counts.end()) c = it->second;
    return std::log(c + alpha) - std::log(total_tokens + alpha * vocab_size);
  }

  double log_bigram(std::string_view w, std::string_view prev) const {
    std::int64_t c = 0;
    auto it = bigram_counts.find(std::string(prev));
    if (it != bigram_counts.end()) {
      auto jt = it->second.find(std::string(w));
      if (jt != it->second.end()) c = jt->second;
    }
    std::int64_t prev_count = 0;
    auto ut = unigram_counts.find(std::string(prev));
    if (ut != unigram_counts.end()) prev_count = ut->second;
    return std::log(c + alpha) - std::log(prev_count + alpha * vocab_size);
  }
};

namespace detail {

inline std::int64_t parse_count(std::string_view s, const std::string& where) {
  std::string buf(trim(s));
  if (buf.empty()) raise(errc::format_error, where + ": missing count");
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(buf.c_str(), &end, 10);
  if (errno == ERANGE)
    raise(errc::count_overflow, where + ": count exceeds representable range");
  if (end != buf.c_str() + buf.size()) raise(errc::format_error, where + ": bad count");
  if (v < 0) raise(errc::format_error, where + ": negative count");
  return v;
}

inline void add_checked(std::int64_t& acc, std::int64_t v, const std::string& where) {
  if (__builtin_add_overflow(acc, v, &acc))
    raise(errc::count_overflow, where + ": total exceeds representable range");
}

}  // namespace detail

// Unigram file: "word<TAB>count". Bigram file: "word1 word2<TAB>count".
inline language_model train_language_model(const std::string& unigram_path,
                                           const std::string& bigram_path) {
  language_model lm;
  {
    std::ifstream f(unigram_path);
    if (!f) raise(errc::resource_error, "cannot open unigram file " + unigram_path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      std::string where = unigram_path + ":" + std::to_string(lineno);
      size_t tab = line.find('\t');
      if (tab == std::string::npos) raise(errc::format_error, where + ": missing tab");
      std::string word(trim(line.substr(0, tab)));
      if (word.empty()) raise(errc::format_error, where + ": empty word");
      std::int64_t c = detail::parse_count(line.substr(tab + 1), where);
      detail::add_checked(lm.unigram_counts[word], c, where);
      detail::add_checked(lm.total_tokens, c, where);
    }
  }
  {
    std::ifstream f(bigram_path);
    if (!f) raise(errc::resource_error, "cannot open bigram file " + bigram_path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      std::string where = bigram_path + ":" + std::to_string(lineno);
      size_t tab = line.find('\t');
      if (tab == std::string::npos) raise(errc::format_error, where + ": missing tab");
      auto words = split_ws(line.substr(0, tab));
      if (words.size() != 2) raise(errc::format_error, where + ": expected two words");
      std::int64_t c = detail::parse_count(line.substr(tab + 1), where);
      detail::add_checked(lm.bigram_counts[words[0]][words[1]], c, where);
    }
  }
  lm.vocab_size = static_cast<std::int64_t>(lm.unigram_counts.size());
  return lm;
}

struct candidate {
  std::string word;
  int edit_cost = 0;
  double score = 0.0;  // log-probability, filled in by correct_token
};

namespace detail {

// Unrestricted Damerau-Levenshtein distance (insert, delete, substitute,
// adjacent transpose at unit cost). Unlike the common "optimal string
// alignment" variant this equals the true minimum number of edits applied
// in sequence, which is what the candidate search is defined over.
inline int damerau_levenshtein(std::string_view a, std::string_view b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int inf = n + m;
  std::vector<int> d((n + 2) * (m + 2), inf);
  auto at = [&](int i, int j) -> int& { return d[i * (m + 2) + j]; };
  for (int i = 0; i <= n; ++i) at(i + 1, 1) = i;
  for (int j = 0; j <= m; ++j) at(1, j + 1) = j;

  std::array<int, 256> last_row_of{};
  for (int i = 1; i <= n; ++i) {
    int last_col = 0;
    const auto ai = static_cast<unsigned char>(a[i - 1]);
    for (int j = 1; j <= m; ++j) {
      const auto bj = static_cast<unsigned char>(b[j - 1]);
      const int i1 = last_row_of[bj];
      const int j1 = last_col;
      int cost = 1;
      if (ai == bj) {
        cost = 0;
        last_col = j;
      }
      at(i + 1, j + 1) = std::min({at(i, j) + cost, at(i + 1, j) + 1, at(i, j + 1) + 1,
                                   at(i1, j1) + (i - i1 - 1) + 1 + (j - j1 - 1)});
    }
    last_row_of[ai] = i;
  }
  return at(n + 1, m + 1);
}

}  // namespace detail

// Every dictionary word reachable from token by at most max_cost unit edits,
// tagged with its minimal edit cost. Sorted by (cost, word) so downstream
// tie handling is deterministic.
inline std::vector<candidate> generate_candidates(std::string_view token, const word_set& dict,
                                                  int max_cost = k_max_edit_cost) {
  std::vector<candidate> out;
  for (const std::string& w : dict.words) {
    int len_gap = static_cast<int>(w.size()) - static_cast<int>(token.size());
    if (len_gap > max_cost || -len_gap > max_cost) continue;
    int dist = detail::damerau_levenshtein(token, w);
    if (dist <= max_cost) out.push_back({w, dist, 0.0});
  }
  std::sort(out.begin(), out.end(), [](const candidate& x, const candidate& y) {
    return x.edit_cost != y.edit_cost ? x.edit_cost < y.edit_cost : x.word < y.word;
  });
  return out;
}

// Noisy-channel correction of one token given its left context:
// argmax over candidates of P(token | cand) * P(cand) * P(cand | prev),
// scored in log space. In-dictionary tokens pass through untouched.
inline std::string correct_token(std::string_view token, std::string_view prev_token,
                                 const error_model& em, const language_model& lm,
                                 const word_set& dict) {
  if (dict.contains(token)) return std::string(token);
  std::vector<candidate> cands = generate_candidates(token, dict);
  if (cands.empty()) return std::string(token);
  const candidate* best = nullptr;
  double best_score = -std::numeric_limits<double>::infinity();
  for (candidate& c : cands) {
    c.score = em.log_p(token, c.word) + lm.log_unigram(c.word) + lm.log_bigram(c.word, prev_token);
    // Ties fall to the earlier entry; the list is (cost, word)-sorted.
    if (best == nullptr || c.score > best_score) {
      best = &c;
      best_score = c.score;
    }
  }
  return best->word;
}

struct correction_result {
  subtitle_document doc;
  std::int64_t corrections = 0;
};

// Corrects an English document caption by caption. Tokens are whitespace
// separated; only purely alphabetic out-of-dictionary tokens are touched.
// Each output token becomes the bigram context for the next one.
inline correction_result correct_document(const subtitle_document& doc, const error_model& em,
                                          const language_model& lm, const word_set& dict) {
  correction_result result;
  result.doc = doc;
  std::unordered_map<std::string, std::string> memo;  // (prev \t token) -> corrected
  for (caption& c : result.doc.captions) {
    auto tokens = split_ws(c.text);
    std::string prev(k_sentence_start);
    for (std::string& tok : tokens) {
      if (is_ascii_alpha_token(tok) && !dict.contains(tok)) {
        std::string key = prev + '\t' + tok;
        auto it = memo.find(key);
        std::string fixed =
            it != memo.end() ? it->second : correct_token(tok, prev, em, lm, dict);
        if (it == memo.end()) memo.emplace(std::move(key), fixed);
        if (fixed != tok) {
          ++result.corrections;
          tok = fixed;
        }
      }
      prev = tok;
    }
    c.text = join(tokens, " ");
  }
  return result;
}

}  // namespace subalign
