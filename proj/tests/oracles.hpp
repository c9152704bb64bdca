#pragma once

// Independent oracles the implementation is checked against. These stay
// deliberately naive: different algorithms, same contracts.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <subalign/capalign.hpp>
#include <subalign/docalign.hpp>
#include <subalign/unicode.hpp>

namespace oracle {

// --- gestalt similarity -------------------------------------------------------

// Brute-force longest common substring: tries every length from longest to
// shortest and every start pair, comparing characters directly. Tie-break
// matches the implementation: smallest start in a, then in b.
inline std::tuple<size_t, size_t, size_t> brute_longest_match(const std::u32string& a,
                                                              const std::u32string& b) {
  for (size_t len = std::min(a.size(), b.size()); len >= 1; --len) {
    for (size_t i = 0; i + len <= a.size(); ++i) {
      for (size_t j = 0; j + len <= b.size(); ++j) {
        if (a.compare(i, len, b, j, len) == 0) return {i, j, len};
      }
    }
  }
  return {0, 0, 0};
}

inline size_t brute_gestalt_matched(const std::u32string& a, const std::u32string& b) {
  auto [i, j, len] = brute_longest_match(a, b);
  if (len == 0) return 0;
  return len + brute_gestalt_matched(a.substr(0, i), b.substr(0, j)) +
         brute_gestalt_matched(a.substr(i + len), b.substr(j + len));
}

// Same canonical operand ordering as subalign::title_similarity.
inline double title_similarity(const std::string& a_utf8, const std::string& b_utf8) {
  std::u32string a = subalign::utf8_decode(a_utf8);
  std::u32string b = subalign::utf8_decode(b_utf8);
  if (a.empty() && b.empty()) return 1.0;
  if (b < a) std::swap(a, b);
  return 2.0 * static_cast<double>(brute_gestalt_matched(a, b)) /
         static_cast<double>(a.size() + b.size());
}

// --- edit sequences -----------------------------------------------------------

// All strings reachable from s by at most two unit edits (insert, delete,
// substitute, adjacent transpose) over the given alphabet, mapped to their
// minimal edit count. Pure sequence enumeration; no alignment DP.
inline std::unordered_map<std::string, int> edit_neighborhood2(const std::string& s,
                                                               const std::string& alphabet) {
  std::unordered_map<std::string, int> out;
  out.emplace(s, 0);
  std::vector<std::string> frontier{s};
  for (int cost = 1; cost <= 2; ++cost) {
    std::vector<std::string> next;
    for (const std::string& cur : frontier) {
      auto offer = [&](std::string&& cand) {
        if (out.emplace(cand, cost).second) next.push_back(std::move(cand));
      };
      for (size_t i = 0; i <= cur.size(); ++i)
        for (char c : alphabet) offer(cur.substr(0, i) + c + cur.substr(i));
      for (size_t i = 0; i < cur.size(); ++i) offer(cur.substr(0, i) + cur.substr(i + 1));
      for (size_t i = 0; i < cur.size(); ++i)
        for (char c : alphabet)
          if (c != cur[i]) {
            std::string cand = cur;
            cand[i] = c;
            offer(std::move(cand));
          }
      for (size_t i = 0; i + 1 < cur.size(); ++i)
        if (cur[i] != cur[i + 1]) {
          std::string cand = cur;
          std::swap(cand[i], cand[i + 1]);
          offer(std::move(cand));
        }
    }
    frontier = std::move(next);
  }
  return out;
}

// Minimal number of sequential edits from token to word, capped at 4; -1 when
// more than 4. Meets in the middle: any optimal sequence of length <= 4 has a
// midpoint within 2 edits of both ends, and optimal sequences only touch
// letters of the two endpoint strings.
inline int edit_sequence_distance4(const std::string& token, const std::string& word) {
  std::string alphabet;
  for (char c : token + word)
    if (alphabet.find(c) == std::string::npos) alphabet.push_back(c);
  std::sort(alphabet.begin(), alphabet.end());

  auto from_token = edit_neighborhood2(token, alphabet);
  auto from_word = edit_neighborhood2(word, alphabet);
  const auto& small = from_token.size() <= from_word.size() ? from_token : from_word;
  const auto& large = from_token.size() <= from_word.size() ? from_word : from_token;
  int best = -1;
  for (const auto& [mid, c1] : small) {
    auto it = large.find(mid);
    if (it == large.end()) continue;
    int total = c1 + it->second;
    if (best < 0 || total < best) best = total;
  }
  return (best >= 0 && best <= 4) ? best : -1;
}

// --- caption alignment ----------------------------------------------------------

struct match_choice {
  int ja_index;
  int en_index;
  double similarity;
};

// All-pairs argmax with the window constraint applied afterwards, scoring
// through caption_similarity directly (no precomputed embeddings).
inline std::vector<match_choice> align_captions(const subalign::document_pair& pair,
                                                const subalign::subtitle_document& en_doc,
                                                const subalign::subtitle_document& ja_doc,
                                                double window_s,
                                                const subalign::capalign_resources& res) {
  std::vector<match_choice> out;
  const std::int64_t window_ms = static_cast<std::int64_t>(window_s * 1000.0);
  const std::int64_t shift_ms = static_cast<std::int64_t>(pair.best_shift_s) * 1000;
  for (const auto& ja : ja_doc.captions) {
    std::optional<match_choice> best;
    std::int64_t best_dt = 0;
    for (const auto& en : en_doc.captions) {
      auto sim = subalign::caption_similarity(ja.text, en.text, res);
      if (!sim) continue;
      std::int64_t dt = std::llabs(en.start_ms - (ja.start_ms + shift_ms));
      if (dt > window_ms) continue;
      bool better = !best || *sim > best->similarity ||
                    (*sim == best->similarity &&
                     (dt < best_dt || (dt == best_dt && en.index < best->en_index)));
      if (better) {
        best = {ja.index, en.index, *sim};
        best_dt = dt;
      }
    }
    if (best) out.push_back(*best);
  }
  return out;
}

// --- percentiles ------------------------------------------------------------------

inline double empirical_percentile(std::vector<double> scores, double q) {
  std::sort(scores.begin(), scores.end());
  size_t idx = static_cast<size_t>(q * static_cast<double>(scores.size()));
  if (idx >= scores.size()) idx = scores.size() - 1;
  return scores[idx];
}

}  // namespace oracle
