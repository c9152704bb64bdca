#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "subalign/capalign.hpp"
#include "subalign/errors.hpp"
#include "subalign/unicode.hpp"
#include "subalign/util.hpp"

namespace subalign {

// Inverse standard normal CDF at 0.84 — the cut sits at mu + z*sigma.
inline constexpr double k_default_percentile_z = 0.9945;

enum class split_id { train, val, test };

inline const char* split_name(split_id s) {
  switch (s) {
    case split_id::train: return "train";
    case split_id::val: return "val";
    case split_id::test: return "test";
  }
  return "?";
}

struct corpus_pair {
  std::string en_text;
  std::string ja_text;
  double similarity = 0.0;
};

struct parallel_corpus {
  std::vector<corpus_pair> pairs;
  std::vector<split_id> split;             // parallel to pairs
  std::optional<double> threshold_used;    // similarity cutoff, when one was applied
};

struct filter_config {
  enum class threshold_mode { parametric, empirical, off };
  threshold_mode mode = threshold_mode::parametric;
  double percentile_z = k_default_percentile_z;
  size_t val_size = 2000;
  size_t test_size = 2001;
  std::uint64_t seed = 0;
};

// Parametric 84th-percentile cutoff under a normal assumption: mu + z*sigma
// with the population standard deviation.
inline double similarity_threshold(const std::vector<double>& scores,
                                   double z = k_default_percentile_z) {
  if (scores.size() < 2)
    raise(errc::degenerate_input, "need at least two scores for a threshold");
  double mu = std::accumulate(scores.begin(), scores.end(), 0.0) /
              static_cast<double>(scores.size());
  double var = 0.0;
  for (double s : scores) var += (s - mu) * (s - mu);
  var /= static_cast<double>(scores.size());
  double sigma = std::sqrt(var);
  if (sigma == 0.0) raise(errc::degenerate_input, "zero variance in similarity scores");
  return mu + z * sigma;
}

// Sort-based percentile (nearest-rank), the alternate mode behind a flag.
inline double empirical_threshold(std::vector<double> scores, double quantile = 0.84) {
  if (scores.size() < 2)
    raise(errc::degenerate_input, "need at least two scores for a threshold");
  std::sort(scores.begin(), scores.end());
  size_t rank = static_cast<size_t>(quantile * static_cast<double>(scores.size()));
  if (rank >= scores.size()) rank = scores.size() - 1;
  return scores[rank];
}

// Out-of-language test. Keep when at least 90% of the non-whitespace
// characters on the English side are roman (Latin letters, digits, ASCII
// punctuation) and at most 10% of the letters on the Japanese side are
// Latin. A Japanese side without letters passes its half.
inline bool language_filter(std::string_view en_text, std::string_view ja_text) {
  size_t en_total = 0, en_roman = 0;
  for (char32_t c : utf8_decode(en_text)) {
    if (is_space(c)) continue;
    ++en_total;
    if (is_latin_letter(c) || is_ascii_digit(c) || is_ascii_punct(c)) ++en_roman;
  }
  if (en_total == 0) return false;
  if (static_cast<double>(en_roman) < 0.90 * static_cast<double>(en_total)) return false;

  size_t ja_letters = 0, ja_roman = 0;
  for (char32_t c : utf8_decode(ja_text)) {
    if (!is_letter(c)) continue;
    ++ja_letters;
    if (is_latin_letter(c)) ++ja_roman;
  }
  if (ja_letters == 0) return true;
  return static_cast<double>(ja_roman) <= 0.10 * static_cast<double>(ja_letters);
}

// Keeps the first occurrence of each exact (en_text, ja_text) pair. Distinct
// translations of the same source survive by design.
inline std::vector<caption_match> dedup(const std::vector<caption_match>& matches) {
  std::vector<caption_match> out;
  std::unordered_set<std::string> seen;
  out.reserve(matches.size());
  for (const caption_match& m : matches) {
    std::string key = m.en_text + '\t' + m.ja_text;
    if (seen.insert(std::move(key)).second) out.push_back(m);
  }
  return out;
}

struct filter_stage_counts {
  std::int64_t in = 0;
  std::int64_t after_threshold = 0;
  std::int64_t after_dedup = 0;
  std::int64_t after_language_filter = 0;
};

// Threshold cut (strictly-below discards), dedup, language filter, then a
// seeded uniform draw of the val/test splits with the remainder as train.
inline parallel_corpus build_corpus(const std::vector<caption_match>& matches,
                                    const filter_config& cfg = {},
                                    filter_stage_counts* counts = nullptr) {
  std::vector<caption_match> kept;
  parallel_corpus corpus;
  if (cfg.mode == filter_config::threshold_mode::off) {
    kept = matches;
  } else {
    std::vector<double> scores;
    scores.reserve(matches.size());
    for (const auto& m : matches) scores.push_back(m.similarity);
    double cut = cfg.mode == filter_config::threshold_mode::parametric
                     ? similarity_threshold(scores, cfg.percentile_z)
                     : empirical_threshold(scores);
    corpus.threshold_used = cut;
    kept.reserve(matches.size());
    for (const auto& m : matches)
      if (m.similarity >= cut) kept.push_back(m);
  }

  if (counts) {
    counts->in = static_cast<std::int64_t>(matches.size());
    counts->after_threshold = static_cast<std::int64_t>(kept.size());
  }

  kept = dedup(kept);
  if (counts) counts->after_dedup = static_cast<std::int64_t>(kept.size());

  for (const caption_match& m : kept)
    if (language_filter(m.en_text, m.ja_text))
      corpus.pairs.push_back({m.en_text, m.ja_text, m.similarity});
  if (counts) counts->after_language_filter = static_cast<std::int64_t>(corpus.pairs.size());

  if (corpus.pairs.size() < cfg.val_size + cfg.test_size)
    raise(errc::insufficient_data,
          "only " + std::to_string(corpus.pairs.size()) + " pairs left; need at least " +
              std::to_string(cfg.val_size + cfg.test_size) + " for the val/test splits");

  std::vector<size_t> order(corpus.pairs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  det_rng rng(cfg.seed);
  rng.shuffle(order);
  corpus.split.assign(corpus.pairs.size(), split_id::train);
  for (size_t i = 0; i < cfg.val_size; ++i) corpus.split[order[i]] = split_id::val;
  for (size_t i = 0; i < cfg.test_size; ++i)
    corpus.split[order[cfg.val_size + i]] = split_id::test;
  return corpus;
}

}  // namespace subalign
