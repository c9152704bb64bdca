#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "subalign/capalign.hpp"
#include "subalign/docalign.hpp"
#include "subalign/document.hpp"
#include "subalign/errors.hpp"
#include "subalign/normalize.hpp"
#include "subalign/spellcheck.hpp"
#include "subalign/unicode.hpp"
#include "subalign/util.hpp"

namespace subalign {

// Parameterized corruptions applied to one generated bilingual pair: the
// timing errors, caption drops, OCR damage, and misspellings that real
// crawled subtitles exhibit.
struct corruption_spec {
  double time_shift_s = 0.0;
  double rate_factor = 1.0;    // > 0
  double drop_rate = 0.0;      // [0, 1)
  double ocr_noise_rate = 0.0; // [0, 1)
  double misspell_rate = 0.0;  // [0, 1)
  std::uint64_t seed = 0;
};

struct ground_truth {
  std::vector<std::pair<int, int>> planted;  // (ja caption index, en caption index)
};

struct phrase_table {
  std::vector<std::pair<std::string, std::string>> entries;  // (ja, en)

  static phrase_table load(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(errc::resource_error, "cannot open phrase table " + path);
    phrase_table table;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      std::string t(trim(line));
      if (t.empty() || t[0] == '#') continue;
      size_t tab = t.find('\t');
      if (tab == std::string::npos)
        raise(errc::format_error, path + ":" + std::to_string(lineno) + ": missing tab");
      table.entries.emplace_back(trim(t.substr(0, tab)), trim(t.substr(tab + 1)));
    }
    return table;
  }
};

struct synthetic_pair {
  subtitle_document en_doc;
  subtitle_document ja_doc;
  ground_truth truth;
};

namespace detail {

inline const std::u32string& ocr_noise_pool() {
  static const std::u32string pool = U"あいうえおかきくけこさしすせそたちつてとなにぬねのまみむめもらりるれろ";
  return pool;
}

inline std::string apply_ocr_noise(std::string_view text, double rate, det_rng& rng) {
  std::u32string cps = utf8_decode(text);
  const std::u32string& pool = ocr_noise_pool();
  for (char32_t& c : cps) {
    if (is_space(c)) continue;
    if (rng.uniform() < rate) c = pool[rng.below(pool.size())];
  }
  return utf8_encode(cps);
}

inline std::string apply_misspellings(
    std::string_view text, double rate,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& corpus,
    det_rng& rng) {
  auto tokens = split_ws(text);
  for (std::string& tok : tokens) {
    if (rng.uniform() >= rate) continue;
    for (const auto& [intended, variants] : corpus) {
      if (intended == tok && !variants.empty()) {
        tok = variants[rng.below(variants.size())];
        break;
      }
    }
  }
  return join(tokens, " ");
}

}  // namespace detail

// Builds a bilingual document pair with matched content at a realistic cue
// cadence (2-6 s cues, 0.5-2 s gaps), then corrupts the Japanese side with
// the given timing, drop, and OCR parameters and the English side with
// corpus-drawn misspellings. The returned truth lists the surviving
// (ja, en) caption index pairs.
inline synthetic_pair generate_pair(
    const phrase_table& table, size_t n_captions, const corruption_spec& spec,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& misspelling_corpus = {}) {
  if (table.entries.size() < n_captions)
    raise(errc::template_too_small, "phrase table has " + std::to_string(table.entries.size()) +
                                        " entries; need " + std::to_string(n_captions));
  if (spec.rate_factor <= 0.0) raise(errc::format_error, "rate_factor must be positive");
  for (double r : {spec.drop_rate, spec.ocr_noise_rate, spec.misspell_rate})
    if (r < 0.0 || r >= 1.0) raise(errc::format_error, "corruption rates must be in [0, 1)");

  det_rng rng(spec.seed);
  std::vector<size_t> order(table.entries.size());
  std::iota(order.begin(), order.end(), size_t{0});
  rng.shuffle(order);
  order.resize(n_captions);

  synthetic_pair out;
  out.en_doc.doc_id = "synth-en-" + std::to_string(spec.seed);
  out.ja_doc.doc_id = "synth-ja-" + std::to_string(spec.seed);
  out.en_doc.title_raw = out.ja_doc.title_raw = "bench show ep 1";
  out.en_doc.lang = language::en;
  out.ja_doc.lang = language::ja;

  std::int64_t t = 1000;
  std::vector<caption> ja_raw;
  for (size_t i = 0; i < n_captions; ++i) {
    const auto& [ja_text, en_text] = table.entries[order[i]];
    std::int64_t duration = static_cast<std::int64_t>(rng.uniform(2000.0, 6000.0));
    caption en;
    en.index = static_cast<int>(i) + 1;
    en.start_ms = t;
    en.end_ms = t + duration;
    en.text = en_text;
    out.en_doc.captions.push_back(std::move(en));

    caption ja;
    ja.index = static_cast<int>(i) + 1;  // pre-corruption; re-indexed below
    ja.start_ms = t;
    ja.end_ms = t + duration;
    ja.text = ja_text;
    ja_raw.push_back(std::move(ja));

    t += duration + static_cast<std::int64_t>(rng.uniform(500.0, 2000.0));
  }

  std::int64_t shift_ms = static_cast<std::int64_t>(std::llround(spec.time_shift_s * 1000.0));
  for (caption& c : ja_raw) {
    c.start_ms = std::llround(static_cast<double>(c.start_ms) * spec.rate_factor) + shift_ms;
    c.end_ms = std::llround(static_cast<double>(c.end_ms) * spec.rate_factor) + shift_ms;
    if (c.start_ms < 0) c.start_ms = 0;
    if (c.end_ms < c.start_ms) c.end_ms = c.start_ms;
  }

  for (size_t i = 0; i < ja_raw.size(); ++i) {
    if (spec.drop_rate > 0.0 && rng.uniform() < spec.drop_rate) continue;
    caption kept = ja_raw[i];
    if (spec.ocr_noise_rate > 0.0)
      kept.text = detail::apply_ocr_noise(kept.text, spec.ocr_noise_rate, rng);
    kept.index = static_cast<int>(out.ja_doc.captions.size()) + 1;
    out.ja_doc.captions.push_back(std::move(kept));
    out.truth.planted.emplace_back(out.ja_doc.captions.back().index, static_cast<int>(i) + 1);
  }

  if (spec.misspell_rate > 0.0 && !misspelling_corpus.empty()) {
    for (caption& c : out.en_doc.captions)
      c.text = detail::apply_misspellings(c.text, spec.misspell_rate, misspelling_corpus, rng);
  }
  return out;
}

struct alignment_score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Set precision/recall of predicted matches against the planting manifest.
// An empty prediction has precision 1 by convention, so its f1 is 0, not NaN.
inline alignment_score score_alignment(const std::vector<caption_match>& predicted,
                                       const ground_truth& truth) {
  std::set<std::pair<int, int>> truth_set(truth.planted.begin(), truth.planted.end());
  std::set<std::pair<int, int>> pred_set;
  for (const caption_match& m : predicted) pred_set.insert({m.ja_index, m.en_index});

  size_t hits = 0;
  for (const auto& p : pred_set)
    if (truth_set.count(p)) ++hits;

  alignment_score s;
  s.precision = pred_set.empty() ? 1.0 : static_cast<double>(hits) / pred_set.size();
  s.recall = truth_set.empty() ? 1.0 : static_cast<double>(hits) / truth_set.size();
  s.f1 = (s.precision + s.recall) == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

// Everything align-related the bench pipeline needs; spell models may be
// absent, in which case the correction stage is skipped.
struct bench_resources {
  const capalign_resources& cap;
  const error_model* em = nullptr;
  const language_model* lm = nullptr;
  const word_set* dict = nullptr;
};

struct bench_result {
  alignment_score score;
  size_t predicted = 0;
  size_t truth_size = 0;
  bool doc_pair_found = false;
};

// Runs one generated pair through the alignment chain (normalize, spellcheck,
// document alignment, caption alignment) and scores the outcome against the
// manifest. The similarity-percentile filter is a corpus-level statistic and
// deliberately not part of this per-pair measurement.
inline bench_result run_bench(
    const phrase_table& table, size_t n_captions, const corruption_spec& spec,
    const bench_resources& res,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& misspelling_corpus = {},
    double window_s = 12.5, const docalign_config& dcfg = {}) {
  synthetic_pair gen = generate_pair(table, n_captions, spec, misspelling_corpus);

  subtitle_document en = normalize_document(gen.en_doc).first;
  subtitle_document ja = normalize_document(gen.ja_doc).first;
  if (res.em && res.lm && res.dict) en = correct_document(en, *res.em, *res.lm, *res.dict).doc;

  bench_result result;
  result.truth_size = gen.truth.planted.size();

  std::vector<document_pair> pairs = align_documents({en}, {ja}, dcfg);
  if (pairs.empty()) {
    result.score = score_alignment({}, gen.truth);
    return result;
  }
  result.doc_pair_found = true;
  std::vector<caption_match> matches = align_captions(pairs[0], en, ja, window_s, res.cap);
  result.predicted = matches.size();
  result.score = score_alignment(matches, gen.truth);
  return result;
}

}  // namespace subalign
