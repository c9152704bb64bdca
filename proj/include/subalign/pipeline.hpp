#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "subalign/capalign.hpp"
#include "subalign/docalign.hpp"
#include "subalign/document.hpp"
#include "subalign/errors.hpp"
#include "subalign/filter.hpp"
#include "subalign/normalize.hpp"
#include "subalign/spellcheck.hpp"
#include "subalign/srt.hpp"
#include "subalign/util.hpp"

namespace subalign {

namespace fs = std::filesystem;

struct resource_paths {
  std::string dictionary;
  std::string misspellings;
  std::string unigrams;
  std::string bigrams;
  std::string lexicon;
  std::string embeddings;
  std::string stopwords_en;
  std::string particles_ja;
};

struct pipeline_config {
  std::string en_dir;
  std::string ja_dir;
  std::string out_dir;
  resource_paths resources;
  normalize_options normalize;
  bool spellcheck_enabled = true;
  docalign_config docalign;
  double capalign_window_s = 12.5;
  filter_config filter;
  unsigned workers = 1;
  bool resume = false;

  void apply_json(const nlohmann::json& j);
  void validate() const;

  static pipeline_config from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(errc::resource_error, "cannot open config " + path);
    nlohmann::json j;
    try {
      f >> j;
    } catch (const std::exception& e) {
      raise(errc::format_error, path + ": " + e.what());
    }
    pipeline_config cfg;
    cfg.apply_json(j);
    return cfg;
  }
};

inline void pipeline_config::apply_json(const nlohmann::json& j) {
  auto str = [&](const char* key, std::string& out) {
    if (j.contains(key)) out = j.at(key).get<std::string>();
  };
  str("en_dir", en_dir);
  str("ja_dir", ja_dir);
  str("out_dir", out_dir);
  if (j.contains("workers")) workers = j.at("workers").get<unsigned>();
  if (j.contains("resume")) resume = j.at("resume").get<bool>();
  if (j.contains("resources")) {
    const auto& r = j.at("resources");
    auto rstr = [&](const char* key, std::string& out) {
      if (r.contains(key)) out = r.at(key).get<std::string>();
    };
    rstr("dictionary", resources.dictionary);
    rstr("misspellings", resources.misspellings);
    rstr("unigrams", resources.unigrams);
    rstr("bigrams", resources.bigrams);
    rstr("lexicon", resources.lexicon);
    rstr("embeddings", resources.embeddings);
    rstr("stopwords_en", resources.stopwords_en);
    rstr("particles_ja", resources.particles_ja);
  }
  if (j.contains("normalize") && j.at("normalize").contains("rules")) {
    const auto& rules = j.at("normalize").at("rules");
    auto rule = [&](const char* name, bool& flag) {
      if (rules.contains(name) && rules.at(name).contains("enabled"))
        flag = rules.at(name).at("enabled").get<bool>();
    };
    rule("lowercase", normalize.lowercase);
    rule("brackets", normalize.brackets);
    rule("tags", normalize.tags);
    rule("punctuation", normalize.punctuation);
    rule("signatures", normalize.signatures);
    rule("out_of_language", normalize.out_of_language);
    rule("whitespace", normalize.whitespace);
  }
  if (j.contains("spellcheck") && j.at("spellcheck").contains("enabled"))
    spellcheck_enabled = j.at("spellcheck").at("enabled").get<bool>();
  if (j.contains("docalign")) {
    const auto& d = j.at("docalign");
    if (d.contains("title_threshold")) docalign.title_threshold = d.at("title_threshold");
    if (d.contains("hamming_threshold")) docalign.hamming_threshold = d.at("hamming_threshold");
    if (d.contains("shift_range_s")) docalign.shift_range_s = d.at("shift_range_s");
  }
  if (j.contains("capalign") && j.at("capalign").contains("window_s"))
    capalign_window_s = j.at("capalign").at("window_s").get<double>();
  if (j.contains("filter")) {
    const auto& f = j.at("filter");
    if (f.contains("percentile_z")) filter.percentile_z = f.at("percentile_z");
    if (f.contains("val_size")) filter.val_size = f.at("val_size").get<size_t>();
    if (f.contains("test_size")) filter.test_size = f.at("test_size").get<size_t>();
    if (f.contains("seed")) filter.seed = f.at("seed").get<std::uint64_t>();
    if (f.contains("threshold_mode")) {
      std::string mode = f.at("threshold_mode").get<std::string>();
      if (mode == "parametric")
        filter.mode = filter_config::threshold_mode::parametric;
      else if (mode == "empirical")
        filter.mode = filter_config::threshold_mode::empirical;
      else if (mode == "off")
        filter.mode = filter_config::threshold_mode::off;
      else
        raise(errc::format_error, "unknown filter.threshold_mode: " + mode);
    }
  }
}

inline void pipeline_config::validate() const {
  auto need_dir = [](const std::string& p, const char* what) {
    if (p.empty()) raise(errc::resource_error, std::string(what) + " not set");
    if (!fs::is_directory(p)) raise(errc::resource_error, std::string(what) + " is not a directory: " + p);
  };
  need_dir(en_dir, "en_dir");
  need_dir(ja_dir, "ja_dir");
  if (out_dir.empty()) raise(errc::resource_error, "out_dir not set");
  auto need_file = [](const std::string& p, const char* what) {
    if (!p.empty() && !fs::is_regular_file(p))
      raise(errc::resource_error, std::string(what) + " does not exist: " + p);
  };
  need_file(resources.dictionary, "dictionary");
  need_file(resources.misspellings, "misspelling corpus");
  need_file(resources.unigrams, "unigram file");
  need_file(resources.bigrams, "bigram file");
  need_file(resources.lexicon, "lexicon");
  need_file(resources.embeddings, "embeddings");
  need_file(resources.stopwords_en, "stopword list");
  need_file(resources.particles_ja, "particle list");
  if (docalign.title_threshold < 0.0 || docalign.title_threshold > 1.0)
    raise(errc::format_error, "docalign.title_threshold out of [0,1]");
  if (docalign.hamming_threshold < 0.0 || docalign.hamming_threshold > 1.0)
    raise(errc::format_error, "docalign.hamming_threshold out of [0,1]");
  if (docalign.shift_range_s < 0) raise(errc::format_error, "docalign.shift_range_s negative");
  if (capalign_window_s <= 0.0) raise(errc::format_error, "capalign.window_s must be positive");
}

// Per-stage counters. "out <= in" holds for every filtering stage.
struct stage_stats {
  std::int64_t en_files = 0, ja_files = 0;
  std::int64_t en_docs = 0, ja_docs = 0;
  std::int64_t en_load_failures = 0, ja_load_failures = 0;
  std::int64_t en_captions = 0, ja_captions = 0;

  std::int64_t en_docs_normalized = 0, ja_docs_normalized = 0;
  std::int64_t en_docs_rejected = 0, ja_docs_rejected = 0;
  std::int64_t en_captions_normalized = 0, ja_captions_normalized = 0;
  std::map<std::string, std::int64_t> rules_fired;
  std::int64_t chars_removed = 0;

  std::int64_t corrections = 0;

  std::int64_t doc_candidates = 0;
  std::int64_t doc_pairs = 0;

  std::int64_t ja_captions_in_pairs = 0;
  std::int64_t matches = 0;

  std::int64_t matches_in = 0;
  std::int64_t after_threshold = 0;
  std::int64_t after_dedup = 0;
  std::int64_t after_language_filter = 0;
  bool has_threshold = false;
  double threshold_used = 0.0;
  std::int64_t train_size = 0, val_size = 0, test_size = 0;

  std::int64_t en_unique_tokens = 0, ja_unique_tokens = 0;
  double en_mean_length = 0.0, ja_mean_length = 0.0;
  std::int64_t en_multi_reference = 0, ja_multi_reference = 0;
};

inline void to_json(nlohmann::json& j, const stage_stats& s) {
  j = nlohmann::json{{"en_files", s.en_files},
                     {"ja_files", s.ja_files},
                     {"en_docs", s.en_docs},
                     {"ja_docs", s.ja_docs},
                     {"en_load_failures", s.en_load_failures},
                     {"ja_load_failures", s.ja_load_failures},
                     {"en_captions", s.en_captions},
                     {"ja_captions", s.ja_captions},
                     {"en_docs_normalized", s.en_docs_normalized},
                     {"ja_docs_normalized", s.ja_docs_normalized},
                     {"en_docs_rejected", s.en_docs_rejected},
                     {"ja_docs_rejected", s.ja_docs_rejected},
                     {"en_captions_normalized", s.en_captions_normalized},
                     {"ja_captions_normalized", s.ja_captions_normalized},
                     {"rules_fired", s.rules_fired},
                     {"chars_removed", s.chars_removed},
                     {"corrections", s.corrections},
                     {"doc_candidates", s.doc_candidates},
                     {"doc_pairs", s.doc_pairs},
                     {"ja_captions_in_pairs", s.ja_captions_in_pairs},
                     {"matches", s.matches},
                     {"matches_in", s.matches_in},
                     {"after_threshold", s.after_threshold},
                     {"after_dedup", s.after_dedup},
                     {"after_language_filter", s.after_language_filter},
                     {"has_threshold", s.has_threshold},
                     {"threshold_used", s.threshold_used},
                     {"train_size", s.train_size},
                     {"val_size", s.val_size},
                     {"test_size", s.test_size},
                     {"en_unique_tokens", s.en_unique_tokens},
                     {"ja_unique_tokens", s.ja_unique_tokens},
                     {"en_mean_length", s.en_mean_length},
                     {"ja_mean_length", s.ja_mean_length},
                     {"en_multi_reference", s.en_multi_reference},
                     {"ja_multi_reference", s.ja_multi_reference}};
}

inline void from_json(const nlohmann::json& j, stage_stats& s) {
  auto get = [&](const char* key, auto& out) {
    if (j.contains(key)) j.at(key).get_to(out);
  };
  get("en_files", s.en_files);
  get("ja_files", s.ja_files);
  get("en_docs", s.en_docs);
  get("ja_docs", s.ja_docs);
  get("en_load_failures", s.en_load_failures);
  get("ja_load_failures", s.ja_load_failures);
  get("en_captions", s.en_captions);
  get("ja_captions", s.ja_captions);
  get("en_docs_normalized", s.en_docs_normalized);
  get("ja_docs_normalized", s.ja_docs_normalized);
  get("en_docs_rejected", s.en_docs_rejected);
  get("ja_docs_rejected", s.ja_docs_rejected);
  get("en_captions_normalized", s.en_captions_normalized);
  get("ja_captions_normalized", s.ja_captions_normalized);
  get("rules_fired", s.rules_fired);
  get("chars_removed", s.chars_removed);
  get("corrections", s.corrections);
  get("doc_candidates", s.doc_candidates);
  get("doc_pairs", s.doc_pairs);
  get("ja_captions_in_pairs", s.ja_captions_in_pairs);
  get("matches", s.matches);
  get("matches_in", s.matches_in);
  get("after_threshold", s.after_threshold);
  get("after_dedup", s.after_dedup);
  get("after_language_filter", s.after_language_filter);
  get("has_threshold", s.has_threshold);
  get("threshold_used", s.threshold_used);
  get("train_size", s.train_size);
  get("val_size", s.val_size);
  get("test_size", s.test_size);
  get("en_unique_tokens", s.en_unique_tokens);
  get("ja_unique_tokens", s.ja_unique_tokens);
  get("en_mean_length", s.en_mean_length);
  get("ja_mean_length", s.ja_mean_length);
  get("en_multi_reference", s.en_multi_reference);
  get("ja_multi_reference", s.ja_multi_reference);
}

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Coarse token count for Japanese text: same-script runs, ignoring spaces
// and punctuation. Used only for corpus statistics.
inline std::vector<std::string> ja_stat_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::u32string cps = utf8_decode(text);
  size_t i = 0;
  auto cls = [](char32_t c) -> int {
    if (is_hiragana(c)) return 1;
    if (is_katakana(c) || c == 0x30FC) return 2;
    if (is_kanji(c)) return 3;
    if (is_latin_letter(c)) return 4;
    if (is_ascii_digit(c) || (c >= 0xFF10 && c <= 0xFF19)) return 5;
    return 0;
  };
  while (i < cps.size()) {
    if (cls(cps[i]) == 0) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < cps.size() && cls(cps[j]) == cls(cps[i])) ++j;
    out.push_back(utf8_encode(cps.substr(i, j - i)));
    i = j;
  }
  return out;
}

}  // namespace detail

// Corpus-level statistics: unique tokens, mean phrase lengths, and the
// number of source phrases carrying two or more distinct references.
inline void compute_corpus_stats(const parallel_corpus& corpus, stage_stats& stats) {
  std::unordered_set<std::string> en_tokens, ja_tokens;
  std::unordered_map<std::string, std::unordered_set<std::string>> en_refs, ja_refs;
  std::int64_t en_len_sum = 0, ja_len_sum = 0;
  for (const corpus_pair& p : corpus.pairs) {
    auto en_toks = split_ws(p.en_text);
    auto ja_toks = detail::ja_stat_tokens(p.ja_text);
    en_len_sum += static_cast<std::int64_t>(en_toks.size());
    ja_len_sum += static_cast<std::int64_t>(ja_toks.size());
    for (auto& t : en_toks) en_tokens.insert(std::move(t));
    for (auto& t : ja_toks) ja_tokens.insert(std::move(t));
    en_refs[p.en_text].insert(p.ja_text);
    ja_refs[p.ja_text].insert(p.en_text);
  }
  stats.en_unique_tokens = static_cast<std::int64_t>(en_tokens.size());
  stats.ja_unique_tokens = static_cast<std::int64_t>(ja_tokens.size());
  size_t n = corpus.pairs.size();
  stats.en_mean_length = n ? static_cast<double>(en_len_sum) / n : 0.0;
  stats.ja_mean_length = n ? static_cast<double>(ja_len_sum) / n : 0.0;
  stats.en_multi_reference = std::count_if(en_refs.begin(), en_refs.end(),
                                           [](const auto& kv) { return kv.second.size() >= 2; });
  stats.ja_multi_reference = std::count_if(ja_refs.begin(), ja_refs.end(),
                                           [](const auto& kv) { return kv.second.size() >= 2; });
}

// Human-readable run summary: the stage counter chain plus corpus statistics.
inline std::string stats_report(const stage_stats& s) {
  std::ostringstream os;
  os << "ingest:      en " << s.en_docs << "/" << s.en_files << " docs ("
     << s.en_load_failures << " failed), ja " << s.ja_docs << "/" << s.ja_files << " docs ("
     << s.ja_load_failures << " failed)\n";
  os << "             en captions " << s.en_captions << ", ja captions " << s.ja_captions
     << "\n";
  os << "normalize:   en docs " << s.en_docs_normalized << " (" << s.en_docs_rejected
     << " rejected), ja docs " << s.ja_docs_normalized << " (" << s.ja_docs_rejected
     << " rejected)\n";
  os << "             en captions " << s.en_captions_normalized << ", ja captions "
     << s.ja_captions_normalized << ", chars removed " << s.chars_removed << "\n";
  for (const auto& [rule, count] : s.rules_fired)
    os << "             rule " << rule << ": " << count << "\n";
  os << "spellcheck:  corrections " << s.corrections << "\n";
  os << "docalign:    candidates " << s.doc_candidates << ", retained pairs " << s.doc_pairs
     << "\n";
  os << "capalign:    ja captions " << s.ja_captions_in_pairs << ", matches " << s.matches
     << "\n";
  os << "filter:      in " << s.matches_in << " -> threshold " << s.after_threshold
     << " -> dedup " << s.after_dedup << " -> language " << s.after_language_filter << "\n";
  if (s.has_threshold)
    os << "             similarity cutoff " << detail::format_double(s.threshold_used) << "\n";
  os << "splits:      train " << s.train_size << ", val " << s.val_size << ", test "
     << s.test_size << "\n";
  os << "corpus:      unique tokens en " << s.en_unique_tokens << ", ja " << s.ja_unique_tokens
     << "\n";
  os << "             mean length en " << s.en_mean_length << ", ja " << s.ja_mean_length
     << "\n";
  os << "             multi-reference en " << s.en_multi_reference << ", ja "
     << s.ja_multi_reference << "\n";
  return os.str();
}

struct pipeline_result {
  parallel_corpus corpus;
  stage_stats stats;
  std::vector<std::string> warnings;
};

namespace detail {

inline void write_pairs_tsv(const std::string& path, const std::vector<document_pair>& pairs) {
  std::ostringstream os;
  for (const auto& p : pairs)
    os << p.en_doc_id << '\t' << p.ja_doc_id << '\t' << format_double(p.title_similarity)
       << '\t' << format_double(p.temporal_distance) << '\t' << p.best_shift_s << '\n';
  write_file(path, os.str());
}

inline std::vector<document_pair> read_pairs_tsv(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(errc::resource_error, "cannot open " + path);
  std::vector<document_pair> out;
  std::string line;
  while (std::getline(f, line)) {
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 5) raise(errc::format_error, path + ": bad pair line");
    out.push_back({fields[0], fields[1], std::stod(fields[2]), std::stod(fields[3]),
                   std::stoi(fields[4])});
  }
  return out;
}

inline void write_matches_tsv(const std::string& path, const std::vector<caption_match>& ms) {
  std::ostringstream os;
  for (const auto& m : ms)
    os << m.en_doc_id << '\t' << m.ja_doc_id << '\t' << m.ja_index << '\t' << m.en_index
       << '\t' << format_double(m.similarity) << '\t' << m.en_text << '\t' << m.ja_text
       << '\n';
  write_file(path, os.str());
}

inline std::vector<caption_match> read_matches_tsv(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(errc::resource_error, "cannot open " + path);
  std::vector<caption_match> out;
  std::string line;
  while (std::getline(f, line)) {
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 7) raise(errc::format_error, path + ": bad match line");
    caption_match m;
    m.en_doc_id = fields[0];
    m.ja_doc_id = fields[1];
    m.ja_index = std::stoi(fields[2]);
    m.en_index = std::stoi(fields[3]);
    m.similarity = std::stod(fields[4]);
    m.en_text = fields[5];
    m.ja_text = fields[6];
    out.push_back(std::move(m));
  }
  return out;
}

inline std::vector<std::string> list_srt_files(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".srt") out.push_back(entry.path().generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline void write_docs_file(const std::string& path, const std::vector<subtitle_document>& docs) {
  std::ostringstream os;
  write_documents(os, docs);
  write_file(path, os.str());
}

inline std::vector<subtitle_document> read_docs_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(errc::resource_error, "cannot open " + path);
  return read_documents(f);
}

inline void write_stats_fragment(const std::string& path, const nlohmann::json& j) {
  write_file(path, j.dump(2) + "\n");
}

inline nlohmann::json read_stats_fragment(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(errc::resource_error, "cannot open " + path);
  nlohmann::json j;
  f >> j;
  return j;
}

}  // namespace detail

// Runs ingest -> normalize -> spellcheck(en) -> docalign -> capalign ->
// filter over two directory trees of SubRip files. Every stage writes its
// output under <out_dir>/checkpoints; with cfg.resume, stages whose
// checkpoint files exist are loaded instead of recomputed, and a resumed run
// produces byte-identical outputs. Per-document failures are counted, not
// fatal; missing resources are fatal.
inline pipeline_result run_pipeline(const pipeline_config& cfg) {
  cfg.validate();
  pipeline_result result;
  stage_stats& stats = result.stats;

  fs::create_directories(cfg.out_dir);
  const std::string ck = (fs::path(cfg.out_dir) / "checkpoints").string();
  fs::create_directories(ck);
  auto ckpath = [&](const char* name) { return (fs::path(ck) / name).string(); };
  auto have = [&](const std::string& p) { return fs::is_regular_file(p); };

  // --- stage 1: ingest ------------------------------------------------------
  std::vector<subtitle_document> en_docs, ja_docs;
  {
    const std::string en_ck = ckpath("01_ingest_en.docs");
    const std::string ja_ck = ckpath("01_ingest_ja.docs");
    const std::string st_ck = ckpath("01_ingest.stats.json");
    if (cfg.resume && have(en_ck) && have(ja_ck) && have(st_ck)) {
      en_docs = detail::read_docs_file(en_ck);
      ja_docs = detail::read_docs_file(ja_ck);
      from_json(detail::read_stats_fragment(st_ck), stats);
    } else {
      auto ingest_side = [&](const std::string& dir, language lang,
                             std::vector<subtitle_document>& docs, std::int64_t& files,
                             std::int64_t& failures, std::int64_t& captions) {
        auto paths = detail::list_srt_files(dir);
        files = static_cast<std::int64_t>(paths.size());
        std::vector<std::optional<subtitle_document>> slots(paths.size());
        std::vector<std::string> errors(paths.size());
        parallel_for(paths.size(), cfg.workers, [&](size_t i) {
          try {
            slots[i] = load_document(paths[i], lang);
          } catch (const error& e) {
            errors[i] = e.what();
          }
        });
        for (size_t i = 0; i < slots.size(); ++i) {
          if (slots[i]) {
            captions += static_cast<std::int64_t>(slots[i]->captions.size());
            docs.push_back(std::move(*slots[i]));
          } else {
            ++failures;
            result.warnings.push_back(errors[i]);
          }
        }
      };
      ingest_side(cfg.en_dir, language::en, en_docs, stats.en_files, stats.en_load_failures,
                  stats.en_captions);
      ingest_side(cfg.ja_dir, language::ja, ja_docs, stats.ja_files, stats.ja_load_failures,
                  stats.ja_captions);
      stats.en_docs = static_cast<std::int64_t>(en_docs.size());
      stats.ja_docs = static_cast<std::int64_t>(ja_docs.size());
      detail::write_docs_file(en_ck, en_docs);
      detail::write_docs_file(ja_ck, ja_docs);
      nlohmann::json j;
      to_json(j, stats);
      detail::write_stats_fragment(st_ck, j);
    }
  }
  if (en_docs.empty() || ja_docs.empty())
    raise(errc::insufficient_data, "no usable documents in one or both input directories");

  // --- stage 2: normalize ---------------------------------------------------
  {
    const std::string en_ck = ckpath("02_normalized_en.docs");
    const std::string ja_ck = ckpath("02_normalized_ja.docs");
    const std::string st_ck = ckpath("02_normalize.stats.json");
    if (cfg.resume && have(en_ck) && have(ja_ck) && have(st_ck)) {
      en_docs = detail::read_docs_file(en_ck);
      ja_docs = detail::read_docs_file(ja_ck);
      from_json(detail::read_stats_fragment(st_ck), stats);
    } else {
      auto normalize_side = [&](std::vector<subtitle_document>& docs, std::int64_t& kept,
                                std::int64_t& rejected, std::int64_t& captions) {
        std::vector<subtitle_document> out;
        for (const auto& doc : docs) {
          try {
            auto [norm, rep] = normalize_document(doc, cfg.normalize);
            captions += static_cast<std::int64_t>(norm.captions.size());
            for (const auto& [rule, n] : rep.rules_fired) stats.rules_fired[rule] += n;
            stats.chars_removed += rep.chars_removed;
            out.push_back(std::move(norm));
            ++kept;
          } catch (const error&) {
            ++rejected;
          }
        }
        docs = std::move(out);
      };
      normalize_side(en_docs, stats.en_docs_normalized, stats.en_docs_rejected,
                     stats.en_captions_normalized);
      normalize_side(ja_docs, stats.ja_docs_normalized, stats.ja_docs_rejected,
                     stats.ja_captions_normalized);
      detail::write_docs_file(en_ck, en_docs);
      detail::write_docs_file(ja_ck, ja_docs);
      nlohmann::json j;
      to_json(j, stats);
      detail::write_stats_fragment(st_ck, j);
    }
  }
  if (en_docs.empty() || ja_docs.empty())
    raise(errc::insufficient_data, "no documents survived normalization");

  // --- stage 3: spellcheck (English side) -----------------------------------
  const bool spell = cfg.spellcheck_enabled && !cfg.resources.dictionary.empty() &&
                     !cfg.resources.misspellings.empty() && !cfg.resources.unigrams.empty() &&
                     !cfg.resources.bigrams.empty();
  {
    const std::string en_ck = ckpath("03_corrected_en.docs");
    const std::string st_ck = ckpath("03_spellcheck.stats.json");
    if (cfg.resume && have(en_ck) && have(st_ck)) {
      en_docs = detail::read_docs_file(en_ck);
      from_json(detail::read_stats_fragment(st_ck), stats);
    } else {
      if (spell) {
        word_set dict = word_set::load(cfg.resources.dictionary);
        error_model em = train_error_model(load_misspelling_corpus(cfg.resources.misspellings));
        language_model lm =
            train_language_model(cfg.resources.unigrams, cfg.resources.bigrams);
        std::vector<std::int64_t> corrections(en_docs.size(), 0);
        parallel_for(en_docs.size(), cfg.workers, [&](size_t i) {
          auto res = correct_document(en_docs[i], em, lm, dict);
          en_docs[i] = std::move(res.doc);
          corrections[i] = res.corrections;
        });
        for (auto c : corrections) stats.corrections += c;
      }
      detail::write_docs_file(en_ck, en_docs);
      nlohmann::json j;
      to_json(j, stats);
      detail::write_stats_fragment(st_ck, j);
    }
  }

  // --- stage 4: document alignment -------------------------------------------
  std::vector<document_pair> pairs;
  {
    const std::string pairs_ck = ckpath("04_pairs.tsv");
    const std::string st_ck = ckpath("04_docalign.stats.json");
    if (cfg.resume && have(pairs_ck) && have(st_ck)) {
      pairs = detail::read_pairs_tsv(pairs_ck);
      from_json(detail::read_stats_fragment(st_ck), stats);
    } else {
      docalign_stats ds;
      pairs = align_documents(en_docs, ja_docs, cfg.docalign, &ds);
      stats.doc_candidates = ds.candidates;
      stats.doc_pairs = ds.retained;
      detail::write_pairs_tsv(pairs_ck, pairs);
      nlohmann::json j;
      to_json(j, stats);
      detail::write_stats_fragment(st_ck, j);
    }
  }

  // --- stage 5: caption alignment --------------------------------------------
  std::vector<caption_match> matches;
  {
    const std::string matches_ck = ckpath("05_matches.tsv");
    const std::string st_ck = ckpath("05_capalign.stats.json");
    if (cfg.resume && have(matches_ck) && have(st_ck)) {
      matches = detail::read_matches_tsv(matches_ck);
      from_json(detail::read_stats_fragment(st_ck), stats);
    } else {
      if (cfg.resources.lexicon.empty() || cfg.resources.embeddings.empty())
        raise(errc::resource_error, "caption alignment needs a lexicon and embeddings");
      lexicon lex = lexicon::load(cfg.resources.lexicon);
      embedding_table table = embedding_table::load(cfg.resources.embeddings);
      std::unique_ptr<english_content_extractor> en_ex;
      if (cfg.resources.stopwords_en.empty())
        en_ex = std::make_unique<english_content_extractor>();
      else
        en_ex = std::make_unique<english_content_extractor>(
            english_content_extractor::from_file(cfg.resources.stopwords_en));
      std::vector<std::string> particles =
          cfg.resources.particles_ja.empty()
              ? default_japanese_particles()
              : japanese_content_extractor::load_particles(cfg.resources.particles_ja);
      japanese_content_extractor ja_ex(lex, particles);
      capalign_resources res{*en_ex, ja_ex, lex, table};

      std::unordered_map<std::string, const subtitle_document*> en_by_id, ja_by_id;
      for (const auto& d : en_docs) en_by_id[d.doc_id] = &d;
      for (const auto& d : ja_docs) ja_by_id[d.doc_id] = &d;

      std::vector<std::vector<caption_match>> per_pair(pairs.size());
      parallel_for(pairs.size(), cfg.workers, [&](size_t i) {
        const document_pair& p = pairs[i];
        auto en_it = en_by_id.find(p.en_doc_id);
        auto ja_it = ja_by_id.find(p.ja_doc_id);
        if (en_it == en_by_id.end() || ja_it == ja_by_id.end()) return;
        per_pair[i] =
            align_captions(p, *en_it->second, *ja_it->second, cfg.capalign_window_s, res);
      });
      for (size_t i = 0; i < pairs.size(); ++i) {
        auto ja_it = ja_by_id.find(pairs[i].ja_doc_id);
        if (ja_it != ja_by_id.end())
          stats.ja_captions_in_pairs +=
              static_cast<std::int64_t>(ja_it->second->captions.size());
        for (auto& m : per_pair[i]) matches.push_back(std::move(m));
      }
      stats.matches = static_cast<std::int64_t>(matches.size());
      detail::write_matches_tsv(matches_ck, matches);
      nlohmann::json j;
      to_json(j, stats);
      detail::write_stats_fragment(st_ck, j);
    }
  }

  // --- stage 6: filter and splits ---------------------------------------------
  filter_stage_counts counts;
  result.corpus = build_corpus(matches, cfg.filter, &counts);
  stats.matches_in = counts.in;
  stats.after_threshold = counts.after_threshold;
  stats.after_dedup = counts.after_dedup;
  stats.after_language_filter = counts.after_language_filter;
  if (result.corpus.threshold_used) {
    stats.has_threshold = true;
    stats.threshold_used = *result.corpus.threshold_used;
  }

  std::ostringstream train, val, test, train_s, val_s, test_s;
  for (size_t i = 0; i < result.corpus.pairs.size(); ++i) {
    const corpus_pair& p = result.corpus.pairs[i];
    std::ostringstream* body = nullptr;
    std::ostringstream* scores = nullptr;
    switch (result.corpus.split[i]) {
      case split_id::train: body = &train; scores = &train_s; ++stats.train_size; break;
      case split_id::val: body = &val; scores = &val_s; ++stats.val_size; break;
      case split_id::test: body = &test; scores = &test_s; ++stats.test_size; break;
    }
    *body << p.en_text << '\t' << p.ja_text << '\n';
    *scores << detail::format_double(p.similarity) << '\n';
  }
  auto outpath = [&](const char* name) { return (fs::path(cfg.out_dir) / name).string(); };
  write_file(outpath("train"), train.str());
  write_file(outpath("val"), val.str());
  write_file(outpath("test"), test.str());
  write_file(outpath("train.scores"), train_s.str());
  write_file(outpath("val.scores"), val_s.str());
  write_file(outpath("test.scores"), test_s.str());

  compute_corpus_stats(result.corpus, stats);

  nlohmann::json out_json;
  to_json(out_json, stats);
  nlohmann::json config_used = {
      {"title_threshold", cfg.docalign.title_threshold},
      {"hamming_threshold", cfg.docalign.hamming_threshold},
      {"shift_range_s", cfg.docalign.shift_range_s},
      {"window_s", cfg.capalign_window_s},
      {"percentile_z", cfg.filter.percentile_z},
      {"val_size", cfg.filter.val_size},
      {"test_size", cfg.filter.test_size},
      {"seed", cfg.filter.seed},
      {"threshold_mode", cfg.filter.mode == filter_config::threshold_mode::parametric
                             ? "parametric"
                             : cfg.filter.mode == filter_config::threshold_mode::empirical
                                   ? "empirical"
                                   : "off"}};
  nlohmann::json full = {{"stats", out_json}, {"config", config_used}};
  write_file(outpath("stats.json"), full.dump(2) + "\n");
  write_file(outpath("report.txt"), stats_report(stats));
  return result;
}

// --- post-hoc audit -----------------------------------------------------------

struct audit_result {
  bool ok = true;
  std::int64_t pairs_checked = 0;
  std::int64_t matches_checked = 0;
  std::int64_t corpus_lines_checked = 0;
  std::vector<std::string> violations;
};

// Re-verifies the emitted run against its own checkpoints: document pairs
// honor the title and temporal thresholds, every match references a retained
// pair, and every corpus line passes the language filter, meets the recorded
// similarity cutoff, traces back to a match, and is unique.
inline audit_result audit_run_dir(const std::string& out_dir) {
  audit_result audit;
  auto fail = [&](const std::string& msg) {
    audit.ok = false;
    if (audit.violations.size() < 50) audit.violations.push_back(msg);
  };

  fs::path dir(out_dir);
  nlohmann::json meta;
  {
    std::ifstream f(dir / "stats.json");
    if (!f) raise(errc::resource_error, "cannot open " + (dir / "stats.json").string());
    f >> meta;
  }
  const double title_threshold = meta.at("config").at("title_threshold").get<double>();
  const double hamming_threshold = meta.at("config").at("hamming_threshold").get<double>();
  const bool has_threshold = meta.at("stats").at("has_threshold").get<bool>();
  const double threshold = meta.at("stats").at("threshold_used").get<double>();

  auto pairs = detail::read_pairs_tsv((dir / "checkpoints" / "04_pairs.tsv").string());
  std::set<std::pair<std::string, std::string>> pair_ids;
  for (const auto& p : pairs) {
    ++audit.pairs_checked;
    if (!(p.title_similarity > title_threshold))
      fail("pair " + p.en_doc_id + " / " + p.ja_doc_id + ": title similarity " +
           detail::format_double(p.title_similarity) + " not above " +
           detail::format_double(title_threshold));
    if (!(p.temporal_distance <= hamming_threshold))
      fail("pair " + p.en_doc_id + " / " + p.ja_doc_id + ": temporal distance " +
           detail::format_double(p.temporal_distance) + " above " +
           detail::format_double(hamming_threshold));
    pair_ids.insert({p.en_doc_id, p.ja_doc_id});
  }

  auto matches = detail::read_matches_tsv((dir / "checkpoints" / "05_matches.tsv").string());
  std::unordered_set<std::string> match_texts;
  for (const auto& m : matches) {
    ++audit.matches_checked;
    if (!pair_ids.count({m.en_doc_id, m.ja_doc_id}))
      fail("match references unknown document pair " + m.en_doc_id + " / " + m.ja_doc_id);
    match_texts.insert(m.en_text + '\t' + m.ja_text);
  }

  std::unordered_set<std::string> seen_lines;
  for (const char* split : {"train", "val", "test"}) {
    std::ifstream body(dir / split);
    std::ifstream scores(dir / (std::string(split) + ".scores"));
    if (!body || !scores) {
      fail(std::string("missing corpus files for split ") + split);
      continue;
    }
    std::string line, score_line;
    size_t lineno = 0;
    while (std::getline(body, line)) {
      ++lineno;
      ++audit.corpus_lines_checked;
      if (!std::getline(scores, score_line)) {
        fail(std::string(split) + ": scores sidecar shorter than split");
        break;
      }
      auto fields = subalign::split(line, '\t');
      if (fields.size() != 2) {
        fail(std::string(split) + ":" + std::to_string(lineno) + ": bad line");
        continue;
      }
      const std::string& en = fields[0];
      const std::string& ja = fields[1];
      if (!seen_lines.insert(line).second)
        fail(std::string(split) + ":" + std::to_string(lineno) + ": duplicate pair");
      if (!match_texts.count(line))
        fail(std::string(split) + ":" + std::to_string(lineno) +
             ": pair does not trace back to any match");
      if (!language_filter(en, ja))
        fail(std::string(split) + ":" + std::to_string(lineno) + ": fails language filter");
      if (has_threshold) {
        double sc = std::stod(score_line);
        if (!(sc >= threshold))
          fail(std::string(split) + ":" + std::to_string(lineno) + ": score " + score_line +
               " below cutoff " + detail::format_double(threshold));
      }
    }
    if (std::getline(scores, score_line))
      fail(std::string(split) + ": scores sidecar longer than split");
  }
  return audit;
}

}  // namespace subalign
