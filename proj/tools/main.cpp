// Command-line front end for the subtitle corpus mining pipeline.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <subalign/subalign.hpp>

namespace fs = std::filesystem;
using namespace subalign;

namespace {

language parse_language(const std::string& s) {
  auto lang = s;
  if (lang != "en" && lang != "ja") raise(errc::format_error, "language must be en or ja");
  return language_from_name(lang);
}

filter_config::threshold_mode parse_threshold_mode(const std::string& s) {
  if (s == "parametric") return filter_config::threshold_mode::parametric;
  if (s == "empirical") return filter_config::threshold_mode::empirical;
  if (s == "off") return filter_config::threshold_mode::off;
  raise(errc::format_error, "threshold mode must be parametric, empirical, or off");
}

int cmd_ingest(const std::string& input_dir, const std::string& lang_name,
               const std::string& output, bool no_normalize) {
  language lang = parse_language(lang_name);
  std::vector<std::string> files = detail::list_srt_files(input_dir);
  std::vector<subtitle_document> docs;
  std::int64_t failures = 0;
  for (const auto& path : files) {
    try {
      subtitle_document doc = load_document(path, lang);
      if (!no_normalize) doc = normalize_document(doc).first;
      docs.push_back(std::move(doc));
    } catch (const error& e) {
      ++failures;
      std::cerr << "skip: " << e.what() << "\n";
    }
  }
  std::ostringstream os;
  write_documents(os, docs);
  write_file(output, os.str());
  std::cerr << "ingested " << docs.size() << "/" << files.size() << " documents ("
            << failures << " failed)\n";
  if (docs.empty()) raise(errc::insufficient_data, "no documents ingested");
  return 0;
}

std::vector<subtitle_document> load_docs(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(errc::resource_error, "cannot open " + path);
  return read_documents(f);
}

int cmd_align_docs(const std::string& en_path, const std::string& ja_path,
                   const std::string& output, const docalign_config& cfg) {
  auto en = load_docs(en_path);
  auto ja = load_docs(ja_path);
  docalign_stats stats;
  auto pairs = align_documents(en, ja, cfg, &stats);
  detail::write_pairs_tsv(output, pairs);
  std::cerr << "candidates " << stats.candidates << ", retained " << stats.retained << "\n";
  return 0;
}

int cmd_align_captions(const std::string& en_path, const std::string& ja_path,
                       const std::string& pairs_path, const std::string& output,
                       const resource_paths& res, double window_s) {
  auto en = load_docs(en_path);
  auto ja = load_docs(ja_path);
  auto pairs = detail::read_pairs_tsv(pairs_path);
  if (res.lexicon.empty() || res.embeddings.empty())
    raise(errc::resource_error, "--lexicon and --embeddings are required");
  lexicon lex = lexicon::load(res.lexicon);
  embedding_table table = embedding_table::load(res.embeddings);
  english_content_extractor en_ex =
      res.stopwords_en.empty() ? english_content_extractor()
                               : english_content_extractor::from_file(res.stopwords_en);
  japanese_content_extractor ja_ex(
      lex, res.particles_ja.empty() ? default_japanese_particles()
                                    : japanese_content_extractor::load_particles(res.particles_ja));
  capalign_resources cap{en_ex, ja_ex, lex, table};

  std::unordered_map<std::string, const subtitle_document*> en_by_id, ja_by_id;
  for (const auto& d : en) en_by_id[d.doc_id] = &d;
  for (const auto& d : ja) ja_by_id[d.doc_id] = &d;
  std::vector<caption_match> matches;
  for (const auto& p : pairs) {
    auto ei = en_by_id.find(p.en_doc_id);
    auto ji = ja_by_id.find(p.ja_doc_id);
    if (ei == en_by_id.end() || ji == ja_by_id.end()) continue;
    auto ms = align_captions(p, *ei->second, *ji->second, window_s, cap);
    matches.insert(matches.end(), ms.begin(), ms.end());
  }
  detail::write_matches_tsv(output, matches);
  std::cerr << "matches " << matches.size() << "\n";
  return 0;
}

int cmd_filter(const std::string& matches_path, const std::string& out_dir,
               const filter_config& cfg) {
  auto matches = detail::read_matches_tsv(matches_path);
  filter_stage_counts counts;
  parallel_corpus corpus = build_corpus(matches, cfg, &counts);
  fs::create_directories(out_dir);
  std::ostringstream bodies[3], scores[3];
  for (size_t i = 0; i < corpus.pairs.size(); ++i) {
    int s = static_cast<int>(corpus.split[i]);
    bodies[s] << corpus.pairs[i].en_text << '\t' << corpus.pairs[i].ja_text << '\n';
    scores[s] << detail::format_double(corpus.pairs[i].similarity) << '\n';
  }
  const char* names[3] = {"train", "val", "test"};
  for (int s = 0; s < 3; ++s) {
    write_file((fs::path(out_dir) / names[s]).string(), bodies[s].str());
    write_file((fs::path(out_dir) / (std::string(names[s]) + ".scores")).string(),
               scores[s].str());
  }
  std::cerr << "in " << counts.in << " -> threshold " << counts.after_threshold << " -> dedup "
            << counts.after_dedup << " -> language " << counts.after_language_filter << "\n";
  return 0;
}

int cmd_stats(const std::string& run_dir) {
  std::ifstream f(fs::path(run_dir) / "stats.json");
  if (!f) raise(errc::resource_error, "no stats.json under " + run_dir + " (run first)");
  nlohmann::json meta;
  f >> meta;
  stage_stats stats;
  from_json(meta.at("stats"), stats);
  std::cout << stats_report(stats);
  return 0;
}

int cmd_audit(const std::string& run_dir) {
  audit_result audit = audit_run_dir(run_dir);
  std::cout << "pairs checked:  " << audit.pairs_checked << "\n"
            << "matches checked: " << audit.matches_checked << "\n"
            << "corpus lines:   " << audit.corpus_lines_checked << "\n";
  if (audit.ok) {
    std::cout << "audit: OK\n";
    return 0;
  }
  for (const auto& v : audit.violations) std::cout << "violation: " << v << "\n";
  std::cout << "audit: FAILED\n";
  return 1;
}

int cmd_bench(const std::string& phrases_path, const resource_paths& res, size_t captions,
              int seeds, const corruption_spec& base, double window_s) {
  phrase_table table = phrase_table::load(phrases_path);
  if (res.lexicon.empty() || res.embeddings.empty())
    raise(errc::resource_error, "--lexicon and --embeddings are required");
  lexicon lex = lexicon::load(res.lexicon);
  embedding_table emb = embedding_table::load(res.embeddings);
  english_content_extractor en_ex =
      res.stopwords_en.empty() ? english_content_extractor()
                               : english_content_extractor::from_file(res.stopwords_en);
  japanese_content_extractor ja_ex(
      lex, res.particles_ja.empty() ? default_japanese_particles()
                                    : japanese_content_extractor::load_particles(res.particles_ja));
  capalign_resources cap{en_ex, ja_ex, lex, emb};

  std::optional<word_set> dict;
  std::optional<error_model> em;
  std::optional<language_model> lm;
  std::vector<std::pair<std::string, std::vector<std::string>>> corpus;
  if (!res.dictionary.empty() && !res.misspellings.empty() && !res.unigrams.empty() &&
      !res.bigrams.empty()) {
    dict = word_set::load(res.dictionary);
    corpus = load_misspelling_corpus(res.misspellings);
    em = train_error_model(corpus);
    lm = train_language_model(res.unigrams, res.bigrams);
  }
  bench_resources bres{cap, em ? &*em : nullptr, lm ? &*lm : nullptr, dict ? &*dict : nullptr};

  std::printf("seed\tshift_s\trate\tdrop\tocr\tmisspell\tprecision\trecall\tf1\n");
  double psum = 0, rsum = 0, fsum = 0;
  for (int s = 0; s < seeds; ++s) {
    corruption_spec spec = base;
    spec.seed = base.seed + static_cast<std::uint64_t>(s);
    bench_result r = run_bench(table, captions, spec, bres, corpus, window_s);
    std::printf("%llu\t%g\t%g\t%g\t%g\t%g\t%.4f\t%.4f\t%.4f\n",
                static_cast<unsigned long long>(spec.seed), spec.time_shift_s,
                spec.rate_factor, spec.drop_rate, spec.ocr_noise_rate, spec.misspell_rate,
                r.score.precision, r.score.recall, r.score.f1);
    psum += r.score.precision;
    rsum += r.score.recall;
    fsum += r.score.f1;
  }
  if (seeds > 1)
    std::printf("mean\t-\t-\t-\t-\t-\t%.4f\t%.4f\t%.4f\n", psum / seeds, rsum / seeds,
                fsum / seeds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subalign - mines a parallel corpus from raw bilingual subtitle files"};
  app.require_subcommand(1);

  // ingest
  std::string in_dir, lang_name = "en", out_file;
  bool no_normalize = false;
  auto* ingest = app.add_subcommand("ingest", "parse raw .srt files into the document format");
  ingest->add_option("--input", in_dir, "directory of .srt files")->required();
  ingest->add_option("--language", lang_name, "en or ja")->required();
  ingest->add_option("--output", out_file, "output .docs file")->required();
  ingest->add_flag("--no-normalize", no_normalize, "skip caption text normalization");

  // align-docs
  std::string en_docs, ja_docs, pairs_out;
  docalign_config dcfg;
  auto* adocs = app.add_subcommand("align-docs", "pair documents covering the same video");
  adocs->add_option("--en-docs", en_docs)->required();
  adocs->add_option("--ja-docs", ja_docs)->required();
  adocs->add_option("--output", pairs_out)->required();
  adocs->add_option("--title-threshold", dcfg.title_threshold);
  adocs->add_option("--hamming-threshold", dcfg.hamming_threshold);
  adocs->add_option("--shift-range", dcfg.shift_range_s);

  // align-captions
  std::string pairs_in, matches_out;
  resource_paths cap_res;
  double window_s = 12.5;
  auto* acaps = app.add_subcommand("align-captions", "match captions inside document pairs");
  acaps->add_option("--en-docs", en_docs)->required();
  acaps->add_option("--ja-docs", ja_docs)->required();
  acaps->add_option("--pairs", pairs_in)->required();
  acaps->add_option("--output", matches_out)->required();
  acaps->add_option("--lexicon", cap_res.lexicon)->required();
  acaps->add_option("--embeddings", cap_res.embeddings)->required();
  acaps->add_option("--stopwords", cap_res.stopwords_en);
  acaps->add_option("--particles", cap_res.particles_ja);
  acaps->add_option("--window", window_s, "time window in seconds");

  // filter
  std::string matches_in, filter_out;
  filter_config fcfg;
  std::string mode_name = "parametric";
  auto* filter_cmd = app.add_subcommand("filter", "cut, dedup, and split matches into a corpus");
  filter_cmd->add_option("--matches", matches_in)->required();
  filter_cmd->add_option("--out-dir", filter_out)->required();
  filter_cmd->add_option("--percentile-z", fcfg.percentile_z);
  filter_cmd->add_option("--threshold-mode", mode_name, "parametric, empirical, or off");
  filter_cmd->add_option("--val-size", fcfg.val_size);
  filter_cmd->add_option("--test-size", fcfg.test_size);
  filter_cmd->add_option("--seed", fcfg.seed);

  // run
  std::string config_path, run_en_dir, run_ja_dir, run_out_dir;
  unsigned workers = 0;
  bool resume = false;
  resource_paths run_res;
  auto* run_cmd = app.add_subcommand("run", "full pipeline from two directories to a corpus");
  run_cmd->add_option("--config", config_path, "JSON config file");
  run_cmd->add_option("--en-dir", run_en_dir);
  run_cmd->add_option("--ja-dir", run_ja_dir);
  run_cmd->add_option("--out-dir", run_out_dir);
  run_cmd->add_option("--workers", workers);
  run_cmd->add_flag("--resume", resume, "reuse existing checkpoints");
  run_cmd->add_option("--dictionary", run_res.dictionary);
  run_cmd->add_option("--misspellings", run_res.misspellings);
  run_cmd->add_option("--unigrams", run_res.unigrams);
  run_cmd->add_option("--bigrams", run_res.bigrams);
  run_cmd->add_option("--lexicon", run_res.lexicon);
  run_cmd->add_option("--embeddings", run_res.embeddings);
  run_cmd->add_option("--stopwords", run_res.stopwords_en);
  run_cmd->add_option("--particles", run_res.particles_ja);

  // stats / audit
  std::string run_dir;
  auto* stats_cmd = app.add_subcommand("stats", "print the report for a completed run");
  stats_cmd->add_option("--run-dir", run_dir)->required();
  auto* audit_cmd = app.add_subcommand("audit", "re-verify thresholds over a run's checkpoints");
  audit_cmd->add_option("--run-dir", run_dir)->required();

  // bench
  std::string phrases_path;
  corruption_spec spec;
  size_t bench_captions = 50;
  int bench_seeds = 1;
  double bench_window = 12.5;
  resource_paths bench_res;
  auto* bench_cmd = app.add_subcommand("bench", "synthetic ground-truth alignment benchmark");
  bench_cmd->add_option("--phrases", phrases_path)->required();
  bench_cmd->add_option("--lexicon", bench_res.lexicon)->required();
  bench_cmd->add_option("--embeddings", bench_res.embeddings)->required();
  bench_cmd->add_option("--dictionary", bench_res.dictionary);
  bench_cmd->add_option("--misspellings", bench_res.misspellings);
  bench_cmd->add_option("--unigrams", bench_res.unigrams);
  bench_cmd->add_option("--bigrams", bench_res.bigrams);
  bench_cmd->add_option("--stopwords", bench_res.stopwords_en);
  bench_cmd->add_option("--particles", bench_res.particles_ja);
  bench_cmd->add_option("--captions", bench_captions);
  bench_cmd->add_option("--seeds", bench_seeds);
  bench_cmd->add_option("--seed", spec.seed, "base seed");
  bench_cmd->add_option("--shift", spec.time_shift_s, "time shift in seconds");
  bench_cmd->add_option("--rate", spec.rate_factor, "speed ratio");
  bench_cmd->add_option("--drop", spec.drop_rate, "caption drop rate");
  bench_cmd->add_option("--ocr", spec.ocr_noise_rate, "character noise rate");
  bench_cmd->add_option("--misspell", spec.misspell_rate, "word misspelling rate");
  bench_cmd->add_option("--window", bench_window);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return cmd_ingest(in_dir, lang_name, out_file, no_normalize);
    if (adocs->parsed()) return cmd_align_docs(en_docs, ja_docs, pairs_out, dcfg);
    if (acaps->parsed())
      return cmd_align_captions(en_docs, ja_docs, pairs_in, matches_out, cap_res, window_s);
    if (filter_cmd->parsed()) {
      fcfg.mode = parse_threshold_mode(mode_name);
      return cmd_filter(matches_in, filter_out, fcfg);
    }
    if (run_cmd->parsed()) {
      pipeline_config cfg;
      if (!config_path.empty()) cfg = pipeline_config::from_json_file(config_path);
      if (!run_en_dir.empty()) cfg.en_dir = run_en_dir;
      if (!run_ja_dir.empty()) cfg.ja_dir = run_ja_dir;
      if (!run_out_dir.empty()) cfg.out_dir = run_out_dir;
      if (workers > 0) cfg.workers = workers;
      if (resume) cfg.resume = true;
      auto merge = [](std::string& dst, const std::string& src) {
        if (!src.empty()) dst = src;
      };
      merge(cfg.resources.dictionary, run_res.dictionary);
      merge(cfg.resources.misspellings, run_res.misspellings);
      merge(cfg.resources.unigrams, run_res.unigrams);
      merge(cfg.resources.bigrams, run_res.bigrams);
      merge(cfg.resources.lexicon, run_res.lexicon);
      merge(cfg.resources.embeddings, run_res.embeddings);
      merge(cfg.resources.stopwords_en, run_res.stopwords_en);
      merge(cfg.resources.particles_ja, run_res.particles_ja);
      pipeline_result result = run_pipeline(cfg);
      for (const auto& w : result.warnings) std::cerr << "skip: " << w << "\n";
      std::cout << stats_report(result.stats);
      return 0;
    }
    if (stats_cmd->parsed()) return cmd_stats(run_dir);
    if (audit_cmd->parsed()) return cmd_audit(run_dir);
    if (bench_cmd->parsed())
      return cmd_bench(phrases_path, bench_res, bench_captions, bench_seeds, spec, bench_window);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
