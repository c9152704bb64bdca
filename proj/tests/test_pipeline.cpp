#include <subalign/pipeline.hpp>
#include <subalign/synthbench.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "testutil.hpp"

using namespace subalign;
namespace fs = std::filesystem;

namespace {

// Writes a three-episode bilingual fixture tree from the synthetic generator
// and the manifest of planted (normalized) text pairs.
struct planted_fixture {
  std::set<std::pair<std::string, std::string>> expected_pairs;  // (en, ja) normalized
  size_t planted = 0;
};

planted_fixture write_fixture(const std::string& en_dir, const std::string& ja_dir,
                              int episodes, size_t captions, const corruption_spec& base) {
  const auto& toy = testutil::toy_resources::instance();
  fs::create_directories(en_dir);
  fs::create_directories(ja_dir);
  planted_fixture fixture;
  for (int ep = 1; ep <= episodes; ++ep) {
    corruption_spec spec = base;
    spec.seed = base.seed + static_cast<std::uint64_t>(ep);
    auto gen = generate_pair(toy.phrases, captions, spec, toy.misspellings);
    std::string stem = "fixture show s01e0" + std::to_string(ep);
    write_file(en_dir + "/" + stem + ".en.srt", serialize_srt(gen.en_doc.captions));
    write_file(ja_dir + "/" + stem + ".ja.srt", serialize_srt(gen.ja_doc.captions));
    for (const auto& [ja_idx, en_idx] : gen.truth.planted) {
      std::string en_text =
          normalize_caption(gen.en_doc.captions[en_idx - 1].text, language::en).first;
      std::string ja_text =
          normalize_caption(gen.ja_doc.captions[ja_idx - 1].text, language::ja).first;
      fixture.expected_pairs.insert({en_text, ja_text});
      ++fixture.planted;
    }
  }
  return fixture;
}

pipeline_config fixture_config(const std::string& en_dir, const std::string& ja_dir,
                               const std::string& out_dir) {
  pipeline_config cfg;
  cfg.en_dir = en_dir;
  cfg.ja_dir = ja_dir;
  cfg.out_dir = out_dir;
  cfg.resources.dictionary = testutil::data_path("dictionary.txt");
  cfg.resources.misspellings = testutil::data_path("misspellings.txt");
  cfg.resources.unigrams = testutil::data_path("unigrams.tsv");
  cfg.resources.bigrams = testutil::data_path("bigrams.tsv");
  cfg.resources.lexicon = testutil::data_path("lexicon.tsv");
  cfg.resources.embeddings = testutil::data_path("embeddings.txt");
  cfg.resources.stopwords_en = testutil::data_path("stopwords_en.txt");
  cfg.resources.particles_ja = testutil::data_path("particles_ja.txt");
  cfg.filter.mode = filter_config::threshold_mode::off;
  cfg.filter.val_size = 3;
  cfg.filter.test_size = 3;
  cfg.filter.seed = 5;
  return cfg;
}

std::set<std::pair<std::string, std::string>> corpus_pairs_on_disk(const std::string& out_dir) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const char* name : {"train", "val", "test"}) {
    std::ifstream f(fs::path(out_dir) / name);
    std::string line;
    while (std::getline(f, line)) {
      auto fields = split(line, '\t');
      if (fields.size() == 2) pairs.insert({fields[0], fields[1]});
    }
  }
  return pairs;
}

std::string slurp(const fs::path& p) { return read_file_bytes(p.string()); }

TEST(Pipeline, FixtureRecoversEveryPlantedPair) {
  testutil::temp_dir tmp("e2e");
  corruption_spec clean;
  clean.seed = 500;
  auto fixture = write_fixture(tmp.path("en"), tmp.path("ja"), 3, 25, clean);
  auto cfg = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("out"));
  auto result = run_pipeline(cfg);

  auto on_disk = corpus_pairs_on_disk(tmp.path("out"));
  for (const auto& expected : fixture.expected_pairs)
    EXPECT_TRUE(on_disk.count(expected)) << expected.first << " / " << expected.second;

  const auto& s = result.stats;
  EXPECT_EQ(s.en_files, 3);
  EXPECT_EQ(s.ja_files, 3);
  EXPECT_EQ(s.doc_pairs, 3);
  // Counter chain is monotone for the filtering stages.
  EXPECT_LE(s.en_docs_normalized, s.en_docs);
  EXPECT_LE(s.after_threshold, s.matches_in);
  EXPECT_LE(s.after_dedup, s.after_threshold);
  EXPECT_LE(s.after_language_filter, s.after_dedup);
  EXPECT_EQ(s.train_size + s.val_size + s.test_size, s.after_language_filter);
  EXPECT_EQ(s.val_size, 3);
  EXPECT_EQ(s.test_size, 3);
}

TEST(Pipeline, EmptyInputDirectoriesRaiseInsufficientData) {
  testutil::temp_dir tmp("empty");
  fs::create_directories(tmp.path("en"));
  fs::create_directories(tmp.path("ja"));
  auto cfg = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("out"));
  try {
    run_pipeline(cfg);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::insufficient_data);
  }
}

TEST(Pipeline, MalformedFilesAreCountedNotFatal) {
  testutil::temp_dir tmp("mixed");
  corruption_spec clean;
  clean.seed = 600;
  write_fixture(tmp.path("en"), tmp.path("ja"), 2, 20, clean);
  write_file(tmp.path("en") + "/broken.en.srt", "not a subtitle file\n");
  auto cfg = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("out"));
  auto result = run_pipeline(cfg);
  EXPECT_EQ(result.stats.en_files, 3);
  EXPECT_EQ(result.stats.en_docs, 2);
  EXPECT_EQ(result.stats.en_load_failures, 1);
  EXPECT_EQ(result.warnings.size(), 1u);
}

TEST(Pipeline, RerunIsByteIdentical) {
  testutil::temp_dir tmp("det");
  corruption_spec spec;
  spec.seed = 700;
  spec.ocr_noise_rate = 0.01;
  spec.misspell_rate = 0.05;
  write_fixture(tmp.path("en"), tmp.path("ja"), 3, 25, spec);
  auto cfg1 = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("out1"));
  auto cfg2 = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("out2"));
  run_pipeline(cfg1);
  run_pipeline(cfg2);
  for (const char* name : {"train", "val", "test", "train.scores", "val.scores",
                           "test.scores", "stats.json", "report.txt"}) {
    EXPECT_EQ(slurp(fs::path(tmp.path("out1")) / name), slurp(fs::path(tmp.path("out2")) / name))
        << name;
  }
}

TEST(Pipeline, ResumeFromCheckpointsIsIdentical) {
  testutil::temp_dir tmp("resume");
  corruption_spec spec;
  spec.seed = 800;
  spec.ocr_noise_rate = 0.01;
  write_fixture(tmp.path("en"), tmp.path("ja"), 3, 25, spec);

  auto cfg_full = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("full"));
  run_pipeline(cfg_full);

  // Seed a fresh run directory with only the first two stage checkpoints.
  auto cfg_resume = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("resumed"));
  fs::create_directories(fs::path(tmp.path("resumed")) / "checkpoints");
  for (const auto& entry : fs::directory_iterator(fs::path(tmp.path("full")) / "checkpoints")) {
    std::string name = entry.path().filename().string();
    if (name.rfind("01_", 0) == 0 || name.rfind("02_", 0) == 0)
      fs::copy_file(entry.path(), fs::path(tmp.path("resumed")) / "checkpoints" / name);
  }
  cfg_resume.resume = true;
  run_pipeline(cfg_resume);

  for (const char* name : {"train", "val", "test", "train.scores", "val.scores",
                           "test.scores", "stats.json", "report.txt"}) {
    EXPECT_EQ(slurp(fs::path(tmp.path("full")) / name),
              slurp(fs::path(tmp.path("resumed")) / name))
        << name;
  }

  // Full-resume over a completed directory is also stable.
  run_pipeline([&] {
    auto cfg = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("full"));
    cfg.resume = true;
    return cfg;
  }());
  EXPECT_EQ(slurp(fs::path(tmp.path("full")) / "train"),
            slurp(fs::path(tmp.path("resumed")) / "train"));
}

TEST(Pipeline, WorkerCountDoesNotChangeOutputs) {
  testutil::temp_dir tmp("workers");
  corruption_spec spec;
  spec.seed = 850;
  write_fixture(tmp.path("en"), tmp.path("ja"), 3, 20, spec);
  auto cfg1 = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("w1"));
  auto cfg4 = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("w4"));
  cfg4.workers = 4;
  run_pipeline(cfg1);
  run_pipeline(cfg4);
  for (const char* name : {"train", "val", "test", "stats.json"})
    EXPECT_EQ(slurp(fs::path(tmp.path("w1")) / name), slurp(fs::path(tmp.path("w4")) / name))
        << name;
}

TEST(Pipeline, AuditPassesAndCatchesTampering) {
  testutil::temp_dir tmp("audit");
  corruption_spec spec;
  spec.seed = 900;
  spec.ocr_noise_rate = 0.02;
  write_fixture(tmp.path("en"), tmp.path("ja"), 3, 30, spec);
  auto cfg = fixture_config(tmp.path("en"), tmp.path("ja"), tmp.path("out"));
  cfg.filter.mode = filter_config::threshold_mode::parametric;
  cfg.filter.val_size = 2;
  cfg.filter.test_size = 2;
  run_pipeline(cfg);

  auto audit = audit_run_dir(tmp.path("out"));
  EXPECT_TRUE(audit.ok) << (audit.violations.empty() ? "" : audit.violations[0]);
  EXPECT_GT(audit.pairs_checked, 0);
  EXPECT_GT(audit.corpus_lines_checked, 0);

  // A foreign line in a split must be flagged.
  {
    std::ofstream f(fs::path(tmp.path("out")) / "train", std::ios::app);
    f << "bogus english\tbogus japanese\n";
  }
  auto tampered = audit_run_dir(tmp.path("out"));
  EXPECT_FALSE(tampered.ok);
}

TEST(CorpusStats, MultiReferenceAndLengths) {
  parallel_corpus corpus;
  corpus.pairs = {{"the cat eats", "猫が食べる", 1.0},
                  {"the cat eats", "猫は食べる", 0.9},
                  {"hello there friend", "こんにちは", 0.8}};
  corpus.split = {split_id::train, split_id::train, split_id::train};
  stage_stats stats;
  compute_corpus_stats(corpus, stats);
  EXPECT_EQ(stats.en_multi_reference, 1);
  EXPECT_EQ(stats.ja_multi_reference, 0);
  EXPECT_DOUBLE_EQ(stats.en_mean_length, 3.0);
  EXPECT_GT(stats.en_unique_tokens, 0);
}

TEST(CorpusStats, EmptyCorpusAllZero) {
  parallel_corpus corpus;
  stage_stats stats;
  compute_corpus_stats(corpus, stats);
  EXPECT_EQ(stats.en_unique_tokens, 0);
  EXPECT_DOUBLE_EQ(stats.en_mean_length, 0.0);
  EXPECT_EQ(stats.en_multi_reference, 0);
}

TEST(StatsReport, MentionsEveryStage) {
  stage_stats stats;
  stats.en_docs = 3;
  stats.matches = 42;
  std::string report = stats_report(stats);
  for (const char* needle : {"ingest", "normalize", "spellcheck", "docalign", "capalign",
                             "filter", "splits", "corpus"})
    EXPECT_NE(report.find(needle), std::string::npos) << needle;
}

TEST(PipelineConfig, JsonRoundTripAndValidation) {
  testutil::temp_dir tmp("cfg");
  std::string cfg_json = R"({
    "en_dir": ")" + tmp.path("en") + R"(",
    "ja_dir": ")" + tmp.path("ja") + R"(",
    "out_dir": ")" + tmp.path("out") + R"(",
    "normalize": {"rules": {"lowercase": {"enabled": false}}},
    "docalign": {"title_threshold": 0.8, "shift_range_s": 30},
    "capalign": {"window_s": 9.5},
    "filter": {"percentile_z": 0.9945, "val_size": 7, "test_size": 8, "seed": 3,
               "threshold_mode": "empirical"},
    "workers": 2
  })";
  write_file(tmp.path("cfg.json"), cfg_json);
  auto cfg = pipeline_config::from_json_file(tmp.path("cfg.json"));
  EXPECT_FALSE(cfg.normalize.lowercase);
  EXPECT_DOUBLE_EQ(cfg.docalign.title_threshold, 0.8);
  EXPECT_EQ(cfg.docalign.shift_range_s, 30);
  EXPECT_DOUBLE_EQ(cfg.capalign_window_s, 9.5);
  EXPECT_EQ(cfg.filter.val_size, 7u);
  EXPECT_EQ(cfg.filter.mode, filter_config::threshold_mode::empirical);
  EXPECT_EQ(cfg.workers, 2u);

  // Validation requires the directories to exist.
  EXPECT_THROW(cfg.validate(), error);
  fs::create_directories(tmp.path("en"));
  fs::create_directories(tmp.path("ja"));
  EXPECT_NO_THROW(cfg.validate());

  cfg.resources.lexicon = tmp.path("missing.tsv");
  EXPECT_THROW(cfg.validate(), error);
}

}  // namespace
