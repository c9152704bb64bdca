#include <subalign/filter.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <string>

#include "oracles.hpp"
#include "testutil.hpp"

using namespace subalign;

namespace {

TEST(SimilarityThreshold, FormulaArithmetic) {
  // mu = 0.5, population sigma = 0.1
  std::vector<double> scores = {0.4, 0.6};
  EXPECT_NEAR(similarity_threshold(scores), 0.5 + 0.9945 * 0.1, 1e-12);
}

TEST(SimilarityThreshold, DegenerateInputs) {
  try {
    similarity_threshold({0.5, 0.5, 0.5});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_input);
  }
  EXPECT_THROW(similarity_threshold({0.5}), error);
}

TEST(SimilarityThreshold, TracksEmpiricalPercentileOnNormals) {
  det_rng rng(101);
  std::vector<double> scores(100000);
  for (double& s : scores) s = rng.normal();
  double parametric = similarity_threshold(scores);
  double empirical = oracle::empirical_percentile(scores, 0.84);
  EXPECT_NEAR(parametric, empirical, 0.02);
}

TEST(LanguageFilter, SpecExamples) {
  EXPECT_TRUE(language_filter("hello there", "こんにちは"));
  EXPECT_FALSE(language_filter("こんにちは", "こんにちは"));
  EXPECT_FALSE(language_filter("ok", "abc def ghi"));
}

TEST(LanguageFilter, Boundaries) {
  // Letterless Japanese side passes its half.
  EXPECT_TRUE(language_filter("hello", "123 456"));
  // Digits and ASCII punctuation count as roman on the English side.
  EXPECT_TRUE(language_filter("it's 1997!", "こんにちは"));
  // Scattered kana pushes the English ratio below 90%.
  EXPECT_FALSE(language_filter("aあbかcさdたeな", "こんにちは"));
  // One Latin letter among nine kana letters is exactly 10% and passes.
  EXPECT_TRUE(language_filter("hello", "あいうえおかきくけx"));
  // Two Latin letters among eight kana letters is 20% and fails.
  EXPECT_FALSE(language_filter("hello", "あいうえおかきくxy"));
}

caption_match mk(const std::string& en, const std::string& ja, double sim) {
  caption_match m;
  m.en_doc_id = "e";
  m.ja_doc_id = "j";
  m.ja_index = 1;
  m.en_index = 1;
  m.similarity = sim;
  m.en_text = en;
  m.ja_text = ja;
  return m;
}

TEST(Dedup, FirstOccurrenceWins) {
  auto out = dedup({mk("a", "あ", 0.9), mk("a", "あ", 0.5), mk("b", "い", 0.7)});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_DOUBLE_EQ(out[0].similarity, 0.9);
}

TEST(Dedup, MultiReferenceSurvives) {
  auto out = dedup({mk("what?", "何だ", 0.9), mk("what?", "なんだって", 0.8)});
  EXPECT_EQ(out.size(), 2u);
}

TEST(Dedup, EmptyInput) { EXPECT_TRUE(dedup({}).empty()); }

std::vector<caption_match> synthetic_matches(size_t n, det_rng& rng) {
  std::vector<caption_match> matches;
  matches.reserve(n);
  for (size_t i = 0; i < n; ++i)
    matches.push_back(
        mk("sentence " + std::to_string(i), "文" + std::to_string(i), rng.normal()));
  return matches;
}

TEST(BuildCorpus, NormalTailSurvivalFraction) {
  det_rng rng(103);
  auto matches = synthetic_matches(10000, rng);
  filter_config cfg;
  cfg.val_size = 10;
  cfg.test_size = 10;
  auto corpus = build_corpus(matches, cfg);
  double fraction = static_cast<double>(corpus.pairs.size()) / 10000.0;
  EXPECT_NEAR(fraction, 0.16, 0.02);
}

TEST(BuildCorpus, AllFailingLanguageFilterIsInsufficient) {
  std::vector<caption_match> matches;
  det_rng rng(107);
  for (int i = 0; i < 100; ++i)
    matches.push_back(mk("日本語テキスト" + std::to_string(i), "x", rng.normal()));
  filter_config cfg;
  cfg.val_size = 1;
  cfg.test_size = 1;
  try {
    build_corpus(matches, cfg);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::insufficient_data);
  }
}

TEST(BuildCorpus, FixedSeedIsDeterministic) {
  det_rng rng(109);
  auto matches = synthetic_matches(3000, rng);
  filter_config cfg;
  cfg.val_size = 50;
  cfg.test_size = 51;
  cfg.seed = 99;
  auto a = build_corpus(matches, cfg);
  auto b = build_corpus(matches, cfg);
  ASSERT_EQ(a.pairs.size(), b.pairs.size());
  for (size_t i = 0; i < a.pairs.size(); ++i) {
    EXPECT_EQ(a.split[i], b.split[i]);
    EXPECT_EQ(a.pairs[i].en_text, b.pairs[i].en_text);
  }
}

TEST(BuildCorpus, SplitsDisjointCoverAndSized) {
  det_rng rng(113);
  auto matches = synthetic_matches(3000, rng);
  filter_config cfg;
  cfg.val_size = 40;
  cfg.test_size = 41;
  auto corpus = build_corpus(matches, cfg);
  size_t val = 0, test = 0, train = 0;
  for (auto s : corpus.split) {
    if (s == split_id::val) ++val;
    if (s == split_id::test) ++test;
    if (s == split_id::train) ++train;
  }
  EXPECT_EQ(val, 40u);
  EXPECT_EQ(test, 41u);
  EXPECT_EQ(train + val + test, corpus.pairs.size());
}

TEST(BuildCorpus, PostconditionsHold) {
  det_rng rng(127);
  auto matches = synthetic_matches(2000, rng);
  // Sprinkle duplicates and language-filter failures.
  for (int i = 0; i < 100; ++i) matches.push_back(matches[i]);
  for (int i = 0; i < 50; ++i) matches.push_back(mk("すべて日本語", "x", 5.0));
  filter_config cfg;
  cfg.val_size = 10;
  cfg.test_size = 10;
  auto corpus = build_corpus(matches, cfg);
  ASSERT_TRUE(corpus.threshold_used.has_value());
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& p : corpus.pairs) {
    EXPECT_GE(p.similarity, *corpus.threshold_used);
    EXPECT_TRUE(language_filter(p.en_text, p.ja_text));
    EXPECT_TRUE(seen.insert({p.en_text, p.ja_text}).second);
  }
}

TEST(BuildCorpus, ContractingPipeline) {
  det_rng rng(131);
  auto matches = synthetic_matches(1000, rng);
  filter_config cfg;
  cfg.val_size = 5;
  cfg.test_size = 5;
  filter_stage_counts counts;
  auto corpus = build_corpus(matches, cfg, &counts);
  EXPECT_LE(counts.after_threshold, counts.in);
  EXPECT_LE(counts.after_dedup, counts.after_threshold);
  EXPECT_LE(counts.after_language_filter, counts.after_dedup);
  std::set<std::pair<std::string, std::string>> inputs;
  for (const auto& m : matches) inputs.insert({m.en_text, m.ja_text});
  for (const auto& p : corpus.pairs) EXPECT_TRUE(inputs.count({p.en_text, p.ja_text}));
}

TEST(Filters, OrderPermutationYieldsSameSet) {
  det_rng rng(137);
  std::vector<caption_match> matches;
  for (int i = 0; i < 400; ++i) {
    int key = static_cast<int>(rng.below(120));
    bool good_lang = rng.uniform() < 0.7;
    matches.push_back(mk(good_lang ? "text " + std::to_string(key) : "テキスト",
                         "文" + std::to_string(key), rng.normal()));
  }
  auto lang_then_dedup = [&] {
    std::vector<caption_match> tmp;
    for (const auto& m : matches)
      if (language_filter(m.en_text, m.ja_text)) tmp.push_back(m);
    return dedup(tmp);
  }();
  auto dedup_then_lang = [&] {
    std::vector<caption_match> tmp = dedup(matches);
    std::vector<caption_match> out;
    for (const auto& m : tmp)
      if (language_filter(m.en_text, m.ja_text)) out.push_back(m);
    return out;
  }();
  std::set<std::pair<std::string, std::string>> a, b;
  for (const auto& m : lang_then_dedup) a.insert({m.en_text, m.ja_text});
  for (const auto& m : dedup_then_lang) b.insert({m.en_text, m.ja_text});
  EXPECT_EQ(a, b);
}

TEST(BuildCorpus, EmpiricalAndOffModes) {
  det_rng rng(139);
  auto matches = synthetic_matches(5000, rng);
  filter_config cfg;
  cfg.val_size = 5;
  cfg.test_size = 5;
  cfg.mode = filter_config::threshold_mode::empirical;
  auto corpus = build_corpus(matches, cfg);
  ASSERT_TRUE(corpus.threshold_used.has_value());
  std::vector<double> scores;
  for (const auto& m : matches) scores.push_back(m.similarity);
  EXPECT_NEAR(*corpus.threshold_used, oracle::empirical_percentile(scores, 0.84), 1e-12);

  cfg.mode = filter_config::threshold_mode::off;
  auto all = build_corpus(matches, cfg);
  EXPECT_FALSE(all.threshold_used.has_value());
  EXPECT_EQ(all.pairs.size(), matches.size());  // unique texts, all roman
}

}  // namespace
