#include <subalign/capalign.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "oracles.hpp"
#include "testutil.hpp"

using namespace subalign;

namespace {

TEST(PorterStem, ClassicVectors) {
  EXPECT_EQ(porter_stem("cats"), "cat");
  EXPECT_EQ(porter_stem("running"), "run");
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("plotted"), "plot");
  EXPECT_EQ(porter_stem("motoring"), "motor");
  EXPECT_EQ(porter_stem("sing"), "sing");
  EXPECT_EQ(porter_stem("itemization"), "item");
  EXPECT_EQ(porter_stem("traditional"), "tradit");
  EXPECT_EQ(porter_stem("reference"), "refer");
  EXPECT_EQ(porter_stem("sky"), "sky");
  EXPECT_EQ(porter_stem("happiness"), "happi");
  EXPECT_EQ(porter_stem("filing"), "file");
  EXPECT_EQ(porter_stem("hopping"), "hop");
  EXPECT_EQ(porter_stem("falling"), "fall");
}

TEST(ExtractContentWords, EnglishStopwordsAndStems) {
  const auto& toy = testutil::toy_resources::instance();
  auto stems = toy.en_ex.extract("the cats are running");
  ASSERT_EQ(stems.size(), 2u);
  EXPECT_EQ(stems[0], "cat");
  EXPECT_EQ(stems[1], "run");
}

TEST(ExtractContentWords, EmptyInput) {
  const auto& toy = testutil::toy_resources::instance();
  EXPECT_TRUE(toy.en_ex.extract("").empty());
  EXPECT_TRUE(toy.ja_ex.extract("").empty());
}

TEST(ExtractContentWords, ParticlesOnlyJapanese) {
  const auto& toy = testutil::toy_resources::instance();
  EXPECT_TRUE(toy.ja_ex.extract("は が を").empty());
}

TEST(ExtractContentWords, JapaneseLongestMatchSegmentation) {
  const auto& toy = testutil::toy_resources::instance();
  auto stems = toy.ja_ex.extract("猫が魚を食べる");
  ASSERT_EQ(stems.size(), 3u);
  EXPECT_EQ(stems[0], "猫");
  EXPECT_EQ(stems[1], "魚");
  EXPECT_EQ(stems[2], "食べる");
}

TEST(TranslateStems, LexiconLookups) {
  lexicon lex;
  lex.entries["猫"] = {"cat"};
  lex.entries["食べる"] = {"eat"};
  EXPECT_EQ(translate_stems({"猫"}, lex), std::vector<std::string>{"cat"});
  // Unknown stems contribute nothing.
  auto out = translate_stems({"猫", "未知語"}, lex);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], "cat");
  EXPECT_TRUE(translate_stems({}, lex).empty());
}

TEST(TranslateStems, MultiWordGlossesFanOut) {
  lexicon lex;
  lex.entries["帰る"] = {"go back"};
  auto out = translate_stems({"帰る"}, lex);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], "go");
  EXPECT_EQ(out[1], "back");
}

embedding_table tiny_table() {
  embedding_table t;
  t.dim = 2;
  t.vectors["a"] = {1.0, 0.0};
  t.vectors["b"] = {0.0, 1.0};
  return t;
}

TEST(CaptionEmbedding, SingletonAndMean) {
  auto t = tiny_table();
  auto v1 = caption_embedding({"a"}, t);
  ASSERT_TRUE(v1.has_value());
  EXPECT_DOUBLE_EQ((*v1)[0], 1.0);
  EXPECT_DOUBLE_EQ((*v1)[1], 0.0);
  auto v2 = caption_embedding({"a", "b"}, t);
  ASSERT_TRUE(v2.has_value());
  EXPECT_DOUBLE_EQ((*v2)[0], 0.5);
  EXPECT_DOUBLE_EQ((*v2)[1], 0.5);
  EXPECT_FALSE(caption_embedding({"zzz-oov"}, t).has_value());
}

TEST(CaptionEmbedding, DuplicatesCountWithMultiplicity) {
  auto t = tiny_table();
  auto v = caption_embedding({"a", "a", "b"}, t);
  ASSERT_TRUE(v.has_value());
  EXPECT_DOUBLE_EQ((*v)[0], 2.0 / 3.0);
}

TEST(CaptionSimilarity, HandComputedFixture) {
  lexicon lex;
  lex.entries["猫"] = {"cat"};
  lex.entries["食べる"] = {"eat"};
  lex.entries["魚"] = {"fish"};
  embedding_table t;
  t.dim = 3;
  t.vectors["cat"] = {1.0, 0.0, 0.0};
  t.vectors["eat"] = {0.0, 1.0, 0.0};
  t.vectors["fish"] = {0.0, 0.0, 1.0};
  english_content_extractor en_ex;
  japanese_content_extractor ja_ex(lex);
  capalign_resources res{en_ex, ja_ex, lex, t};

  // ja mean (0.5, 0.5, 0); en mean (1/3, 1/3, 1/3); cosine = 2/sqrt(6).
  auto sim = caption_similarity("猫 食べる", "the cat eats fish", res);
  ASSERT_TRUE(sim.has_value());
  EXPECT_NEAR(*sim, 2.0 / std::sqrt(6.0), 1e-12);

  // Exact translation: identical means, cosine 1.
  auto exact = caption_similarity("猫が食べる", "the cat eats", res);
  ASSERT_TRUE(exact.has_value());
  EXPECT_NEAR(*exact, 1.0, 1e-12);

  // Orthogonal content.
  auto ortho = caption_similarity("猫", "they eat", res);
  ASSERT_TRUE(ortho.has_value());
  EXPECT_NEAR(*ortho, 0.0, 1e-12);

  // Untranslatable or unembeddable sides yield nothing.
  EXPECT_FALSE(caption_similarity("未知", "the cat", res).has_value());
  EXPECT_FALSE(caption_similarity("猫", "qqqq zzzz", res).has_value());
}

subtitle_document fixture_doc(language lang, const std::vector<std::string>& texts,
                              const std::vector<std::int64_t>& starts) {
  subtitle_document d;
  d.doc_id = lang == language::en ? "en" : "ja";
  d.title_raw = "t";
  d.lang = lang;
  for (size_t i = 0; i < texts.size(); ++i) {
    caption c;
    c.index = static_cast<int>(i) + 1;
    c.start_ms = starts[i];
    c.end_ms = starts[i] + 1500;
    c.text = texts[i];
    d.captions.push_back(std::move(c));
  }
  return d;
}

document_pair pair_with_shift(int shift_s) {
  document_pair p;
  p.en_doc_id = "en";
  p.ja_doc_id = "ja";
  p.title_similarity = 1.0;
  p.temporal_distance = 0.0;
  p.best_shift_s = shift_s;
  return p;
}

TEST(AlignCaptions, SynchronizedFixtureMatchesIdentity) {
  const auto& toy = testutil::toy_resources::instance();
  std::vector<std::string> ja_texts, en_texts;
  std::vector<std::int64_t> starts;
  for (size_t i = 0; i < 12; ++i) {
    ja_texts.push_back(toy.phrases.entries[i].first);
    en_texts.push_back(toy.phrases.entries[i].second);
    starts.push_back(1000 + 4000 * static_cast<std::int64_t>(i));
  }
  auto en = fixture_doc(language::en, en_texts, starts);
  auto ja = fixture_doc(language::ja, ja_texts, starts);
  auto matches = align_captions(pair_with_shift(0), en, ja, 10.0, toy.cap());
  ASSERT_EQ(matches.size(), 12u);
  for (const auto& m : matches) {
    EXPECT_EQ(m.ja_index, m.en_index);
    // The bench phrases carry a decoy English word, so true pairs score
    // high but not exactly 1.
    EXPECT_GT(m.similarity, 0.6);
  }
}

TEST(AlignCaptions, NothingInWindowMeansNoMatch) {
  const auto& toy = testutil::toy_resources::instance();
  auto en = fixture_doc(language::en, {toy.phrases.entries[0].second}, {100000});
  auto ja = fixture_doc(language::ja, {toy.phrases.entries[0].first}, {1000});
  EXPECT_TRUE(align_captions(pair_with_shift(0), en, ja, 10.0, toy.cap()).empty());
}

TEST(AlignCaptions, TieBreaksToSmallerTimeDifferenceThenLowerIndex) {
  const auto& toy = testutil::toy_resources::instance();
  const auto& [ja_text, en_text] = toy.phrases.entries[0];
  // Two identical English captions straddling the ja caption at -2 s and +2 s.
  auto en = fixture_doc(language::en, {en_text, en_text}, {8000, 12000});
  auto ja = fixture_doc(language::ja, {ja_text}, {10000});
  auto matches = align_captions(pair_with_shift(0), en, ja, 10.0, toy.cap());
  ASSERT_EQ(matches.size(), 1u);
  EXPECT_EQ(matches[0].en_index, 1);  // equal |dt|, lower index wins

  // Asymmetric straddle: the later caption is closer and wins.
  auto en2 = fixture_doc(language::en, {en_text, en_text}, {7000, 11000});
  auto matches2 = align_captions(pair_with_shift(0), en2, ja, 10.0, toy.cap());
  ASSERT_EQ(matches2.size(), 1u);
  EXPECT_EQ(matches2[0].en_index, 2);
}

TEST(AlignCaptions, ShiftAppliedToJapaneseStarts) {
  const auto& toy = testutil::toy_resources::instance();
  const auto& [ja_text, en_text] = toy.phrases.entries[0];
  auto en = fixture_doc(language::en, {en_text}, {20000});
  auto ja = fixture_doc(language::ja, {ja_text}, {35000});  // 15 s later
  // Without a shift the 12.5 s window misses; with best_shift -15 it hits.
  EXPECT_TRUE(align_captions(pair_with_shift(0), en, ja, 12.5, toy.cap()).empty());
  auto matches = align_captions(pair_with_shift(-15), en, ja, 12.5, toy.cap());
  ASSERT_EQ(matches.size(), 1u);
}

std::pair<subtitle_document, subtitle_document> random_doc_pair(det_rng& rng,
                                                                const phrase_table& phrases,
                                                                size_t max_captions) {
  size_t n_ja = 1 + rng.below(max_captions);
  size_t n_en = 1 + rng.below(max_captions);
  std::vector<std::string> ja_texts, en_texts;
  std::vector<std::int64_t> ja_starts, en_starts;
  std::int64_t t = 1000;
  for (size_t i = 0; i < n_ja; ++i) {
    const auto& e = phrases.entries[rng.below(phrases.entries.size())];
    ja_texts.push_back(e.first);
    t += 500 + static_cast<std::int64_t>(rng.below(6000));
    ja_starts.push_back(t);
  }
  t = 1000;
  for (size_t i = 0; i < n_en; ++i) {
    const auto& e = phrases.entries[rng.below(phrases.entries.size())];
    en_texts.push_back(e.second);
    t += 500 + static_cast<std::int64_t>(rng.below(6000));
    en_starts.push_back(t);
  }
  return {fixture_doc(language::en, en_texts, en_starts),
          fixture_doc(language::ja, ja_texts, ja_starts)};
}

TEST(AlignCaptions, PropertyMatchesBruteForceOracle) {
  const auto& toy = testutil::toy_resources::instance();
  det_rng rng(83);
  for (int iter = 0; iter < 25; ++iter) {
    auto [en, ja] = random_doc_pair(rng, toy.phrases, 40);
    int shift = static_cast<int>(rng.below(7)) - 3;
    double window = 5.0 + rng.uniform() * 10.0;
    auto got = align_captions(pair_with_shift(shift), en, ja, window, toy.cap());
    auto expected = oracle::align_captions(pair_with_shift(shift), en, ja, window, toy.cap());
    ASSERT_EQ(got.size(), expected.size()) << "iter " << iter;
    for (size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].ja_index, expected[i].ja_index);
      EXPECT_EQ(got[i].en_index, expected[i].en_index);
      EXPECT_DOUBLE_EQ(got[i].similarity, expected[i].similarity);
    }
  }
}

TEST(AlignCaptions, PropertyWindowBoundHolds) {
  const auto& toy = testutil::toy_resources::instance();
  det_rng rng(89);
  for (int iter = 0; iter < 25; ++iter) {
    auto [en, ja] = random_doc_pair(rng, toy.phrases, 30);
    int shift = static_cast<int>(rng.below(5)) - 2;
    double window = 4.0 + rng.uniform() * 8.0;
    auto matches = align_captions(pair_with_shift(shift), en, ja, window, toy.cap());
    for (const auto& m : matches) {
      const auto& jc = ja.captions[m.ja_index - 1];
      const auto& ec = en.captions[m.en_index - 1];
      double dt = std::abs(static_cast<double>(ec.start_ms - (jc.start_ms + shift * 1000)));
      ASSERT_LE(dt, window * 1000.0);
    }
  }
}

TEST(AlignCaptions, PropertyScalingInvariance) {
  const auto& toy = testutil::toy_resources::instance();
  embedding_table scaled = toy.table;
  for (auto& [w, v] : scaled.vectors)
    for (double& x : v) x *= 2.0;  // power of two keeps the arithmetic exact
  japanese_content_extractor ja_ex(toy.lex);
  capalign_resources res_scaled{toy.en_ex, ja_ex, toy.lex, scaled};

  det_rng rng(97);
  for (int iter = 0; iter < 20; ++iter) {
    auto [en, ja] = random_doc_pair(rng, toy.phrases, 30);
    auto base = align_captions(pair_with_shift(0), en, ja, 10.0, toy.cap());
    auto scaled_matches = align_captions(pair_with_shift(0), en, ja, 10.0, res_scaled);
    ASSERT_EQ(base.size(), scaled_matches.size());
    for (size_t i = 0; i < base.size(); ++i) {
      EXPECT_EQ(base[i].ja_index, scaled_matches[i].ja_index);
      EXPECT_EQ(base[i].en_index, scaled_matches[i].en_index);
    }
  }
}

TEST(Lexicon, LoadRejectsMalformedLines) {
  testutil::temp_dir tmp("lex");
  write_file(tmp.path("bad.tsv"), "猫 cat\n");  // no tab
  EXPECT_THROW(lexicon::load(tmp.path("bad.tsv")), error);
  write_file(tmp.path("empty.tsv"), "猫\t\n");
  EXPECT_THROW(lexicon::load(tmp.path("empty.tsv")), error);
}

TEST(EmbeddingTable, LoadValidatesDimensions) {
  testutil::temp_dir tmp("emb");
  write_file(tmp.path("bad.txt"), "a 1.0 2.0\nb 1.0\n");
  EXPECT_THROW(embedding_table::load(tmp.path("bad.txt")), error);
  write_file(tmp.path("nan.txt"), "a nan\n");
  EXPECT_THROW(embedding_table::load(tmp.path("nan.txt")), error);
}

}  // namespace
