#include <subalign/docalign.hpp>

#include <gtest/gtest.h>

#include <string>

#include "oracles.hpp"
#include "testutil.hpp"

using namespace subalign;

namespace {

TEST(ExtractTitleMeta, SeasonEpisodePattern) {
  auto meta = extract_title_meta("Show.Name.S02E07.720p.en");
  EXPECT_EQ(meta.normalized_title, "show name");
  ASSERT_TRUE(meta.season.has_value());
  EXPECT_EQ(*meta.season, 2);
  ASSERT_TRUE(meta.episode.has_value());
  EXPECT_EQ(*meta.episode, 7);
}

TEST(ExtractTitleMeta, MovieYearKept) {
  auto meta = extract_title_meta("movie title (1997)");
  EXPECT_EQ(meta.normalized_title, "movie title 1997");
  EXPECT_FALSE(meta.episode.has_value());
}

TEST(ExtractTitleMeta, EpNumberPattern) {
  auto meta = extract_title_meta("drama ep 05 字幕");
  ASSERT_TRUE(meta.episode.has_value());
  EXPECT_EQ(*meta.episode, 5);
}

TEST(ExtractTitleMeta, MorePatterns) {
  EXPECT_EQ(*extract_title_meta("show 2x07").episode, 7);
  EXPECT_EQ(*extract_title_meta("show 2x07").season, 2);
  EXPECT_EQ(*extract_title_meta("show episode 12").episode, 12);
  EXPECT_EQ(*extract_title_meta("show e05").episode, 5);
  EXPECT_EQ(*extract_title_meta("Show Name - 03").episode, 3);
  EXPECT_EQ(extract_title_meta("[FanGroup] Show Name - 03").normalized_title, "show name");
  EXPECT_EQ(extract_title_meta("Show_Name.1080p.x264.ja").normalized_title, "show name");
}

TEST(ExtractTitleMeta, DegenerateTitleStaysNonEmpty) {
  EXPECT_FALSE(extract_title_meta("720p.en").normalized_title.empty());
  EXPECT_FALSE(extract_title_meta("e05").normalized_title.empty());
}

TEST(TitleSimilarity, SpecExamples) {
  EXPECT_DOUBLE_EQ(title_similarity("abc", "abc"), 1.0);
  EXPECT_DOUBLE_EQ(title_similarity("abc", "xyz"), 0.0);
  EXPECT_NEAR(title_similarity("wikimedia", "wikimania"), 14.0 / 18.0, 1e-12);
}

TEST(TitleSimilarity, PropertySymmetricBoundedIdentity) {
  det_rng rng(61);
  for (int iter = 0; iter < 500; ++iter) {
    std::string a, b;
    size_t la = rng.below(15), lb = rng.below(15);
    for (size_t i = 0; i < la; ++i) a.push_back('a' + static_cast<char>(rng.below(6)));
    for (size_t i = 0; i < lb; ++i) b.push_back('a' + static_cast<char>(rng.below(6)));
    double s_ab = title_similarity(a, b);
    double s_ba = title_similarity(b, a);
    ASSERT_DOUBLE_EQ(s_ab, s_ba) << a << " / " << b;
    ASSERT_GE(s_ab, 0.0);
    ASSERT_LE(s_ab, 1.0);
    if (!a.empty() || !b.empty()) {
      if (a == b)
        ASSERT_DOUBLE_EQ(s_ab, 1.0);
      else
        ASSERT_LT(s_ab, 1.0) << a << " / " << b;
    }
  }
}

// Longest common substring length by brute force.
size_t lcsubstring(const std::string& a, const std::string& b) {
  size_t best = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) {
      size_t k = 0;
      while (i + k < a.size() && j + k < b.size() && a[i + k] == b[j + k]) ++k;
      best = std::max(best, k);
    }
  return best;
}

TEST(TitleSimilarity, PropertyAtLeastLongestSubstringBound) {
  det_rng rng(67);
  for (int iter = 0; iter < 500; ++iter) {
    std::string a, b;
    size_t la = 1 + rng.below(12), lb = 1 + rng.below(12);
    for (size_t i = 0; i < la; ++i) a.push_back('a' + static_cast<char>(rng.below(5)));
    for (size_t i = 0; i < lb; ++i) b.push_back('a' + static_cast<char>(rng.below(5)));
    double bound = 2.0 * static_cast<double>(lcsubstring(a, b)) /
                   static_cast<double>(a.size() + b.size());
    ASSERT_GE(title_similarity(a, b) + 1e-12, bound) << a << " / " << b;
  }
}

TEST(TitleSimilarity, PropertyMatchesBruteForceOracle) {
  det_rng rng(71);
  for (int iter = 0; iter < 200; ++iter) {
    std::string a, b;
    size_t la = rng.below(20), lb = rng.below(20);
    for (size_t i = 0; i < la; ++i) a.push_back('a' + static_cast<char>(rng.below(8)));
    for (size_t i = 0; i < lb; ++i) b.push_back('a' + static_cast<char>(rng.below(8)));
    ASSERT_DOUBLE_EQ(title_similarity(a, b), oracle::title_similarity(a, b))
        << a << " / " << b;
  }
}

titled_doc td(const std::string& id, const std::string& title, std::optional<int> season,
              std::optional<int> episode) {
  titled_doc d;
  d.doc_id = id;
  d.meta.normalized_title = title;
  d.meta.season = season;
  d.meta.episode = episode;
  return d;
}

TEST(MatchCandidates, EpisodeRules) {
  auto same = match_candidates({td("e", "show name", 1, 3)}, {td("j", "show name", 1, 3)});
  EXPECT_EQ(same.size(), 1u);
  auto differ = match_candidates({td("e", "show name", 1, 3)}, {td("j", "show name", 1, 4)});
  EXPECT_TRUE(differ.empty());
  auto one_sided = match_candidates({td("e", "show name", {}, 3)}, {td("j", "show name", {}, {})});
  EXPECT_EQ(one_sided.size(), 1u);
  auto diff_season = match_candidates({td("e", "show name", 1, 3)}, {td("j", "show name", 2, 3)});
  EXPECT_TRUE(diff_season.empty());
}

TEST(MatchCandidates, SimilarityStrictlyAboveThreshold) {
  // "abcdefghij" vs "abcdefghxy": 16/20 matched -> 0.8, below 0.9.
  auto low = match_candidates({td("e", "abcdefghij", {}, {})}, {td("j", "abcdefghxy", {}, {})});
  EXPECT_TRUE(low.empty());
  // Identical titles pass.
  auto high = match_candidates({td("e", "abcdefghij", {}, {})}, {td("j", "abcdefghij", {}, {})});
  EXPECT_EQ(high.size(), 1u);
  // Exactly at the threshold is excluded ("exceeded 90%").
  auto at = match_candidates({td("e", "aaaaaaaaab", {}, {})}, {td("j", "aaaaaaaaac", {}, {})},
                             0.90);
  EXPECT_TRUE(at.empty());
}

subtitle_document doc_with_starts(const std::string& id, language lang,
                                  const std::vector<std::int64_t>& starts,
                                  const std::string& title = "t") {
  subtitle_document d;
  d.doc_id = id;
  d.title_raw = title;
  d.lang = lang;
  for (size_t i = 0; i < starts.size(); ++i) {
    caption c;
    c.index = static_cast<int>(i) + 1;
    c.start_ms = starts[i];
    c.end_ms = starts[i] + 1000;
    c.text = "text " + std::to_string(i);
    d.captions.push_back(std::move(c));
  }
  return d;
}

TEST(TemporalVector, RoundingAndShift) {
  auto doc = doc_with_starts("d", language::en, {1200, 3700});
  auto bits0 = temporal_vector(doc, 0);
  EXPECT_TRUE(bits0.test(0));   // second 1
  EXPECT_TRUE(bits0.test(3));   // second 4
  EXPECT_EQ(bits0.count(), 2u);
  auto bits2 = temporal_vector(doc, 2);
  EXPECT_TRUE(bits2.test(2));   // second 3
  EXPECT_TRUE(bits2.test(5));   // second 6
  EXPECT_EQ(bits2.count(), 2u);
}

TEST(TemporalVector, HalfUpRoundingAndRange) {
  auto doc = doc_with_starts("d", language::en, {1499, 1500, 10500000});
  auto bits = temporal_vector(doc, 0);
  EXPECT_TRUE(bits.test(0));  // 1499 -> second 1
  EXPECT_TRUE(bits.test(1));  // 1500 -> second 2
  EXPECT_EQ(bits.count(), 2u);  // the 10,500 s caption is out of range
}

TEST(TemporalDistance, IdenticalDocsAreZeroAtShiftZero) {
  auto en = doc_with_starts("e", language::en, {1000, 5000, 9000, 15000});
  auto ja = doc_with_starts("j", language::ja, {1000, 5000, 9000, 15000});
  auto tm = temporal_distance(en, ja, 10);
  EXPECT_DOUBLE_EQ(tm.distance, 0.0);
  EXPECT_EQ(tm.best_shift_s, 0);
}

TEST(TemporalDistance, UniformLagRecovered) {
  std::vector<std::int64_t> en_starts = {10000, 14000, 20000, 26000, 33000};
  std::vector<std::int64_t> ja_starts;
  for (auto s : en_starts) ja_starts.push_back(s + 3000);  // ja three seconds later
  auto en = doc_with_starts("e", language::en, en_starts);
  auto ja = doc_with_starts("j", language::ja, ja_starts);
  auto tm = temporal_distance(en, ja, 10);
  EXPECT_DOUBLE_EQ(tm.distance, 0.0);
  EXPECT_EQ(tm.best_shift_s, -3);
}

TEST(TemporalDistance, PropertyCommonShiftInvariance) {
  det_rng rng(73);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<std::int64_t> en_starts, ja_starts;
    int n = 5 + static_cast<int>(rng.below(30));
    std::int64_t t = 200000;  // away from the lower boundary
    for (int i = 0; i < n; ++i) {
      t += 1000 + static_cast<std::int64_t>(rng.below(8000));
      en_starts.push_back(t);
      if (rng.uniform() < 0.8) ja_starts.push_back(t + static_cast<std::int64_t>(rng.below(4000)));
    }
    if (ja_starts.empty()) ja_starts.push_back(t);
    auto base = temporal_distance(doc_with_starts("e", language::en, en_starts),
                                  doc_with_starts("j", language::ja, ja_starts), 15);
    std::int64_t c = 1000 * (1 + static_cast<std::int64_t>(rng.below(50)));
    for (auto& s : en_starts) s += c;
    for (auto& s : ja_starts) s += c;
    auto shifted = temporal_distance(doc_with_starts("e", language::en, en_starts),
                                     doc_with_starts("j", language::ja, ja_starts), 15);
    ASSERT_DOUBLE_EQ(base.distance, shifted.distance);
  }
}

TEST(AlignDocuments, MatchingPairRetained) {
  auto en = doc_with_starts("e", language::en, {1000, 5000, 9000}, "show s01e01.en");
  auto ja = doc_with_starts("j", language::ja, {1000, 5000, 9000}, "show s01e01.ja");
  auto pairs = align_documents({en}, {ja});
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_GT(pairs[0].title_similarity, 0.90);
  EXPECT_LE(pairs[0].temporal_distance, 0.04);
  EXPECT_EQ(pairs[0].best_shift_s, 0);
}

TEST(AlignDocuments, TemporalMismatchDropped) {
  // Same titles, completely different cue rhythms: distance far above 0.04.
  std::vector<std::int64_t> en_starts, ja_starts;
  for (int i = 0; i < 300; ++i) en_starts.push_back(1000 + 7000LL * i);
  for (int i = 0; i < 300; ++i) ja_starts.push_back(4500 + 9100LL * i);
  auto en = doc_with_starts("e", language::en, en_starts, "show.en");
  auto ja = doc_with_starts("j", language::ja, ja_starts, "show.ja");
  docalign_config cfg;
  cfg.shift_range_s = 20;
  auto pairs = align_documents({en}, {ja}, cfg);
  EXPECT_TRUE(pairs.empty());
}

TEST(AlignDocuments, HammingBoundaryInclusive) {
  // 400 differing seconds out of 10,000 is exactly 0.04 and is retained.
  std::vector<std::int64_t> en_starts, ja_starts;
  for (int i = 1; i <= 400; ++i) en_starts.push_back(1000LL * (2 * i));  // evens only
  auto en = doc_with_starts("e", language::en, en_starts, "show.en");
  auto ja = doc_with_starts("j", language::ja, {2000}, "show.ja");
  docalign_config cfg;
  cfg.shift_range_s = 0;
  auto tm = temporal_distance(en, ja, 0);
  ASSERT_DOUBLE_EQ(tm.distance, 399.0 / 10000.0);
  // Push to exactly 0.04 with one extra second on the ja side.
  ja = doc_with_starts("j", language::ja, {2000, 3000}, "show.ja");
  tm = temporal_distance(en, ja, 0);
  ASSERT_DOUBLE_EQ(tm.distance, 0.04);
  auto pairs = align_documents({en}, {ja}, cfg);
  EXPECT_EQ(pairs.size(), 1u);
}

TEST(AlignDocuments, ManyToManyPermitted) {
  auto en1 = doc_with_starts("e1", language::en, {1000, 5000, 9000}, "show e01.en");
  auto en2 = doc_with_starts("e2", language::en, {1000, 5000, 9000}, "show e01 720p.en");
  auto ja = doc_with_starts("j", language::ja, {1000, 5000, 9000}, "show e01.ja");
  auto pairs = align_documents({en1, en2}, {ja});
  EXPECT_EQ(pairs.size(), 2u);
}

TEST(AlignDocuments, RetainedPairsSatisfyThresholds) {
  det_rng rng(79);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<std::int64_t> starts;
    int n = 5 + static_cast<int>(rng.below(40));
    std::int64_t t = 1000;
    for (int i = 0; i < n; ++i) {
      t += 1000 + static_cast<std::int64_t>(rng.below(6000));
      starts.push_back(t);
    }
    std::vector<std::int64_t> ja_starts = starts;
    for (auto& s : ja_starts)
      if (rng.uniform() < 0.2) s += static_cast<std::int64_t>(rng.below(3000));
    auto en = doc_with_starts("e", language::en, starts, "show名.en");
    auto ja = doc_with_starts("j", language::ja, ja_starts, "show名.ja");
    for (const auto& p : align_documents({en}, {ja})) {
      ASSERT_GT(p.title_similarity, 0.90);
      ASSERT_LE(p.temporal_distance, 0.04);
    }
  }
}

}  // namespace
