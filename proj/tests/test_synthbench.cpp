#include <subalign/synthbench.hpp>

#include <gtest/gtest.h>

#include <cmath>

#include "testutil.hpp"

using namespace subalign;

namespace {

TEST(GeneratePair, ZeroCorruptionIsIdentityPairing) {
  const auto& toy = testutil::toy_resources::instance();
  corruption_spec spec;
  spec.seed = 3;
  auto gen = generate_pair(toy.phrases, 20, spec);
  ASSERT_EQ(gen.en_doc.captions.size(), 20u);
  ASSERT_EQ(gen.ja_doc.captions.size(), 20u);
  ASSERT_EQ(gen.truth.planted.size(), 20u);
  for (size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(gen.en_doc.captions[i].start_ms, gen.ja_doc.captions[i].start_ms);
    EXPECT_EQ(gen.en_doc.captions[i].end_ms, gen.ja_doc.captions[i].end_ms);
    EXPECT_EQ(gen.truth.planted[i].first, static_cast<int>(i) + 1);
    EXPECT_EQ(gen.truth.planted[i].second, static_cast<int>(i) + 1);
  }
}

TEST(GeneratePair, CadenceWithinDeclaredRanges) {
  const auto& toy = testutil::toy_resources::instance();
  corruption_spec spec;
  spec.seed = 5;
  auto gen = generate_pair(toy.phrases, 40, spec);
  for (size_t i = 0; i < gen.en_doc.captions.size(); ++i) {
    const auto& c = gen.en_doc.captions[i];
    std::int64_t dur = c.end_ms - c.start_ms;
    EXPECT_GE(dur, 2000);
    EXPECT_LE(dur, 6000);
    if (i > 0) {
      std::int64_t gap = c.start_ms - gen.en_doc.captions[i - 1].end_ms;
      EXPECT_GE(gap, 500);
      EXPECT_LE(gap, 2000);
    }
  }
}

TEST(GeneratePair, DropRateShrinksTruth) {
  const auto& toy = testutil::toy_resources::instance();
  corruption_spec spec;
  spec.drop_rate = 0.5;
  spec.seed = 7;
  auto gen = generate_pair(toy.phrases, 100, spec);
  EXPECT_EQ(gen.en_doc.captions.size(), 100u);
  EXPECT_EQ(gen.ja_doc.captions.size(), gen.truth.planted.size());
  // Binomial(100, 0.5): five sigma around the mean.
  EXPECT_GE(gen.ja_doc.captions.size(), 25u);
  EXPECT_LE(gen.ja_doc.captions.size(), 75u);
  // Surviving ja captions stay ordered and re-indexed from 1.
  for (size_t i = 0; i < gen.ja_doc.captions.size(); ++i)
    EXPECT_EQ(gen.ja_doc.captions[i].index, static_cast<int>(i) + 1);
}

TEST(GeneratePair, RateAndShiftFormula) {
  const auto& toy = testutil::toy_resources::instance();
  corruption_spec clean;
  clean.seed = 11;
  auto base = generate_pair(toy.phrases, 10, clean);
  corruption_spec spec;
  spec.seed = 11;  // same seed, same cadence
  spec.rate_factor = 1.01;
  spec.time_shift_s = 2.0;
  auto gen = generate_pair(toy.phrases, 10, spec);
  for (size_t i = 0; i < 10; ++i) {
    std::int64_t expected =
        std::llround(static_cast<double>(base.ja_doc.captions[i].start_ms) * 1.01) + 2000;
    EXPECT_EQ(gen.ja_doc.captions[i].start_ms, expected);
  }
}

TEST(GeneratePair, TemplateTooSmall) {
  const auto& toy = testutil::toy_resources::instance();
  corruption_spec spec;
  try {
    generate_pair(toy.phrases, toy.phrases.entries.size() + 1, spec);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::template_too_small);
  }
}

TEST(GeneratePair, MisspellRateTouchesEnglishSide) {
  const auto& toy = testutil::toy_resources::instance();
  corruption_spec spec;
  spec.misspell_rate = 0.9;
  spec.seed = 13;
  auto gen = generate_pair(toy.phrases, 60, spec, toy.misspellings);
  int changed = 0;
  corruption_spec clean;
  clean.seed = 13;
  auto base = generate_pair(toy.phrases, 60, clean);
  for (size_t i = 0; i < 60; ++i)
    if (gen.en_doc.captions[i].text != base.en_doc.captions[i].text) ++changed;
  EXPECT_GT(changed, 10);
}

caption_match cm(int ja, int en) {
  caption_match m;
  m.ja_index = ja;
  m.en_index = en;
  return m;
}

TEST(ScoreAlignment, PerfectPrediction) {
  ground_truth truth{{{1, 1}, {2, 2}}};
  auto s = score_alignment({cm(1, 1), cm(2, 2)}, truth);
  EXPECT_DOUBLE_EQ(s.precision, 1.0);
  EXPECT_DOUBLE_EQ(s.recall, 1.0);
  EXPECT_DOUBLE_EQ(s.f1, 1.0);
}

TEST(ScoreAlignment, EmptyPredictionConventions) {
  ground_truth truth{{{1, 1}}};
  auto s = score_alignment({}, truth);
  EXPECT_DOUBLE_EQ(s.precision, 1.0);
  EXPECT_DOUBLE_EQ(s.recall, 0.0);
  EXPECT_DOUBLE_EQ(s.f1, 0.0);
}

TEST(ScoreAlignment, PartialCredit) {
  ground_truth truth{{{1, 1}, {2, 2}, {3, 3}, {4, 4}}};
  auto s = score_alignment({cm(1, 1), cm(2, 2), cm(3, 3), cm(9, 9)}, truth);
  EXPECT_DOUBLE_EQ(s.precision, 0.75);
  EXPECT_DOUBLE_EQ(s.recall, 0.75);
  EXPECT_DOUBLE_EQ(s.f1, 0.75);
}

TEST(RunBench, ZeroCorruptionPerfectScores) {
  const auto& toy = testutil::toy_resources::instance();
  bench_resources res{toy.cap(), &toy.em, &toy.lm, &toy.dict};
  corruption_spec spec;
  spec.seed = 17;
  auto r = run_bench(toy.phrases, 30, spec, res, toy.misspellings);
  EXPECT_TRUE(r.doc_pair_found);
  EXPECT_DOUBLE_EQ(r.score.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.score.recall, 1.0);
  EXPECT_DOUBLE_EQ(r.score.f1, 1.0);
}

TEST(RunBench, ScoresDegradeAsCorruptionRises) {
  const auto& toy = testutil::toy_resources::instance();
  bench_resources res{toy.cap(), &toy.em, &toy.lm, &toy.dict};
  auto mean_f1 = [&](double ocr) {
    double sum = 0;
    for (int seed = 0; seed < 20; ++seed) {
      corruption_spec spec;
      spec.ocr_noise_rate = ocr;
      spec.seed = 1000 + seed;
      sum += run_bench(toy.phrases, 30, spec, res, toy.misspellings).score.f1;
    }
    return sum / 20.0;
  };
  double clean = mean_f1(0.0);
  double noisy = mean_f1(0.25);
  EXPECT_DOUBLE_EQ(clean, 1.0);
  EXPECT_LE(noisy, clean + 1e-9);
  EXPECT_LT(noisy, 0.999);  // heavy character noise must actually hurt
}

}  // namespace
