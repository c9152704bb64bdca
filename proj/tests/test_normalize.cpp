#include <subalign/normalize.hpp>

#include <gtest/gtest.h>

#include <string>

#include "testutil.hpp"

using namespace subalign;

namespace {

std::string norm_en(std::string_view s, const normalize_options& opts = {}) {
  return normalize_caption(s, language::en, opts).first;
}

std::string norm_ja(std::string_view s, const normalize_options& opts = {}) {
  return normalize_caption(s, language::ja, opts).first;
}

TEST(NormalizeCaption, LinguisticCueAndLowercase) {
  EXPECT_EQ(norm_en("(laughs) Hello THERE"), "hello there");
}

TEST(NormalizeCaption, AuthorSignatureRemoved) {
  EXPECT_EQ(norm_en("- Sync by honeybunny -"), "");
  EXPECT_EQ(norm_en("subbed by someone for fun"), "");
  EXPECT_EQ(norm_en("corrected by a.b.c"), "");
  EXPECT_EQ(norm_en("keep this. synced by xyz"), "keep this.");
}

TEST(NormalizeCaption, CleanJapaneseIsIdentity) {
  EXPECT_EQ(norm_ja("こんにちは"), "こんにちは");
}

TEST(NormalizeCaption, JapaneseCreditPrefixRemoved) {
  EXPECT_EQ(norm_ja("字幕：ボランティア"), "");
  EXPECT_EQ(norm_ja("字幕制作 チーム"), "");
}

TEST(NormalizeCaption, BracketVariants) {
  EXPECT_EQ(norm_en("hello [music] there"), "hello there");
  EXPECT_EQ(norm_en("hello {sfx} there"), "hello there");
  EXPECT_EQ(norm_ja("【効果音】こんにちは"), "こんにちは");
  EXPECT_EQ(norm_ja("（笑）はい"), "はい");
  EXPECT_EQ(norm_en("nested (a (b) c) gone"), "nested gone");
  EXPECT_EQ(norm_en("unmatched ( stays"), "unmatched ( stays");
}

TEST(NormalizeCaption, TagRemnants) {
  EXPECT_EQ(norm_en("<i>hello</i> <font color=\"red\">there</font>"), "hello there");
}

TEST(NormalizeCaption, PunctuationRules) {
  EXPECT_EQ(norm_en("- hello"), "hello");
  EXPECT_EQ(norm_en("♪ hello"), "hello");
  EXPECT_EQ(norm_en("♪ hello ♪"), "hello ♪");  // only leading glyphs are deleted
  EXPECT_EQ(norm_en("hello,,"), "hello");
  EXPECT_EQ(norm_en("what??"), "what?");
  EXPECT_EQ(norm_en("wait....."), "wait...");
  EXPECT_EQ(norm_en("wait.."), "wait.");
  EXPECT_EQ(norm_en("wait..."), "wait...");
}

TEST(NormalizeCaption, OutOfLanguageRuns) {
  // English captions: runs of 3+ non-Latin codepoints go, short ones stay.
  EXPECT_EQ(norm_en("hello あいうえお world"), "hello world");
  EXPECT_EQ(norm_en("hello ああ world"), "hello ああ world");
  // Japanese captions: 8+ Latin letters go, short romaji stays.
  EXPECT_EQ(norm_ja("これはabcdefghijです"), "これはです");
  EXPECT_EQ(norm_ja("これはabcです"), "これはabcです");
}

TEST(NormalizeCaption, WhitespaceCollapsed) {
  EXPECT_EQ(norm_en("  hello   there  "), "hello there");
}

TEST(NormalizeCaption, RuleTogglesRespected) {
  normalize_options opts;
  opts.lowercase = false;
  EXPECT_EQ(norm_en("Hello THERE", opts), "Hello THERE");
  normalize_options opts2;
  opts2.brackets = false;
  EXPECT_EQ(norm_en("(laughs) hi", opts2), "(laughs) hi");
  normalize_options opts3;
  opts3.signatures = false;
  EXPECT_EQ(norm_en("sync by honeybunny", opts3), "sync by honeybunny");
}

TEST(NormalizeCaption, ReportCountsRemovals) {
  auto [text, report] = normalize_caption("(laughs) Hello THERE", language::en);
  EXPECT_EQ(text, "hello there");
  EXPECT_GE(report.rules_fired.at("brackets"), 1);
  EXPECT_GE(report.rules_fired.at("lowercase"), 1);
  EXPECT_GT(report.chars_removed, 0);
}

subtitle_document make_doc(language lang, const std::vector<std::string>& texts) {
  subtitle_document doc;
  doc.doc_id = "doc";
  doc.title_raw = "doc";
  doc.lang = lang;
  for (size_t i = 0; i < texts.size(); ++i) {
    caption c;
    c.index = static_cast<int>(i) + 1;
    c.start_ms = static_cast<std::int64_t>(i) * 2000;
    c.end_ms = c.start_ms + 1500;
    c.text = texts[i];
    doc.captions.push_back(std::move(c));
  }
  return doc;
}

TEST(NormalizeDocument, DropsEmptyAndReindexes) {
  std::vector<std::string> texts(20, "Fine Text");
  texts[7] = "- sync by someone -";
  auto doc = make_doc(language::en, texts);
  auto [out, report] = normalize_document(doc);
  EXPECT_EQ(out.captions.size(), 19u);
  for (size_t i = 0; i < out.captions.size(); ++i)
    EXPECT_EQ(out.captions[i].index, static_cast<int>(i) + 1);
}

TEST(NormalizeDocument, AllSoundCuesRejected) {
  std::vector<std::string> texts(10, "(door slams)");
  auto doc = make_doc(language::en, texts);
  try {
    normalize_document(doc);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::document_rejected);
  }
}

TEST(NormalizeDocument, CleanDocPassesThrough) {
  std::vector<std::string> texts(10, "Hello There");
  auto [out, report] = normalize_document(make_doc(language::en, texts));
  EXPECT_EQ(out.captions.size(), 10u);
  for (const auto& c : out.captions) EXPECT_EQ(c.text, "hello there");
}

std::string fuzz_string(det_rng& rng) {
  static const std::u32string pool =
      U"abc XYZ 012()[]{}<>【】（）♪♫-.,!?…。、 あいうえおかき 猫犬魚 \t"
      U"字幕 sync by ... ---";
  std::u32string s;
  size_t len = rng.below(60);
  for (size_t i = 0; i < len; ++i) s.push_back(pool[rng.below(pool.size())]);
  return utf8_encode(s);
}

TEST(NormalizeCaption, PropertyIdempotent) {
  det_rng rng(41);
  for (int iter = 0; iter < 600; ++iter) {
    language lang = (iter % 2) ? language::en : language::ja;
    std::string input = fuzz_string(rng);
    std::string once = normalize_caption(input, lang).first;
    std::string twice = normalize_caption(once, lang).first;
    ASSERT_EQ(once, twice) << "input: " << input;
  }
}

TEST(NormalizeCaption, PropertyOutputClean) {
  det_rng rng(43);
  for (int iter = 0; iter < 600; ++iter) {
    language lang = (iter % 2) ? language::en : language::ja;
    std::string out = normalize_caption(fuzz_string(rng), lang).first;
    std::u32string cps = utf8_decode(out);
    if (!cps.empty()) {
      EXPECT_FALSE(is_space(cps.front()));
      EXPECT_FALSE(is_space(cps.back()));
    }
    bool in_tag = false;
    for (char32_t c : cps) {
      if (lang == language::en) EXPECT_FALSE(is_upper_latin(c)) << out;
      if (c == U'<') in_tag = true;
      if (c == U'>' && in_tag) FAIL() << "tag survived: " << out;
      // A matched bracket pair never survives; lone unmatched delimiters may.
    }
  }
}

}  // namespace
