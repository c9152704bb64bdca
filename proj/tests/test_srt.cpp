#include <subalign/srt.hpp>

#include <gtest/gtest.h>

#include <string>

#include "testutil.hpp"

using namespace subalign;

namespace {

std::string pad_cues(int from_index, int n) {
  // Filler cues so documents clear the legitimacy floor.
  std::string out;
  for (int i = 0; i < n; ++i) {
    int idx = from_index + i;
    out += std::to_string(idx) + "\n00:10:0" + std::to_string(i) + ",000 --> 00:10:0" +
           std::to_string(i) + ",900\nfiller line " + std::to_string(idx) + "\n\n";
  }
  return out;
}

TEST(ParseSrt, BasicCueJoinsLines) {
  auto result = parse_srt("1\n00:00:01,000 --> 00:00:02,500\nHello\nworld\n\n" + pad_cues(2, 4));
  ASSERT_EQ(result.captions.size(), 5u);
  EXPECT_EQ(result.captions[0].index, 1);
  EXPECT_EQ(result.captions[0].start_ms, 1000);
  EXPECT_EQ(result.captions[0].end_ms, 2500);
  EXPECT_EQ(result.captions[0].text, "Hello world");
  EXPECT_EQ(result.skipped, 0);
}

TEST(ParseSrt, EndBeforeStartIsSkippedWithWarning) {
  auto result = parse_srt("1\n00:00:05,000 --> 00:00:01,000\nbad\n\n" + pad_cues(2, 5));
  EXPECT_EQ(result.captions.size(), 5u);
  EXPECT_EQ(result.skipped, 1);
}

TEST(ParseSrt, OutOfOrderCuesAreSortedAndReindexed) {
  std::string text =
      "1\n00:00:10,000 --> 00:00:11,000\nsecond\n\n"
      "2\n00:00:01,000 --> 00:00:02,000\nfirst\n\n" +
      pad_cues(3, 3);
  auto result = parse_srt(text);
  ASSERT_GE(result.captions.size(), 2u);
  EXPECT_EQ(result.captions[0].text, "first");
  EXPECT_EQ(result.captions[1].text, "second");
  for (size_t i = 0; i < result.captions.size(); ++i)
    EXPECT_EQ(result.captions[i].index, static_cast<int>(i) + 1);
}

TEST(ParseSrt, PeriodMillisecondSeparatorAccepted) {
  auto result = parse_srt("1\n00:00:01.250 --> 00:00:02.750\nok\n\n" + pad_cues(2, 4));
  EXPECT_EQ(result.captions[0].start_ms, 1250);
  EXPECT_EQ(result.captions[0].end_ms, 2750);
}

TEST(ParseSrt, FormattingTagsStripped) {
  auto result = parse_srt("1\n00:00:01,000 --> 00:00:02,000\n<i>Hello</i> <b>there</b>\n\n" +
                          pad_cues(2, 4));
  EXPECT_EQ(result.captions[0].text, "Hello there");
}

TEST(ParseSrt, BomRemnantTolerated) {
  auto result = parse_srt("\xEF\xBB\xBF"
                          "1\n00:00:01,000 --> 00:00:02,000\nhi\n\n" +
                          pad_cues(2, 4));
  EXPECT_EQ(result.captions[0].text, "hi");
}

TEST(ParseSrt, TooFewCuesRejected) {
  try {
    parse_srt(pad_cues(1, 4));
    FAIL() << "expected document-rejected";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::document_rejected);
  }
}

TEST(ParseSrt, WindowsLineEndings) {
  std::string text = "1\r\n00:00:01,000 --> 00:00:02,000\r\nline one\r\nline two\r\n\r\n" +
                     pad_cues(2, 4);
  auto result = parse_srt(text);
  EXPECT_EQ(result.captions[0].text, "line one line two");
}

TEST(FormatSrtTimestamp, CommaAndPadding) {
  EXPECT_EQ(format_srt_timestamp(1000), "00:00:01,000");
  EXPECT_EQ(format_srt_timestamp(3723456), "01:02:03,456");
}

caption make_caption(int idx, std::int64_t start, std::int64_t end, std::string text) {
  caption c;
  c.index = idx;
  c.start_ms = start;
  c.end_ms = end;
  c.text = std::move(text);
  return c;
}

TEST(SrtRoundTrip, PropertySerializeParseIdentity) {
  det_rng rng(23);
  const std::string words[] = {"hello", "world", "テスト", "subtitle", "line", "猫"};
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<caption> captions;
    std::int64_t t = 0;
    int n = 5 + static_cast<int>(rng.below(20));
    for (int i = 0; i < n; ++i) {
      t += 100 + static_cast<std::int64_t>(rng.below(5000));
      std::int64_t end = t + 200 + static_cast<std::int64_t>(rng.below(4000));
      std::string text;
      int len = 1 + static_cast<int>(rng.below(5));
      for (int k = 0; k < len; ++k) {
        if (k) text += ' ';
        text += words[rng.below(std::size(words))];
      }
      captions.push_back(make_caption(i + 1, t, end, text));
    }
    auto reparsed = parse_srt(serialize_srt(captions));
    ASSERT_EQ(reparsed.captions.size(), captions.size());
    for (size_t i = 0; i < captions.size(); ++i) {
      EXPECT_EQ(reparsed.captions[i].index, captions[i].index);
      EXPECT_EQ(reparsed.captions[i].start_ms, captions[i].start_ms);
      EXPECT_EQ(reparsed.captions[i].end_ms, captions[i].end_ms);
      EXPECT_EQ(reparsed.captions[i].text, captions[i].text);
    }
  }
}

TEST(ParseSrt, PropertyFuzzNeverYieldsInvalidCaption) {
  det_rng rng(31);
  const char pool[] = "0123456789:,.->\n\r abcdefgh<>[]";
  for (int iter = 0; iter < 500; ++iter) {
    std::string noise;
    size_t len = rng.below(400);
    for (size_t i = 0; i < len; ++i) noise.push_back(pool[rng.below(sizeof(pool) - 1)]);
    try {
      auto result = parse_srt(noise);
      std::int64_t prev = -1;
      for (const auto& c : result.captions) {
        EXPECT_GE(c.start_ms, 0);
        EXPECT_GE(c.end_ms, c.start_ms);
        EXPECT_GE(c.start_ms, prev);
        EXPECT_EQ(c.text.find('\n'), std::string::npos);
        EXPECT_EQ(c.text.find('\r'), std::string::npos);
        EXPECT_FALSE(c.text.empty());
        prev = c.start_ms;
      }
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::document_rejected);
    }
  }
}

TEST(LoadDocument, TitleAndLanguageFromPath) {
  testutil::temp_dir tmp("load");
  std::string path = tmp.path("show.s01e02.en.srt");
  write_file(path, pad_cues(1, 6));
  auto doc = load_document(path, language::en);
  EXPECT_EQ(doc.lang, language::en);
  EXPECT_EQ(doc.title_raw, "show.s01e02.en");
  EXPECT_EQ(doc.captions.size(), 6u);
}

TEST(LoadDocument, EmptyFileRejected) {
  testutil::temp_dir tmp("empty");
  std::string path = tmp.path("empty.srt");
  write_file(path, "");
  try {
    load_document(path, language::en);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::document_rejected);
    EXPECT_NE(std::string(e.what()).find("empty.srt"), std::string::npos);
  }
}

TEST(LoadDocument, BinaryGarbageUndecodable) {
  testutil::temp_dir tmp("bin");
  std::string path = tmp.path("garbage.srt");
  std::string junk;
  for (int i = 0; i < 64; ++i) junk += std::string("\x81\x00\x00\x00\xff\x0e", 6);
  write_file(path, junk);
  try {
    load_document(path, language::en);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::undecodable_input);
  }
}

TEST(Interchange, WriteReadRoundTrip) {
  subtitle_document doc;
  doc.doc_id = "x/y.srt";
  doc.title_raw = "y";
  doc.lang = language::ja;
  doc.captions = {make_caption(1, 0, 500, "こんにちは"), make_caption(2, 600, 900, "次")};
  std::ostringstream os;
  write_documents(os, {doc});
  std::istringstream is(os.str());
  auto docs = read_documents(is);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].doc_id, doc.doc_id);
  EXPECT_EQ(docs[0].lang, language::ja);
  ASSERT_EQ(docs[0].captions.size(), 2u);
  EXPECT_EQ(docs[0].captions[1].text, "次");
}

}  // namespace
