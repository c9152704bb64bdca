#include <subalign/encoding.hpp>
#include <subalign/util.hpp>

#include <gtest/gtest.h>

#include <string>
#include <vector>

using namespace subalign;

namespace {

// Byte strings frozen from reference codecs.
const std::string k_konnichiwa = "こんにちは";
const std::string k_konnichiwa_sjis = "\x82\xb1\x82\xf1\x82\xc9\x82\xbf\x82\xcd";
const std::string k_konnichiwa_euc = "\xa4\xb3\xa4\xf3\xa4\xcb\xa4\xc1\xa4\xcf";

TEST(DetectEncoding, Utf8BomIsDecisive) {
  auto g = detect_encoding("\xEF\xBB\xBF"
                           "a");
  EXPECT_EQ(g.name, encoding::utf8);
  EXPECT_DOUBLE_EQ(g.confidence, 1.0);
}

TEST(DetectEncoding, Utf16BomsAreDecisive) {
  auto le = detect_encoding(std::string("\xFF\xFE"
                                        "a\0",
                                        4));
  EXPECT_EQ(le.name, encoding::utf16le);
  EXPECT_DOUBLE_EQ(le.confidence, 1.0);
  auto be = detect_encoding(std::string("\xFE\xFF\0a", 4));
  EXPECT_EQ(be.name, encoding::utf16be);
  EXPECT_DOUBLE_EQ(be.confidence, 1.0);
}

TEST(DetectEncoding, PureAsciiIsUtf8) {
  auto g = detect_encoding("1\n00:00:01,000 --> 00:00:02,500\nHello world\n");
  EXPECT_EQ(g.name, encoding::utf8);
  EXPECT_GE(g.confidence, 0.9);
}

TEST(DetectEncoding, ShiftJisKana) {
  auto g = detect_encoding(k_konnichiwa_sjis);
  EXPECT_EQ(g.name, encoding::shift_jis);
  EXPECT_GE(g.confidence, 0.9);
  EXPECT_EQ(decode_to_utf8(k_konnichiwa_sjis, encoding::shift_jis), k_konnichiwa);
}

TEST(DetectEncoding, EucJpKana) {
  auto g = detect_encoding(k_konnichiwa_euc);
  EXPECT_EQ(g.name, encoding::euc_jp);
  EXPECT_GE(g.confidence, 0.9);
  EXPECT_EQ(decode_to_utf8(k_konnichiwa_euc, encoding::euc_jp), k_konnichiwa);
}

TEST(DetectEncoding, Cp1252AccentedText) {
  auto bytes = encode_from_utf8("café résumé déjà vu naïve élève", encoding::cp1252);
  ASSERT_TRUE(bytes.has_value());
  auto g = detect_encoding(*bytes);
  EXPECT_EQ(g.name, encoding::cp1252);
  EXPECT_GE(g.confidence, 0.8);
}

TEST(DetectEncoding, GarbageRaisesUndecodable) {
  std::string garbage("\x81\x00\x81\x00\xff\x00\x00", 7);
  try {
    detect_encoding(garbage);
    FAIL() << "expected undecodable-input";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::undecodable_input);
  }
}

TEST(DetectEncoding, EmptyInputRaises) {
  EXPECT_THROW(detect_encoding(""), error);
}

TEST(Codecs, EncodeDecodeRoundTrip) {
  const std::string samples[] = {
      "hello world", k_konnichiwa, "日本語のテキスト", "テスト ですね",
      "mixed 混合 text かな"};
  for (encoding e : {encoding::utf8, encoding::utf16le, encoding::utf16be,
                     encoding::shift_jis, encoding::euc_jp}) {
    for (const auto& s : samples) {
      auto bytes = encode_from_utf8(s, e);
      ASSERT_TRUE(bytes.has_value()) << encoding_name(e) << " " << s;
      EXPECT_EQ(decode_to_utf8(*bytes, e), s) << encoding_name(e) << " " << s;
    }
  }
  auto latin = encode_from_utf8("déjà vu", encoding::cp1252);
  ASSERT_TRUE(latin.has_value());
  EXPECT_EQ(decode_to_utf8(*latin, encoding::cp1252), "déjà vu");
}

TEST(Codecs, UnmappableReturnsNothing) {
  EXPECT_FALSE(encode_from_utf8("한국어", encoding::shift_jis).has_value());
  EXPECT_FALSE(encode_from_utf8("こんにちは", encoding::cp1252).has_value());
}

// Builds a string of at least `n` characters distinctive of the encoding's
// typical script, for the detection property.
std::string distinctive_sample(encoding e, det_rng& rng, size_t n) {
  static const std::u32string kana = U"あいうえおかきくけこさしすせそたちつてとなにぬねのはひふへほまみむめもやゆよらりるれろわをん";
  static const std::u32string kanji = U"日本語学校先生時間今日明日水火木金土曜天気元気映画音楽写真電車家族朝夜海山川空雨雪風猫犬魚鳥";
  static const std::u32string latin1 = U"àáâäçèéêëìíîïñòóôöùúûüýæœß";
  std::u32string out;
  switch (e) {
    case encoding::shift_jis:
    case encoding::euc_jp:
    case encoding::utf16le:
    case encoding::utf16be:
      for (size_t i = 0; i < n; ++i) {
        const std::u32string& pool = rng.uniform() < 0.7 ? kana : kanji;
        out.push_back(pool[rng.below(pool.size())]);
      }
      break;
    case encoding::cp1252:
      for (size_t i = 0; i < n; ++i) {
        if (rng.uniform() < 0.5)
          out.push_back(latin1[rng.below(latin1.size())]);
        else
          out.push_back(U'a' + static_cast<char32_t>(rng.below(26)));
      }
      break;
    case encoding::utf8:
      for (size_t i = 0; i < n; ++i) {
        if (rng.uniform() < 0.5)
          out.push_back(kana[rng.below(kana.size())]);
        else
          out.push_back(U'a' + static_cast<char32_t>(rng.below(26)));
      }
      break;
  }
  return utf8_encode(out);
}

TEST(DetectEncoding, PropertyDetectOfEncodeIsIdentity) {
  det_rng rng(11);
  const encoding all[] = {encoding::utf8,    encoding::utf16le,  encoding::utf16be,
                          encoding::shift_jis, encoding::euc_jp, encoding::cp1252};
  for (int iter = 0; iter < 300; ++iter) {
    encoding e = all[iter % 6];
    std::string text = distinctive_sample(e, rng, 10 + rng.below(30));
    auto bytes = encode_from_utf8(text, e);
    ASSERT_TRUE(bytes.has_value());
    auto g = detect_encoding(*bytes);
    EXPECT_EQ(g.name, e) << "iter " << iter << " text " << text << " got "
                         << encoding_name(g.name);
  }
}

}  // namespace
