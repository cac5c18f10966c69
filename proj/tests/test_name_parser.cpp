#include <gtest/gtest.h>

#include <clocale>

#include "rootq/name_parser.hpp"
#include "rootq/random.hpp"

namespace rootq {
namespace {

using Labels = std::vector<std::string>;

TEST(ParsePresentation, Root) {
  auto r = parse_presentation(".");
  ASSERT_TRUE(r);
  EXPECT_TRUE(r.name().is_root());
  EXPECT_TRUE(r.name().labels().empty());
}

TEST(ParsePresentation, OrdinaryName) {
  auto r = parse_presentation("www.example.com.");
  ASSERT_TRUE(r);
  EXPECT_EQ(r.name().labels(), (Labels{"www", "example", "com"}));
  // trailing dot is optional
  EXPECT_EQ(parse_presentation("www.example.com").name(), r.name());
}

TEST(ParsePresentation, DecimalEscapes) {
  // \255 -> 0xFF, \001 -> 0x01, decoded by hand
  auto r = parse_presentation("foo.\\255\\001.");
  ASSERT_TRUE(r);
  EXPECT_EQ(r.name().labels(), (Labels{"foo", std::string("\xFF\x01", 2)}));
}

TEST(ParsePresentation, CharacterEscapes) {
  auto r = parse_presentation("a\\.b.c\\\\d.");
  ASSERT_TRUE(r);
  EXPECT_EQ(r.name().labels(), (Labels{"a.b", "c\\d"}));
}

TEST(ParsePresentation, EscapesDecodeBeforeClassification) {
  EXPECT_EQ(parse_presentation("\\099\\111\\109").name(), parse_presentation("com").name());
}

TEST(ParsePresentation, NoCaseFolding) {
  EXPECT_EQ(parse_presentation("WwW.CoM.").name().labels(), (Labels{"WwW", "CoM"}));
}

TEST(ParsePresentation, Failures) {
  EXPECT_EQ(parse_presentation("a..b").failure().reason, ParseError::EmptyLabel);
  EXPECT_EQ(parse_presentation(".com").failure().reason, ParseError::EmptyLabel);
  EXPECT_EQ(parse_presentation("..").failure().reason, ParseError::EmptyLabel);
  EXPECT_EQ(parse_presentation("").failure().reason, ParseError::EmptyLabel);
  EXPECT_EQ(parse_presentation("com..").failure().reason, ParseError::EmptyLabel);
  EXPECT_EQ(parse_presentation(std::string(64, 'a')).failure().reason, ParseError::LabelTooLong);
  EXPECT_EQ(parse_presentation("abc\\").failure().reason, ParseError::TruncatedEscape);
  EXPECT_EQ(parse_presentation("abc\\12").failure().reason, ParseError::TruncatedEscape);
  EXPECT_EQ(parse_presentation("abc\\1x3").failure().reason, ParseError::TruncatedEscape);
  EXPECT_EQ(parse_presentation("abc\\256").failure().reason, ParseError::EscapeOutOfRange);

  std::string long_name;
  for (int i = 0; i < 4; ++i) long_name += std::string(63, 'a') + ".";
  EXPECT_EQ(parse_presentation(long_name).failure().reason, ParseError::NameTooLong);
}

TEST(ParsePresentation, EscapedBytesCountOnce) {
  // 63 decoded bytes written as 63 \DDD escapes is still a legal label.
  std::string raw;
  for (int i = 0; i < 63; ++i) raw += "\\200";
  auto r = parse_presentation(raw);
  ASSERT_TRUE(r);
  EXPECT_EQ(r.name().labels().front().size(), 63u);
  EXPECT_FALSE(parse_presentation(raw + "\\200"));
}

TEST(ParsePresentation, LocaleIndependent) {
  const char* before = std::setlocale(LC_ALL, nullptr);
  std::string saved = before ? before : "C";
  auto a = parse_presentation("\\200X.\\073.");
  std::setlocale(LC_ALL, "C.UTF-8");
  auto b = parse_presentation("\\200X.\\073.");
  std::setlocale(LC_ALL, saved.c_str());
  EXPECT_EQ(a.name(), b.name());
}

// Fuzzed round trip: random byte labels -> presentation -> parse.
TEST(ParsePresentation, RoundTripFuzz) {
  Rng rng(20220412);
  for (int i = 0; i < 100000; ++i) {
    std::vector<std::string> labels;
    std::size_t wire = 1;
    const auto n = rng.between(0, 5);
    for (std::uint64_t j = 0; j < n; ++j) {
      std::string label(rng.between(1, 63), '\0');
      for (char& c : label) {
        // bias toward characters that need escaping
        const auto kind = rng.below(4);
        c = kind == 0 ? static_cast<char>(rng.below(256))
            : kind == 1 ? "._\\- \t"[rng.below(6)]
                        : static_cast<char>('a' + rng.below(26));
      }
      if (wire + label.size() + 1 > kMaxNameLength) break;
      wire += label.size() + 1;
      labels.push_back(std::move(label));
    }
    const DomainName name = labels.empty() ? DomainName::root() : DomainName::from_labels(labels);
    const std::string text = to_presentation(name);
    auto parsed = parse_presentation(text);
    ASSERT_TRUE(parsed) << text;
    ASSERT_EQ(parsed.name(), name) << text;
    for (const auto& l : parsed.name().labels()) {
      ASSERT_GE(l.size(), 1u);
      ASSERT_LE(l.size(), 63u);
    }
  }
}

// Arbitrary strings never crash the parser and never yield bad labels.
TEST(ParsePresentation, ArbitraryInputNeverYieldsBadLabels) {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    std::string raw(rng.between(1, 40), '\0');
    for (char& c : raw) c = "ab.\\0129"[rng.below(8)];
    auto parsed = parse_presentation(raw);
    if (!parsed) continue;
    for (const auto& l : parsed.name().labels()) {
      ASSERT_GE(l.size(), 1u);
      ASSERT_LE(l.size(), 63u);
    }
  }
}

TEST(LabelHasBadEncoding, Examples) {
  EXPECT_FALSE(label_has_bad_encoding("com"));
  EXPECT_TRUE(label_has_bad_encoding(std::string("\xFF\x01", 2)));
  EXPECT_FALSE(label_has_bad_encoding("ab_cd"));
  EXPECT_FALSE(label_has_bad_encoding("xn--p1ai"));
  EXPECT_FALSE(label_has_bad_encoding("ABC123"));
  EXPECT_TRUE(label_has_bad_encoding("a b"));
  EXPECT_TRUE(label_has_bad_encoding("a.b"));
  EXPECT_TRUE(label_has_bad_encoding("a*"));
}

// A byte is "bad" exactly when the text dump writes it with a backslash.
TEST(LabelHasBadEncoding, MatchesEscapedRendering) {
  for (int b = 0; b < 256; ++b) {
    const std::string label(1, static_cast<char>(b));
    std::string rendered;
    append_escaped_label(rendered, label);
    const bool escaped = rendered.front() == '\\';
    const bool punctuation_printed_raw = !escaped && !std::isalnum(b) && b != '-' && b != '_';
    EXPECT_EQ(label_has_bad_encoding(label), escaped || punctuation_printed_raw) << b;
  }
}

}  // namespace
}  // namespace rootq
