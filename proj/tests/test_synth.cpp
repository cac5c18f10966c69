#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rootq/report.hpp"
#include "rootq/synth.hpp"
#include "test_support.hpp"

namespace rootq {
namespace {

using test::iana;

MixSpec only(MixTarget t, std::uint64_t seed = 1) {
  MixSpec spec;
  spec.weight(t) = 1.0;
  spec.seed = seed;
  return spec;
}

Classification reclassify(const QueryRecord& r) {
  auto parsed = parse_presentation(r.qname);
  EXPECT_TRUE(parsed) << r.qname;
  return classify(parsed.name(), iana(), default_appletalk_tlds());
}

TEST(Generate, DegenerateEmptyMix) {
  auto records = generate(only(MixTarget::Empty), 10, iana());
  ASSERT_EQ(records.size(), 10u);
  for (const auto& r : records) {
    EXPECT_EQ(r.record.qname, ".");
    EXPECT_EQ(r.record.qtype, qtype::NS);
    EXPECT_EQ(r.classification, Classification::empty());
  }
}

TEST(Generate, EveryTargetRoundTripsThroughClassifier) {
  for (MixTarget t : kAllTargets) {
    MixSpec spec = only(t, 100 + index_of(t));
    spec.invalid_tlds = {{"internal", 1}, {"local", 1}, {"lan", 2}};
    spec.valid_tlds = {{"com", 1}, {"net", 1}, {"xn--p1ai", 1}};
    spec.minimized_tlds = {{"com", 1}, {"arpa", 1}, {"network", 1}};
    for (const auto& r : generate(spec, 2000, iana())) {
      ASSERT_EQ(reclassify(r.record), r.classification) << target_name(t) << " " << r.record.qname;
      ASSERT_EQ(category_of(r.classification.leaf()), category_of(t));
    }
  }
}

TEST(Generate, YearMixesRoundTrip) {
  for (int year = 2013; year <= 2022; ++year) {
    for (const auto& r : generate(MixSpec::for_year(year), 20000, iana()))
      ASSERT_EQ(reclassify(r.record), r.classification) << year << " " << r.record.qname;
  }
}

TEST(Generate, SeedDeterminism) {
  auto spec = MixSpec::for_year(2018);
  std::ostringstream a, b, c;
  write_tsv(a, std::span<const ClassifiedRecord>(generate(spec, 5000, iana())));
  write_tsv(b, std::span<const ClassifiedRecord>(generate(spec, 5000, iana())));
  spec.seed += 1;
  write_tsv(c, std::span<const ClassifiedRecord>(generate(spec, 5000, iana())));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str(), c.str());
}

TEST(Generate, MixFidelityWithinThreeSigma) {
  const auto spec = MixSpec::for_year(2022);
  const std::size_t n = 200000;
  std::array<std::uint64_t, kTargetCount> counts{};
  for (const auto& r : generate(spec, n, iana())) {
    const auto& c = r.classification;
    MixTarget t = static_cast<MixTarget>(index_of(c.leaf()) + (index_of(c.leaf()) > 4 ? 1 : 0));
    if (c.leaf() == Leaf::ValidTld && c.chromium_like()) t = MixTarget::ValidTldChromium;
    ++counts[index_of(t)];
  }
  for (MixTarget t : kAllTargets) {
    const double p = spec.weight(t);
    const double sigma = std::sqrt(n * p * (1 - p));
    EXPECT_NEAR(static_cast<double>(counts[index_of(t)]), n * p, 3 * sigma + 1e-9) << target_name(t);
  }
}

TEST(WriteTsv, Shape) {
  std::ostringstream empty;
  write_tsv(empty, std::span<const QueryRecord>{});
  EXPECT_EQ(empty.str(), "");

  auto records = generate(MixSpec::for_year(2016), 500, iana());
  std::stringstream ss;
  write_tsv(ss, std::span<const ClassifiedRecord>(records));
  std::string first;
  std::getline(std::istringstream(ss.str()), first);
  EXPECT_EQ(std::count(first.begin(), first.end(), '\t'), 4);
  auto back = read_tsv(ss);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i], records[i].record);
}

TEST(MixSpec, ConfigRoundTrip) {
  for (int year : {2013, 2017, 2022}) {
    const auto spec = MixSpec::for_year(year);
    std::istringstream in(spec.to_config());
    const auto back = MixSpec::parse(in);
    EXPECT_EQ(back.to_config(), spec.to_config());
    EXPECT_EQ(back.weights, spec.weights);
    EXPECT_EQ(back.sender_prefixes, spec.sender_prefixes);
  }
}

TEST(MixSpec, ParseMinimal) {
  std::istringstream in(
      "# comment\n"
      "label = tiny\n"
      "seed = 9\n"
      "weight.empty = 0.25\n"
      "weight.has_tld/valid_tld = 0.75\n"
      "tlds.valid_tld = COM:3, net:1\n"
      "qtypes.empty = NS:0.9, DNSKEY:0.1\n");
  const auto spec = MixSpec::parse(in);
  EXPECT_EQ(spec.label, "tiny");
  EXPECT_EQ(spec.seed, 9u);
  EXPECT_EQ(spec.weight(MixTarget::Empty), 0.25);
  EXPECT_EQ(spec.valid_tlds.front().first, "com");
  EXPECT_EQ(spec.qtype_profile(MixTarget::Empty).size(), 2u);
  EXPECT_NO_THROW(spec.validate(iana(), default_appletalk_tlds()));
}

TEST(MixSpec, ParseErrors) {
  for (const char* text : {"weight.bogus = 1\n", "no equals sign\n", "seed = -1\n",
                           "weight.empty = abc\n", "tlds.valid_tld = com\n", "unknown.key = 1\n",
                           "qtypes.empty = NOTATYPE:1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(MixSpec::parse(in), SpecError) << text;
  }
}

TEST(MixSpec, ValidateRejectsBadSpecs) {
  const auto& at = default_appletalk_tlds();
  MixSpec s = only(MixTarget::Empty);
  s.weight(MixTarget::Empty) = 0.9;
  EXPECT_THROW(s.validate(iana(), at), SpecError);

  s = only(MixTarget::Empty);
  s.weight(MixTarget::Empty) = 1.2;
  s.weight(MixTarget::ValidTld) = -0.2;
  EXPECT_THROW(s.validate(iana(), at), SpecError);

  s = only(MixTarget::InvalidOther);
  s.invalid_tlds = {{"com", 1}};
  EXPECT_THROW(s.validate(iana(), at), SpecError);

  s = only(MixTarget::InvalidOther);
  s.invalid_tlds = {{"appletalk", 1}};
  EXPECT_THROW(s.validate(iana(), at), SpecError);

  s = only(MixTarget::ValidTld);
  s.valid_tlds = {{"internal", 1}};
  EXPECT_THROW(s.validate(iana(), at), SpecError);

  s = only(MixTarget::InvalidAppleTalk);
  EXPECT_THROW(s.validate(iana(), AppleTalkSet{}), SpecError);

  s = only(MixTarget::ValidTld);
  s.sender_prefixes = 0;
  EXPECT_THROW(s.validate(iana(), at), SpecError);

  EXPECT_THROW(MixSpec::for_year(2012), SpecError);
}

// Canonical yearly profiles reproduce the published per-year shares.
TEST(MixSpec, YearProfilesMatchPublishedShares) {
  auto pct = [](double w) { return 100.0 * w; };
  const auto s2013 = MixSpec::for_year(2013);
  EXPECT_NEAR(pct(s2013.category_weight(Category::Empty)), 2.96, 0.01);
  EXPECT_NEAR(pct(s2013.category_weight(Category::OneWord)), 8.15, 0.01);
  EXPECT_NEAR(pct(s2013.category_weight(Category::InvalidTld)), 30.94, 0.01);
  EXPECT_NEAR(pct(s2013.category_weight(Category::ValidTld)), 57.96, 0.01);

  const auto s2022 = MixSpec::for_year(2022);
  EXPECT_NEAR(pct(s2022.category_weight(Category::Empty)), 37.24, 0.01);
  EXPECT_NEAR(pct(s2022.category_weight(Category::OneWord)), 19.45, 0.01);
  EXPECT_NEAR(pct(s2022.category_weight(Category::InvalidTld)), 26.07, 0.01);
  EXPECT_NEAR(pct(s2022.category_weight(Category::ValidTld)), 17.24, 0.01);

  EXPECT_NEAR(pct(MixSpec::for_year(2020).weight(MixTarget::OneWordChromium)), 41.7465, 1e-3);
  EXPECT_NEAR(pct(s2022.weight(MixTarget::InvalidAppleTalk)), 0.57, 1e-9);
  EXPECT_NEAR(pct(s2013.weight(MixTarget::InvalidAppleTalk)), 1.13, 1e-9);
}

TEST(MixSpec, YearProfilesFeedSeries) {
  const auto records = generate(MixSpec::for_year(2022), 400000, iana());
  const auto r = fold(records, "2022");
  const auto q = qmin_point(r);
  // 3 sigma at n = 4e5 is about 0.11 pp for these shares.
  EXPECT_NEAR(100 * q.com, 5.9064, 0.12);
  EXPECT_NEAR(100 * q.other, 1.3829, 0.06);
  const auto e = empty_query_stats(r);
  EXPECT_NEAR(e.qtype_fractions.at(qtype::NS), 0.972, 0.003);
}

}  // namespace
}  // namespace rootq
