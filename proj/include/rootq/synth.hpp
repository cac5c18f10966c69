#ifndef ROOTQ_SYNTH_HPP
#define ROOTQ_SYNTH_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rootq/classifier.hpp"
#include "rootq/core.hpp"
#include "rootq/ingest.hpp"
#include "rootq/name_parser.hpp"
#include "rootq/random.hpp"
#include "rootq/report.hpp"
#include "rootq/tld_registry.hpp"

namespace rootq {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generation targets: the taxonomy leaves, with valid-TLD split by the
/// Chromium-shape flag.
enum class MixTarget : std::uint8_t {
  Empty,
  Minimized,
  OneWordChromium,
  OneWordOther,
  ValidTld,
  ValidTldChromium,
  InvalidAppleTalk,
  InvalidBadEncoding,
  InvalidAllNumeric,
  InvalidChromium,
  InvalidOther,
};
inline constexpr std::size_t kTargetCount = 11;

inline constexpr std::array<MixTarget, kTargetCount> kAllTargets{
    MixTarget::Empty,           MixTarget::Minimized,         MixTarget::OneWordChromium,
    MixTarget::OneWordOther,    MixTarget::ValidTld,          MixTarget::ValidTldChromium,
    MixTarget::InvalidAppleTalk, MixTarget::InvalidBadEncoding, MixTarget::InvalidAllNumeric,
    MixTarget::InvalidChromium, MixTarget::InvalidOther,
};

constexpr std::size_t index_of(MixTarget t) { return static_cast<std::size_t>(t); }

inline std::string_view target_name(MixTarget t) {
  switch (t) {
    case MixTarget::Empty: return "empty";
    case MixTarget::Minimized: return "one_word/minimized";
    case MixTarget::OneWordChromium: return "one_word/chromium";
    case MixTarget::OneWordOther: return "one_word/other";
    case MixTarget::ValidTld: return "has_tld/valid_tld";
    case MixTarget::ValidTldChromium: return "has_tld/valid_tld+chromium";
    case MixTarget::InvalidAppleTalk: return "has_tld/invalid_tld/appletalk";
    case MixTarget::InvalidBadEncoding: return "has_tld/invalid_tld/bad_encoding";
    case MixTarget::InvalidAllNumeric: return "has_tld/invalid_tld/all_numeric";
    case MixTarget::InvalidChromium: return "has_tld/invalid_tld/chromium";
    case MixTarget::InvalidOther: return "has_tld/invalid_tld/other";
  }
  return "?";
}

inline std::optional<MixTarget> parse_target_name(std::string_view text) {
  for (MixTarget t : kAllTargets)
    if (target_name(t) == text) return t;
  return std::nullopt;
}

constexpr Category category_of(MixTarget t) {
  switch (t) {
    case MixTarget::Empty: return Category::Empty;
    case MixTarget::Minimized:
    case MixTarget::OneWordChromium:
    case MixTarget::OneWordOther: return Category::OneWord;
    case MixTarget::ValidTld:
    case MixTarget::ValidTldChromium: return Category::ValidTld;
    default: return Category::InvalidTld;
  }
}

template <typename T>
using WeightedList = std::vector<std::pair<T, double>>;

/// Generator parameterisation. Weights are fractions of all records; TLD
/// pools and qtype profiles carry relative weights (normalised on use).
struct MixSpec {
  std::string label;
  std::array<double, kTargetCount> weights{};

  WeightedList<std::string> minimized_tlds{{"com", 1.0}};
  WeightedList<std::string> valid_tlds{{"com", 1.0}};
  WeightedList<std::string> invalid_tlds{{"internal", 1.0}};

  // Per-target qtype profiles; an empty profile falls back to
  // default_qtypes (or NS only for the empty target).
  std::array<WeightedList<std::uint16_t>, kTargetCount> qtypes{};
  WeightedList<std::uint16_t> default_qtypes{{qtype::A, 1.0}};

  std::size_t sender_prefixes = 1000;
  double sender_skew = 1.0;  // Zipf exponent; 0 is uniform

  std::uint64_t seed = 1;
  std::uint64_t day_origin_us = 1649721600000000;  // 2022-04-12T00:00:00Z

  double weight(MixTarget t) const { return weights[index_of(t)]; }
  double& weight(MixTarget t) { return weights[index_of(t)]; }

  double category_weight(Category c) const {
    double w = 0;
    for (MixTarget t : kAllTargets)
      if (category_of(t) == c) w += weight(t);
    return w;
  }

  const WeightedList<std::uint16_t>& qtype_profile(MixTarget t) const {
    static const WeightedList<std::uint16_t> kPriming{{qtype::NS, 1.0}};
    const auto& p = qtypes[index_of(t)];
    if (!p.empty()) return p;
    return t == MixTarget::Empty ? kPriming : default_qtypes;
  }

  /// Throws SpecError unless the weights form a distribution and every pool
  /// entry lands in the leaf it is used for.
  void validate(const TldRegistry& registry, const AppleTalkSet& appletalk) const;

  /// Builds the spec from the canonical per-year profile (2013-2022).
  static MixSpec for_year(int year);

  static MixSpec parse(std::istream& in);
  std::string to_config() const;
};

// ---------------------------------------------------------------------------
// Canonical yearly profiles.
//
// Category shares and Chromium / minimized series are the published B-Root
// values (percent of all queries). AppleTalk shares are known for 2013 and
// 2022 only and interpolated in between; bad-encoding and all-numeric shares
// were not published numerically and are left at zero.

namespace detail {

struct YearProfile {
  int year;
  double empty, one_word, invalid_tld, valid_tld;     // category shares
  double chromium, chromium_tld;                      // no TLD / with TLD
  double qmin_other, qmin_com, qmin_net, qmin_org;    // minimized by TLD
  std::array<double, 9> qtypes;                       // A AAAA PTR NS SOA SRV MX TXT DS
};

inline constexpr std::array<YearProfile, 10> kYears{{
    {2013, 2.9603, 8.1450, 30.9352, 57.9595, 2.5354, 4.8676, 0, 0, 0, 0,
     {62.04, 19.32, 5.85, 3.84, 2.25, 1.68, 1.63, 1.11, .56}},
    {2014, 3.2808, 14.8740, 28.0068, 53.8383, 8.4787, 3.7813, 0, 0, 0, 0,
     {64.83, 16.78, 5.52, 3.76, 2.30, 2.25, 1.08, .78, 1.81}},
    {2015, 3.6901, 25.0792, 28.7403, 42.4903, 16.4564, 3.4557, 0, 0, 0, 0,
     {62.89, 13.09, 6.61, 9.95, 2.08, 1.56, 1.09, .51, 1.63}},
    {2016, 3.8242, 23.4651, 34.8556, 37.8551, 18.5619, 3.7329, 0.2561, 0.0795, 0.0319, 0.0186,
     {60.22, 13.20, 13.40, 2.81, 1.27, 1.39, .89, .59, 3.24}},
    {2017, 3.0692, 30.4401, 24.7834, 41.7073, 25.5965, 3.5171, 0.2692, 0.0612, 0.0612, 0.0163,
     {61.14, 21.03, 6.05, 3.45, .79, .89, .58, .63, 4.93}},
    {2018, 3.8709, 33.6103, 26.8245, 35.69440, 28.6797, 3.5923, 0.414, 0.2319, 0.3611, 0.0536,
     {55.60, 11.80, 8.90, 17.56, 1.08, .97, .55, .54, 2.50}},
    {2019, 2.4860, 49.7478, 20.5680, 27.1982, 36.3254, 2.5479, 0.6988, 1.8229, 2.6770, 0.1682,
     {62.99, 19.72, 4.82, 6.94, 1.01, .89, .26, .51, 1.95}},
    {2020, 1.3211, 66.6825, 24.3431, 7.6533, 41.7465, 1.8229, 0.5574, 1.6202, 0.1299, 0.0527,
     {67.83, 25.35, 1.45, 1.45, .677, 1.60, .16, .20, 0.90}},
    {2021, 3.0366, 30.8924, 40.5737, 25.4973, 6.7086, 4.3845, 1.8259, 5.7452, 0.4091, 0.2213,
     {65.19, 16.85, 6.90, 2.83, 1.22, 3.33, .43, .98, 0.55}},
    {2022, 37.2394, 19.4543, 26.0706, 17.2357, 0.9984, 0.4647, 1.3829, 5.9064, 0.5164, 0.1175,
     {41.03, 11.54, 8.01, 33.38, .82, 2.07, .27, .67, .65}},
}};

inline constexpr std::array<std::uint16_t, 9> kProfileTypes{
    qtype::A,   qtype::AAAA, qtype::PTR, qtype::NS, qtype::SOA,
    qtype::SRV, qtype::MX,   qtype::TXT, qtype::DS};

// Valid-TLD shares of all queries reported for 2013 and 2022; the rest of
// the valid-TLD mass goes to kOtherValid.
struct ValidTldShares {
  double com, net, org, arpa;
};
inline constexpr ValidTldShares kValid2013{21.43, 13.83, 2.77, 2.66};
inline constexpr ValidTldShares kValid2022{5.67, 3.74, 0.60, 2.87};
inline constexpr double kAppleTalk2013 = 1.13;
inline constexpr double kAppleTalk2022 = 0.57;

inline constexpr std::array<std::string_view, 8> kOtherValid{"de", "uk", "jp", "br",
                                                             "info", "ru", "io", "cn"};
inline constexpr std::array<std::string_view, 6> kOtherMinimized{"arpa", "de", "uk",
                                                                 "jp", "info", "io"};
inline constexpr std::array<std::string_view, 6> kInvalidPool{"local", "lan", "home",
                                                              "internal", "corp", "localdomain"};

inline double lerp_year(double a2013, double a2022, int year) {
  return a2013 + (a2022 - a2013) * (year - 2013) / 9.0;
}

inline std::string format_weight(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline MixSpec MixSpec::for_year(int year) {
  const auto* p = std::find_if(detail::kYears.begin(), detail::kYears.end(),
                               [&](const auto& y) { return y.year == year; });
  if (p == detail::kYears.end())
    throw SpecError("no canonical profile for year " + std::to_string(year));

  MixSpec spec;
  spec.label = std::to_string(year);
  spec.seed = static_cast<std::uint64_t>(year);

  const double qmin = p->qmin_other + p->qmin_com + p->qmin_net + p->qmin_org;
  const double appletalk = detail::lerp_year(detail::kAppleTalk2013, detail::kAppleTalk2022, year);

  spec.weight(MixTarget::Empty) = p->empty;
  spec.weight(MixTarget::Minimized) = qmin;
  spec.weight(MixTarget::OneWordChromium) = p->chromium;
  spec.weight(MixTarget::OneWordOther) = p->one_word - qmin - p->chromium;
  spec.weight(MixTarget::ValidTld) = p->valid_tld;
  spec.weight(MixTarget::InvalidAppleTalk) = appletalk;
  spec.weight(MixTarget::InvalidChromium) = p->chromium_tld;
  spec.weight(MixTarget::InvalidOther) = p->invalid_tld - appletalk - p->chromium_tld;

  // The published shares sum to 100 only to four decimals.
  double sum = 0;
  for (double w : spec.weights) sum += w;
  for (double& w : spec.weights) w /= sum;

  if (qmin > 0) {
    spec.minimized_tlds = {{"com", p->qmin_com}, {"net", p->qmin_net}, {"org", p->qmin_org}};
    for (auto tld : detail::kOtherMinimized)
      spec.minimized_tlds.emplace_back(std::string(tld), p->qmin_other / detail::kOtherMinimized.size());
  }

  const detail::ValidTldShares v{
      detail::lerp_year(detail::kValid2013.com, detail::kValid2022.com, year),
      detail::lerp_year(detail::kValid2013.net, detail::kValid2022.net, year),
      detail::lerp_year(detail::kValid2013.org, detail::kValid2022.org, year),
      detail::lerp_year(detail::kValid2013.arpa, detail::kValid2022.arpa, year)};
  const double named = v.com + v.net + v.org + v.arpa;
  const double rest = std::max(p->valid_tld - named, 0.0);
  spec.valid_tlds = {{"com", v.com}, {"net", v.net}, {"org", v.org}, {"arpa", v.arpa}};
  for (auto tld : detail::kOtherValid)
    spec.valid_tlds.emplace_back(std::string(tld), rest / detail::kOtherValid.size());

  spec.invalid_tlds.clear();
  for (auto tld : detail::kInvalidPool) spec.invalid_tlds.emplace_back(std::string(tld), 1.0);

  spec.default_qtypes.clear();
  for (std::size_t i = 0; i < detail::kProfileTypes.size(); ++i)
    spec.default_qtypes.emplace_back(detail::kProfileTypes[i], p->qtypes[i]);
  // Root queries: the 2022 priming mix (97.2% NS) with the remainder split
  // over the other types seen among top empty-query senders.
  spec.qtypes[index_of(MixTarget::Empty)] = {
      {qtype::NS, 0.972}, {qtype::DNSKEY, 0.016}, {qtype::SOA, 0.008}, {qtype::A, 0.004}};

  spec.sender_prefixes = 20000;
  spec.sender_skew = 1.0;
  return spec;
}

inline void MixSpec::validate(const TldRegistry& registry, const AppleTalkSet& appletalk) const {
  double sum = 0;
  for (MixTarget t : kAllTargets) {
    const double w = weight(t);
    if (!(w >= 0) || !std::isfinite(w))
      throw SpecError("weight for " + std::string(target_name(t)) + " must be >= 0");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw SpecError("weights sum to " + detail::format_weight(sum) + ", expected 1");

  auto check_pool = [](const auto& pool, std::string_view what) {
    double total = 0;
    for (const auto& [item, w] : pool) {
      if (!(w >= 0) || !std::isfinite(w)) throw SpecError(std::string(what) + ": negative weight");
      total += w;
    }
    if (!(total > 0)) throw SpecError(std::string(what) + ": pool is empty");
  };

  if (weight(MixTarget::Minimized) > 0) check_pool(minimized_tlds, "tlds.minimized");
  for (const auto& [tld, w] : minimized_tlds)
    if (tld != ascii_lowercase(tld) || !registry.contains(tld)) throw SpecError("tlds.minimized: not a valid TLD: " + tld);

  if (weight(MixTarget::ValidTld) + weight(MixTarget::ValidTldChromium) > 0)
    check_pool(valid_tlds, "tlds.valid_tld");
  for (const auto& [tld, w] : valid_tlds)
    if (tld != ascii_lowercase(tld) || !registry.contains(tld)) throw SpecError("tlds.valid_tld: not a valid TLD: " + tld);

  if (weight(MixTarget::InvalidChromium) + weight(MixTarget::InvalidOther) > 0)
    check_pool(invalid_tlds, "tlds.invalid_tld");
  for (const auto& [tld, w] : invalid_tlds) {
    if (tld.empty() || tld != ascii_lowercase(tld) || registry.contains(tld) ||
        appletalk.count(tld) || label_has_bad_encoding(tld) || is_all_numeric(tld) ||
        tld.size() > kMaxLabelLength)
      throw SpecError("tlds.invalid_tld: entry would not classify as invalid/other: " + tld);
  }

  if (weight(MixTarget::InvalidAppleTalk) > 0 && appletalk.empty())
    throw SpecError("appletalk weight set but no AppleTalk TLDs configured");

  for (MixTarget t : kAllTargets)
    if (weight(t) > 0) check_pool(qtype_profile(t), "qtypes");

  if (sender_prefixes == 0) throw SpecError("senders.prefixes must be positive");
  if (!(sender_skew >= 0) || !std::isfinite(sender_skew))
    throw SpecError("senders.skew must be >= 0");
  if (day_origin_us == 0) throw SpecError("day_origin must be positive");
}

// ---------------------------------------------------------------------------
// Config file: "key = value" lines, '#' comments.
//
//   label = 2022
//   seed = 42
//   day_origin = 1649721600000000          # epoch microseconds
//   weight.<target> = <fraction>           # target names as target_name()
//   tlds.minimized = com:0.7, net:0.3      # relative weights
//   tlds.valid_tld = com:1
//   tlds.invalid_tld = internal:1, lan:1
//   qtypes.default = A:0.8, AAAA:0.2
//   qtypes.<target> = NS:0.972, DNSKEY:0.028
//   senders.prefixes = 20000
//   senders.skew = 1.0

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_number(std::string_view text, std::size_t line) {
  std::string s(trim(text));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw SpecError("line " + std::to_string(line) + ": not a number: " + s);
  return v;
}

inline std::uint64_t parse_unsigned(std::string_view text, std::size_t line) {
  const auto s = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw SpecError("line " + std::to_string(line) + ": not an unsigned integer: " + std::string(s));
  return v;
}

template <typename Fn>
auto parse_pool(std::string_view text, std::size_t line, Fn&& key_of) {
  WeightedList<decltype(key_of(std::string_view{}))> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const auto colon = item.rfind(':');
    if (colon == std::string_view::npos)
      throw SpecError("line " + std::to_string(line) + ": expected key:weight, got " +
                      std::string(item));
    out.emplace_back(key_of(trim(item.substr(0, colon))),
                     parse_number(item.substr(colon + 1), line));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace detail

inline MixSpec MixSpec::parse(std::istream& in) {
  MixSpec spec;
  spec.weights.fill(0.0);
  std::string raw;
  std::size_t line_no = 0;
  auto qtype_of = [&](std::string_view s) {
    auto q = parse_qtype(s);
    if (!q) throw SpecError("line " + std::to_string(line_no) + ": unknown qtype " + std::string(s));
    return *q;
  };
  auto tld_of = [](std::string_view s) { return ascii_lowercase(s); };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw SpecError("line " + std::to_string(line_no) + ": expected key = value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));

    if (key == "label") {
      spec.label = std::string(value);
    } else if (key == "seed") {
      spec.seed = detail::parse_unsigned(value, line_no);
    } else if (key == "day_origin") {
      spec.day_origin_us = detail::parse_unsigned(value, line_no);
    } else if (key.rfind("weight.", 0) == 0) {
      auto t = parse_target_name(key.substr(7));
      if (!t) throw SpecError("line " + std::to_string(line_no) + ": unknown target " + std::string(key));
      spec.weight(*t) = detail::parse_number(value, line_no);
    } else if (key == "tlds.minimized") {
      spec.minimized_tlds = detail::parse_pool(value, line_no, tld_of);
    } else if (key == "tlds.valid_tld") {
      spec.valid_tlds = detail::parse_pool(value, line_no, tld_of);
    } else if (key == "tlds.invalid_tld") {
      spec.invalid_tlds = detail::parse_pool(value, line_no, tld_of);
    } else if (key == "qtypes.default") {
      spec.default_qtypes = detail::parse_pool(value, line_no, qtype_of);
    } else if (key.rfind("qtypes.", 0) == 0) {
      auto t = parse_target_name(key.substr(7));
      if (!t) throw SpecError("line " + std::to_string(line_no) + ": unknown target " + std::string(key));
      spec.qtypes[index_of(*t)] = detail::parse_pool(value, line_no, qtype_of);
    } else if (key == "senders.prefixes") {
      spec.sender_prefixes = detail::parse_unsigned(value, line_no);
    } else if (key == "senders.skew") {
      spec.sender_skew = detail::parse_number(value, line_no);
    } else {
      throw SpecError("line " + std::to_string(line_no) + ": unknown key " + std::string(key));
    }
  }
  return spec;
}

inline std::string MixSpec::to_config() const {
  std::ostringstream out;
  auto pool = [&](const auto& list, auto&& name_of) {
    bool first = true;
    for (const auto& [k, w] : list) {
      out << (first ? "" : ", ") << name_of(k) << ':' << detail::format_weight(w);
      first = false;
    }
    out << '\n';
  };
  auto tld_name = [](const std::string& s) { return s; };
  auto qt_name = [](std::uint16_t q) { return qtype_mnemonic(q); };

  out << "label = " << label << '\n';
  out << "seed = " << seed << '\n';
  out << "day_origin = " << day_origin_us << '\n';
  for (MixTarget t : kAllTargets)
    out << "weight." << target_name(t) << " = " << detail::format_weight(weight(t)) << '\n';
  out << "tlds.minimized = ";
  pool(minimized_tlds, tld_name);
  out << "tlds.valid_tld = ";
  pool(valid_tlds, tld_name);
  out << "tlds.invalid_tld = ";
  pool(invalid_tlds, tld_name);
  out << "qtypes.default = ";
  pool(default_qtypes, qt_name);
  for (MixTarget t : kAllTargets) {
    if (qtypes[index_of(t)].empty()) continue;
    out << "qtypes." << target_name(t) << " = ";
    pool(qtypes[index_of(t)], qt_name);
  }
  out << "senders.prefixes = " << sender_prefixes << '\n';
  out << "senders.skew = " << detail::format_weight(sender_skew) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Generation

namespace detail {

/// Cumulative-weight table sampled by binary search.
template <typename T>
class WeightedPicker {
 public:
  WeightedPicker() = default;

  explicit WeightedPicker(const WeightedList<T>& items) {
    double acc = 0;
    for (const auto& [item, w] : items) {
      if (w <= 0) continue;
      acc += w;
      items_.push_back(item);
      cumulative_.push_back(acc);
    }
  }

  bool empty() const { return items_.empty(); }

  const T& pick(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return items_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<T> items_;
  std::vector<double> cumulative_;
};

/// Prefix index to network: the first 60000 map to IPv4 /16s, the rest to
/// IPv6 /48s under 2a0e::/16.
inline IpAddress prefix_address(std::uint64_t index, Rng& rng) {
  constexpr std::uint64_t kV4Prefixes = 60000;
  if (index < kV4Prefixes) {
    const std::uint64_t host = rng.below(65536);
    const std::array<std::uint8_t, 4> b{static_cast<std::uint8_t>(1 + index / 256),
                                        static_cast<std::uint8_t>(index % 256),
                                        static_cast<std::uint8_t>(host >> 8),
                                        static_cast<std::uint8_t>(host & 0xFF)};
    return IpAddress::v4(b);
  }
  const std::uint64_t j = index - kV4Prefixes;
  std::array<std::uint8_t, 16> b{};
  b[0] = 0x2a;
  b[1] = 0x0e;
  b[2] = static_cast<std::uint8_t>(j >> 24);
  b[3] = static_cast<std::uint8_t>(j >> 16);
  b[4] = static_cast<std::uint8_t>(j >> 8);
  b[5] = static_cast<std::uint8_t>(j);
  const std::uint64_t host = rng.bits();
  for (int i = 0; i < 8; ++i) b[8 + i] = static_cast<std::uint8_t>(host >> (8 * i));
  return IpAddress::v6(b);
}

}  // namespace detail

/// Seeded trace generator. Each record carries the leaf its name was built
/// to land in.
class Generator {
 public:
  Generator(MixSpec spec, const TldRegistry& registry,
            AppleTalkSet appletalk = default_appletalk_tlds())
      : spec_(std::move(spec)), registry_(&registry), appletalk_(std::move(appletalk)),
        rng_(spec_.seed) {
    spec_.validate(*registry_, appletalk_);

    WeightedList<MixTarget> targets;
    for (MixTarget t : kAllTargets) targets.emplace_back(t, spec_.weight(t));
    targets_ = detail::WeightedPicker<MixTarget>(targets);
    minimized_ = detail::WeightedPicker<std::string>(spec_.minimized_tlds);
    valid_ = detail::WeightedPicker<std::string>(spec_.valid_tlds);
    invalid_ = detail::WeightedPicker<std::string>(spec_.invalid_tlds);
    appletalk_list_.assign(appletalk_.begin(), appletalk_.end());
    for (MixTarget t : kAllTargets)
      qtypes_[index_of(t)] = detail::WeightedPicker<std::uint16_t>(spec_.qtype_profile(t));

    WeightedList<std::uint64_t> prefixes;
    prefixes.reserve(spec_.sender_prefixes);
    for (std::uint64_t i = 0; i < spec_.sender_prefixes; ++i)
      prefixes.emplace_back(i, std::pow(static_cast<double>(i + 1), -spec_.sender_skew));
    prefixes_ = detail::WeightedPicker<std::uint64_t>(prefixes);
  }

  ClassifiedRecord next() {
    const MixTarget target = targets_.pick(rng_);
    std::string qname;
    Classification truth = build(target, qname);
    ClassifiedRecord out{QueryRecord{}, std::move(truth)};
    out.record.qname = std::move(qname);
    out.record.qtype = qtypes_[index_of(target)].pick(rng_);
    out.record.qclass = qclass::IN;
    out.record.source = detail::prefix_address(prefixes_.pick(rng_), rng_);
    out.record.timestamp_us = spec_.day_origin_us + rng_.below(kMicrosPerDay);
    return out;
  }

  const MixSpec& spec() const { return spec_; }

 private:
  std::string letters(std::size_t n) {
    std::string s(n, 'a');
    for (char& c : s) c = static_cast<char>('a' + rng_.below(26));
    return s;
  }

  std::string chromium_label() { return letters(rng_.between(7, 15)); }

  // Left-hand label that can never be Chromium shaped: it contains digits.
  std::string host_label() { return "host" + std::to_string(rng_.below(100000)); }

  Classification build(MixTarget target, std::string& qname) {
    DomainName name = DomainName::root();
    Classification truth = Classification::empty();
    switch (target) {
      case MixTarget::Empty:
        break;
      case MixTarget::Minimized: {
        const auto& tld = minimized_.pick(rng_);
        name = DomainName::from_labels({tld});
        truth = Classification::minimized(tld);
        break;
      }
      case MixTarget::OneWordChromium: {
        std::string label;
        do label = chromium_label();
        while (registry_->contains(label));
        name = DomainName::from_labels({label});
        truth = Classification::one_word_chromium();
        break;
      }
      case MixTarget::OneWordOther: {
        std::string label;
        do label = letters(rng_.between(3, 6)) + std::to_string(rng_.below(1000));
        while (registry_->contains(label));
        name = DomainName::from_labels({label});
        truth = Classification::one_word_other();
        break;
      }
      case MixTarget::ValidTld: {
        const auto& tld = valid_.pick(rng_);
        if (rng_.bernoulli(0.5)) name = DomainName::from_labels({"www", host_label(), tld});
        else name = DomainName::from_labels({host_label(), tld});
        truth = Classification::valid_tld(tld, false);
        break;
      }
      case MixTarget::ValidTldChromium: {
        const auto& tld = valid_.pick(rng_);
        name = DomainName::from_labels({chromium_label(), tld});
        truth = Classification::valid_tld(tld, true);
        break;
      }
      case MixTarget::InvalidAppleTalk: {
        const auto& tld = appletalk_list_[rng_.below(appletalk_list_.size())];
        name = DomainName::from_labels({host_label(), tld});
        truth = Classification::invalid_appletalk();
        break;
      }
      case MixTarget::InvalidBadEncoding: {
        // First byte is always >= 0x80; the rest are arbitrary.
        std::string tld(rng_.between(1, 4), '\0');
        tld[0] = static_cast<char>(0x80 + rng_.below(128));
        for (std::size_t i = 1; i < tld.size(); ++i) tld[i] = static_cast<char>(rng_.below(256));
        name = DomainName::from_labels({host_label(), tld});
        truth = Classification::invalid_bad_encoding();
        break;
      }
      case MixTarget::InvalidAllNumeric: {
        name = DomainName::from_labels({host_label(), std::to_string(rng_.below(100000))});
        truth = Classification::invalid_all_numeric();
        break;
      }
      case MixTarget::InvalidChromium: {
        name = DomainName::from_labels({chromium_label(), invalid_.pick(rng_)});
        truth = Classification::invalid_chromium();
        break;
      }
      case MixTarget::InvalidOther: {
        const auto& tld = invalid_.pick(rng_);
        name = DomainName::from_labels({host_label(), tld});
        truth = Classification::invalid_other(tld);
        break;
      }
    }
    qname = to_presentation(name);
    return truth;
  }

  MixSpec spec_;
  const TldRegistry* registry_;
  AppleTalkSet appletalk_;
  std::vector<std::string> appletalk_list_;
  Rng rng_;
  detail::WeightedPicker<MixTarget> targets_;
  detail::WeightedPicker<std::string> minimized_, valid_, invalid_;
  std::array<detail::WeightedPicker<std::uint16_t>, kTargetCount> qtypes_;
  detail::WeightedPicker<std::uint64_t> prefixes_;
};

inline std::vector<ClassifiedRecord> generate(const MixSpec& spec, std::size_t n,
                                              const TldRegistry& registry,
                                              const AppleTalkSet& appletalk = default_appletalk_tlds()) {
  Generator gen(spec, registry, appletalk);
  std::vector<ClassifiedRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.next());
  return out;
}

inline void write_tsv(std::ostream& out, std::span<const QueryRecord> records) {
  for (const auto& r : records) write_tsv_line(out, r);
}

inline void write_tsv(std::ostream& out, std::span<const ClassifiedRecord> records) {
  for (const auto& r : records) write_tsv_line(out, r.record);
}

}  // namespace rootq

#endif  // ROOTQ_SYNTH_HPP
