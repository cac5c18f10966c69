#ifndef ROOTQ_REPORT_HPP
#define ROOTQ_REPORT_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rootq/core.hpp"

namespace rootq {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClassifiedRecord {
  QueryRecord record;
  Classification classification;

  bool operator==(const ClassifiedRecord&) const = default;
};

/// Per-prefix counters: leaf counts (without TLD detail) and the qtype mix of
/// the prefix's empty queries.
struct SenderTally {
  std::array<std::uint64_t, kLeafCount> leaves{};
  std::map<std::uint16_t, std::uint64_t> empty_qtypes;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto n : leaves) t += n;
    return t;
  }

  std::uint64_t category(Category c) const {
    std::uint64_t t = 0;
    for (Leaf leaf : kAllLeaves)
      if (category_of(leaf) == c) t += leaves[index_of(leaf)];
    return t;
  }

  std::uint64_t empty_total() const { return leaves[index_of(Leaf::Empty)]; }

  void merge(const SenderTally& other) {
    for (std::size_t i = 0; i < kLeafCount; ++i) leaves[i] += other.leaves[i];
    for (const auto& [qt, n] : other.empty_qtypes) empty_qtypes[qt] += n;
  }

  bool operator==(const SenderTally&) const = default;
};

namespace detail {

inline std::string merge_labels(const std::string& a, const std::string& b) {
  std::set<std::string> parts;
  for (const std::string* s : {&a, &b}) {
    std::string_view rest = *s;
    while (!rest.empty()) {
      const auto plus = rest.find('+');
      auto part = rest.substr(0, plus);
      if (!part.empty()) parts.emplace(part);
      if (plus == std::string_view::npos) break;
      rest.remove_prefix(plus + 1);
    }
  }
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out.push_back('+');
    out += p;
  }
  return out;
}

}  // namespace detail

/// Mergeable aggregate over classified queries. All state is exact integer
/// counts; fractions are derived on demand.
class Report {
 public:
  explicit Report(std::string label = {}, bool track_senders = true)
      : label_(std::move(label)), track_senders_(track_senders) {}

  void add(const QueryRecord& record, const Classification& c) {
    ++total_;
    ++leaf_totals_[index_of(c.leaf())];
    ++leaves_[c];
    ++qtypes_[record.qtype];
    if (track_senders_) {
      auto& tally = senders_[SenderKey::of(record.source)];
      ++tally.leaves[index_of(c.leaf())];
      if (c.leaf() == Leaf::Empty) ++tally.empty_qtypes[record.qtype];
    }
  }

  void add(const ClassifiedRecord& r) { add(r.record, r.classification); }

  /// Records that never reached classification (bad input lines, undecodable
  /// packets, unparseable names).
  void add_dropped(std::uint64_t n = 1) { dropped_ += n; }

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  std::uint64_t total() const { return total_; }
  std::uint64_t dropped() const { return dropped_; }
  bool tracks_senders() const { return track_senders_; }

  const std::map<Classification, std::uint64_t>& leaves() const { return leaves_; }
  const std::map<std::uint16_t, std::uint64_t>& qtypes() const { return qtypes_; }
  const std::map<SenderKey, SenderTally>& senders() const { return senders_; }

  std::uint64_t leaf_count(Leaf leaf) const { return leaf_totals_[index_of(leaf)]; }

  std::uint64_t category_count(Category c) const {
    std::uint64_t t = 0;
    for (Leaf leaf : kAllLeaves)
      if (category_of(leaf) == c) t += leaf_totals_[index_of(leaf)];
    return t;
  }

  /// Count for one leaf restricted to a TLD (Minimized, ValidTld, InvalidOther).
  std::uint64_t tld_count(Leaf leaf, std::string_view tld) const {
    std::uint64_t t = 0;
    for (const auto& [c, n] : leaves_)
      if (c.leaf() == leaf && c.tld() == tld) t += n;
    return t;
  }

  std::uint64_t chromium_like_valid_tld() const {
    std::uint64_t t = 0;
    for (const auto& [c, n] : leaves_)
      if (c.leaf() == Leaf::ValidTld && c.chromium_like()) t += n;
    return t;
  }

  /// Pointwise sum. Labels combine as a sorted '+'-joined set; sender tables
  /// survive only if both sides track senders.
  friend Report merge(const Report& a, const Report& b) {
    Report out(detail::merge_labels(a.label_, b.label_), a.track_senders_ && b.track_senders_);
    out.total_ = a.total_ + b.total_;
    out.dropped_ = a.dropped_ + b.dropped_;
    for (std::size_t i = 0; i < kLeafCount; ++i)
      out.leaf_totals_[i] = a.leaf_totals_[i] + b.leaf_totals_[i];
    out.leaves_ = a.leaves_;
    for (const auto& [c, n] : b.leaves_) out.leaves_[c] += n;
    out.qtypes_ = a.qtypes_;
    for (const auto& [q, n] : b.qtypes_) out.qtypes_[q] += n;
    if (out.track_senders_) {
      out.senders_ = a.senders_;
      for (const auto& [k, t] : b.senders_) out.senders_[k].merge(t);
    }
    return out;
  }

  /// Checks total = sum(leaves) = sum(qtypes) and, when senders are tracked,
  /// that sender tables sum to the leaf totals.
  void check_invariants() const {
    std::uint64_t by_leaf = 0, by_detail = 0, by_type = 0;
    std::array<std::uint64_t, kLeafCount> detail_totals{};
    for (auto n : leaf_totals_) by_leaf += n;
    for (const auto& [c, n] : leaves_) {
      by_detail += n;
      detail_totals[index_of(c.leaf())] += n;
    }
    for (const auto& [q, n] : qtypes_) by_type += n;
    if (by_leaf != total_ || by_detail != total_ || by_type != total_ ||
        detail_totals != leaf_totals_)
      throw ReportError("report counts do not sum to total");
    if (track_senders_) {
      std::array<std::uint64_t, kLeafCount> sums{};
      for (const auto& [k, t] : senders_) {
        std::uint64_t empty_types = 0;
        for (std::size_t i = 0; i < kLeafCount; ++i) sums[i] += t.leaves[i];
        for (const auto& [q, n] : t.empty_qtypes) empty_types += n;
        if (empty_types != t.empty_total())
          throw ReportError("sender " + k.to_string() + " empty qtypes do not sum");
      }
      if (sums != leaf_totals_) throw ReportError("sender tables do not sum to leaf totals");
    }
  }

  nlohmann::json counts_json() const;
  static Report from_counts_json(const nlohmann::json& j);

  bool operator==(const Report&) const = default;

 private:
  std::string label_;
  bool track_senders_ = true;
  std::uint64_t total_ = 0;
  std::uint64_t dropped_ = 0;
  std::array<std::uint64_t, kLeafCount> leaf_totals_{};
  std::map<Classification, std::uint64_t> leaves_;
  std::map<std::uint16_t, std::uint64_t> qtypes_;
  std::map<SenderKey, SenderTally> senders_;
};

inline Report fold(std::span<const ClassifiedRecord> records, std::string label = {},
                   bool track_senders = true) {
  Report r(std::move(label), track_senders);
  for (const auto& c : records) r.add(c);
  return r;
}

// ---------------------------------------------------------------------------
// Analyses

struct CategoryFractions {
  std::array<double, kCategoryCount> values{};

  double operator[](Category c) const { return values[index_of(c)]; }
  double sum() const { return values[0] + values[1] + values[2] + values[3]; }
};

inline double ratio(std::uint64_t part, std::uint64_t whole) {
  return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

/// Empty / one-word / invalid-TLD / valid-TLD shares of all classified queries.
inline CategoryFractions top_level_fractions(const Report& r) {
  if (r.total() == 0) throw ReportError("top-level fractions of an empty report");
  CategoryFractions f;
  for (Category c : kAllCategories) f.values[index_of(c)] = ratio(r.category_count(c), r.total());
  return f;
}

struct SenderRow {
  SenderKey key;
  std::uint64_t total = 0;
  std::array<std::uint64_t, kCategoryCount> categories{};
};

/// The k busiest prefixes, descending by total; ties go to the lower prefix.
inline std::vector<SenderRow> top_senders(const Report& r, std::size_t k) {
  if (k == 0) throw ReportError("top_senders needs k > 0");
  if (!r.tracks_senders()) throw ReportError("report was folded without sender tracking");
  std::vector<SenderRow> rows;
  rows.reserve(r.senders().size());
  for (const auto& [key, tally] : r.senders()) {
    SenderRow row{key, tally.total(), {}};
    for (Category c : kAllCategories) row.categories[index_of(c)] = tally.category(c);
    rows.push_back(row);
  }
  auto by_rank = [](const SenderRow& a, const SenderRow& b) {
    return a.total != b.total ? a.total > b.total : a.key < b.key;
  };
  const std::size_t n = std::min(k, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n), rows.end(), by_rank);
  rows.resize(n);
  return rows;
}

struct EmptySenderRow {
  SenderKey key;
  std::uint64_t empty = 0;
  std::map<std::uint16_t, std::uint64_t> qtypes;
};

struct EmptyQueryStats {
  std::uint64_t empty_queries = 0;
  std::size_t sending_prefixes = 0;
  std::optional<double> mean_per_prefix;  // absent when there are no empty queries
  std::map<std::uint16_t, double> qtype_fractions;
  std::vector<EmptySenderRow> top;
};

/// Priming-query view: how empty ("." ) queries spread over prefixes and
/// query types.
inline EmptyQueryStats empty_query_stats(const Report& r, std::size_t k = 10) {
  if (!r.tracks_senders()) throw ReportError("report was folded without sender tracking");
  EmptyQueryStats s;
  std::map<std::uint16_t, std::uint64_t> by_type;
  std::vector<EmptySenderRow> rows;
  for (const auto& [key, tally] : r.senders()) {
    if (tally.empty_total() == 0) continue;
    s.empty_queries += tally.empty_total();
    ++s.sending_prefixes;
    for (const auto& [q, n] : tally.empty_qtypes) by_type[q] += n;
    rows.push_back({key, tally.empty_total(), tally.empty_qtypes});
  }
  if (s.sending_prefixes == 0) return s;
  s.mean_per_prefix = ratio(s.empty_queries, s.sending_prefixes);
  for (const auto& [q, n] : by_type) s.qtype_fractions[q] = ratio(n, s.empty_queries);

  auto by_rank = [](const EmptySenderRow& a, const EmptySenderRow& b) {
    return a.empty != b.empty ? a.empty > b.empty : a.key < b.key;
  };
  const std::size_t n = std::min(k, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n), rows.end(), by_rank);
  rows.resize(n);
  s.top = std::move(rows);
  return s;
}

struct ChromiumPoint {
  std::string label;
  double no_tld = 0;
  double with_tld = 0;
};

inline ChromiumPoint chromium_point(const Report& r) {
  const std::uint64_t with_tld = r.chromium_like_valid_tld() + r.leaf_count(Leaf::InvalidChromium);
  return {r.label(), ratio(r.leaf_count(Leaf::OneWordChromium), r.total()),
          ratio(with_tld, r.total())};
}

inline std::vector<ChromiumPoint> chromium_series(std::span<const Report> reports) {
  std::vector<ChromiumPoint> out;
  for (const auto& r : reports) out.push_back(chromium_point(r));
  return out;
}

/// Minimized (one-word valid TLD) queries by TLD, as shares of all queries.
struct QminPoint {
  std::string label;
  double com = 0;
  double net = 0;
  double org = 0;
  double other = 0;

  double total() const { return com + net + org + other; }
};

inline QminPoint qmin_point(const Report& r) {
  const std::uint64_t com = r.tld_count(Leaf::Minimized, "com");
  const std::uint64_t net = r.tld_count(Leaf::Minimized, "net");
  const std::uint64_t org = r.tld_count(Leaf::Minimized, "org");
  const std::uint64_t other = r.leaf_count(Leaf::Minimized) - com - net - org;
  return {r.label(), ratio(com, r.total()), ratio(net, r.total()), ratio(org, r.total()),
          ratio(other, r.total())};
}

inline std::vector<QminPoint> qmin_series(std::span<const Report> reports) {
  std::vector<QminPoint> out;
  for (const auto& r : reports) out.push_back(qmin_point(r));
  return out;
}

/// Which leaves count as "unexpected" traffic.
class UnexpectedPolicy {
 public:
  /// Everything except valid-TLD and minimized queries.
  static UnexpectedPolicy standard() {
    UnexpectedPolicy p("default");
    p.flags_.fill(true);
    p.flags_[index_of(Leaf::ValidTld)] = false;
    p.flags_[index_of(Leaf::Minimized)] = false;
    return p;
  }

  /// As standard(), but root (priming) queries are expected too.
  static UnexpectedPolicy exclude_empty() {
    UnexpectedPolicy p = standard();
    p.name_ = "exclude-empty";
    p.flags_[index_of(Leaf::Empty)] = false;
    return p;
  }

  /// "default", "exclude-empty", or "leaves:<leaf>,<leaf>,..." naming the
  /// unexpected leaves explicitly.
  static UnexpectedPolicy by_name(std::string_view name) {
    if (name == "default") return standard();
    if (name == "exclude-empty") return exclude_empty();
    if (name.rfind("leaves:", 0) == 0) {
      UnexpectedPolicy p{std::string(name)};
      std::string_view rest = name.substr(7);
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        auto leaf = parse_leaf_name(item);
        if (!leaf) throw ReportError("unknown leaf in policy: " + std::string(item));
        p.flags_[index_of(*leaf)] = true;
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      return p;
    }
    throw ReportError("unknown policy: " + std::string(name));
  }

  bool unexpected(Leaf leaf) const { return flags_[index_of(leaf)]; }
  const std::string& name() const { return name_; }

  std::vector<std::string> unexpected_leaves() const {
    std::vector<std::string> out;
    for (Leaf leaf : kAllLeaves)
      if (unexpected(leaf)) out.emplace_back(leaf_name(leaf));
    return out;
  }

  bool operator==(const UnexpectedPolicy&) const = default;

 private:
  explicit UnexpectedPolicy(std::string name) : name_(std::move(name)) {}

  std::string name_;
  std::array<bool, kLeafCount> flags_{};
};

inline double unexpected_fraction(const Report& r,
                                  const UnexpectedPolicy& policy = UnexpectedPolicy::standard()) {
  std::uint64_t n = 0;
  for (Leaf leaf : kAllLeaves)
    if (policy.unexpected(leaf)) n += r.leaf_count(leaf);
  return ratio(n, r.total());
}

struct TrendRow {
  std::string label;
  CategoryFractions fractions;
};

/// One row per report, in the given order.
inline std::vector<TrendRow> trend_table(std::span<const Report> reports) {
  std::vector<TrendRow> rows;
  for (const auto& r : reports) rows.push_back({r.label(), top_level_fractions(r)});
  return rows;
}

// ---------------------------------------------------------------------------
// Serialisation

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ReportError(std::string("report JSON is missing key '") + key + "'");
  return j.at(key);
}

}  // namespace detail

inline nlohmann::json Report::counts_json() const {
  using nlohmann::json;
  json leaves = json::array();
  for (const auto& [c, n] : leaves_) {
    json e = {{"leaf", leaf_name(c.leaf())}, {"count", n}, {"fraction", ratio(n, total_)}};
    if (!c.tld().empty()) e["tld"] = c.tld();
    if (c.leaf() == Leaf::ValidTld) e["chromium_like"] = c.chromium_like();
    leaves.push_back(std::move(e));
  }

  json qtypes = json::object();
  for (const auto& [q, n] : qtypes_)
    qtypes[qtype_mnemonic(q)] = {{"count", n}, {"fraction", ratio(n, total_)}};

  json prefixes = json::array();
  for (const auto& [key, tally] : senders_) {
    json leaf_counts = json::object();
    for (Leaf leaf : kAllLeaves)
      if (tally.leaves[index_of(leaf)] != 0)
        leaf_counts[std::string(leaf_name(leaf))] = tally.leaves[index_of(leaf)];
    json empty_types = json::object();
    for (const auto& [q, n] : tally.empty_qtypes) empty_types[qtype_mnemonic(q)] = n;
    prefixes.push_back({{"prefix", key.to_string()},
                        {"total", tally.total()},
                        {"leaves", std::move(leaf_counts)},
                        {"empty_qtypes", std::move(empty_types)}});
  }

  json categories = json::object();
  for (Category c : kAllCategories) {
    const auto n = category_count(c);
    categories[std::string(category_name(c))] = {{"count", n}, {"fraction", ratio(n, total_)}};
  }

  return {
      {"label", label_},
      {"totals", {{"total", total_}, {"dropped", dropped_}, {"categories", std::move(categories)}}},
      {"leaves", std::move(leaves)},
      {"qtypes", std::move(qtypes)},
      {"senders", {{"tracked", track_senders_}, {"prefixes", std::move(prefixes)}}},
  };
}

inline Report Report::from_counts_json(const nlohmann::json& j) {
  using detail::require;
  try {
    const auto& senders = require(j, "senders");
    Report r(require(j, "label").get<std::string>(), require(senders, "tracked").get<bool>());
    const auto& totals = require(j, "totals");
    r.total_ = require(totals, "total").get<std::uint64_t>();
    r.dropped_ = require(totals, "dropped").get<std::uint64_t>();

    for (const auto& e : require(j, "leaves")) {
      auto leaf = parse_leaf_name(require(e, "leaf").get<std::string>());
      if (!leaf) throw ReportError("unknown leaf " + e.at("leaf").dump());
      auto c = Classification::make(*leaf, e.value("tld", std::string{}),
                                    e.value("chromium_like", false));
      const auto n = require(e, "count").get<std::uint64_t>();
      r.leaves_[c] += n;
      r.leaf_totals_[index_of(*leaf)] += n;
    }
    for (const auto& [name, e] : require(j, "qtypes").items()) {
      auto q = parse_qtype(name);
      if (!q) throw ReportError("unknown qtype " + name);
      r.qtypes_[*q] += require(e, "count").get<std::uint64_t>();
    }
    if (r.track_senders_) {
      for (const auto& p : require(senders, "prefixes")) {
        auto key = SenderKey::parse(require(p, "prefix").get<std::string>());
        if (!key) throw ReportError("bad prefix " + p.at("prefix").dump());
        SenderTally tally;
        for (const auto& [name, n] : require(p, "leaves").items()) {
          auto leaf = parse_leaf_name(name);
          if (!leaf) throw ReportError("unknown leaf " + name);
          tally.leaves[index_of(*leaf)] = n.get<std::uint64_t>();
        }
        for (const auto& [name, n] : require(p, "empty_qtypes").items()) {
          auto q = parse_qtype(name);
          if (!q) throw ReportError("unknown qtype " + name);
          tally.empty_qtypes[*q] = n.get<std::uint64_t>();
        }
        r.senders_[*key] = std::move(tally);
      }
    }
    r.check_invariants();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("malformed report JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ReportError(std::string("malformed report JSON: ") + e.what());
  }
}

/// A report plus the run metadata and unexpected-traffic policy that
/// produced it.
struct ReportDocument {
  Report report;
  nlohmann::json meta = nlohmann::json::object();
  UnexpectedPolicy policy = UnexpectedPolicy::standard();
};

inline nlohmann::json empty_stats_json(const Report& r) {
  using nlohmann::json;
  if (!r.tracks_senders()) return nullptr;
  const auto s = empty_query_stats(r);
  json fractions = json::object();
  for (const auto& [q, f] : s.qtype_fractions) fractions[qtype_mnemonic(q)] = f;
  json top = json::array();
  for (const auto& row : s.top) {
    json types = json::object();
    for (const auto& [q, n] : row.qtypes) types[qtype_mnemonic(q)] = n;
    top.push_back({{"prefix", row.key.to_string()}, {"empty", row.empty}, {"qtypes", types}});
  }
  return {{"empty_queries", s.empty_queries},
          {"sending_prefixes", s.sending_prefixes},
          {"mean_per_prefix", s.mean_per_prefix ? json(*s.mean_per_prefix) : json(nullptr)},
          {"qtype_fractions", std::move(fractions)},
          {"top", std::move(top)}};
}

/// Keys: meta, policy, totals, leaves, qtypes, senders, empty_stats. Object
/// keys are sorted, so identical inputs give identical bytes.
inline nlohmann::json to_json(const ReportDocument& doc) {
  using nlohmann::json;
  const Report& r = doc.report;
  json j = r.counts_json();
  json meta = doc.meta;
  meta["label"] = j["label"];
  j.erase("label");
  j["meta"] = std::move(meta);
  j["policy"] = {{"name", doc.policy.name()}, {"unexpected_leaves", doc.policy.unexpected_leaves()}};

  auto& totals = j["totals"];
  totals["unexpected_fraction"] = unexpected_fraction(r, doc.policy);
  const auto chromium = chromium_point(r);
  totals["chromium"] = {{"no_tld", chromium.no_tld}, {"with_tld", chromium.with_tld}};
  const auto qmin = qmin_point(r);
  totals["minimized"] = {{"com", qmin.com}, {"net", qmin.net}, {"org", qmin.org}, {"other", qmin.other}};
  j["empty_stats"] = empty_stats_json(r);
  return j;
}

inline std::string write_report_json(const ReportDocument& doc) {
  return to_json(doc).dump(2) + "\n";
}

inline ReportDocument read_report_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("report is not valid JSON: ") + e.what());
  }
  ReportDocument doc;
  const auto& meta = detail::require(j, "meta");
  nlohmann::json counts = j;
  counts["label"] = meta.value("label", std::string{});
  doc.report = Report::from_counts_json(counts);
  doc.meta = meta;
  doc.meta.erase("label");
  const auto& policy = detail::require(j, "policy");
  const auto name = detail::require(policy, "name").get<std::string>();
  doc.policy = UnexpectedPolicy::by_name(name);
  return doc;
}

/// level,name,count,fraction: one total row, one row per category and one
/// per leaf.
inline std::string write_report_csv(const Report& r) {
  std::ostringstream out;
  out << "level,name,count,fraction\n";
  out << "total,all," << r.total() << ',' << (r.total() ? "1" : "0") << '\n';
  for (Category c : kAllCategories) {
    const auto n = r.category_count(c);
    out << "category," << category_name(c) << ',' << n << ','
        << detail::format_double(ratio(n, r.total())) << '\n';
  }
  for (Leaf leaf : kAllLeaves) {
    const auto n = r.leaf_count(leaf);
    out << "leaf," << leaf_name(leaf) << ',' << n << ','
        << detail::format_double(ratio(n, r.total())) << '\n';
  }
  out << "dropped,unparseable," << r.dropped() << ",\n";
  return out.str();
}

/// label,empty,one_word,invalid_tld,valid_tld
inline std::string write_trend_csv(std::span<const TrendRow> rows) {
  std::ostringstream out;
  out << "label,empty,one_word,invalid_tld,valid_tld\n";
  for (const auto& row : rows) {
    out << detail::csv_field(row.label);
    for (Category c : kAllCategories) out << ',' << detail::format_double(row.fractions[c]);
    out << '\n';
  }
  return out.str();
}

/// Long-format series for external plotting: figure, label, series, value.
/// All values are fractions in [0, 1].
inline std::string write_plotdata(std::span<const Report> reports,
                                  const UnexpectedPolicy& policy = UnexpectedPolicy::standard(),
                                  std::size_t top_k = 10) {
  std::ostringstream out;
  out << "figure\tlabel\tseries\tvalue\n";
  auto row = [&](std::string_view fig, const std::string& label, std::string_view series,
                 double v) {
    out << fig << '\t' << label << '\t' << series << '\t' << detail::format_double(v) << '\n';
  };
  for (const auto& r : reports) {
    const auto& label = r.label();
    for (Category c : kAllCategories)
      row("categories", label, category_name(c), ratio(r.category_count(c), r.total()));
    for (const auto& [q, n] : r.qtypes()) row("qtypes", label, qtype_mnemonic(q), ratio(n, r.total()));
    const auto chromium = chromium_point(r);
    row("chromium", label, "chromium", chromium.no_tld);
    row("chromium", label, "chromium+tld", chromium.with_tld);
    const auto qmin = qmin_point(r);
    row("qmin", label, "other", qmin.other);
    row("qmin", label, "com", qmin.com);
    row("qmin", label, "net", qmin.net);
    row("qmin", label, "org", qmin.org);
    row("unexpected", label, policy.name(), unexpected_fraction(r, policy));
    if (!r.tracks_senders() || r.total() == 0) continue;
    for (const auto& s : top_senders(r, top_k))
      for (Category c : kAllCategories)
        row("top_senders", label, s.key.to_string() + "/" + std::string(category_name(c)),
            ratio(s.categories[index_of(c)], r.total()));
    const auto empty = empty_query_stats(r, top_k);
    for (const auto& s : empty.top)
      for (const auto& [q, n] : s.qtypes)
        row("empty_senders", label, s.key.to_string() + "/" + qtype_mnemonic(q),
            ratio(n, empty.empty_queries));
  }
  return out.str();
}

/// rank,prefix,total,share,empty,one_word,invalid_tld,valid_tld
inline std::string write_top_senders_csv(const Report& r, std::size_t k) {
  std::ostringstream out;
  out << "rank,prefix,total,share,empty,one_word,invalid_tld,valid_tld\n";
  std::size_t rank = 0;
  for (const auto& s : top_senders(r, k)) {
    out << ++rank << ',' << s.key.to_string() << ',' << s.total << ','
        << detail::format_double(ratio(s.total, r.total()));
    for (Category c : kAllCategories) out << ',' << s.categories[index_of(c)];
    out << '\n';
  }
  return out.str();
}

/// rank,prefix,empty,share_of_empty,<qtype>=<count>;...
inline std::string write_empty_senders_csv(const Report& r, std::size_t k) {
  std::ostringstream out;
  out << "rank,prefix,empty,share_of_empty,qtypes\n";
  const auto stats = empty_query_stats(r, k);
  std::size_t rank = 0;
  for (const auto& s : stats.top) {
    out << ++rank << ',' << s.key.to_string() << ',' << s.empty << ','
        << detail::format_double(ratio(s.empty, stats.empty_queries)) << ',';
    bool first = true;
    for (const auto& [q, n] : s.qtypes) {
      out << (first ? "" : ";") << qtype_mnemonic(q) << '=' << n;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace rootq

#endif  // ROOTQ_REPORT_HPP
