#ifndef ROOTQ_CORE_HPP
#define ROOTQ_CORE_HPP

#include <arpa/inet.h>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rootq {

// ---------------------------------------------------------------------------
// Query type / class registry

namespace qtype {
inline constexpr std::uint16_t A = 1;
inline constexpr std::uint16_t NS = 2;
inline constexpr std::uint16_t SOA = 6;
inline constexpr std::uint16_t PTR = 12;
inline constexpr std::uint16_t MX = 15;
inline constexpr std::uint16_t TXT = 16;
inline constexpr std::uint16_t AAAA = 28;
inline constexpr std::uint16_t SRV = 33;
inline constexpr std::uint16_t DS = 43;
inline constexpr std::uint16_t DNSKEY = 48;
}  // namespace qtype

namespace qclass {
inline constexpr std::uint16_t IN = 1;
inline constexpr std::uint16_t CS = 2;
inline constexpr std::uint16_t CH = 3;
inline constexpr std::uint16_t HS = 4;
inline constexpr std::uint16_t NONE = 254;
inline constexpr std::uint16_t ANY = 255;
}  // namespace qclass

namespace detail {

struct CodeName {
  std::uint16_t code;
  std::string_view name;
};

inline constexpr std::array<CodeName, 10> kTypeNames{{
    {qtype::A, "A"},
    {qtype::NS, "NS"},
    {qtype::SOA, "SOA"},
    {qtype::PTR, "PTR"},
    {qtype::MX, "MX"},
    {qtype::TXT, "TXT"},
    {qtype::AAAA, "AAAA"},
    {qtype::SRV, "SRV"},
    {qtype::DS, "DS"},
    {qtype::DNSKEY, "DNSKEY"},
}};

inline constexpr std::array<CodeName, 6> kClassNames{{
    {qclass::IN, "IN"},
    {qclass::CS, "CS"},
    {qclass::CH, "CH"},
    {qclass::HS, "HS"},
    {qclass::NONE, "NONE"},
    {qclass::ANY, "ANY"},
}};

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           auto lower = [](char c) {
             return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
           };
           return lower(x) == lower(y);
         });
}

// Parses the RFC 3597 generic form, e.g. "TYPE65280" with prefix "TYPE".
inline std::optional<std::uint16_t> parse_generic(std::string_view text,
                                                  std::string_view prefix) {
  if (text.size() <= prefix.size() || !iequals(text.substr(0, prefix.size()), prefix))
    return std::nullopt;
  std::string_view digits = text.substr(prefix.size());
  if (digits.size() > 5) return std::nullopt;
  std::uint32_t value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + static_cast<std::uint32_t>(c - '0');
  }
  if (value > 0xFFFF) return std::nullopt;
  return static_cast<std::uint16_t>(value);
}

template <std::size_t N>
std::string mnemonic(const std::array<CodeName, N>& table, std::uint16_t code,
                     std::string_view generic) {
  for (const auto& entry : table)
    if (entry.code == code) return std::string(entry.name);
  return std::string(generic) + std::to_string(code);
}

template <std::size_t N>
std::optional<std::uint16_t> parse_mnemonic(const std::array<CodeName, N>& table,
                                            std::string_view text,
                                            std::string_view generic) {
  for (const auto& entry : table)
    if (iequals(entry.name, text)) return entry.code;
  return parse_generic(text, generic);
}

}  // namespace detail

/// Mnemonic for a query type; unknown codes render as "TYPE<code>".
inline std::string qtype_mnemonic(std::uint16_t code) {
  return detail::mnemonic(detail::kTypeNames, code, "TYPE");
}

/// Inverse of qtype_mnemonic. Case-insensitive.
inline std::optional<std::uint16_t> parse_qtype(std::string_view text) {
  return detail::parse_mnemonic(detail::kTypeNames, text, "TYPE");
}

inline std::string qclass_mnemonic(std::uint16_t code) {
  return detail::mnemonic(detail::kClassNames, code, "CLASS");
}

inline std::optional<std::uint16_t> parse_qclass(std::string_view text) {
  return detail::parse_mnemonic(detail::kClassNames, text, "CLASS");
}

// ---------------------------------------------------------------------------
// Addresses

class IpAddress {
 public:
  enum class Family : std::uint8_t { V4, V6 };

  IpAddress() = default;

  static IpAddress v4(std::span<const std::uint8_t, 4> bytes) {
    IpAddress a;
    a.family_ = Family::V4;
    std::copy(bytes.begin(), bytes.end(), a.bytes_.begin());
    return a;
  }

  static IpAddress v6(std::span<const std::uint8_t, 16> bytes) {
    IpAddress a;
    a.family_ = Family::V6;
    std::copy(bytes.begin(), bytes.end(), a.bytes_.begin());
    return a;
  }

  static std::optional<IpAddress> parse(std::string_view text) {
    if (text.empty() || text.size() >= INET6_ADDRSTRLEN) return std::nullopt;
    char buf[INET6_ADDRSTRLEN] = {};
    std::copy(text.begin(), text.end(), buf);
    std::array<std::uint8_t, 16> raw{};
    if (text.find(':') == std::string_view::npos) {
      if (inet_pton(AF_INET, buf, raw.data()) != 1) return std::nullopt;
      return v4(std::span<const std::uint8_t, 4>(raw.data(), 4));
    }
    if (inet_pton(AF_INET6, buf, raw.data()) != 1) return std::nullopt;
    return v6(raw);
  }

  Family family() const { return family_; }
  bool is_v4() const { return family_ == Family::V4; }

  std::span<const std::uint8_t> bytes() const {
    return {bytes_.data(), is_v4() ? std::size_t{4} : std::size_t{16}};
  }

  std::string to_string() const {
    char buf[INET6_ADDRSTRLEN] = {};
    inet_ntop(is_v4() ? AF_INET : AF_INET6, bytes_.data(), buf, sizeof buf);
    return buf;
  }

  /// Zeroes every bit past the first `bits`.
  IpAddress masked(unsigned bits) const {
    IpAddress out = *this;
    const unsigned width = is_v4() ? 32 : 128;
    for (unsigned i = 0; i < width / 8; ++i) {
      const unsigned first_bit = i * 8;
      if (first_bit >= bits) {
        out.bytes_[i] = 0;
      } else if (bits - first_bit < 8) {
        out.bytes_[i] &= static_cast<std::uint8_t>(0xFF << (8 - (bits - first_bit)));
      }
    }
    return out;
  }

  // V4 sorts before V6, then numerically.
  auto operator<=>(const IpAddress&) const = default;
  bool operator==(const IpAddress&) const = default;

 private:
  Family family_ = Family::V4;
  std::array<std::uint8_t, 16> bytes_{};
};

/// Sender grouping key: an IPv4 /16 or IPv6 /48 network.
class SenderKey {
 public:
  static constexpr unsigned kV4Bits = 16;
  static constexpr unsigned kV6Bits = 48;

  SenderKey() = default;

  static SenderKey of(const IpAddress& address) {
    SenderKey key;
    key.prefix_ = address.masked(address.is_v4() ? kV4Bits : kV6Bits);
    return key;
  }

  /// Parses "44.242.0.0/16" or "2001:db8:1::/48". Host bits must be zero.
  static std::optional<SenderKey> parse(std::string_view text) {
    auto slash = text.rfind('/');
    if (slash == std::string_view::npos) return std::nullopt;
    auto address = IpAddress::parse(text.substr(0, slash));
    if (!address) return std::nullopt;
    const std::string_view bits = text.substr(slash + 1);
    const std::string_view expected = address->is_v4() ? "16" : "48";
    if (bits != expected) return std::nullopt;
    SenderKey key = of(*address);
    if (!(key.prefix_ == *address)) return std::nullopt;
    return key;
  }

  const IpAddress& prefix() const { return prefix_; }
  unsigned length() const { return prefix_.is_v4() ? kV4Bits : kV6Bits; }

  std::string to_string() const {
    return prefix_.to_string() + "/" + std::to_string(length());
  }

  auto operator<=>(const SenderKey&) const = default;
  bool operator==(const SenderKey&) const = default;

 private:
  IpAddress prefix_;
};

// ---------------------------------------------------------------------------
// Records and names

struct QueryRecord {
  std::uint64_t timestamp_us = 0;
  IpAddress source;
  std::uint16_t qclass = qclass::IN;
  std::uint16_t qtype = qtype::A;
  std::string qname;  // presentation format, as captured

  bool operator==(const QueryRecord&) const = default;
};

inline constexpr std::size_t kMaxLabelLength = 63;
inline constexpr std::size_t kMaxNameLength = 255;

/// A parsed domain name. Labels are raw bytes, leftmost first, never case
/// folded. The root name has no labels.
class DomainName {
 public:
  static DomainName root() { return DomainName{}; }

  /// Throws std::invalid_argument if any label is empty or longer than 63
  /// bytes, or the wire length would exceed 255 bytes.
  static DomainName from_labels(std::vector<std::string> labels) {
    if (labels.empty())
      throw std::invalid_argument("a non-root name needs at least one label");
    std::size_t wire = 1;
    for (const auto& label : labels) {
      if (label.empty() || label.size() > kMaxLabelLength)
        throw std::invalid_argument("label length must be 1-63 bytes");
      wire += label.size() + 1;
    }
    if (wire > kMaxNameLength)
      throw std::invalid_argument("name exceeds 255 bytes");
    DomainName name;
    name.labels_ = std::move(labels);
    return name;
  }

  bool is_root() const { return labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t label_count() const { return labels_.size(); }

  /// Rightmost label. Precondition: !is_root().
  const std::string& tld() const { return labels_.back(); }

  std::size_t wire_length() const {
    std::size_t wire = 1;
    for (const auto& label : labels_) wire += label.size() + 1;
    return wire;
  }

  bool operator==(const DomainName&) const = default;

 private:
  DomainName() = default;
  std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Taxonomy

/// Leaves of the classification tree. Declaration order is the canonical
/// output order.
enum class Leaf : std::uint8_t {
  Empty,
  Minimized,
  OneWordChromium,
  OneWordOther,
  ValidTld,
  InvalidAppleTalk,
  InvalidBadEncoding,
  InvalidAllNumeric,
  InvalidChromium,
  InvalidOther,
};
inline constexpr std::size_t kLeafCount = 10;

inline constexpr std::array<Leaf, kLeafCount> kAllLeaves{
    Leaf::Empty,           Leaf::Minimized,         Leaf::OneWordChromium,
    Leaf::OneWordOther,    Leaf::ValidTld,          Leaf::InvalidAppleTalk,
    Leaf::InvalidBadEncoding, Leaf::InvalidAllNumeric, Leaf::InvalidChromium,
    Leaf::InvalidOther,
};

enum class Category : std::uint8_t { Empty, OneWord, InvalidTld, ValidTld };
inline constexpr std::size_t kCategoryCount = 4;

inline constexpr std::array<Category, kCategoryCount> kAllCategories{
    Category::Empty, Category::OneWord, Category::InvalidTld, Category::ValidTld};

constexpr std::size_t index_of(Leaf leaf) { return static_cast<std::size_t>(leaf); }
constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }

constexpr Category category_of(Leaf leaf) {
  switch (leaf) {
    case Leaf::Empty:
      return Category::Empty;
    case Leaf::Minimized:
    case Leaf::OneWordChromium:
    case Leaf::OneWordOther:
      return Category::OneWord;
    case Leaf::ValidTld:
      return Category::ValidTld;
    case Leaf::InvalidAppleTalk:
    case Leaf::InvalidBadEncoding:
    case Leaf::InvalidAllNumeric:
    case Leaf::InvalidChromium:
    case Leaf::InvalidOther:
      return Category::InvalidTld;
  }
  return Category::InvalidTld;
}

constexpr bool leaf_has_tld_detail(Leaf leaf) {
  return leaf == Leaf::Minimized || leaf == Leaf::ValidTld || leaf == Leaf::InvalidOther;
}

inline std::string_view leaf_name(Leaf leaf) {
  switch (leaf) {
    case Leaf::Empty: return "empty";
    case Leaf::Minimized: return "one_word/minimized";
    case Leaf::OneWordChromium: return "one_word/chromium";
    case Leaf::OneWordOther: return "one_word/other";
    case Leaf::ValidTld: return "has_tld/valid_tld";
    case Leaf::InvalidAppleTalk: return "has_tld/invalid_tld/appletalk";
    case Leaf::InvalidBadEncoding: return "has_tld/invalid_tld/bad_encoding";
    case Leaf::InvalidAllNumeric: return "has_tld/invalid_tld/all_numeric";
    case Leaf::InvalidChromium: return "has_tld/invalid_tld/chromium";
    case Leaf::InvalidOther: return "has_tld/invalid_tld/other";
  }
  return "?";
}

inline std::optional<Leaf> parse_leaf_name(std::string_view text) {
  for (Leaf leaf : kAllLeaves)
    if (leaf_name(leaf) == text) return leaf;
  return std::nullopt;
}

inline std::string_view category_name(Category c) {
  switch (c) {
    case Category::Empty: return "empty";
    case Category::OneWord: return "one_word";
    case Category::InvalidTld: return "invalid_tld";
    case Category::ValidTld: return "valid_tld";
  }
  return "?";
}

/// One leaf of the taxonomy plus its detail: the folded TLD for Minimized,
/// ValidTld and InvalidOther, and the Chromium-shape flag for ValidTld.
class Classification {
 public:
  static Classification empty() { return Classification(Leaf::Empty, {}, false); }
  static Classification minimized(std::string tld) {
    return Classification(Leaf::Minimized, std::move(tld), false);
  }
  static Classification one_word_chromium() {
    return Classification(Leaf::OneWordChromium, {}, false);
  }
  static Classification one_word_other() {
    return Classification(Leaf::OneWordOther, {}, false);
  }
  static Classification valid_tld(std::string tld, bool chromium_like) {
    return Classification(Leaf::ValidTld, std::move(tld), chromium_like);
  }
  static Classification invalid_appletalk() {
    return Classification(Leaf::InvalidAppleTalk, {}, false);
  }
  static Classification invalid_bad_encoding() {
    return Classification(Leaf::InvalidBadEncoding, {}, false);
  }
  static Classification invalid_all_numeric() {
    return Classification(Leaf::InvalidAllNumeric, {}, false);
  }
  static Classification invalid_chromium() {
    return Classification(Leaf::InvalidChromium, {}, false);
  }
  static Classification invalid_other(std::string tld) {
    return Classification(Leaf::InvalidOther, std::move(tld), false);
  }

  /// Generic constructor used by deserialisation; enforces the same shape
  /// rules as the named factories.
  static Classification make(Leaf leaf, std::string tld, bool chromium_like) {
    if (leaf_has_tld_detail(leaf) != !tld.empty())
      throw std::invalid_argument("TLD detail does not match leaf " +
                                  std::string(leaf_name(leaf)));
    if (chromium_like && leaf != Leaf::ValidTld)
      throw std::invalid_argument("chromium_like applies to valid_tld only");
    return Classification(leaf, std::move(tld), chromium_like);
  }

  Leaf leaf() const { return leaf_; }
  Category category() const { return category_of(leaf_); }
  const std::string& tld() const { return tld_; }
  bool chromium_like() const { return chromium_like_; }

  auto operator<=>(const Classification&) const = default;
  bool operator==(const Classification&) const = default;

 private:
  Classification(Leaf leaf, std::string tld, bool chromium_like)
      : leaf_(leaf), tld_(std::move(tld)), chromium_like_(chromium_like) {}

  Leaf leaf_;
  std::string tld_;
  bool chromium_like_;
};

inline std::string to_string(const Classification& c) {
  std::string out(leaf_name(c.leaf()));
  if (!c.tld().empty()) out += "(" + c.tld() + ")";
  if (c.chromium_like()) out += "+chromium";
  return out;
}

}  // namespace rootq

#endif  // ROOTQ_CORE_HPP
