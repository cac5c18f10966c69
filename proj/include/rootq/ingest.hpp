#ifndef ROOTQ_INGEST_HPP
#define ROOTQ_INGEST_HPP

#include <array>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rootq/core.hpp"
#include "rootq/name_parser.hpp"
#include "rootq/random.hpp"

namespace rootq {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IngestStats {
  std::uint64_t records_emitted = 0;
  std::uint64_t records_dropped_unparseable = 0;
  std::uint64_t packets_skipped = 0;  // not a UDP/53 DNS query; pcap only
  std::uint64_t bytes_read = 0;

  /// Candidates are well-formed-or-not DNS queries (pcap) or input lines (TSV).
  std::uint64_t candidates() const { return records_emitted + records_dropped_unparseable; }
};

// ---------------------------------------------------------------------------
// TSV: epoch_micros \t source_ip \t qclass \t qtype \t qname

inline std::optional<QueryRecord> parse_tsv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::array<std::string_view, 5> fields;
  std::size_t start = 0;
  for (std::size_t f = 0; f < 5; ++f) {
    const auto tab = line.find('\t', start);
    if (f < 4) {
      if (tab == std::string_view::npos) return std::nullopt;
      fields[f] = line.substr(start, tab - start);
      start = tab + 1;
    } else {
      if (tab != std::string_view::npos) return std::nullopt;
      fields[f] = line.substr(start);
    }
  }

  QueryRecord record;
  const auto ts = fields[0];
  auto [end, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), record.timestamp_us);
  if (ec != std::errc{} || end != ts.data() + ts.size() || record.timestamp_us == 0)
    return std::nullopt;

  auto source = IpAddress::parse(fields[1]);
  auto qclass = parse_qclass(fields[2]);
  auto qtype = parse_qtype(fields[3]);
  if (!source || !qclass || !qtype || fields[4].empty()) return std::nullopt;
  record.source = *source;
  record.qclass = *qclass;
  record.qtype = *qtype;
  record.qname = std::string(fields[4]);
  return record;
}

inline void write_tsv_line(std::ostream& out, const QueryRecord& r) {
  out << r.timestamp_us << '\t' << r.source.to_string() << '\t' << qclass_mnemonic(r.qclass)
      << '\t' << qtype_mnemonic(r.qtype) << '\t' << r.qname << '\n';
}

class TsvReader {
 public:
  explicit TsvReader(std::istream& in) : in_(&in) {}

  /// Next well-formed record; malformed lines are counted and skipped.
  std::optional<QueryRecord> next() {
    while (std::getline(*in_, line_)) {
      ++line_no_;
      stats_.bytes_read += line_.size() + 1;
      if (auto record = parse_tsv_line(line_)) {
        ++stats_.records_emitted;
        return record;
      }
      ++stats_.records_dropped_unparseable;
    }
    if (in_->bad()) throw IngestError("read error after line " + std::to_string(line_no_));
    return std::nullopt;
  }

  const IngestStats& stats() const { return stats_; }

 private:
  std::istream* in_;
  std::string line_;
  std::uint64_t line_no_ = 0;
  IngestStats stats_;
};

inline std::vector<QueryRecord> read_tsv(std::istream& in, IngestStats* stats = nullptr) {
  TsvReader reader(in);
  std::vector<QueryRecord> out;
  while (auto r = reader.next()) out.push_back(std::move(*r));
  if (stats) *stats = reader.stats();
  return out;
}

// ---------------------------------------------------------------------------
// Classic pcap

namespace linktype {
inline constexpr std::uint32_t kEthernet = 1;
inline constexpr std::uint32_t kRawOpenBsd = 12;
inline constexpr std::uint32_t kRaw = 101;
inline constexpr std::uint32_t kLinuxSll = 113;
inline constexpr std::uint32_t kIpv4 = 228;
inline constexpr std::uint32_t kIpv6 = 229;
}  // namespace linktype

namespace detail {

inline std::uint16_t be16(std::span<const std::uint8_t> p, std::size_t at) {
  return static_cast<std::uint16_t>(p[at] << 8 | p[at + 1]);
}

enum class PacketVerdict { Query, Skip, Drop };

struct DecodedPacket {
  PacketVerdict verdict = PacketVerdict::Skip;
  IpAddress source;
  std::uint16_t qtype = 0;
  std::uint16_t qclass = 0;
  std::string qname;
};

// DNS message: header, then the first question.
inline void decode_dns(std::span<const std::uint8_t> msg, DecodedPacket& out) {
  if (msg.size() < 12) {
    out.verdict = PacketVerdict::Drop;
    return;
  }
  if (msg[2] & 0x80) {  // QR=1: response
    out.verdict = PacketVerdict::Skip;
    return;
  }
  out.verdict = PacketVerdict::Drop;
  if (be16(msg, 4) == 0) return;

  std::size_t at = 12;
  std::size_t wire = 1;
  std::string name;
  for (;;) {
    if (at >= msg.size()) return;
    const std::uint8_t len = msg[at++];
    if (len == 0) break;
    if (len & 0xC0) return;  // compression pointer or reserved label type
    if (at + len > msg.size()) return;
    wire += len + 1u;
    if (wire > kMaxNameLength) return;
    append_escaped_label(name, std::string_view(reinterpret_cast<const char*>(&msg[at]), len));
    name.push_back('.');
    at += len;
  }
  if (at + 4 > msg.size()) return;
  out.qtype = be16(msg, at);
  out.qclass = be16(msg, at + 2);
  out.qname = name.empty() ? std::string(".") : std::move(name);
  out.verdict = PacketVerdict::Query;
}

inline void decode_udp(std::span<const std::uint8_t> seg, DecodedPacket& out) {
  if (seg.size() < 8) return;
  if (be16(seg, 2) != 53) return;
  std::size_t end = be16(seg, 4);
  if (end < 8 || end > seg.size()) end = seg.size();
  decode_dns(seg.subspan(8, end - 8), out);
}

inline void decode_ipv4(std::span<const std::uint8_t> pkt, DecodedPacket& out) {
  if (pkt.size() < 20 || (pkt[0] >> 4) != 4) return;
  const std::size_t ihl = (pkt[0] & 0x0F) * 4u;
  if (ihl < 20 || ihl > pkt.size()) return;
  const std::uint16_t frag = be16(pkt, 6);
  if ((frag & 0x1FFF) != 0 || (frag & 0x2000) != 0) return;  // fragments
  std::size_t total = be16(pkt, 2);
  if (total < ihl || total > pkt.size()) total = pkt.size();
  if (pkt[9] != 17) return;
  out.source = IpAddress::v4(pkt.subspan<12, 4>());
  decode_udp(pkt.subspan(ihl, total - ihl), out);
}

inline void decode_ipv6(std::span<const std::uint8_t> pkt, DecodedPacket& out) {
  if (pkt.size() < 40 || (pkt[0] >> 4) != 6) return;
  std::size_t end = 40 + std::size_t{be16(pkt, 4)};
  if (end > pkt.size()) end = pkt.size();
  std::uint8_t next = pkt[6];
  std::size_t at = 40;
  // hop-by-hop, routing, destination options
  while (next == 0 || next == 43 || next == 60) {
    if (at + 8 > end) return;
    const std::size_t len = (pkt[at + 1] + 1u) * 8u;
    next = pkt[at];
    at += len;
  }
  if (next != 17 || at > end) return;  // includes fragment header (44)
  out.source = IpAddress::v6(std::span<const std::uint8_t, 16>(pkt.data() + 8, 16));
  decode_udp(pkt.subspan(at, end - at), out);
}

inline void decode_ip(std::span<const std::uint8_t> pkt, DecodedPacket& out) {
  if (pkt.empty()) return;
  switch (pkt[0] >> 4) {
    case 4: decode_ipv4(pkt, out); break;
    case 6: decode_ipv6(pkt, out); break;
    default: break;
  }
}

inline void decode_by_ethertype(std::uint16_t ethertype, std::span<const std::uint8_t> payload,
                                DecodedPacket& out) {
  if (ethertype == 0x0800) decode_ipv4(payload, out);
  else if (ethertype == 0x86DD) decode_ipv6(payload, out);
}

inline DecodedPacket decode_frame(std::uint32_t link, std::span<const std::uint8_t> frame) {
  DecodedPacket out;
  switch (link) {
    case linktype::kEthernet: {
      if (frame.size() < 14) break;
      std::size_t at = 12;
      std::uint16_t ethertype = be16(frame, at);
      while (ethertype == 0x8100 || ethertype == 0x88A8) {
        at += 4;
        if (at + 2 > frame.size()) return out;
        ethertype = be16(frame, at);
      }
      decode_by_ethertype(ethertype, frame.subspan(at + 2), out);
      break;
    }
    case linktype::kLinuxSll:
      if (frame.size() < 16) break;
      decode_by_ethertype(be16(frame, 14), frame.subspan(16), out);
      break;
    case linktype::kRaw:
    case linktype::kRawOpenBsd:
      decode_ip(frame, out);
      break;
    case linktype::kIpv4:
      decode_ipv4(frame, out);
      break;
    case linktype::kIpv6:
      decode_ipv6(frame, out);
      break;
    default:
      break;
  }
  return out;
}

}  // namespace detail

/// Streams DNS queries (UDP, destination port 53, QR=0) out of a classic
/// pcap capture. Responses, TCP and other traffic count as skipped; queries
/// whose first question cannot be decoded count as dropped.
class PcapReader {
 public:
  static constexpr std::uint32_t kMaxRecordLength = 256 * 1024;

  explicit PcapReader(std::istream& in) : in_(&in) {
    std::array<std::uint8_t, 24> header{};
    if (!read_exact(header.data(), header.size()))
      throw IngestError("pcap: truncated global header");
    const std::uint32_t magic = le32(header.data());
    switch (magic) {
      case 0xA1B2C3D4: swapped_ = false; nanos_ = false; break;
      case 0xD4C3B2A1: swapped_ = true; nanos_ = false; break;
      case 0xA1B23C4D: swapped_ = false; nanos_ = true; break;
      case 0x4D3CB2A1: swapped_ = true; nanos_ = true; break;
      default: throw IngestError("pcap: bad magic number");
    }
    link_ = u32(header.data() + 20);
    switch (link_) {
      case linktype::kEthernet:
      case linktype::kRawOpenBsd:
      case linktype::kRaw:
      case linktype::kLinuxSll:
      case linktype::kIpv4:
      case linktype::kIpv6:
        break;
      default:
        throw IngestError("pcap: unsupported link type " + std::to_string(link_));
    }
  }

  std::optional<QueryRecord> next() {
    std::array<std::uint8_t, 16> rec{};
    for (;;) {
      const std::uint64_t offset = stats_.bytes_read;
      if (!read_exact(rec.data(), rec.size())) {
        if (in_->gcount() != 0) ++stats_.packets_skipped;  // truncated trailer
        if (in_->bad()) throw IngestError("pcap: read error at offset " + std::to_string(offset));
        return std::nullopt;
      }
      const std::uint32_t sec = u32(rec.data());
      const std::uint32_t frac = u32(rec.data() + 4);
      const std::uint32_t caplen = u32(rec.data() + 8);
      if (caplen > kMaxRecordLength)
        throw IngestError("pcap: corrupt record header at offset " + std::to_string(offset));
      frame_.resize(caplen);
      if (!read_exact(frame_.data(), caplen)) {
        ++stats_.packets_skipped;
        return std::nullopt;
      }

      auto packet = detail::decode_frame(link_, frame_);
      if (packet.verdict == detail::PacketVerdict::Skip) {
        ++stats_.packets_skipped;
        continue;
      }
      if (packet.verdict == detail::PacketVerdict::Drop) {
        ++stats_.records_dropped_unparseable;
        continue;
      }
      QueryRecord record;
      record.timestamp_us = std::uint64_t{sec} * 1'000'000 + (nanos_ ? frac / 1000 : frac);
      record.source = packet.source;
      record.qclass = packet.qclass;
      record.qtype = packet.qtype;
      record.qname = std::move(packet.qname);
      ++stats_.records_emitted;
      return record;
    }
  }

  const IngestStats& stats() const { return stats_; }
  std::uint32_t link_type() const { return link_; }
  bool nanosecond() const { return nanos_; }

 private:
  bool read_exact(std::uint8_t* dst, std::size_t n) {
    in_->read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    stats_.bytes_read += static_cast<std::uint64_t>(in_->gcount());
    return static_cast<std::size_t>(in_->gcount()) == n;
  }

  static std::uint32_t le32(const std::uint8_t* p) {
    return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
           std::uint32_t{p[3]} << 24;
  }

  std::uint32_t u32(const std::uint8_t* p) const {
    const std::uint32_t v = le32(p);
    return swapped_ ? __builtin_bswap32(v) : v;
  }

  std::istream* in_;
  bool swapped_ = false;
  bool nanos_ = false;
  std::uint32_t link_ = 0;
  std::vector<std::uint8_t> frame_;
  IngestStats stats_;
};

inline std::vector<QueryRecord> read_pcap(std::istream& in, IngestStats* stats = nullptr) {
  PcapReader reader(in);
  std::vector<QueryRecord> out;
  while (auto r = reader.next()) out.push_back(std::move(*r));
  if (stats) *stats = reader.stats();
  return out;
}

// ---------------------------------------------------------------------------
// Sampling and time windows

/// Independent Bernoulli(rate) keep decisions from a seeded stream.
class Sampler {
 public:
  Sampler(double rate, std::uint64_t seed) : rate_(rate), rng_(seed) {
    if (!(rate > 0.0 && rate <= 1.0))
      throw std::invalid_argument("sample rate must be in (0, 1]");
  }

  bool keep() { return rng_.bernoulli(rate_); }
  double rate() const { return rate_; }

 private:
  double rate_;
  Rng rng_;
};

inline std::vector<QueryRecord> sample(std::span<const QueryRecord> records, double rate,
                                       std::uint64_t seed) {
  Sampler sampler(rate, seed);
  std::vector<QueryRecord> out;
  out.reserve(static_cast<std::size_t>(static_cast<double>(records.size()) * rate) + 16);
  for (const auto& r : records)
    if (sampler.keep()) out.push_back(r);
  return out;
}

inline constexpr std::uint64_t kMicrosPerMinute = 60'000'000;
inline constexpr std::uint64_t kMicrosPerDay = 1440 * kMicrosPerMinute;

/// Half-open time-of-day interval [start, end), offsets from a day origin.
class TimeWindow {
 public:
  TimeWindow(std::uint64_t start_us, std::uint64_t end_us) : start_(start_us), end_(end_us) {
    if (start_us >= end_us || end_us > kMicrosPerDay)
      throw std::invalid_argument("time window must satisfy start < end within one day");
  }

  /// "HH:MM-HH:MM"; "24:00" is accepted as an end bound.
  static TimeWindow parse(std::string_view text) {
    auto hhmm = [&](std::string_view s) -> std::uint64_t {
      if (s.size() != 5 || s[2] != ':') throw std::invalid_argument("bad time " + std::string(s));
      int h = 0, m = 0;
      auto r1 = std::from_chars(s.data(), s.data() + 2, h);
      auto r2 = std::from_chars(s.data() + 3, s.data() + 5, m);
      if (r1.ec != std::errc{} || r1.ptr != s.data() + 2 || r2.ec != std::errc{} ||
          r2.ptr != s.data() + 5 || h > 24 || m > 59 || (h == 24 && m != 0))
        throw std::invalid_argument("bad time " + std::string(s));
      return static_cast<std::uint64_t>(h * 60 + m) * kMicrosPerMinute;
    };
    const auto dash = text.find('-');
    if (dash == std::string_view::npos) throw std::invalid_argument("window must be HH:MM-HH:MM");
    return TimeWindow(hhmm(text.substr(0, dash)), hhmm(text.substr(dash + 1)));
  }

  bool contains(std::uint64_t timestamp_us, std::uint64_t day_origin_us) const {
    return timestamp_us >= day_origin_us + start_ && timestamp_us < day_origin_us + end_;
  }

  std::uint64_t start_us() const { return start_; }
  std::uint64_t end_us() const { return end_; }

  std::string to_string() const {
    auto fmt = [](std::uint64_t us) {
      const auto minutes = us / kMicrosPerMinute;
      char buf[8];
      std::snprintf(buf, sizeof buf, "%02u:%02u", static_cast<unsigned>(minutes / 60),
                    static_cast<unsigned>(minutes % 60));
      return std::string(buf);
    };
    return fmt(start_) + "-" + fmt(end_);
  }

 private:
  std::uint64_t start_;
  std::uint64_t end_;
};

inline std::vector<QueryRecord> window(std::span<const QueryRecord> records, const TimeWindow& w,
                                       std::uint64_t day_origin_us) {
  std::vector<QueryRecord> out;
  for (const auto& r : records)
    if (w.contains(r.timestamp_us, day_origin_us)) out.push_back(r);
  return out;
}

}  // namespace rootq

#endif  // ROOTQ_INGEST_HPP
