#ifndef ROOTQ_TLD_REGISTRY_HPP
#define ROOTQ_TLD_REGISTRY_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace rootq {

class RegistryError : public std::runtime_error {
 public:
  RegistryError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  /// 1-based line number of the offending entry, 0 if not line specific.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool is_tld_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

}  // namespace detail

/// ASCII-only lowercase fold; other bytes pass through unchanged.
inline std::string ascii_lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = detail::ascii_lower(c);
  return out;
}

/// Immutable set of valid top-level domains in the published IANA
/// tlds-alpha-by-domain format.
class TldRegistry {
 public:
  /// '#' lines are comments; other lines are trimmed, lowercased and
  /// validated. Blank lines are skipped and duplicates collapse.
  static TldRegistry load(std::istream& in, std::string source) {
    TldRegistry registry;
    std::string version;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.front() == '#') {
        if (version.empty() && line.rfind("# Version ", 0) == 0) {
          auto end = line.find(',');
          version = line.substr(10, end == std::string::npos ? std::string::npos : end - 10);
        }
        continue;
      }
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto last = line.find_last_not_of(" \t\r");
      std::string entry = ascii_lowercase(std::string_view(line).substr(first, last - first + 1));
      if (entry.size() > 63) throw RegistryError("TLD longer than 63 bytes: " + entry, line_no);
      if (!std::all_of(entry.begin(), entry.end(), detail::is_tld_char))
        throw RegistryError("invalid character in TLD: " + entry, line_no);
      registry.entries_.insert(std::move(entry));
    }
    if (in.bad()) throw RegistryError("read error in " + source);
    if (registry.entries_.empty()) throw RegistryError("empty registry: " + source);

    registry.source_ = std::move(source);
    if (!version.empty()) registry.source_ += " (version " + version + ")";
    registry.source_ += ", " + std::to_string(registry.entries_.size()) + " entries";
    return registry;
  }

  static TldRegistry load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw RegistryError("cannot open TLD list " + path.string());
    return load(in, path.string());
  }

  static TldRegistry from_entries(const std::vector<std::string>& entries,
                                  std::string source = "inline") {
    std::stringstream ss;
    for (const auto& e : entries) ss << e << '\n';
    return load(ss, std::move(source));
  }

  /// Case-insensitive membership; labels with bytes outside [a-z0-9-] after
  /// folding are never members.
  bool contains(std::string_view label) const {
    if (label.empty() || label.size() > 63) return false;
    char buf[64];
    for (std::size_t i = 0; i < label.size(); ++i) {
      buf[i] = detail::ascii_lower(label[i]);
      if (!detail::is_tld_char(buf[i])) return false;
    }
    return entries_.count(std::string(buf, label.size())) != 0;
  }

  std::size_t size() const { return entries_.size(); }

  /// Path, IANA version stamp when present, and entry count.
  const std::string& source_description() const { return source_; }

  std::vector<std::string> sorted_entries() const {
    std::vector<std::string> out(entries_.begin(), entries_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  TldRegistry() = default;

  std::unordered_set<std::string> entries_;
  std::string source_;
};

inline bool is_valid_tld(const TldRegistry& registry, std::string_view label) {
  return registry.contains(label);
}

}  // namespace rootq

#endif  // ROOTQ_TLD_REGISTRY_HPP
