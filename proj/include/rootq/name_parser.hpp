#ifndef ROOTQ_NAME_PARSER_HPP
#define ROOTQ_NAME_PARSER_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rootq/core.hpp"

namespace rootq {

enum class ParseError : std::uint8_t {
  EmptyLabel,        // "a..b", ".a", or an empty input
  LabelTooLong,      // > 63 bytes after decoding
  NameTooLong,       // > 255 bytes in wire form
  TruncatedEscape,   // "\" or "\1" at end of input, or "\1x"
  EscapeOutOfRange,  // "\256" and above
};

inline std::string_view to_string(ParseError e) {
  switch (e) {
    case ParseError::EmptyLabel: return "empty label";
    case ParseError::LabelTooLong: return "oversize label";
    case ParseError::NameTooLong: return "oversize name";
    case ParseError::TruncatedEscape: return "truncated escape";
    case ParseError::EscapeOutOfRange: return "escape out of range";
  }
  return "?";
}

struct ParseFailure {
  ParseError reason;
  std::size_t offset;  // byte offset in the raw input where parsing stopped

  bool operator==(const ParseFailure&) const = default;
};

class ParseOutcome {
 public:
  ParseOutcome(DomainName name) : value_(std::move(name)) {}  // NOLINT
  ParseOutcome(ParseFailure failure) : value_(failure) {}     // NOLINT

  bool ok() const { return std::holds_alternative<DomainName>(value_); }
  explicit operator bool() const { return ok(); }

  const DomainName& name() const { return std::get<DomainName>(value_); }
  DomainName& name() { return std::get<DomainName>(value_); }
  const ParseFailure& failure() const { return std::get<ParseFailure>(value_); }

 private:
  std::variant<DomainName, ParseFailure> value_;
};

/// Parses a presentation-format name. Splits on unescaped dots and decodes
/// \DDD and \X escapes. A single trailing dot is accepted and ignored.
inline ParseOutcome parse_presentation(std::string_view raw) {
  if (raw == ".") return DomainName::root();
  if (raw.empty()) return ParseFailure{ParseError::EmptyLabel, 0};

  std::vector<std::string> labels;
  std::string label;
  std::size_t wire = 1;

  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };

  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '.') {
      if (label.empty()) return ParseFailure{ParseError::EmptyLabel, i};
      wire += label.size() + 1;
      if (wire > kMaxNameLength) return ParseFailure{ParseError::NameTooLong, i};
      labels.push_back(std::move(label));
      label.clear();
      continue;
    }
    if (c == '\\') {
      if (i + 1 >= raw.size()) return ParseFailure{ParseError::TruncatedEscape, i};
      if (is_digit(raw[i + 1])) {
        if (i + 3 >= raw.size() || !is_digit(raw[i + 2]) || !is_digit(raw[i + 3]))
          return ParseFailure{ParseError::TruncatedEscape, i};
        const int value = (raw[i + 1] - '0') * 100 + (raw[i + 2] - '0') * 10 + (raw[i + 3] - '0');
        if (value > 255) return ParseFailure{ParseError::EscapeOutOfRange, i};
        label.push_back(static_cast<char>(value));
        i += 3;
      } else {
        label.push_back(raw[i + 1]);
        i += 1;
      }
    } else {
      label.push_back(c);
    }
    if (label.size() > kMaxLabelLength) return ParseFailure{ParseError::LabelTooLong, i};
  }

  if (!label.empty()) {
    wire += label.size() + 1;
    if (wire > kMaxNameLength) return ParseFailure{ParseError::NameTooLong, raw.size()};
    labels.push_back(std::move(label));
  }
  return DomainName::from_labels(std::move(labels));
}

/// True iff the label holds a byte outside [A-Za-z0-9_-], i.e. one a text
/// dump would show as a \DDD escape (or as an escaped '.' or '\').
inline bool label_has_bad_encoding(std::string_view label) {
  for (unsigned char b : label) {
    const bool ok = (b >= 'a' && b <= 'z') || (b >= 'A' && b <= 'Z') ||
                    (b >= '0' && b <= '9') || b == '-' || b == '_';
    if (!ok) return true;
  }
  return false;
}

/// Appends one label in presentation form: '.' and '\' are backslash
/// escaped, bytes outside 0x21-0x7E become \DDD.
inline void append_escaped_label(std::string& out, std::string_view label) {
  for (unsigned char b : label) {
    if (b == '.' || b == '\\') {
      out.push_back('\\');
      out.push_back(static_cast<char>(b));
    } else if (b < 0x21 || b > 0x7E) {
      out.push_back('\\');
      out.push_back(static_cast<char>('0' + b / 100));
      out.push_back(static_cast<char>('0' + (b / 10) % 10));
      out.push_back(static_cast<char>('0' + b % 10));
    } else {
      out.push_back(static_cast<char>(b));
    }
  }
}

/// Fully qualified presentation form, always with a trailing dot.
inline std::string to_presentation(const DomainName& name) {
  if (name.is_root()) return ".";
  std::string out;
  for (const auto& label : name.labels()) {
    append_escaped_label(out, label);
    out.push_back('.');
  }
  return out;
}

}  // namespace rootq

#endif  // ROOTQ_NAME_PARSER_HPP
