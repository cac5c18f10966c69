#ifndef ROOTQ_CLASSIFIER_HPP
#define ROOTQ_CLASSIFIER_HPP

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rootq/core.hpp"
#include "rootq/name_parser.hpp"
#include "rootq/tld_registry.hpp"

namespace rootq {

using AppleTalkSet = std::set<std::string, std::less<>>;

inline AppleTalkSet default_appletalk_tlds() { return {"appletalk"}; }

/// Shape of a Chromium captive-portal probe label: 7-15 bytes, all a-z.
inline bool is_chromium_label(std::string_view label) {
  if (label.size() < 7 || label.size() > 15) return false;
  for (char c : label)
    if (c < 'a' || c > 'z') return false;
  return true;
}

inline bool is_all_numeric(std::string_view label) {
  if (label.empty()) return false;
  for (char c : label)
    if (c < '0' || c > '9') return false;
  return true;
}

/// Classifies a parsed name. Tests run in a fixed order and the first match
/// wins, which is what makes the leaves mutually exclusive:
///
///   root                          -> Empty
///   one label:  valid TLD         -> Minimized
///               Chromium shaped   -> OneWordChromium
///               otherwise         -> OneWordOther
///   2+ labels, valid TLD          -> ValidTld (chromium_like iff exactly two
///                                    labels and the left one is Chromium shaped)
///   2+ labels, invalid TLD:  AppleTalk set -> BadEncoding -> AllNumeric
///                            -> Chromium (two labels) -> Other
inline Classification classify(const DomainName& name, const TldRegistry& registry,
                               const AppleTalkSet& appletalk) {
  if (name.is_root()) return Classification::empty();

  const auto& labels = name.labels();
  const std::string& tld = name.tld();

  if (labels.size() == 1) {
    if (registry.contains(tld)) return Classification::minimized(ascii_lowercase(tld));
    if (is_chromium_label(tld)) return Classification::one_word_chromium();
    return Classification::one_word_other();
  }

  const bool two_label_probe = labels.size() == 2 && is_chromium_label(labels.front());
  if (registry.contains(tld))
    return Classification::valid_tld(ascii_lowercase(tld), two_label_probe);

  std::string folded = ascii_lowercase(tld);
  if (appletalk.count(folded) != 0) return Classification::invalid_appletalk();
  if (label_has_bad_encoding(tld)) return Classification::invalid_bad_encoding();
  if (is_all_numeric(tld)) return Classification::invalid_all_numeric();
  if (two_label_probe) return Classification::invalid_chromium();
  return Classification::invalid_other(std::move(folded));
}

/// Binds a registry and AppleTalk set. The registry must outlive the
/// classifier.
class Classifier {
 public:
  explicit Classifier(const TldRegistry& registry,
                      AppleTalkSet appletalk = default_appletalk_tlds())
      : registry_(&registry), appletalk_(std::move(appletalk)) {
    for (const auto& tld : appletalk_) {
      if (tld.empty() || tld != ascii_lowercase(tld))
        throw std::invalid_argument("AppleTalk TLDs must be non-empty and lowercase: " + tld);
    }
  }

  Classification operator()(const DomainName& name) const {
    return classify(name, *registry_, appletalk_);
  }

  const TldRegistry& registry() const { return *registry_; }
  const AppleTalkSet& appletalk() const { return appletalk_; }

 private:
  const TldRegistry* registry_;
  AppleTalkSet appletalk_;
};

}  // namespace rootq

#endif  // ROOTQ_CLASSIFIER_HPP
