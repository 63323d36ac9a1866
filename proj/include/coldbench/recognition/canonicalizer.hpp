#pragma once

#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace coldbench::recognition {

struct CanonicalRule {
  std::string pattern;
  std::string canonical_name;
};

struct Canonical {
  enum class Outcome { matched, passthrough, rejected };
  Outcome outcome = Outcome::rejected;
  /// Canonical name, the raw phrase on passthrough, empty when rejected.
  std::string name;

  bool accepted() const { return outcome != Outcome::rejected; }
};

/// Maps raw recognizer keywords onto canonical item names with
/// case-insensitive regular expressions; the first matching rule wins.
class Canonicalizer {
 public:
  Canonicalizer() = default;
  /// Throws ConfigError naming the first rule whose pattern does not compile.
  explicit Canonicalizer(std::vector<CanonicalRule> rules);

  /// Rule file: one `pattern<TAB>canonical_name` per line, '#' comments.
  static Canonicalizer from_file(const std::string& path);
  static std::vector<CanonicalRule> parse_rules(std::string_view text);

  Canonical apply(std::string_view raw_phrase, bool strict) const;
  /// Number of rules whose pattern matches `raw_phrase`.
  std::size_t match_count(std::string_view raw_phrase) const;

  const std::vector<CanonicalRule>& rules() const { return rules_; }

 private:
  std::vector<CanonicalRule> rules_;
  std::vector<std::regex> compiled_;
};

}  // namespace coldbench::recognition
