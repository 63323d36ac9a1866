#include "coldbench/recognition/canonicalizer.hpp"

#include <fstream>
#include <sstream>

#include "coldbench/core/types.hpp"

namespace coldbench::recognition {

Canonicalizer::Canonicalizer(std::vector<CanonicalRule> rules) : rules_(std::move(rules)) {
  compiled_.reserve(rules_.size());
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    try {
      compiled_.emplace_back(rules_[i].pattern, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
      throw ConfigError("canonical rule " + std::to_string(i + 1) + " ('" + rules_[i].pattern +
                        "' -> '" + rules_[i].canonical_name + "'): " + e.what());
    }
  }
}

std::vector<CanonicalRule> Canonicalizer::parse_rules(std::string_view text) {
  std::vector<CanonicalRule> rules;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ConfigError("rule file line " + std::to_string(line_no) + ": expected pattern<TAB>name");
    }
    rules.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return rules;
}

Canonicalizer Canonicalizer::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rule file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Canonicalizer(parse_rules(buffer.str()));
}

Canonical Canonicalizer::apply(std::string_view raw_phrase, bool strict) const {
  const std::string raw(raw_phrase);
  for (std::size_t i = 0; i < compiled_.size(); ++i) {
    if (std::regex_search(raw, compiled_[i])) return {Canonical::Outcome::matched, rules_[i].canonical_name};
  }
  if (strict) return {Canonical::Outcome::rejected, {}};
  return {Canonical::Outcome::passthrough, raw};
}

std::size_t Canonicalizer::match_count(std::string_view raw_phrase) const {
  const std::string raw(raw_phrase);
  std::size_t count = 0;
  for (const auto& re : compiled_) count += std::regex_search(raw, re) ? 1 : 0;
  return count;
}

}  // namespace coldbench::recognition
