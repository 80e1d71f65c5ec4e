#pragma once

// Cleaning pipeline shared by every place that compares terms, glossary
// entries and lookup labels: lowercase, punctuation and symbols to space,
// whitespace collapse, per-token singularization.

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>
#include <unordered_map>
#include <unordered_set>

namespace hyprank::textnorm {

// Normalized text: lowercase, no punctuation, single-spaced, singular tokens.
class CleanText {
 public:
  CleanText() = default;

  const std::string& text() const { return text_; }
  bool empty() const { return text_.empty(); }

  friend bool operator==(const CleanText&, const CleanText&) = default;
  friend auto operator<=>(const CleanText&, const CleanText&) = default;

 private:
  friend class Cleaner;
  explicit CleanText(std::string text) : text_(std::move(text)) {}

  std::string text_;
};

using TokenSet = std::set<std::string>;

// Rule-based English singularizer with an override table.
//
// Order: exception key -> mapped value; exception value -> unchanged;
// length <= 3 -> unchanged; "ies" -> "y"; "sses"/"xes"/"ches"/"shes" drop
// "es"; "ss"/"us" endings unchanged; trailing "s" dropped.
class Singularizer {
 public:
  // Built-in exception table.
  Singularizer();

  // Exceptions from a JSON map {"plural": "singular"}; replaces the
  // built-in table.
  static Singularizer from_file(const std::filesystem::path& path);
  static Singularizer from_map(std::unordered_map<std::string, std::string> exceptions);

  std::string singularize(std::string_view token) const;

  const std::unordered_map<std::string, std::string>& exceptions() const { return exceptions_; }

 private:
  void index_fixed_points();

  std::unordered_map<std::string, std::string> exceptions_;
  std::unordered_set<std::string> fixed_points_;
};

class Cleaner {
 public:
  Cleaner() = default;
  explicit Cleaner(Singularizer singularizer) : singularizer_(std::move(singularizer)) {}

  CleanText clean(std::string_view raw) const;

  const Singularizer& singularizer() const { return singularizer_; }

 private:
  Singularizer singularizer_;
};

// Process-wide cleaner with the built-in exception table.
const Cleaner& default_cleaner();

inline CleanText clean(std::string_view raw) { return default_cleaner().clean(raw); }
inline std::string singularize(std::string_view token) {
  return default_cleaner().singularizer().singularize(token);
}

TokenSet token_set(const CleanText& clean);

// Whitespace-split tokens of already-clean text, in order, duplicates kept.
std::vector<std::string> tokens(const CleanText& clean);

// Lowercase and separator mapping without singularization; exposed for the
// acronym extractor, which needs raw character classes.
bool is_separator(char32_t cp);
char32_t to_lower(char32_t cp);

// UTF-8 helpers. Invalid sequences decode as U+FFFD.
std::u32string decode_utf8(std::string_view text);
void append_utf8(std::string& out, char32_t cp);

}  // namespace hyprank::textnorm
