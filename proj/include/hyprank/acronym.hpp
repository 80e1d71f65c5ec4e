#pragma once

// Acronym harvesting from prospectus-style text: candidate extraction by
// character alignment of "long form (SHORT)" patterns, the four exclusion
// filters, and term expansion through the resulting table.

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace hyprank::acronym {

struct AcronymEntry {
  std::string short_form;
  std::string long_form;
  std::string doc_id;

  friend bool operator==(const AcronymEntry&, const AcronymEntry&) = default;
};

// Every "long form (SHORT)" in `doc` whose short form passes the shape check
// (1-3 tokens of 2-9 characters, first character a letter, at least half
// letters) and aligns, right to left, with the words in front of the
// parenthesis. The window holds at most min(n + 5, 2n) words, n being the
// character count of the short form.
std::vector<AcronymEntry> extract_candidates(std::string_view doc, std::string_view doc_id);

// Right-to-left alignment of `short_form` into `long_candidate`; returns the
// character offset in `long_candidate` where the long form starts. The first
// short-form character must land on a word start.
std::optional<std::size_t> align(std::string_view short_form, std::string_view long_candidate);

enum class FilterRule {
  ExpansionNotLonger = 0,  // len(long) <= len(short)
  ExpansionHasParenthesis = 1,
  ShortIsEnglishWord = 2,
  ExpansionTooShort = 3,  // len(long) <= 5
};

inline constexpr std::size_t kNumFilterRules = 4;

std::string_view rule_name(FilterRule rule);

// First rule that rejects the entry, if any. Lengths count code points.
std::optional<FilterRule> rejecting_rule(const AcronymEntry& entry,
                                         const std::unordered_set<std::string>& wordlist);

struct FilterStats {
  std::size_t candidates = 0;
  // Entries dropped by each rule; an entry is attributed to the first rule
  // (in declaration order) that rejects it.
  std::array<std::size_t, kNumFilterRules> dropped{};
  std::size_t kept = 0;
};

// Keeps entries passing all four rules, in input order.
std::vector<AcronymEntry> filter_entries(const std::vector<AcronymEntry>& entries,
                                         const std::unordered_set<std::string>& wordlist,
                                         FilterStats* stats = nullptr);

// Lowercase word per line; blank lines ignored.
std::unordered_set<std::string> load_wordlist(const std::filesystem::path& path);

// clean(short) -> long form; first insertion wins.
class AcronymTable {
 public:
  AcronymTable() = default;

  // Returns false when the key was already present.
  bool insert(std::string_view short_form, std::string long_form);

  static AcronymTable from_entries(const std::vector<AcronymEntry>& entries);
  static AcronymTable from_json_file(const std::filesystem::path& path);
  std::string to_json() const;

  const std::string* find(std::string_view clean_key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, std::string> entries_;
};

// Whole-term hit returns the long form; otherwise the first word (left to
// right) that is a key is replaced in place. Never returns the input as is.
std::optional<std::string> expand_term(std::string_view term, const AcronymTable& table);

// Reads every regular file in `dir` (sorted by name, doc_id = file name) and
// returns all candidates in document order.
std::vector<AcronymEntry> extract_from_directory(const std::filesystem::path& dir);

}  // namespace hyprank::acronym
