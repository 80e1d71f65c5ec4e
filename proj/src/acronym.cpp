#include "hyprank/acronym.hpp"

#include <algorithm>
#include <fstream>

#include "hyprank/error.hpp"
#include "hyprank/io.hpp"
#include "hyprank/textnorm.hpp"

namespace hyprank::acronym {
namespace {

struct Token {
  std::size_t begin;  // byte offsets into the document
  std::size_t end;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_ascii_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

bool is_split_char(char c) {
  switch (c) {
    case '(': case ')': case '[': case ']': case '{': case '}':
    case ',': case ';': case ':': case '"': case '!': case '?':
      return true;
    default:
      return false;
  }
}

// Whitespace chunks, with bracket and clause punctuation split into their
// own tokens. A trailing period is split off unless the chunk holds another
// period ("U.S." stays whole).
std::vector<Token> tokenize(std::string_view doc) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < doc.size()) {
    while (i < doc.size() && is_space(doc[i])) ++i;
    std::size_t chunk_end = i;
    while (chunk_end < doc.size() && !is_space(doc[chunk_end])) ++chunk_end;
    std::size_t j = i;
    while (j < chunk_end) {
      if (is_split_char(doc[j])) {
        out.push_back({j, j + 1});
        ++j;
        continue;
      }
      std::size_t k = j;
      while (k < chunk_end && !is_split_char(doc[k])) ++k;
      std::string_view word = doc.substr(j, k - j);
      if (word.size() > 1 && word.back() == '.' &&
          word.substr(0, word.size() - 1).find('.') == std::string_view::npos) {
        out.push_back({j, k - 1});
        out.push_back({k - 1, k});
      } else {
        out.push_back({j, k});
      }
      j = k;
    }
    i = chunk_end;
  }
  return out;
}

std::size_t codepoints(std::string_view s) { return textnorm::decode_utf8(s).size(); }

bool short_form_shape_ok(std::string_view doc, const std::vector<Token>& tokens, std::size_t first,
                         std::size_t last) {
  std::size_t letters = 0;
  std::size_t chars = 0;
  for (std::size_t t = first; t <= last; ++t) {
    std::string_view word = doc.substr(tokens[t].begin, tokens[t].end - tokens[t].begin);
    std::size_t n = codepoints(word);
    if (n < 2 || n > 9) return false;
    for (char c : word) letters += is_ascii_alpha(c) ? 1 : 0;
    chars += n;
  }
  chars += last - first;  // joining spaces
  if (2 * letters < chars) return false;
  return is_ascii_alpha(doc[tokens[first].begin]);
}

}  // namespace

std::optional<std::size_t> align(std::string_view short_form, std::string_view long_candidate) {
  long long li = static_cast<long long>(long_candidate.size()) - 1;
  long long si = static_cast<long long>(short_form.size()) - 1;
  while (si >= 0) {
    char c = lower(short_form[si]);
    if (!is_ascii_alnum(c)) {
      --si;
      continue;
    }
    while (li >= 0 && (lower(long_candidate[li]) != c ||
                       (si == 0 && li > 0 && is_ascii_alnum(long_candidate[li - 1])))) {
      --li;
    }
    if (li < 0) return std::nullopt;
    --li;
    --si;
  }
  return static_cast<std::size_t>(li + 1);
}

std::vector<AcronymEntry> extract_candidates(std::string_view doc, std::string_view doc_id) {
  std::vector<AcronymEntry> out;
  std::vector<Token> tokens = tokenize(doc);
  auto text = [&](std::size_t t) { return doc.substr(tokens[t].begin, tokens[t].end - tokens[t].begin); };

  for (std::size_t open = 1; open < tokens.size(); ++open) {
    if (text(open) != "(") continue;
    std::size_t close = open + 1;
    while (close < tokens.size() && close <= open + 4 && text(close) != ")" && text(close) != "(") ++close;
    if (close >= tokens.size() || close > open + 4 || text(close) != ")") continue;
    if (close == open + 1) continue;
    const std::size_t first = open + 1;
    const std::size_t last = close - 1;
    if (!short_form_shape_ok(doc, tokens, first, last)) continue;

    std::string short_form;
    std::size_t short_chars = 0;
    for (std::size_t t = first; t <= last; ++t) {
      if (!short_form.empty()) short_form.push_back(' ');
      short_form += text(t);
      short_chars += codepoints(text(t));
    }
    const std::size_t max_words = std::min(short_chars + 5, short_chars * 2);
    const std::size_t window_begin = open > max_words ? open - max_words : 0;

    // Window words joined by single spaces, remembering where each starts.
    std::string joined;
    std::vector<std::size_t> starts;
    for (std::size_t t = window_begin; t < open; ++t) {
      if (!joined.empty()) joined.push_back(' ');
      starts.push_back(joined.size());
      joined += text(t);
    }
    auto start = align(short_form, joined);
    if (!start) continue;
    // First window word whose extent (including its trailing space) passes
    // the aligned offset.
    std::size_t word = 0;
    while (word + 1 < starts.size() && starts[word + 1] <= *start) ++word;
    const std::size_t first_long = window_begin + word;
    std::string long_form(doc.substr(tokens[first_long].begin, tokens[open - 1].end - tokens[first_long].begin));
    out.push_back(AcronymEntry{std::move(short_form), std::move(long_form), std::string(doc_id)});
  }
  return out;
}

std::string_view rule_name(FilterRule rule) {
  switch (rule) {
    case FilterRule::ExpansionNotLonger: return "expansion_not_longer_than_acronym";
    case FilterRule::ExpansionHasParenthesis: return "expansion_has_parenthesis";
    case FilterRule::ShortIsEnglishWord: return "acronym_is_english_word";
    case FilterRule::ExpansionTooShort: return "expansion_at_most_5_chars";
  }
  return "?";
}

std::optional<FilterRule> rejecting_rule(const AcronymEntry& entry,
                                         const std::unordered_set<std::string>& wordlist) {
  const std::size_t long_len = codepoints(entry.long_form);
  const std::size_t short_len = codepoints(entry.short_form);
  if (long_len <= short_len) return FilterRule::ExpansionNotLonger;
  if (entry.long_form.find_first_of("()") != std::string::npos) return FilterRule::ExpansionHasParenthesis;
  std::string lowered;
  for (char32_t cp : textnorm::decode_utf8(entry.short_form)) textnorm::append_utf8(lowered, textnorm::to_lower(cp));
  if (wordlist.count(lowered)) return FilterRule::ShortIsEnglishWord;
  if (long_len <= 5) return FilterRule::ExpansionTooShort;
  return std::nullopt;
}

std::vector<AcronymEntry> filter_entries(const std::vector<AcronymEntry>& entries,
                                         const std::unordered_set<std::string>& wordlist,
                                         FilterStats* stats) {
  std::vector<AcronymEntry> kept;
  FilterStats local;
  local.candidates = entries.size();
  for (const auto& e : entries) {
    if (auto rule = rejecting_rule(e, wordlist)) {
      ++local.dropped[static_cast<std::size_t>(*rule)];
    } else {
      kept.push_back(e);
    }
  }
  local.kept = kept.size();
  if (stats) *stats = local;
  return kept;
}

std::unordered_set<std::string> load_wordlist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open wordlist " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

bool AcronymTable::insert(std::string_view short_form, std::string long_form) {
  textnorm::CleanText key = textnorm::clean(short_form);
  if (key.empty()) return false;
  return entries_.emplace(key.text(), std::move(long_form)).second;
}

AcronymTable AcronymTable::from_entries(const std::vector<AcronymEntry>& entries) {
  AcronymTable table;
  for (const auto& e : entries) table.insert(e.short_form, e.long_form);
  return table;
}

AcronymTable AcronymTable::from_json_file(const std::filesystem::path& path) {
  io::json doc = io::read_json(path);
  if (!doc.is_object()) throw DataError(path.string() + ": acronym table must be a JSON object");
  AcronymTable table;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) throw DataError(path.string() + ": expansion of '" + key + "' is not a string");
    table.insert(key, value.get<std::string>());
  }
  return table;
}

std::string AcronymTable::to_json() const {
  io::json doc = io::json::object();
  for (const auto& [k, v] : entries_) doc[k] = v;
  return doc.dump(2) + "\n";
}

const std::string* AcronymTable::find(std::string_view clean_key) const {
  auto it = entries_.find(std::string(clean_key));
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::string> expand_term(std::string_view term, const AcronymTable& table) {
  if (table.empty()) return std::nullopt;
  std::optional<std::string> result;
  if (const std::string* whole = table.find(textnorm::clean(term).text())) {
    result = *whole;
  } else {
    // Walk maximal non-separator runs; each is exactly one token of clean(term).
    std::u32string cps = textnorm::decode_utf8(term);
    std::size_t i = 0;
    while (i < cps.size() && !result) {
      while (i < cps.size() && textnorm::is_separator(cps[i])) ++i;
      std::size_t j = i;
      while (j < cps.size() && !textnorm::is_separator(cps[j])) ++j;
      if (j > i) {
        std::string segment;
        for (std::size_t k = i; k < j; ++k) textnorm::append_utf8(segment, cps[k]);
        if (const std::string* hit = table.find(textnorm::clean(segment).text())) {
          std::string out;
          for (std::size_t k = 0; k < i; ++k) textnorm::append_utf8(out, cps[k]);
          out += *hit;
          for (std::size_t k = j; k < cps.size(); ++k) textnorm::append_utf8(out, cps[k]);
          result = std::move(out);
        }
      }
      i = j;
    }
  }
  if (result && *result == term) return std::nullopt;
  return result;
}

std::vector<AcronymEntry> extract_from_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<AcronymEntry> out;
  for (const auto& f : files) {
    auto found = extract_candidates(io::read_file(f), f.filename().string());
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

}  // namespace hyprank::acronym
