#include "hyprank/textnorm.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "hyprank/error.hpp"
#include "hyprank/io.hpp"

namespace hyprank::textnorm {
namespace {

struct CodepointRange {
  char32_t first;
  char32_t last;
};

struct CodepointPair {
  char32_t from;
  char32_t to;
};

#include "unicode_tables.inc"

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

const std::unordered_map<std::string, std::string>& builtin_exceptions() {
  static const std::unordered_map<std::string, std::string> table = {
      {"series", "series"},       {"species", "species"},     {"news", "news"},
      {"means", "means"},         {"analyses", "analysis"},   {"crises", "crisis"},
      {"theses", "thesis"},       {"bases", "basis"},         {"indices", "index"},
      {"matrices", "matrix"},     {"appendices", "appendix"}, {"vertices", "vertex"},
      {"aliases", "alias"},       {"biases", "bias"},         {"statuses", "status"},
      {"caches", "cache"},        {"niches", "niche"},        {"tranches", "tranche"},
      {"ties", "tie"},            {"lies", "lie"},            {"dies", "die"},
      {"pies", "pie"},            {"this", "this"},           {"always", "always"},
      {"perhaps", "perhaps"},     {"whereas", "whereas"},     {"towards", "towards"},
      {"afterwards", "afterwards"}, {"besides", "besides"},   {"politics", "politics"},
      {"economics", "economics"}, {"mathematics", "mathematics"}, {"physics", "physics"},
      {"statistics", "statistics"}, {"earnings", "earnings"}, {"proceeds", "proceeds"},
      {"savings", "savings"},     {"arrears", "arrears"},     {"headquarters", "headquarters"},
      {"canvas", "canvas"},       {"chassis", "chassis"},     {"axes", "axis"},
      {"swiss", "swiss"},         {"corps", "corps"},         {"lens", "lens"},
  };
  return table;
}

}  // namespace

bool is_separator(char32_t cp) {
  auto it = std::upper_bound(std::begin(kSeparatorRanges), std::end(kSeparatorRanges), cp,
                             [](char32_t c, const CodepointRange& r) { return c < r.first; });
  if (it == std::begin(kSeparatorRanges)) return false;
  --it;
  return cp <= it->last;
}

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  auto it = std::lower_bound(std::begin(kLowerMap), std::end(kLowerMap), cp,
                             [](const CodepointPair& p, char32_t c) { return p.from < c; });
  if (it != std::end(kLowerMap) && it->from == cp) return it->to;
  return cp;
}

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  while (i < text.size()) {
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= text.size();
    for (int k = 1; ok && k < len; ++k) {
      unsigned char b = byte(i + k);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (ok && (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) ok = false;
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

Singularizer::Singularizer() : exceptions_(builtin_exceptions()) { index_fixed_points(); }

Singularizer Singularizer::from_map(std::unordered_map<std::string, std::string> exceptions) {
  Singularizer s;
  s.exceptions_ = std::move(exceptions);
  s.index_fixed_points();
  return s;
}

Singularizer Singularizer::from_file(const std::filesystem::path& path) {
  io::json doc = io::read_json(path);
  if (!doc.is_object()) throw DataError(path.string() + ": expected a JSON object plural->singular");
  std::unordered_map<std::string, std::string> table;
  for (const auto& [plural, singular] : doc.items()) {
    if (!singular.is_string()) throw DataError(path.string() + ": value for '" + plural + "' is not a string");
    table.emplace(plural, singular.get<std::string>());
  }
  return from_map(std::move(table));
}

void Singularizer::index_fixed_points() {
  fixed_points_.clear();
  for (const auto& [plural, singular] : exceptions_) fixed_points_.insert(singular);
}

std::string Singularizer::singularize(std::string_view token) const {
  std::string t(token);
  if (auto it = exceptions_.find(t); it != exceptions_.end()) return it->second;
  if (fixed_points_.count(t) != 0) return t;
  if (t.size() <= 3) return t;
  if (ends_with(t, "ies")) return t.substr(0, t.size() - 3) + "y";
  if (ends_with(t, "sses") || ends_with(t, "xes") || ends_with(t, "ches") || ends_with(t, "shes")) {
    return t.substr(0, t.size() - 2);
  }
  if (ends_with(t, "ss") || ends_with(t, "us")) return t;
  if (t.back() == 's') t.pop_back();
  return t;
}

CleanText Cleaner::clean(std::string_view raw) const {
  std::string spaced;
  spaced.reserve(raw.size());
  for (char32_t cp : decode_utf8(raw)) {
    if (is_separator(cp)) {
      spaced.push_back(' ');
    } else {
      append_utf8(spaced, to_lower(cp));
    }
  }
  std::string out;
  out.reserve(spaced.size());
  std::size_t i = 0;
  while (i < spaced.size()) {
    while (i < spaced.size() && spaced[i] == ' ') ++i;
    std::size_t j = i;
    while (j < spaced.size() && spaced[j] != ' ') ++j;
    if (j > i) {
      if (!out.empty()) out.push_back(' ');
      out += singularizer_.singularize(std::string_view(spaced).substr(i, j - i));
    }
    i = j;
  }
  return CleanText(std::move(out));
}

const Cleaner& default_cleaner() {
  static const Cleaner cleaner;
  return cleaner;
}

std::vector<std::string> tokens(const CleanText& clean) {
  std::vector<std::string> out;
  std::istringstream in(clean.text());
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

TokenSet token_set(const CleanText& clean) {
  std::vector<std::string> toks = tokens(clean);
  return TokenSet(toks.begin(), toks.end());
}

}  // namespace hyprank::textnorm
