#include <doctest.h>

#include <cctype>

#include "hyprank/acronym.hpp"
#include "hyprank/error.hpp"
#include "hyprank/rng.hpp"
#include "support.hpp"

using namespace hyprank;
using namespace hyprank::acronym;

namespace {

bool alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
char low(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Rightmost word-initial occurrence of the first short-form character whose
// remainder still holds the other alphanumerics of the short form in order.
std::optional<std::size_t> oracle_align(const std::string& s, const std::string& text) {
  std::string rest;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (alnum(s[i])) rest.push_back(low(s[i]));
  }
  for (std::size_t p = text.size(); p-- > 0;) {
    if (low(text[p]) != low(s[0])) continue;
    if (p > 0 && alnum(text[p - 1])) continue;
    std::size_t k = 0;
    for (std::size_t q = p + 1; q < text.size() && k < rest.size(); ++q) {
      if (low(text[q]) == rest[k]) ++k;
    }
    if (k == rest.size()) return p;
  }
  return std::nullopt;
}

const std::unordered_set<std::string>& wordlist() {
  static const auto words = load_wordlist(testing::data_file("wordlist.txt"));
  return words;
}

}  // namespace

TEST_CASE("alignment walks right to left and anchors the first letter at a word start") {
  CHECK(align("NAV", "the Net Asset Value") == std::optional<std::size_t>(4));
  CHECK(align("ETF", "Exchange Traded Fund") == std::optional<std::size_t>(0));
  CHECK(align("U.S.", "offered in the US") == std::optional<std::size_t>(15));
  CHECK(align("XYZ", "Net Asset Value") == std::nullopt);
  // "e" inside "Expense" is not a word start, so the first letter must be found further left.
  CHECK(align("EX", "an Expense") == std::optional<std::size_t>(3));
}

TEST_CASE("alignment agrees with a brute-force oracle") {
  Rng rng(99);
  const std::string alphabet = "abcAB -";
  for (int trial = 0; trial < 5000; ++trial) {
    std::string text;
    const std::size_t n = uniform_index(rng, 16);
    for (std::size_t i = 0; i < n; ++i) text.push_back(alphabet[uniform_index(rng, alphabet.size())]);
    std::string s(1, "abcAB"[uniform_index(rng, 5)]);
    const std::size_t m = uniform_index(rng, 4);
    for (std::size_t i = 0; i < m; ++i) s.push_back("abcAB."[uniform_index(rng, 6)]);
    CAPTURE(s);
    CAPTURE(text);
    CHECK(align(s, text) == oracle_align(s, text));
  }
}

TEST_CASE("candidate extraction") {
  const auto found = extract_candidates("It holds a Credit Default Swap (CDS) and notes (1).", "d");
  REQUIRE(found.size() == 1);
  CHECK(found[0] == AcronymEntry{"CDS", "Credit Default Swap", "d"});

  CHECK(extract_candidates("(ABC) at the start", "d").empty());
  CHECK(extract_candidates("a report (2019) and (x)", "d").empty());
  CHECK(extract_candidates("too long (ABCDEFGHIJ)", "d").empty());
  CHECK(extract_candidates("half digits (A123)", "d").empty());

  const auto multi = extract_candidates("the Legal Entity Identifier (LE ID) code", "d");
  REQUIRE(multi.size() == 1);
  CHECK(multi[0].short_form == "LE ID");
  CHECK(multi[0].long_form == "Legal Entity Identifier");

  // The window holds min(n + 5, 2n) words for an n-character short form.
  CHECK(extract_candidates("Alpha one two three four (AB)", "d").empty());
  CHECK(extract_candidates("Alpha one two Bee (AB)", "d").size() == 1);
}

TEST_CASE("filters report the first rule that rejects") {
  const auto& words = wordlist();
  CHECK(rejecting_rule({"U.S.", "US", ""}, words) == FilterRule::ExpansionNotLonger);
  CHECK(rejecting_rule({"TER", "TE) Ratio", ""}, words) == FilterRule::ExpansionHasParenthesis);
  CHECK(rejecting_rule({"FUND", "Fidelity Umbrella New Deposit", ""}, words) == FilterRule::ShortIsEnglishWord);
  CHECK(rejecting_rule({"FX", "Forex", ""}, words) == FilterRule::ExpansionTooShort);
  CHECK_FALSE(rejecting_rule({"NAV", "Net Asset Value", ""}, words).has_value());
  // Both rule 1 and rule 3 apply; the first one is reported.
  CHECK(rejecting_rule({"BOND", "Bo", ""}, words) == FilterRule::ExpansionNotLonger);
}

TEST_CASE("fixture corpus: every rule fires twice and the kept set is the golden list") {
  const auto candidates = extract_from_directory(testing::fixture("acronym_corpus"));
  FilterStats stats;
  const auto kept = filter_entries(candidates, wordlist(), &stats);
  CHECK(stats.candidates == 16);
  CHECK(stats.dropped[0] == 2);  // U.S., E.U.
  CHECK(stats.dropped[1] == 2);  // TER, GAV
  CHECK(stats.dropped[2] == 4);  // TE, FUND, BOND, GA
  CHECK(stats.dropped[3] == 2);  // FX, TB
  CHECK(stats.kept == 6);

  const std::vector<AcronymEntry> golden = {
      {"NAV", "Net Asset Value", "doc_a.txt"},
      {"ETF", "Exchange Traded Fund", "doc_a.txt"},
      {"CDO", "Collateralized Debt Obligation", "doc_b.txt"},
      {"CDS", "Credit Default Swap", "doc_b.txt"},
      {"ISIN", "International Securities Identification Number", "doc_b.txt"},
      {"NAV", "Net Asset Value", "doc_b.txt"},
  };
  CHECK(kept == golden);

  const auto table = AcronymTable::from_entries(kept);
  CHECK(table.size() == 5);
  REQUIRE(table.find("nav") != nullptr);
  CHECK(*table.find("nav") == "Net Asset Value");
}

TEST_CASE("missing corpus directory is a configuration error") {
  CHECK_THROWS_AS(extract_from_directory(testing::fixture("no_such_dir")), ConfigError);
  CHECK(extract_from_directory(testing::fixture("empty_corpus")).empty());
}

TEST_CASE("table keys are cleaned and the first expansion wins") {
  AcronymTable t;
  CHECK(t.insert("CDS", "Credit Default Swap"));
  CHECK_FALSE(t.insert("cds", "Something Else"));
  CHECK(t.insert("NAVs", "Net Asset Values"));
  CHECK_FALSE(t.insert("--", "nothing"));
  CHECK(*t.find("cds") == "Credit Default Swap");
  CHECK(t.find("navs") == nullptr);
  CHECK(*t.find("nav") == "Net Asset Values");

  testing::TempDir dir;
  testing::write_file(dir / "t.json", t.to_json());
  CHECK(AcronymTable::from_json_file(dir / "t.json").entries() == t.entries());
}

TEST_CASE("expand_term replaces the whole term or one token") {
  AcronymTable t;
  t.insert("CDS", "credit default swap");
  t.insert("ETF", "exchange traded fund");
  CHECK(expand_term("CDS", t) == std::optional<std::string>("credit default swap"));
  CHECK(expand_term("Sovereign CDS spread", t) == std::optional<std::string>("Sovereign credit default swap spread"));
  CHECK(expand_term("ETF-linked note", t) == std::optional<std::string>("exchange traded fund-linked note"));
  CHECK(expand_term("CDSs", t) == std::nullopt);
  CHECK(expand_term("callable bond", t) == std::nullopt);
  CHECK(expand_term("CDS", AcronymTable{}) == std::nullopt);
}
