#pragma once

// Definition sources for term augmentation: a DBpedia-style lookup service
// matched by token-overlap ratios, and exact-match local glossaries.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyprank/acronym.hpp"
#include "hyprank/corpus.hpp"
#include "hyprank/textnorm.hpp"

namespace hyprank::glossary {

struct LookupCandidate {
  std::string label;
  std::string description;
  std::size_t score_rank = 0;  // position in the service's result order

  friend bool operator==(const LookupCandidate&, const LookupCandidate&) = default;
};

enum class GlossarySource { Investopedia, FIBO };

struct GlossaryEntry {
  std::string term;
  std::string definition;
  GlossarySource source;
};

struct OverlapRatios {
  double ratio1 = 0.0;  // |s1 ∩ s2| / |s1|
  double ratio2 = 0.0;  // |s2| / |s1|
};

struct MatchThresholds {
  double ratio1_min = 1.0;
  double ratio2_max = 1.25;
};

// Throws DataError when s1 is empty.
OverlapRatios overlap_ratios(const textnorm::TokenSet& s1, const textnorm::TokenSet& s2);

bool accept_match(const OverlapRatios& r, const MatchThresholds& t = {});

// Among candidates whose cleaned label passes accept_match against the
// cleaned term: highest ratio1, then lowest ratio2, then earliest rank.
std::optional<std::string> match_lookup(const std::string& term, const std::vector<LookupCandidate>& candidates,
                                        const MatchThresholds& t = {});

std::optional<GlossaryEntry> match_exact(const std::string& term, const std::vector<GlossaryEntry>& glossary);

// JSON-lines {"term", "definition", "source": "FIBO"|"Investopedia"}.
std::vector<GlossaryEntry> load_glossary(const std::filesystem::path& path);

// Precomputed clean(term) index over a glossary; first entry wins.
class GlossaryIndex {
 public:
  explicit GlossaryIndex(const std::vector<GlossaryEntry>& entries);
  std::optional<GlossaryEntry> find(const std::string& term, GlossarySource source) const;
  bool empty() const { return fibo_.empty() && investopedia_.empty(); }

 private:
  std::map<std::string, GlossaryEntry> fibo_;
  std::map<std::string, GlossaryEntry> investopedia_;
};

// ---- lookup service ----

struct LookupConfig {
  bool offline = true;
  std::string base_url = "https://lookup.dbpedia.org/api/search";
  std::size_t max_results = 5;
  std::chrono::milliseconds timeout{10000};
  std::size_t max_in_flight = 4;
  std::size_t max_retries = 2;
  std::chrono::milliseconds backoff{200};
};

// Query -> candidates, as stored in the cache file.
class LookupCache {
 public:
  LookupCache() = default;
  static LookupCache load(const std::filesystem::path& path);

  // nullptr on a miss.
  const std::vector<LookupCandidate>* find(const std::string& query) const;
  void put(const std::string& query, std::vector<LookupCandidate> candidates);
  std::string to_json() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<LookupCandidate>> entries_;
};

// Parses a lookup response body: {"docs": [{"label": [...]|"...",
// "comment"|"description": [...]|"..."}]}. Highlight markup such as <B> is
// stripped. Throws ProtocolError on a malformed payload.
std::vector<LookupCandidate> parse_lookup_response(const std::string& body);

std::string url_encode(const std::string& s);

class LookupClient {
 public:
  LookupClient(LookupConfig config, LookupCache cache);

  // Offline: cache hit or empty list. Online: HTTP GET with retries; throws
  // LookupError (carrying the query) when all attempts fail. Online
  // results are added to the cache.
  std::vector<LookupCandidate> lookup(const std::string& query);

  // Looks up every query with up to max_in_flight concurrent requests.
  // Results line up with `queries`; failures land in `errors` instead.
  struct BatchResult {
    std::vector<std::vector<LookupCandidate>> candidates;
    std::vector<std::optional<std::string>> errors;
  };
  BatchResult lookup_all(const std::vector<std::string>& queries);

  const LookupCache& cache() const { return cache_; }
  const LookupConfig& config() const { return config_; }

 private:
  std::vector<LookupCandidate> fetch(const std::string& query) const;

  LookupConfig config_;
  LookupCache cache_;
};

// ---- augmentation ----

struct AugmentSources {
  const acronym::AcronymTable* acronyms = nullptr;
  const GlossaryIndex* glossaries = nullptr;
  LookupClient* lookup = nullptr;
  MatchThresholds thresholds;
};

struct AugmentResult {
  corpus::Dataset dataset;
  std::vector<std::string> errors;  // per-term lookup failures
};

// Original record for every row, plus at most one record per source that
// fires: AcronymExpansion, DBpedia, FIBO, Investopedia (in that order).
AugmentResult augment(const std::vector<corpus::TermRow>& terms, const AugmentSources& sources);

}  // namespace hyprank::glossary
