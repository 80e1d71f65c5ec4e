#pragma once

// Canonical data model: the 17 hypernym labels, gold term rows, the label
// catalog, augmented records and train/validation splitting.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hyprank::corpus {

// Index into the active LabelSet. Ordering follows the canonical label order.
struct LabelId {
  std::uint8_t index = 0;

  friend bool operator==(LabelId, LabelId) = default;
  friend auto operator<=>(LabelId, LabelId) = default;
};

inline constexpr std::size_t kNumFinsimLabels = 17;

// The 17 label names, most frequent first.
inline constexpr std::array<std::string_view, kNumFinsimLabels> kFinsimLabelNames = {
    "Equity Index",
    "Regulatory Agency",
    "Credit Index",
    "Central Securities Depository",
    "Debt pricing and yields",
    "Bonds",
    "Swap",
    "Stock Corporation",
    "Option",
    "Funds",
    "Future",
    "Credit Events",
    "MMIs",
    "Stocks",
    "Parametric schedules",
    "Forward",
    "Securities restrictions",
};

// Ordered set of label names in play. The default is the full 17-label
// set; fixtures may restrict it to a subset (kept in canonical order).
class LabelSet {
 public:
  static LabelSet finsim();
  // Throws ConfigError if a name is unknown or repeated.
  static LabelSet subset(const std::vector<std::string>& names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(LabelId id) const { return names_.at(id.index); }
  std::optional<LabelId> find(std::string_view name) const;
  LabelId at(std::string_view name) const;  // throws DataError
  const std::vector<std::string>& names() const { return names_; }
  std::vector<LabelId> ids() const;

  friend bool operator==(const LabelSet& a, const LabelSet& b) { return a.names_ == b.names_; }

 private:
  explicit LabelSet(std::vector<std::string> names);

  std::vector<std::string> names_;
  std::unordered_map<std::string, LabelId> by_name_;
};

struct LabeledTerm {
  std::string term;
  LabelId label;

  friend bool operator==(const LabeledTerm&, const LabeledTerm&) = default;
};

// A term row whose label may be absent (test sets).
struct TermRow {
  std::string term;
  std::optional<LabelId> label;

  friend bool operator==(const TermRow&, const TermRow&) = default;
};

// Reads JSON-lines {"term", "label"}. Terms are trimmed; exact duplicate
// (term, label) rows are dropped, rows that disagree on the label are kept.
// Throws DataError naming the line for unknown labels or empty terms.
std::vector<LabeledTerm> load_labeled_terms(const std::filesystem::path& path, const LabelSet& labels);

// Same format with an optional label; used for unlabeled test terms.
std::vector<TermRow> load_term_rows(const std::filesystem::path& path, const LabelSet& labels);

std::string serialize_labeled_terms(const std::vector<LabeledTerm>& rows, const LabelSet& labels);

struct Split {
  std::vector<LabeledTerm> train;
  std::vector<LabeledTerm> validation;
};

// Seeded shuffle, then the first round(n * train_fraction) rows train.
Split split(const std::vector<LabeledTerm>& records, double train_fraction, std::uint64_t seed);

// ---- label catalog ----

struct CatalogEntry {
  std::string label;
  std::string definition;
};

struct CatalogReport {
  std::vector<std::string> missing;
  std::vector<std::string> duplicated;
  std::vector<std::string> unknown;
  std::vector<std::string> empty_definitions;

  bool ok() const {
    return missing.empty() && duplicated.empty() && unknown.empty() && empty_definitions.empty();
  }
  std::string describe() const;
};

CatalogReport validate_catalog(const std::vector<CatalogEntry>& entries, const LabelSet& labels);

// One definition per label, indexed by LabelId.
class LabelCatalog {
 public:
  // Throws DataError with the validation report when entries are invalid.
  LabelCatalog(const std::vector<CatalogEntry>& entries, const LabelSet& labels);

  const LabelSet& labels() const { return labels_; }
  const std::string& definition(LabelId id) const { return definitions_.at(id.index); }
  std::size_t size() const { return definitions_.size(); }

 private:
  LabelSet labels_;
  std::vector<std::string> definitions_;
};

std::vector<CatalogEntry> read_catalog_entries(const std::filesystem::path& path);
LabelCatalog load_catalog(const std::filesystem::path& path, const LabelSet& labels);

// ---- augmented records ----

enum class Source { Original, AcronymExpansion, DBpedia, FIBO, Investopedia };

inline constexpr std::array<Source, 5> kAllSources = {
    Source::Original, Source::AcronymExpansion, Source::DBpedia, Source::FIBO, Source::Investopedia};

std::string_view source_name(Source source);
Source parse_source(std::string_view name);  // throws DataError

struct AugmentedRecord {
  std::string term;
  std::string surface;
  std::optional<LabelId> label;
  Source source = Source::Original;

  friend bool operator==(const AugmentedRecord&, const AugmentedRecord&) = default;
};

class Dataset {
 public:
  Dataset() = default;

  void add(AugmentedRecord record);

  const std::vector<AugmentedRecord>& records() const { return records_; }
  const std::map<Source, std::size_t>& counts_by_source() const { return counts_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

 private:
  std::vector<AugmentedRecord> records_;
  std::map<Source, std::size_t> counts_;
};

// JSON-lines {"term", "surface", "label"?, "source"}.
std::string serialize_dataset(const Dataset& dataset, const LabelSet& labels);
Dataset load_dataset(const std::filesystem::path& path, const LabelSet& labels);

// Groups records by term, keeping first-appearance order of terms.
struct TermOccurrences {
  std::string term;
  std::vector<std::string> surfaces;
};
std::vector<TermOccurrences> group_by_term(const Dataset& dataset);

}  // namespace hyprank::corpus
