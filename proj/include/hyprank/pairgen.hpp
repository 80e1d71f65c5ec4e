#pragma once

// Graded similarity pairs for the contrastive head: one positive per
// training record against its own label definition, seeded negatives
// against other labels' definitions scored by the taxonomy, then
// undersampling of the zero-scored negatives.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hyprank/corpus.hpp"
#include "hyprank/taxonomy.hpp"

namespace hyprank::pairgen {

struct ScoredPair {
  std::string anchor;  // term surface
  std::string other;   // label definition
  double score = 0.0;
  corpus::LabelId anchor_label;
  corpus::LabelId other_label;

  friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

struct PairGenConfig {
  double k = 0.4;
  std::size_t negatives_per_positive = 10;
  double target_zero_fraction = 0.30;
  std::uint64_t seed = 42;

  void validate() const;  // throws ConfigError
};

struct GenerateResult {
  std::vector<ScoredPair> pairs;
  std::vector<std::string> warnings;
};

// For each record, in order: (surface, def(label), 1.0), then
// negatives_per_positive pairs against the labels of records drawn without
// replacement among those with a different label. Each record draws from
// its own PRNG stream derived from the seed. When too few such records
// exist, draws fall back to replacement and a warning is added.
GenerateResult generate(const corpus::Dataset& train, const corpus::LabelCatalog& catalog,
                        const taxonomy::Taxonomy& taxonomy, const PairGenConfig& cfg);

// Keeps every non-zero pair and round(f / (1 - f) * nonzero) zero pairs
// (capped at what exists), then shuffles the result.
std::vector<ScoredPair> undersample_zeros(const std::vector<ScoredPair>& pairs, double target_zero_fraction,
                                          std::uint64_t seed);

struct Bucket {
  std::size_t count = 0;
  double fraction = 0.0;
};

// Exact score -> (count, fraction), keyed by the score value.
std::map<double, Bucket> distribution_report(const std::vector<ScoredPair>& pairs);

std::string serialize_pairs(const std::vector<ScoredPair>& pairs, const corpus::LabelSet& labels);
std::vector<ScoredPair> load_pairs(const std::filesystem::path& path, const corpus::LabelSet& labels);

}  // namespace hyprank::pairgen
