#pragma once

// Batch front end: one subcommand per pipeline stage, each reading and
// writing files under a work directory. Settings come from an optional JSON
// config file; command-line flags override it.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyprank/corpus.hpp"
#include "hyprank/embed.hpp"
#include "hyprank/glossary.hpp"
#include "hyprank/pairgen.hpp"
#include "hyprank/rank_eval.hpp"
#include "hyprank/simtrain.hpp"

namespace hyprank::cli {

// Empty paths fall back to a file of the same role under work_dir (outputs)
// or to the bundled data directory (catalog, taxonomy, wordlist).
struct PathsConfig {
  std::string work_dir = "hyprank_out";
  std::string terms;        // labeled terms, JSON lines {"term", "label"}
  std::string test_terms;   // optional unlabeled terms
  std::string corpus_dir;   // prospectus text files
  std::string wordlist;
  std::string catalog;
  std::string taxonomy;
  std::string acronyms;     // acronym table; augment uses it only when set
  std::vector<std::string> glossaries;
  std::string lookup_cache;
  std::string train;        // augmented train records
  std::string pairs;
  std::string idf;
  std::string head;
  std::string trace;
  std::string classifier;
  std::string rank_input;
  std::string predictions;
  std::string gold;
  std::string report;
};

struct AugmentConfig {
  double train_fraction = 0.8;  // 1.0 keeps every term for training
  glossary::MatchThresholds thresholds;
  bool lookup = false;
  std::string lookup_url = glossary::LookupConfig{}.base_url;
  std::size_t lookup_max_results = glossary::LookupConfig{}.max_results;
};

struct BackendConfig {
  std::string kind = "baseline";  // baseline | remote
  std::size_t dim = embed::BaselineEmbedderConfig{}.dim;
  std::uint64_t hash_seed = 0;
  std::string url;
  std::size_t batch_size = 64;
  std::size_t max_in_flight = 2;
  std::size_t max_retries = 3;
  std::int64_t backoff_ms = 200;
  std::int64_t timeout_ms = 30000;
};

struct RankConfig {
  std::string mode = "similarity";  // similarity | classifier
  bool use_head = true;
};

struct PipelineConfig {
  std::uint64_t seed = 42;
  bool offline = false;
  std::vector<std::string> labels;  // empty: all 17
  PathsConfig paths;
  AugmentConfig augment;
  pairgen::PairGenConfig pairs;
  BackendConfig backend;
  simtrain::TrainConfig train;
  rank_eval::ClassifierConfig classifier;
  RankConfig rank;
};

// Overlays a JSON document onto cfg. Relative paths are resolved against
// base_dir. Unknown keys and ill-typed values raise ConfigError.
void apply_config_json(const std::string& text, const std::filesystem::path& base_dir, PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

// Directory holding the bundled catalog, taxonomy and wordlist.
std::filesystem::path default_data_dir();

corpus::LabelSet label_set(const PipelineConfig& cfg);

// Output paths after defaulting.
std::filesystem::path out_path(const PipelineConfig& cfg, const std::string& configured, const std::string& name);

// ---- stages; each throws ConfigError for unusable settings ----

int cmd_extract_acronyms(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_augment(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_gen_pairs(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_train_head(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_train_baseline(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_rank(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_evaluate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);

// Parses arguments (without the program name) and runs one subcommand.
// Returns 0 on success, 1 on runtime failure, 2 on configuration errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyprank::cli
