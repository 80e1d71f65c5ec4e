#include <cstdlib>
#include <set>

#include "hyprank/cli.hpp"
#include "hyprank/error.hpp"
#include "hyprank/io.hpp"

#ifndef HYPRANK_DATA_DIR
#define HYPRANK_DATA_DIR "data"
#endif

namespace hyprank::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

// Reads fields of one JSON object, rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& obj, std::string where, const fs::path& base)
      : obj_(obj), where_(std::move(where)), base_(base) {
    if (!obj_.is_object()) throw ConfigError("config: '" + where_ + "' must be an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!known_.contains(key)) throw ConfigError("config: unknown key '" + qualified(key) + "'");
    }
  }

  template <typename T>
  void get(const char* key, T& target) {
    known_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      target = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config: '" + qualified(key) + "' has the wrong type");
    }
  }

  void path(const char* key, std::string& target) {
    std::string raw;
    get(key, raw);
    if (!raw.empty()) target = resolve(raw);
  }

  void paths(const char* key, std::vector<std::string>& target) {
    std::vector<std::string> raw;
    known_.insert(key);
    if (!obj_.contains(key)) return;
    get(key, raw);
    target.clear();
    for (const auto& r : raw) target.push_back(resolve(r));
  }

  bool has(const char* key) {
    known_.insert(key);
    return obj_.contains(key);
  }

  Section child(const char* key) { return Section(obj_.at(key), qualified(key), base_); }

 private:
  std::string qualified(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }
  std::string resolve(const std::string& raw) const {
    fs::path p(raw);
    return p.is_absolute() ? p.string() : (base_ / p).lexically_normal().string();
  }

  const json& obj_;
  std::string where_;
  fs::path base_;
  std::set<std::string> known_;
};

}  // namespace

void apply_config_json(const std::string& text, const fs::path& base_dir, PipelineConfig& cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  Section top(doc, "", base_dir);
  top.get("seed", cfg.seed);
  top.get("offline", cfg.offline);
  top.get("labels", cfg.labels);

  if (top.has("paths")) {
    Section s = top.child("paths");
    auto& p = cfg.paths;
    s.path("work_dir", p.work_dir);
    s.path("terms", p.terms);
    s.path("test_terms", p.test_terms);
    s.path("corpus_dir", p.corpus_dir);
    s.path("wordlist", p.wordlist);
    s.path("catalog", p.catalog);
    s.path("taxonomy", p.taxonomy);
    s.path("acronyms", p.acronyms);
    s.paths("glossaries", p.glossaries);
    s.path("lookup_cache", p.lookup_cache);
    s.path("train", p.train);
    s.path("pairs", p.pairs);
    s.path("idf", p.idf);
    s.path("head", p.head);
    s.path("trace", p.trace);
    s.path("classifier", p.classifier);
    s.path("rank_input", p.rank_input);
    s.path("predictions", p.predictions);
    s.path("gold", p.gold);
    s.path("report", p.report);
  }
  if (top.has("augment")) {
    Section s = top.child("augment");
    s.get("train_fraction", cfg.augment.train_fraction);
    s.get("ratio1_min", cfg.augment.thresholds.ratio1_min);
    s.get("ratio2_max", cfg.augment.thresholds.ratio2_max);
    s.get("lookup", cfg.augment.lookup);
    s.get("lookup_url", cfg.augment.lookup_url);
    s.get("lookup_max_results", cfg.augment.lookup_max_results);
  }
  if (top.has("pairs")) {
    Section s = top.child("pairs");
    s.get("k", cfg.pairs.k);
    s.get("negatives_per_positive", cfg.pairs.negatives_per_positive);
    s.get("target_zero_fraction", cfg.pairs.target_zero_fraction);
  }
  if (top.has("backend")) {
    Section s = top.child("backend");
    auto& b = cfg.backend;
    s.get("kind", b.kind);
    s.get("dim", b.dim);
    s.get("hash_seed", b.hash_seed);
    s.get("url", b.url);
    s.get("batch_size", b.batch_size);
    s.get("max_in_flight", b.max_in_flight);
    s.get("max_retries", b.max_retries);
    s.get("backoff_ms", b.backoff_ms);
    s.get("timeout_ms", b.timeout_ms);
  }
  if (top.has("train")) {
    Section s = top.child("train");
    auto& t = cfg.train;
    s.get("learning_rate", t.learning_rate);
    s.get("epochs", t.epochs);
    s.get("batch_size", t.batch_size);
    s.get("margin", t.margin);
    s.get("mnrl_scale", t.mnrl_scale);
    s.get("binary_threshold", t.binary_threshold);
    s.get("out_dim", t.out_dim);
    s.get("init_noise", t.init_noise);
  }
  if (top.has("classifier")) {
    Section s = top.child("classifier");
    auto& c = cfg.classifier;
    s.get("learning_rate", c.learning_rate);
    s.get("epochs", c.epochs);
    s.get("l2", c.l2);
    s.get("init_scale", c.init_scale);
  }
  if (top.has("rank")) {
    Section s = top.child("rank");
    s.get("mode", cfg.rank.mode);
    s.get("use_head", cfg.rank.use_head);
  }
}

PipelineConfig load_config(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
  PipelineConfig cfg;
  apply_config_json(io::read_file(path), path.parent_path(), cfg);
  return cfg;
}

fs::path default_data_dir() {
  if (const char* env = std::getenv("HYPRANK_DATA_DIR")) return env;
  return HYPRANK_DATA_DIR;
}

corpus::LabelSet label_set(const PipelineConfig& cfg) {
  return cfg.labels.empty() ? corpus::LabelSet::finsim() : corpus::LabelSet::subset(cfg.labels);
}

fs::path out_path(const PipelineConfig& cfg, const std::string& configured, const std::string& name) {
  if (!configured.empty()) return configured;
  return fs::path(cfg.paths.work_dir) / name;
}

}  // namespace hyprank::cli
