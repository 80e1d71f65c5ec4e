#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "hyprank/acronym.hpp"
#include "hyprank/cli.hpp"
#include "hyprank/error.hpp"
#include "hyprank/io.hpp"
#include "hyprank/rng.hpp"
#include "hyprank/taxonomy.hpp"

namespace hyprank::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

fs::path require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError("no " + what + " configured");
  if (!fs::is_regular_file(path)) throw ConfigError(what + " not found: " + path);
  return path;
}

fs::path data_file(const std::string& configured, const std::string& name, const std::string& what) {
  return require_file(configured.empty() ? (default_data_dir() / name).string() : configured, what);
}

void write_text(const fs::path& path, const std::string& text) { io::write_atomic(path, text); }

std::string score_key(double score) {
  std::ostringstream s;
  s << score;
  return s.str();
}

json distribution_json(const std::vector<pairgen::ScoredPair>& pairs) {
  json j = json::object();
  for (const auto& [score, bucket] : pairgen::distribution_report(pairs)) {
    j[score_key(score)] = {{"count", bucket.count}, {"fraction", bucket.fraction}};
  }
  return j;
}

void print_distribution(std::ostream& out, const char* title, const std::vector<pairgen::ScoredPair>& pairs) {
  out << title << " (" << pairs.size() << " pairs)\n";
  for (const auto& [score, bucket] : pairgen::distribution_report(pairs)) {
    out << "  score " << std::setw(4) << score_key(score) << "  " << std::setw(8) << bucket.count << "  "
        << std::fixed << std::setprecision(4) << bucket.fraction << std::defaultfloat << "\n";
  }
}

// Distinct texts in first-appearance order.
std::vector<std::string> distinct(const std::vector<std::string>& texts) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  for (const auto& t : texts) {
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

// The baseline needs idf weights. With `fit_texts`, a missing idf file is
// fitted on them and written; otherwise it must exist already.
std::unique_ptr<embed::EmbeddingBackend> open_backend(const PipelineConfig& cfg,
                                                      const std::vector<std::string>* fit_texts, std::ostream& err) {
  const auto& b = cfg.backend;
  if (b.kind == "baseline") {
    const fs::path idf_path = out_path(cfg, cfg.paths.idf, "idf.json");
    embed::IdfWeights idf;
    if (fs::is_regular_file(idf_path)) {
      idf = embed::IdfWeights::load(idf_path);
    } else if (fit_texts != nullptr) {
      const auto docs = distinct(*fit_texts);
      idf = embed::IdfWeights::fit(docs);
      write_text(idf_path, idf.to_json());
      err << "fitted idf weights on " << docs.size() << " texts -> " << idf_path.string() << "\n";
    } else {
      throw ConfigError("idf weights not found: " + idf_path.string() + " (run train-head or train-baseline first)");
    }
    return embed::make_baseline(embed::BaselineEmbedderConfig{b.dim, b.hash_seed}, std::move(idf));
  }
  if (b.kind == "remote") {
    if (b.url.empty()) throw ConfigError("remote backend needs backend.url");
    if (b.batch_size == 0 || b.max_in_flight == 0) throw ConfigError("remote batch size and in-flight cap must be positive");
    embed::RemoteConfig rc;
    rc.base_url = b.url;
    rc.dim = 0;
    rc.batch_size = b.batch_size;
    rc.max_in_flight = b.max_in_flight;
    rc.max_retries = b.max_retries;
    rc.backoff = std::chrono::milliseconds(b.backoff_ms);
    rc.timeout = std::chrono::milliseconds(b.timeout_ms);
    return std::make_unique<embed::RemoteEmbedder>(rc);
  }
  throw ConfigError("unknown backend '" + b.kind + "' (expected baseline or remote)");
}

std::vector<std::string> catalog_definitions(const corpus::LabelCatalog& catalog) {
  std::vector<std::string> out;
  for (auto id : catalog.labels().ids()) out.push_back(catalog.definition(id));
  return out;
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

}  // namespace

int cmd_extract_acronyms(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.paths.corpus_dir.empty()) throw ConfigError("no corpus directory configured (--corpus-dir)");
  if (!fs::is_directory(cfg.paths.corpus_dir)) throw ConfigError("corpus directory not found: " + cfg.paths.corpus_dir);
  const auto wordlist = acronym::load_wordlist(data_file(cfg.paths.wordlist, "wordlist.txt", "wordlist"));

  const auto candidates = acronym::extract_from_directory(cfg.paths.corpus_dir);
  acronym::FilterStats stats;
  const auto kept = acronym::filter_entries(candidates, wordlist, &stats);
  const auto table = acronym::AcronymTable::from_entries(kept);

  json dropped = json::object();
  for (std::size_t r = 0; r < acronym::kNumFilterRules; ++r) {
    dropped[std::string(acronym::rule_name(static_cast<acronym::FilterRule>(r)))] = stats.dropped[r];
  }
  json report = {{"candidates", stats.candidates}, {"dropped", dropped}, {"kept", stats.kept}, {"table_size", table.size()}};

  const fs::path table_path = out_path(cfg, cfg.paths.acronyms, "acronyms.json");
  write_text(table_path, table.to_json());
  write_text(fs::path(cfg.paths.work_dir) / "acronym_stats.json", report.dump(2) + "\n");

  out << "candidates: " << stats.candidates << "\n";
  for (std::size_t r = 0; r < acronym::kNumFilterRules; ++r) {
    out << "dropped by " << acronym::rule_name(static_cast<acronym::FilterRule>(r)) << ": " << stats.dropped[r] << "\n";
  }
  out << "kept: " << stats.kept << "\n";
  out << "distinct acronyms: " << table.size() << " -> " << table_path.string() << "\n";
  (void)err;
  return 0;
}

int cmd_augment(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  const double f = cfg.augment.train_fraction;
  if (!(f > 0.0 && f <= 1.0)) throw ConfigError("train fraction must lie in (0, 1]");
  if (!(cfg.augment.thresholds.ratio1_min > 0.0) || !(cfg.augment.thresholds.ratio2_max >= 1.0)) {
    throw ConfigError("ratio thresholds must satisfy ratio1_min > 0 and ratio2_max >= 1");
  }
  const auto labels = label_set(cfg);
  const fs::path terms_path = require_file(cfg.paths.terms, "labeled terms file (--terms)");
  if (!cfg.paths.test_terms.empty()) require_file(cfg.paths.test_terms, "test terms file");

  std::optional<acronym::AcronymTable> acronyms;
  if (!cfg.paths.acronyms.empty()) {
    acronyms = acronym::AcronymTable::from_json_file(require_file(cfg.paths.acronyms, "acronym table"));
  }
  std::vector<glossary::GlossaryEntry> entries;
  for (const auto& g : cfg.paths.glossaries) {
    auto loaded = glossary::load_glossary(require_file(g, "glossary"));
    entries.insert(entries.end(), loaded.begin(), loaded.end());
  }
  std::optional<glossary::GlossaryIndex> glossaries;
  if (!entries.empty()) glossaries.emplace(entries);

  std::optional<glossary::LookupClient> lookup;
  const bool online = cfg.augment.lookup && !cfg.offline;
  if (cfg.augment.lookup || !cfg.paths.lookup_cache.empty()) {
    glossary::LookupConfig lc;
    lc.offline = !online;
    lc.base_url = cfg.augment.lookup_url;
    lc.max_results = cfg.augment.lookup_max_results;
    glossary::LookupCache cache;
    if (!cfg.paths.lookup_cache.empty() && fs::exists(cfg.paths.lookup_cache)) {
      cache = glossary::LookupCache::load(cfg.paths.lookup_cache);
    } else if (!online && !cfg.paths.lookup_cache.empty()) {
      throw ConfigError("lookup cache not found: " + cfg.paths.lookup_cache);
    }
    lookup.emplace(lc, std::move(cache));
  }

  glossary::AugmentSources sources;
  sources.acronyms = acronyms ? &*acronyms : nullptr;
  sources.glossaries = glossaries ? &*glossaries : nullptr;
  sources.lookup = lookup ? &*lookup : nullptr;
  sources.thresholds = cfg.augment.thresholds;

  const auto labeled = corpus::load_labeled_terms(terms_path, labels);
  corpus::Split parts;
  if (f < 1.0) {
    parts = corpus::split(labeled, f, cfg.seed);
  } else {
    parts.train = labeled;
  }

  auto to_rows = [](const std::vector<corpus::LabeledTerm>& xs) {
    std::vector<corpus::TermRow> rows;
    for (const auto& x : xs) rows.push_back(corpus::TermRow{x.term, x.label});
    return rows;
  };

  struct Output {
    std::string name;
    corpus::Dataset dataset;
  };
  std::vector<Output> outputs;
  std::vector<std::string> failures;
  auto run_set = [&](const std::string& name, const std::vector<corpus::TermRow>& rows) {
    auto result = glossary::augment(rows, sources);
    failures.insert(failures.end(), result.errors.begin(), result.errors.end());
    outputs.push_back(Output{name, std::move(result.dataset)});
  };
  run_set("train", to_rows(parts.train));
  if (!parts.validation.empty()) run_set("validation", to_rows(parts.validation));
  if (!cfg.paths.test_terms.empty()) run_set("test", corpus::load_term_rows(cfg.paths.test_terms, labels));
  for (const auto& failure : failures) err << "warning: lookup failed: " << failure << "\n";

  json counts = json::object();
  for (const auto& o : outputs) {
    json c = json::object();
    for (auto src : corpus::kAllSources) {
      auto it = o.dataset.counts_by_source().find(src);
      c[std::string(corpus::source_name(src))] = it == o.dataset.counts_by_source().end() ? 0 : it->second;
    }
    c["total"] = o.dataset.size();
    counts[o.name] = c;
  }

  for (const auto& o : outputs) {
    const fs::path path = o.name == "train" ? out_path(cfg, cfg.paths.train, "train.jsonl")
                                            : fs::path(cfg.paths.work_dir) / (o.name + ".jsonl");
    write_text(path, corpus::serialize_dataset(o.dataset, labels));
  }
  if (!parts.validation.empty()) {
    write_text(fs::path(cfg.paths.work_dir) / "validation_gold.jsonl",
               corpus::serialize_labeled_terms(parts.validation, labels));
  }
  write_text(fs::path(cfg.paths.work_dir) / "counts.json", counts.dump(2) + "\n");
  if (online && !cfg.paths.lookup_cache.empty()) write_text(cfg.paths.lookup_cache, lookup->cache().to_json());

  out << std::left << std::setw(12) << "set";
  for (auto src : corpus::kAllSources) out << std::setw(18) << corpus::source_name(src);
  out << "total\n";
  for (const auto& o : outputs) {
    out << std::setw(12) << o.name;
    for (auto src : corpus::kAllSources) out << std::setw(18) << counts[o.name][std::string(corpus::source_name(src))].get<std::size_t>();
    out << o.dataset.size() << "\n";
  }
  out << std::right;
  return 0;
}

int cmd_gen_pairs(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  pairgen::PairGenConfig pc = cfg.pairs;
  pc.seed = cfg.seed;
  pc.validate();
  const auto labels = label_set(cfg);
  const fs::path train_path = require_file(out_path(cfg, cfg.paths.train, "train.jsonl").string(), "training records");
  const auto catalog = corpus::load_catalog(data_file(cfg.paths.catalog, "label_catalog.json", "label catalog"), labels);
  const auto tax = taxonomy::load_taxonomy(data_file(cfg.paths.taxonomy, "taxonomy_default.json", "taxonomy"), labels);
  const auto train = corpus::load_dataset(train_path, labels);

  auto generated = pairgen::generate(train, catalog, tax, pc);
  print_warnings(err, generated.warnings);
  const auto pairs = pairgen::undersample_zeros(generated.pairs, pc.target_zero_fraction,
                                                child_seed(pc.seed, std::numeric_limits<std::uint64_t>::max()));

  const fs::path pairs_path = out_path(cfg, cfg.paths.pairs, "pairs.jsonl");
  write_text(pairs_path, pairgen::serialize_pairs(pairs, labels));
  json report = {{"generated", distribution_json(generated.pairs)}, {"undersampled", distribution_json(pairs)}};
  write_text(fs::path(cfg.paths.work_dir) / "pair_distribution.json", report.dump(2) + "\n");

  print_distribution(out, "generated", generated.pairs);
  print_distribution(out, "after zero undersampling", pairs);
  out << "pairs -> " << pairs_path.string() << "\n";
  return 0;
}

int cmd_train_head(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  simtrain::TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  tc.validate();
  const auto labels = label_set(cfg);
  const fs::path pairs_path = require_file(out_path(cfg, cfg.paths.pairs, "pairs.jsonl").string(), "pair file");
  const auto pairs = pairgen::load_pairs(pairs_path, labels);

  std::vector<std::string> texts;
  for (const auto& p : pairs) {
    texts.push_back(p.anchor);
    texts.push_back(p.other);
  }
  const auto backend = open_backend(cfg, &texts, err);
  const auto result = simtrain::train(pairs, *backend, tc);
  print_warnings(err, result.warnings);

  const fs::path head_path = out_path(cfg, cfg.paths.head, "head.json");
  const fs::path trace_path = out_path(cfg, cfg.paths.trace, "loss_trace.csv");
  write_text(head_path, result.head.to_json());
  write_text(trace_path, simtrain::trace_csv(result.trace));

  if (!result.trace.empty()) {
    const auto& first = result.trace.front();
    const auto& last = result.trace.back();
    out << "epoch " << first.epoch << " loss " << first.total << "; epoch " << last.epoch << " loss " << last.total << "\n";
  }
  out << "head " << result.head.out_dim() << "x" << result.head.in_dim() << " -> " << head_path.string() << "\n";
  return 0;
}

int cmd_train_baseline(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  rank_eval::ClassifierConfig cc = cfg.classifier;
  cc.seed = cfg.seed;
  cc.validate();
  const auto labels = label_set(cfg);
  const fs::path train_path = require_file(out_path(cfg, cfg.paths.train, "train.jsonl").string(), "training records");
  const auto catalog = corpus::load_catalog(data_file(cfg.paths.catalog, "label_catalog.json", "label catalog"), labels);
  const auto train = corpus::load_dataset(train_path, labels);

  std::vector<std::string> texts;
  for (const auto& r : train.records()) texts.push_back(r.surface);
  for (const auto& d : catalog_definitions(catalog)) texts.push_back(d);
  const auto backend = open_backend(cfg, &texts, err);
  const auto clf = rank_eval::train_softmax_classifier(train, *backend, labels.size(), cc);

  const auto preds = rank_eval::classify_all(corpus::group_by_term(train), clf, *backend);
  std::size_t hits = 0, n = 0;
  std::unordered_map<std::string, std::vector<corpus::LabelId>> gold;
  for (const auto& r : train.records()) {
    if (r.source == corpus::Source::Original && r.label) gold[r.term].push_back(*r.label);
  }
  for (const auto& p : preds) {
    for (auto g : gold[p.term]) {
      ++n;
      hits += p.ranked_labels.front() == g ? 1 : 0;
    }
  }

  const fs::path clf_path = out_path(cfg, cfg.paths.classifier, "classifier.json");
  write_text(clf_path, clf.to_json());
  if (n > 0) out << "training accuracy " << static_cast<double>(hits) / static_cast<double>(n) << " over " << n << " terms\n";
  out << "classifier -> " << clf_path.string() << "\n";
  return 0;
}

int cmd_rank(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.rank.mode != "similarity" && cfg.rank.mode != "classifier") {
    throw ConfigError("unknown rank mode '" + cfg.rank.mode + "' (expected similarity or classifier)");
  }
  const auto labels = label_set(cfg);
  const fs::path input = require_file(out_path(cfg, cfg.paths.rank_input, "validation.jsonl").string(), "rank input");
  const auto terms = corpus::group_by_term(corpus::load_dataset(input, labels));

  std::vector<std::string> warnings;
  std::vector<rank_eval::RankedPrediction> preds;
  if (cfg.rank.mode == "similarity") {
    const auto catalog = corpus::load_catalog(data_file(cfg.paths.catalog, "label_catalog.json", "label catalog"), labels);
    std::optional<simtrain::ProjectionHead> head;
    if (cfg.rank.use_head) {
      head = simtrain::ProjectionHead::load(
          require_file(out_path(cfg, cfg.paths.head, "head.json").string(), "projection head"));
    }
    const auto backend = open_backend(cfg, nullptr, err);
    if (head && head->in_dim() != backend->dim()) {
      throw ConfigError("projection head expects dimension " + std::to_string(head->in_dim()) + " but the backend has " +
                        std::to_string(backend->dim()));
    }
    const rank_eval::SimilarityRanker ranker(catalog, *backend, head ? &*head : nullptr);
    preds = ranker.rank_all(terms, &warnings);
  } else {
    const auto clf = rank_eval::SoftmaxClassifier::load(
        require_file(out_path(cfg, cfg.paths.classifier, "classifier.json").string(), "classifier"));
    if (clf.n_labels() != labels.size()) throw ConfigError("classifier was trained for a different label set");
    const auto backend = open_backend(cfg, nullptr, err);
    if (clf.dim() != backend->dim()) throw ConfigError("classifier dimension does not match the backend");
    preds = rank_eval::classify_all(terms, clf, *backend, &warnings);
  }
  print_warnings(err, warnings);

  const fs::path pred_path = out_path(cfg, cfg.paths.predictions, "predictions.jsonl");
  write_text(pred_path, rank_eval::serialize_predictions(preds, labels));
  out << "ranked " << preds.size() << " terms -> " << pred_path.string() << "\n";
  return 0;
}

int cmd_evaluate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto labels = label_set(cfg);
  const fs::path gold_path = require_file(out_path(cfg, cfg.paths.gold, "validation_gold.jsonl").string(), "gold file");
  const fs::path pred_path = require_file(out_path(cfg, cfg.paths.predictions, "predictions.jsonl").string(), "predictions file");

  std::vector<rank_eval::GoldInstance> gold;
  for (const auto& row : corpus::load_labeled_terms(gold_path, labels)) gold.push_back({row.term, row.label});
  const auto preds = rank_eval::align_predictions(gold, rank_eval::load_predictions(pred_path, labels));
  const auto report = rank_eval::evaluate(gold, preds);

  const std::string text = rank_eval::report_json(report);
  write_text(out_path(cfg, cfg.paths.report, "eval_report.json"), text);
  out << text;
  (void)err;
  return 0;
}

}  // namespace hyprank::cli
