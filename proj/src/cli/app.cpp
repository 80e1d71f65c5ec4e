#include <CLI11.hpp>

#include <ostream>

#include "hyprank/cli.hpp"
#include "hyprank/error.hpp"

namespace hyprank::cli {
namespace {

// The config file is applied before flags are parsed so that flags win.
std::optional<std::string> find_config_arg(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

void add_backend_options(CLI::App* sub, PipelineConfig& cfg) {
  auto& b = cfg.backend;
  sub->add_option("--backend", b.kind, "Embedding backend: baseline or remote")->capture_default_str();
  sub->add_option("--dim", b.dim, "Baseline hashing dimension (power of two)")->capture_default_str();
  sub->add_option("--hash-seed", b.hash_seed, "Baseline hashing seed")->capture_default_str();
  sub->add_option("--idf", cfg.paths.idf, "Idf weights file (default <work-dir>/idf.json)");
  sub->add_option("--embed-url", b.url, "Remote embedding service base URL");
  sub->add_option("--embed-batch", b.batch_size, "Texts per remote request")->capture_default_str();
  sub->add_option("--embed-in-flight", b.max_in_flight, "Concurrent remote requests")->capture_default_str();
  sub->add_option("--embed-retries", b.max_retries, "Retries per remote request")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  std::string config_path;
  try {
    if (auto path = find_config_arg(args)) {
      config_path = *path;
      cfg = load_config(config_path);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Hypernym ranking pipeline for financial terms", "hyprank"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--seed", cfg.seed, "Seed for every sampling step")->capture_default_str();
  app.add_flag("--offline", cfg.offline, "Never contact the lookup service; use the cache only");
  app.add_option("--work-dir", cfg.paths.work_dir, "Directory for intermediate and output files")->capture_default_str();

  auto& p = cfg.paths;

  auto* ex = app.add_subcommand("extract-acronyms", "Extract acronym definitions from a text corpus");
  ex->add_option("--corpus-dir", p.corpus_dir, "Directory of plain-text documents");
  ex->add_option("--wordlist", p.wordlist, "English word list for the dictionary-word filter");
  ex->add_option("--out", p.acronyms, "Acronym table (default <work-dir>/acronyms.json)");

  auto* au = app.add_subcommand("augment", "Split labeled terms and add acronym and glossary surfaces");
  au->add_option("--terms", p.terms, "Labeled terms, JSON lines {term, label}");
  au->add_option("--test-terms", p.test_terms, "Unlabeled test terms, JSON lines {term}");
  au->add_option("--acronyms", p.acronyms, "Acronym table used to expand terms");
  au->add_option("--glossary", p.glossaries, "Glossary file, JSON lines {term, definition, source} (repeatable)");
  au->add_flag("--lookup", cfg.augment.lookup, "Query the lookup service for definitions");
  au->add_option("--lookup-cache", p.lookup_cache, "Lookup cache file (read, and updated when online)");
  au->add_option("--lookup-url", cfg.augment.lookup_url, "Lookup service search endpoint")->capture_default_str();
  au->add_option("--ratio1-min", cfg.augment.thresholds.ratio1_min, "Minimum share of term tokens found in a candidate label")
      ->capture_default_str();
  au->add_option("--ratio2-max", cfg.augment.thresholds.ratio2_max, "Maximum candidate/term token count ratio")
      ->capture_default_str();
  au->add_option("--train-fraction", cfg.augment.train_fraction, "Share of terms kept for training; the rest validates")
      ->capture_default_str();
  au->add_option("--out", p.train, "Augmented training records (default <work-dir>/train.jsonl)");

  auto* gp = app.add_subcommand("gen-pairs", "Generate taxonomy-scored training pairs");
  gp->add_option("--train", p.train, "Augmented training records");
  gp->add_option("--catalog", p.catalog, "Label catalog with one definition per label");
  gp->add_option("--taxonomy", p.taxonomy, "Label taxonomy");
  gp->add_option("--k", cfg.pairs.k, "Score step: k for a shared root, 2k for a shared first child; in (0, 0.5)")
      ->capture_default_str();
  gp->add_option("--negatives", cfg.pairs.negatives_per_positive, "Negative pairs per record")->capture_default_str();
  gp->add_option("--zero-fraction", cfg.pairs.target_zero_fraction, "Share of score-0 pairs kept after undersampling")
      ->capture_default_str();
  gp->add_option("--out", p.pairs, "Pair file (default <work-dir>/pairs.jsonl)");

  auto* th = app.add_subcommand("train-head", "Train the projection head on scored pairs");
  th->add_option("--pairs", p.pairs, "Pair file");
  add_backend_options(th, cfg);
  auto& t = cfg.train;
  th->add_option("--lr", t.learning_rate, "Learning rate")->capture_default_str();
  th->add_option("--epochs", t.epochs, "Training epochs")->capture_default_str();
  th->add_option("--batch-size", t.batch_size, "Pairs per batch")->capture_default_str();
  th->add_option("--margin", t.margin, "Contrastive margin on cosine distance")->capture_default_str();
  th->add_option("--mnrl-scale", t.mnrl_scale, "Similarity scale of the ranking loss")->capture_default_str();
  th->add_option("--binary-threshold", t.binary_threshold, "Scores at or above this count as positives")
      ->capture_default_str();
  th->add_option("--out-dim", t.out_dim, "Head output dimension (0: backend dimension)")->capture_default_str();
  th->add_option("--init-noise", t.init_noise, "Amplitude of the noise added to the identity init")
      ->capture_default_str();
  th->add_option("--out", p.head, "Head file (default <work-dir>/head.json)");
  th->add_option("--trace", p.trace, "Loss trace CSV (default <work-dir>/loss_trace.csv)");

  auto* tb = app.add_subcommand("train-baseline", "Train the softmax classifier baseline");
  tb->add_option("--train", p.train, "Augmented training records");
  tb->add_option("--catalog", p.catalog, "Label catalog (its definitions join the idf fit)");
  add_backend_options(tb, cfg);
  tb->add_option("--lr", cfg.classifier.learning_rate, "Learning rate")->capture_default_str();
  tb->add_option("--epochs", cfg.classifier.epochs, "Full-batch epochs")->capture_default_str();
  tb->add_option("--l2", cfg.classifier.l2, "L2 penalty")->capture_default_str();
  tb->add_option("--out", p.classifier, "Classifier file (default <work-dir>/classifier.json)");

  auto* rk = app.add_subcommand("rank", "Rank every label for each term");
  rk->add_option("--mode", cfg.rank.mode, "similarity or classifier")->capture_default_str();
  rk->add_option("--input", p.rank_input, "Augmented records to rank (default <work-dir>/validation.jsonl)");
  rk->add_option("--catalog", p.catalog, "Label catalog");
  rk->add_option("--head", p.head, "Projection head (default <work-dir>/head.json)");
  bool no_head = false;
  rk->add_flag("--no-head", no_head, "Rank with raw backend vectors");
  rk->add_option("--classifier", p.classifier, "Classifier file for classifier mode");
  add_backend_options(rk, cfg);
  rk->add_option("--out", p.predictions, "Predictions (default <work-dir>/predictions.jsonl)");

  auto* ev = app.add_subcommand("evaluate", "Score predictions against gold labels");
  ev->add_option("--gold", p.gold, "Gold terms (default <work-dir>/validation_gold.jsonl)");
  ev->add_option("--predictions", p.predictions, "Predictions file");
  ev->add_option("--out", p.report, "Report (default <work-dir>/eval_report.json)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (no_head) cfg.rank.use_head = false;

  try {
    if (ex->parsed()) return cmd_extract_acronyms(cfg, out, err);
    if (au->parsed()) return cmd_augment(cfg, out, err);
    if (gp->parsed()) return cmd_gen_pairs(cfg, out, err);
    if (th->parsed()) return cmd_train_head(cfg, out, err);
    if (tb->parsed()) return cmd_train_baseline(cfg, out, err);
    if (rk->parsed()) return cmd_rank(cfg, out, err);
    if (ev->parsed()) return cmd_evaluate(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace hyprank::cli
