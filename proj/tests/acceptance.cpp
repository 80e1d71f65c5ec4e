// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "hyprank/acronym.hpp"
#include "hyprank/glossary.hpp"
#include "hyprank/io.hpp"
#include "hyprank/pairgen.hpp"
#include "hyprank/rank_eval.hpp"
#include "hyprank/simtrain.hpp"
#include "hyprank/taxonomy.hpp"
#include "loss_points.hpp"
#include "prediction_sets.hpp"
#include "support.hpp"
#include "toy_pipeline.hpp"

using namespace hyprank;

namespace {

// Collects failed conditions for one criterion.
struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Criterion {
  std::string name;
  double time_limit_s;  // 0: none
  std::function<void(Check&)> body;
};

void metrics_oracle(Check& c) {
  auto s = testing::four_instances();
  c.expect(rank_eval::accuracy(s.gold, s.preds) == 0.5, "accuracy != 0.5");
  c.expect(rank_eval::mean_rank(s.gold, s.preds) == 1.75, "mean rank != 1.75");
}

void taxonomy_check(Check& c) {
  std::size_t fixtures = 0;
  for (const auto& file : {testing::fixture("taxonomies/toy.json"), testing::fixture("taxonomies/shallow.json"),
                           testing::fixture("taxonomies/forest.json"), testing::fixture("taxonomies/deep.json"),
                           testing::fixture("toy/taxonomy.json"), testing::data_file("taxonomy_default.json")}) {
    const io::json doc = io::read_json(file);
    // Leaf paths straight from the document.
    std::map<std::string, std::vector<std::string>> paths;
    std::function<void(const io::json&, std::vector<std::string>)> walk = [&](const io::json& n,
                                                                               std::vector<std::string> trail) {
      trail.push_back(n["name"].get<std::string>());
      if (!n.contains("children") || n["children"].empty()) {
        paths[trail.back()] = trail;
        return;
      }
      for (const auto& ch : n["children"]) walk(ch, trail);
    };
    if (doc.is_array()) {
      for (const auto& r : doc) walk(r, {});
    } else {
      walk(doc, {});
    }
    std::vector<std::string> names;
    for (const auto& [leaf, path] : paths) names.push_back(leaf);
    const auto labels = names.size() == corpus::kNumFinsimLabels ? corpus::LabelSet::finsim()
                                                                  : corpus::LabelSet::subset(names);
    const auto t = taxonomy::load_taxonomy(file, labels);
    for (auto a : labels.ids()) {
      for (auto b : labels.ids()) {
        const auto& pa = paths.at(labels.name(a));
        const auto& pb = paths.at(labels.name(b));
        double expected = 0.0;
        if (pa == pb) {
          expected = 1.0;
        } else if (pa[0] == pb[0]) {
          const auto& ca = pa.size() > 1 ? pa[1] : pa[0];
          const auto& cb = pb.size() > 1 ? pb[1] : pb[0];
          expected = ca == cb ? 0.8 : 0.4;
        }
        const double got = taxonomy::pair_score(t, a, b, 0.4);
        c.expect(got == expected, file.filename().string() + ": " + labels.name(a) + "/" + labels.name(b));
        c.expect(got == taxonomy::pair_score(t, b, a, 0.4), "asymmetric " + labels.name(a) + "/" + labels.name(b));
      }
      c.expect(taxonomy::pair_score(t, a, a, 0.4) == 1.0, "self-score of " + labels.name(a));
    }
    ++fixtures;
  }
  c.expect(fixtures == 6, "not every fixture was checked");
}

void pairgen_distribution(Check& c) {
  const auto labels = corpus::LabelSet::finsim();
  const auto catalog = corpus::load_catalog(testing::data_file("label_catalog.json"), labels);
  const auto tree = taxonomy::load_taxonomy(testing::data_file("taxonomy_default.json"), labels);
  const auto train = corpus::load_dataset(testing::fixture("pairgen_train.jsonl"), labels);
  c.expect(train.size() == 100, "fixture does not hold 100 records");
  pairgen::PairGenConfig cfg;
  const auto gen = pairgen::generate(train, catalog, tree, cfg);
  const auto before = pairgen::distribution_report(gen.pairs);
  c.expect(gen.pairs.size() == 1100, "expected 1100 generated pairs");
  c.expect(before.count(1.0) && before.at(1.0).count == 100, "expected 100 score-1.0 pairs");
  const auto after = pairgen::undersample_zeros(gen.pairs, cfg.target_zero_fraction, 1);
  const auto report = pairgen::distribution_report(after);
  const double zeros = report.count(0.0) ? static_cast<double>(report.at(0.0).count) : 0.0;
  c.expect(std::abs(zeros - 0.3 * static_cast<double>(after.size())) <= 1.0, "zero share not within 1 pair of 30%");
  c.expect(report.at(1.0).count == 100, "undersampling dropped a positive");
}

void ratio_matching(Check& c) {
  using textnorm::TokenSet;
  Rng rng(2024);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "h", "i"};
  for (int trial = 0; trial < 5000; ++trial) {
    TokenSet s1, s2;
    const std::size_t n1 = 1 + uniform_index(rng, 6), n2 = uniform_index(rng, 9);
    for (std::size_t i = 0; i < n1; ++i) s1.insert(vocab[uniform_index(rng, vocab.size())]);
    for (std::size_t i = 0; i < n2; ++i) s2.insert(vocab[uniform_index(rng, vocab.size())]);
    c.expect(glossary::accept_match(glossary::overlap_ratios(s1, s1)), "identical sets rejected");
    const bool subset = std::includes(s2.begin(), s2.end(), s1.begin(), s1.end());
    if (static_cast<double>(s2.size()) > 1.25 * static_cast<double>(s1.size()) || !subset) {
      c.expect(!glossary::accept_match(glossary::overlap_ratios(s1, s2)), "oversized or non-superset accepted");
    }
  }
  glossary::LookupClient client(glossary::LookupConfig{},
                                glossary::LookupCache::load(testing::fixture("lookup_cache.json")));
  const auto candidates = client.lookup("callable bond");
  const auto match = glossary::match_lookup("callable bond", candidates);
  c.expect(match.has_value() && match->starts_with("A callable bond (also called redeemable bond)"),
           "callable bond did not match its cached candidate");
}

void acronym_filters(Check& c) {
  const auto candidates = acronym::extract_from_directory(testing::fixture("acronym_corpus"));
  acronym::FilterStats stats;
  const auto kept =
      acronym::filter_entries(candidates, acronym::load_wordlist(testing::data_file("wordlist.txt")), &stats);
  for (std::size_t r = 0; r < acronym::kNumFilterRules; ++r) {
    c.expect(stats.dropped[r] >= 2,
             std::string(acronym::rule_name(static_cast<acronym::FilterRule>(r))) + " fired fewer than twice");
  }
  const std::vector<acronym::AcronymEntry> golden = {
      {"NAV", "Net Asset Value", "doc_a.txt"},
      {"ETF", "Exchange Traded Fund", "doc_a.txt"},
      {"CDO", "Collateralized Debt Obligation", "doc_b.txt"},
      {"CDS", "Credit Default Swap", "doc_b.txt"},
      {"ISIN", "International Securities Identification Number", "doc_b.txt"},
      {"NAV", "Net Asset Value", "doc_b.txt"},
  };
  c.expect(kept == golden, "kept set differs from the golden list");
}

void gradients(Check& c) {
  const std::size_t b = 6, d = 8;
  double worst_mnrl = 0.0, worst_con = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = testing::random_point(seed, 2 * b * d);
    worst_mnrl = std::max(worst_mnrl, simtrain::grad_check(testing::mnr_function(b, d, 20.0), x, 1e-6));
    worst_con = std::max(worst_con, simtrain::grad_check(
                                        testing::contrastive_function(testing::random_labels(seed, b), d, 0.5, true),
                                        x, 1e-6));
  }
  c.expect(worst_mnrl < 1e-4, "ranking loss gradient error " + std::to_string(worst_mnrl));
  c.expect(worst_con < 1e-4, "contrastive gradient error " + std::to_string(worst_con));

  const std::vector<double> a = {0.3, -1.2, 2.0}, p = {1.0, 0.5, -0.1};
  c.expect(simtrain::mnr_loss({a}, {p}, 20.0).loss == 0.0, "B=1 ranking loss is not exactly 0");
  c.expect(simtrain::contrastive_term(0.0, 1, 0.5) == 0.0, "positive at d=0");
  c.expect(simtrain::contrastive_term(0.9, 0, 0.5) == 0.0, "negative at d=0.9");
  c.expect(std::abs(simtrain::contrastive_term(0.2, 0, 0.5) - 0.09) < 1e-12, "negative at d=0.2");
}

void toy_end_to_end(Check& c) {
  testing::TempDir first_dir, second_dir;
  const auto first = testing::run_toy_pipeline(first_dir.path());
  c.expect(first.exit_codes == std::vector<int>{0, 0, 0, 0, 0}, "a stage failed:\n" + first.log);
  c.expect(first.accuracy == 1.0, "accuracy " + std::to_string(first.accuracy));
  c.expect(first.mean_rank == 1.0, "mean rank " + std::to_string(first.mean_rank));
  const auto second = testing::run_toy_pipeline(second_dir.path());
  c.expect(!first.predictions.empty() && first.predictions == second.predictions, "rerun is not byte-identical");
  const auto totals = testing::trace_totals(first.trace);
  for (std::size_t i = 1; i < totals.size(); ++i) c.expect(totals[i] <= totals[i - 1], "loss trace increased");
}

void cross_metric(Check& c) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = testing::random_set(seed, 17);
    const double hits = static_cast<double>(std::count(s.positions.begin(), s.positions.end(), 1u));
    c.expect(rank_eval::accuracy(s.gold, s.preds) == hits / static_cast<double>(s.positions.size()),
             "set " + std::to_string(seed));
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"metrics oracle: [1,1,3,2] -> accuracy 0.5, mean rank 1.75", 1.0, metrics_oracle},
      {"taxonomy: path oracle on every fixture, symmetry and self-score", 1.0, taxonomy_check},
      {"pair generation: 100 positives, zero share within 1 pair of 30%", 5.0, pairgen_distribution},
      {"ratio matching: properties and the cached callable bond match", 0.0, ratio_matching},
      {"acronym filters: each rule fires twice, kept set is golden", 0.0, acronym_filters},
      {"gradients: finite differences < 1e-4, B=1 loss 0, contrastive hand cases", 30.0, gradients},
      {"toy end-to-end: accuracy 1.0, mean rank 1.0, byte-identical rerun", 60.0, toy_end_to_end},
      {"cross-metric: accuracy equals share of rank-1 positions", 0.0, cross_metric},
  };
  int failed = 0;
  for (const auto& crit : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (crit.time_limit_s > 0 && secs >= crit.time_limit_s) {
      check.failures.push_back("took " + std::to_string(secs) + "s, limit " + std::to_string(crit.time_limit_s) + "s");
    }
    const bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("%s  %-75s %.3fs\n", ok ? "PASS" : "FAIL", crit.name.c_str(), secs);
    for (std::size_t i = 0; i < std::min<std::size_t>(check.failures.size(), 5); ++i) {
      std::printf("      %s\n", check.failures[i].c_str());
    }
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
