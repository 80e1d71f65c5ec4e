#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "hyprank/error.hpp"
#include "hyprank/rank_eval.hpp"
#include "prediction_sets.hpp"
#include "support.hpp"

using namespace hyprank;
using namespace hyprank::rank_eval;
using corpus::LabelId;
using corpus::LabelSet;

namespace {

class TableBackend : public embed::EmbeddingBackend {
 public:
  TableBackend(std::size_t dim, std::map<std::string, std::vector<double>> table) : dim_(dim), table_(std::move(table)) {}
  std::size_t dim() const override { return dim_; }
  std::vector<embed::EmbeddingVector> embed_batch(std::span<const std::string> texts) const override {
    ++calls;
    std::vector<embed::EmbeddingVector> out;
    for (const auto& t : texts) out.emplace_back(table_.at(t));
    return out;
  }
  mutable int calls = 0;

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>> table_;
};

LabelId id(int i) { return LabelId{static_cast<std::uint8_t>(i)}; }

}  // namespace

TEST_CASE("rank_scores orders descending with index tie-break") {
  const std::vector<double> s = {0.2, 0.9, 0.2, 0.5};
  auto p = rank_scores("t", s);
  CHECK(p.ranked_labels == std::vector<LabelId>{id(1), id(3), id(0), id(2)});
  CHECK(p.scores == std::vector<double>{0.9, 0.5, 0.2, 0.2});
  CHECK_NOTHROW(validate_prediction(p, 4));
  CHECK(position_of(p, id(2)) == 4);
  CHECK_THROWS_AS(validate_prediction(p, 5), DataError);
  auto bad = p;
  std::swap(bad.scores[0], bad.scores[1]);
  CHECK_THROWS_AS(validate_prediction(bad, 4), DataError);
  bad = p;
  bad.ranked_labels[0] = id(3);
  CHECK_THROWS_AS(validate_prediction(bad, 4), DataError);
}

TEST_CASE("similarity ranker averages cosine over occurrences") {
  const LabelSet labels = LabelSet::subset({"Bonds", "Swap"});
  const corpus::LabelCatalog catalog({{"Bonds", "def bonds"}, {"Swap", "def swap"}}, labels);
  TableBackend backend(3, {{"def bonds", {1, 0, 0}},
                           {"def swap", {0, 1, 0}},
                           {"occ1", {0.9, 0.1, std::sqrt(0.18)}},
                           {"occ2", {0.2, 0.8, std::sqrt(0.32)}},
                           {"zero", {0, 0, 0}}});
  SimilarityRanker ranker(catalog, backend);
  auto p = ranker.rank("term", {"occ1", "occ2"});
  CHECK(p.ranked_labels == std::vector<LabelId>{labels.at("Bonds"), labels.at("Swap")});
  CHECK(p.scores[0] == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(p.scores[1] == doctest::Approx(0.45).epsilon(1e-12));

  CHECK(ranker.rank("term", {"occ2", "occ1"}) == p);

  std::vector<std::string> warnings;
  auto skipped = ranker.rank("term", {"occ1", "zero"}, &warnings);
  CHECK(warnings.size() == 1);
  CHECK(skipped.scores[0] == doctest::Approx(0.9));
  CHECK_THROWS_AS(ranker.rank("term", {"zero"}), DataError);

  const int before = backend.calls;
  auto all = ranker.rank_all({{"a", {"occ1"}}, {"b", {"occ2", "occ1"}}});
  CHECK(backend.calls == before + 1);
  CHECK(all[1] == ranker.rank("b", {"occ1", "occ2"}));
  CHECK(all[0].term == "a");
}

TEST_CASE("baseline ranker puts a definition's own label first with score 1") {
  const LabelSet labels = LabelSet::finsim();
  const auto catalog = corpus::load_catalog(testing::data_file("label_catalog.json"), labels);
  embed::BaselineEmbedder backend({4096, 0}, embed::IdfWeights{});
  for (auto l : labels.ids()) {
    auto p = rank_term({catalog.definition(l)}, catalog, backend);
    CHECK(p.ranked_labels.front() == l);
    CHECK(p.scores.front() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ranker agrees with brute-force cosine, with and without a head") {
  const LabelSet labels = LabelSet::finsim();
  const auto catalog = corpus::load_catalog(testing::data_file("label_catalog.json"), labels);
  embed::BaselineEmbedder backend({256, 4}, embed::IdfWeights{});
  const auto head = simtrain::ProjectionHead::identity_with_noise(256, 256, 0.05, 8);
  const std::vector<std::string> occ = {"callable bond issued by a corporation", "a bond that can be redeemed early",
                                        "interest rate swap"};
  for (const simtrain::ProjectionHead* h : {static_cast<const simtrain::ProjectionHead*>(nullptr), &head}) {
    auto p = rank_term(occ, catalog, backend, h, "x");
    std::vector<double> expected(labels.size(), 0.0);
    for (auto l : labels.ids()) {
      auto lv = backend.embed(catalog.definition(l));
      if (h) lv = h->project(lv.values);
      for (const auto& o : occ) {
        auto ov = backend.embed(o);
        if (h) ov = h->project(ov.values);
        expected[l.index] += embed::cosine(ov, lv) / 3.0;
      }
    }
    for (std::size_t r = 0; r < labels.size(); ++r) {
      CHECK(p.scores[r] == doctest::Approx(expected[p.ranked_labels[r].index]).epsilon(1e-12));
    }
    CHECK_NOTHROW(validate_prediction(p, labels.size()));
  }
}

TEST_CASE("classify_term averages probabilities") {
  SoftmaxClassifier clf(2, 2, {std::log(0.6), std::log(0.2), std::log(0.4), std::log(0.8)}, {0.0, 0.0});
  TableBackend backend(2, {{"x", {3, 0}}, {"y", {0, 0.5}}, {"zero", {0, 0}}});
  auto px = clf.probabilities(std::vector<double>{3, 0});
  CHECK(px[0] == doctest::Approx(0.6));
  auto p = classify_term({"x", "y"}, clf, backend, "t");
  CHECK(p.ranked_labels == std::vector<LabelId>{id(1), id(0)});
  CHECK(p.scores[0] == doctest::Approx(0.6));
  CHECK(p.scores[1] == doctest::Approx(0.4));
  CHECK(p.scores[0] + p.scores[1] == doctest::Approx(1.0).epsilon(1e-12));

  auto single = classify_term({"x"}, clf, backend, "t");
  CHECK(single.ranked_labels == std::vector<LabelId>{id(0), id(1)});
  CHECK_THROWS_AS(classify_term({"zero"}, clf, backend, "t"), DataError);
  CHECK_THROWS_AS(clf.probabilities(std::vector<double>{0, 0}), DataError);
}

TEST_CASE("softmax classifier learns a separable fixture") {
  const LabelSet labels = LabelSet::subset({"Bonds", "Swap", "Funds"});
  std::map<std::string, std::vector<double>> table;
  corpus::Dataset train;
  Rng rng(4);
  for (int i = 0; i < 30; ++i) {
    const int cls = i % 3;
    std::vector<double> v(6);
    for (auto& x : v) x = 0.2 * uniform_unit(rng);
    v[2 * cls] += 1.0;
    const std::string t = "t" + std::to_string(i);
    table[t] = v;
    train.add({t, t, id(cls), corpus::Source::Original});
  }
  TableBackend backend(6, table);
  ClassifierConfig cfg;
  auto clf = train_softmax_classifier(train, backend, 3, cfg);
  std::size_t hits = 0;
  for (const auto& r : train.records()) {
    auto probs = clf.probabilities(table.at(r.surface));
    CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    auto p = rank_scores(r.term, probs);
    hits += p.ranked_labels.front() == *r.label ? 1 : 0;
  }
  CHECK(hits == 30);
  CHECK(train_softmax_classifier(train, backend, 3, cfg) == clf);

  testing::TempDir dir;
  testing::write_file(dir / "clf.json", clf.to_json());
  CHECK(SoftmaxClassifier::load(dir / "clf.json") == clf);

  corpus::Dataset one;
  one.add({"t0", "t0", id(0), corpus::Source::Original});
  CHECK_THROWS_AS(train_softmax_classifier(one, backend, 3, cfg), DataError);
  cfg.epochs = 0;
  cfg.learning_rate = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("metric examples") {
  auto s = testing::four_instances();
  CHECK(accuracy(s.gold, s.preds) == 0.5);
  CHECK(mean_rank(s.gold, s.preds) == 1.75);
  auto r = evaluate(s.gold, s.preds);
  CHECK(r.n == 4);
  CHECK(report_json(r).find("\"mean_rank\"") != std::string::npos);

  std::vector<GoldInstance> gold;
  std::vector<RankedPrediction> perfect, last;
  for (int i = 0; i < 17; ++i) {
    gold.push_back({"t" + std::to_string(i), id(i)});
    perfect.push_back(testing::placed("t" + std::to_string(i), id(i), 1, 17));
    last.push_back(testing::placed("t" + std::to_string(i), id(i), 17, 17));
  }
  CHECK(accuracy(gold, perfect) == 1.0);
  CHECK(mean_rank(gold, perfect) == 1.0);
  CHECK(accuracy(gold, last) == 0.0);
  CHECK(mean_rank(gold, last) == 17.0);

  auto swapped = s.preds;
  std::swap(swapped[0], swapped[1]);
  CHECK_THROWS_AS(accuracy(s.gold, swapped), DataError);
  CHECK_THROWS_AS(evaluate(s.gold, {}), DataError);
}

TEST_CASE("accuracy equals the share of rank-1 positions on random sets") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto s = testing::random_set(seed, 17);
    const double hits = static_cast<double>(std::count(s.positions.begin(), s.positions.end(), 1u));
    const double sum = static_cast<double>(std::accumulate(s.positions.begin(), s.positions.end(), std::size_t{0}));
    const double n = static_cast<double>(s.positions.size());
    CHECK(accuracy(s.gold, s.preds) == hits / n);
    CHECK(mean_rank(s.gold, s.preds) == doctest::Approx(sum / n).epsilon(1e-15));
  }
}

TEST_CASE("alignment and prediction files") {
  const LabelSet labels = LabelSet::finsim();
  auto s = testing::four_instances();
  std::vector<RankedPrediction> shuffled = {s.preds[2], s.preds[0], s.preds[3], s.preds[1]};
  auto aligned = align_predictions(s.gold, shuffled);
  CHECK(aligned == s.preds);

  // A term with two gold labels contributes two instances.
  std::vector<GoldInstance> twice = {s.gold[0], {s.gold[0].term, id(1)}};
  auto doubled = align_predictions(twice, s.preds);
  CHECK(doubled.size() == 2);
  CHECK(doubled[1] == s.preds[0]);
  CHECK_THROWS_AS(align_predictions({{"missing", id(0)}}, s.preds), DataError);

  testing::TempDir dir;
  testing::write_file(dir / "p.jsonl", serialize_predictions(s.preds, labels));
  CHECK(load_predictions(dir / "p.jsonl", labels) == s.preds);
  testing::write_file(dir / "bad.jsonl", R"({"term": "t", "ranked_labels": ["Bonds"], "scores": [1.0]})" "\n");
  CHECK_THROWS_AS(load_predictions(dir / "bad.jsonl", labels), DataError);
}
