#pragma once

// Ranked label predictions (cosine semantic search or a softmax classifier)
// and the two shared-task metrics.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hyprank/corpus.hpp"
#include "hyprank/embed.hpp"
#include "hyprank/simtrain.hpp"

namespace hyprank::rank_eval {

struct RankedPrediction {
  std::string term;
  std::vector<corpus::LabelId> ranked_labels;  // permutation of the label set
  std::vector<double> scores;                  // non-increasing, aligned

  friend bool operator==(const RankedPrediction&, const RankedPrediction&) = default;
};

// Sorts label scores (indexed by LabelId) descending; equal scores keep
// ascending label order.
RankedPrediction rank_scores(std::string term, std::span<const double> scores_by_label);

// Throws DataError unless ranked_labels is a permutation of n_labels ids and
// scores are aligned and non-increasing.
void validate_prediction(const RankedPrediction& pred, std::size_t n_labels);

// 1-based position of `label`; throws DataError when absent.
std::size_t position_of(const RankedPrediction& pred, corpus::LabelId label);

// ---- similarity ranker ----

class SimilarityRanker {
 public:
  // Embeds (and projects, when a head is given) every label definition once.
  SimilarityRanker(const corpus::LabelCatalog& catalog, const embed::EmbeddingBackend& backend,
                   const simtrain::ProjectionHead* head = nullptr);

  // Mean cosine over occurrences against every label definition. Zero-vector
  // occurrences are skipped and reported in `warnings`; DataError if none
  // remain.
  RankedPrediction rank(const std::string& term, const std::vector<std::string>& occurrences,
                        std::vector<std::string>* warnings = nullptr) const;

  // Embeds every surface in a single backend call, then ranks each term.
  std::vector<RankedPrediction> rank_all(const std::vector<corpus::TermOccurrences>& terms,
                                         std::vector<std::string>* warnings = nullptr) const;

 private:
  RankedPrediction rank_vectors(const std::string& term, const std::vector<std::string>& surfaces,
                                const std::vector<embed::EmbeddingVector>& vectors,
                                std::vector<std::string>* warnings) const;
  embed::EmbeddingVector prepare(const embed::EmbeddingVector& raw) const;

  const embed::EmbeddingBackend& backend_;
  const simtrain::ProjectionHead* head_;
  std::vector<embed::EmbeddingVector> label_vectors_;
};

RankedPrediction rank_term(const std::vector<std::string>& occurrences, const corpus::LabelCatalog& catalog,
                           const embed::EmbeddingBackend& backend, const simtrain::ProjectionHead* head = nullptr,
                           const std::string& term = {});

// ---- softmax classifier ----

struct ClassifierConfig {
  double learning_rate = 1.0;
  std::size_t epochs = 200;
  double l2 = 1e-4;
  double init_scale = 0.01;
  std::uint64_t seed = 42;

  void validate() const;  // throws ConfigError
};

// Multinomial logistic regression over L2-normalized embeddings.
class SoftmaxClassifier {
 public:
  SoftmaxClassifier() = default;
  SoftmaxClassifier(std::size_t n_labels, std::size_t dim, std::vector<double> weights, std::vector<double> bias);

  std::size_t n_labels() const { return n_labels_; }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& weights() const { return weights_; }  // row-major n_labels x dim
  const std::vector<double>& bias() const { return bias_; }

  // Normalizes x first; throws DataError for a zero vector.
  std::vector<double> probabilities(std::span<const double> x) const;

  std::string to_json() const;
  static SoftmaxClassifier load(const std::filesystem::path& path);

  friend bool operator==(const SoftmaxClassifier&, const SoftmaxClassifier&) = default;

 private:
  std::size_t n_labels_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

// Full-batch gradient descent on mean cross-entropy + l2/2 |W|^2. Records
// without a label or with a zero embedding are ignored. Throws DataError
// when fewer than two labels are present.
SoftmaxClassifier train_softmax_classifier(const corpus::Dataset& train, const embed::EmbeddingBackend& backend,
                                           std::size_t n_labels, const ClassifierConfig& cfg);

// Averages per-occurrence probabilities, then ranks.
RankedPrediction classify_term(const std::vector<std::string>& occurrences, const SoftmaxClassifier& classifier,
                               const embed::EmbeddingBackend& backend, const std::string& term = {},
                               std::vector<std::string>* warnings = nullptr);

std::vector<RankedPrediction> classify_all(const std::vector<corpus::TermOccurrences>& terms,
                                           const SoftmaxClassifier& classifier,
                                           const embed::EmbeddingBackend& backend,
                                           std::vector<std::string>* warnings = nullptr);

// ---- metrics ----

struct GoldInstance {
  std::string term;
  corpus::LabelId label;
};

struct EvalReport {
  double accuracy = 0.0;
  double mean_rank = 0.0;
  std::size_t n = 0;
};

// gold[i] and preds[i] must name the same term (DataError otherwise).
double accuracy(const std::vector<GoldInstance>& gold, const std::vector<RankedPrediction>& preds);
double mean_rank(const std::vector<GoldInstance>& gold, const std::vector<RankedPrediction>& preds);
EvalReport evaluate(const std::vector<GoldInstance>& gold, const std::vector<RankedPrediction>& preds);

// Pairs every gold instance with the prediction for its term. Terms with
// several gold labels yield several instances. DataError when a gold term
// has no prediction.
std::vector<RankedPrediction> align_predictions(const std::vector<GoldInstance>& gold,
                                                const std::vector<RankedPrediction>& preds);

std::string serialize_predictions(const std::vector<RankedPrediction>& preds, const corpus::LabelSet& labels);
std::vector<RankedPrediction> load_predictions(const std::filesystem::path& path, const corpus::LabelSet& labels);
std::string report_json(const EvalReport& report);

}  // namespace hyprank::rank_eval
