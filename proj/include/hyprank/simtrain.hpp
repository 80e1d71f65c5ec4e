#pragma once

// Linear projection head trained over frozen backend embeddings with a
// multiple-negatives ranking loss plus an online contrastive loss on cosine
// distance. Gradients are analytic; grad_check compares them with central
// finite differences.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hyprank/embed.hpp"
#include "hyprank/pairgen.hpp"

namespace hyprank::simtrain {

using VecView = std::span<const double>;

// Loss value with gradients for the two vector lists it was computed from.
struct LossGrad {
  double loss = 0.0;
  std::vector<std::vector<double>> grad_first;
  std::vector<std::vector<double>> grad_second;
};

// Mean over i of -log softmax_j(scale * cos(a_i, p_j))[i]; the positives of
// the other anchors act as negatives. Cosines are computed from the raw
// vectors, so unnormalized inputs are fine (they must be non-zero).
LossGrad mnr_loss(const std::vector<VecView>& anchors, const std::vector<VecView>& positives, double scale);

// Per-pair term with d = 1 - cos: label * d^2 + (1 - label) * max(0, margin - d)^2.
double contrastive_term(double distance, int label, double margin);

// Mean of contrastive_term over contributing pairs. With `online`, only hard
// pairs contribute: positives farther than the closest negative, negatives
// closer than the farthest positive. A batch holding one class keeps all of
// its pairs.
LossGrad contrastive_loss(const std::vector<VecView>& u, const std::vector<VecView>& v, const std::vector<int>& labels,
                          double margin, bool online);

// Value-and-gradient callback: fills `grad` (same size as x) when it is not
// empty and returns the loss.
using LossFunction = std::function<double(std::span<const double> x, std::span<double> grad)>;

// Largest |g_a - g_f| / max(1e-8, |g_a| + |g_f|) over the checked
// coordinates, g_f from central differences. Checks every coordinate when
// max_coords is 0 or covers x, else a seeded subset of max_coords (>= 100).
double grad_check(const LossFunction& f, std::span<const double> x, double epsilon, std::size_t max_coords = 0,
                  std::uint64_t seed = 0);

struct BinaryPair {
  std::string anchor;
  std::string other;
  int label = 0;
};

std::vector<BinaryPair> binarize(const std::vector<pairgen::ScoredPair>& pairs, double threshold);

class ProjectionHead {
 public:
  ProjectionHead() = default;
  ProjectionHead(std::size_t out_dim, std::size_t in_dim, std::vector<double> weights);

  static ProjectionHead identity(std::size_t dim);
  // I (truncated to out_dim rows) plus uniform noise in [-noise, noise].
  static ProjectionHead identity_with_noise(std::size_t out_dim, std::size_t in_dim, double noise, std::uint64_t seed);

  std::size_t out_dim() const { return out_dim_; }
  std::size_t in_dim() const { return in_dim_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& weights() { return weights_; }

  // W x without normalization.
  std::vector<double> apply(std::span<const double> x) const;
  // W x scaled to unit length. Throws DataError on a dimension mismatch or
  // a zero result.
  embed::EmbeddingVector project(std::span<const double> x) const;

  std::string to_json() const;
  static ProjectionHead from_json_text(const std::string& text);
  static ProjectionHead load(const std::filesystem::path& path);

  friend bool operator==(const ProjectionHead&, const ProjectionHead&) = default;

 private:
  std::size_t out_dim_ = 0;
  std::size_t in_dim_ = 0;
  std::vector<double> weights_;  // row-major out_dim x in_dim
};

struct TrainConfig {
  double learning_rate = 2e-5;
  std::size_t epochs = 25;
  std::size_t batch_size = 20;
  double margin = 0.5;
  double mnrl_scale = 20.0;
  double binary_threshold = 0.5;
  std::uint64_t seed = 42;
  std::size_t out_dim = 0;  // 0: same as the backend dimension
  double init_noise = 1e-3;

  void validate() const;  // throws ConfigError
};

// Upper bound on head size (weights), to fail fast on oversized backends.
inline constexpr std::size_t kMaxHeadWeights = std::size_t{1} << 25;

struct EpochLoss {
  std::size_t epoch = 0;
  double mnrl = 0.0;
  double contrastive = 0.0;
  double total = 0.0;
};

struct TrainResult {
  ProjectionHead head;
  std::vector<EpochLoss> trace;
  std::vector<std::string> warnings;
};

// Embeds every distinct text once, initializes the head near identity, fixes
// a seeded batch partition and runs epochs x batches of gradient descent on
// mnr_loss (score-1 pairs of the batch) + contrastive_loss (all pairs of the
// batch, binarized). Trace entries are batch-loss means for each epoch.
// Throws hyprank::Error naming the batch when a loss turns non-finite.
TrainResult train(const std::vector<pairgen::ScoredPair>& pairs, const embed::EmbeddingBackend& backend,
                  const TrainConfig& cfg);

std::string trace_csv(const std::vector<EpochLoss>& trace);

}  // namespace hyprank::simtrain
