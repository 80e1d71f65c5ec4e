#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hyprank/error.hpp"
#include "hyprank/io.hpp"
#include "hyprank/rank_eval.hpp"
#include "hyprank/rng.hpp"
#include "hyprank/simd/kernels.hpp"

namespace hyprank::rank_eval {

void ClassifierConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be positive");
  if (!(l2 >= 0.0)) throw ConfigError("l2 penalty must be non-negative");
  if (!(init_scale >= 0.0)) throw ConfigError("init scale must be non-negative");
}

SoftmaxClassifier::SoftmaxClassifier(std::size_t n_labels, std::size_t dim, std::vector<double> weights,
                                     std::vector<double> bias)
    : n_labels_(n_labels), dim_(dim), weights_(std::move(weights)), bias_(std::move(bias)) {
  if (n_labels < 2 || dim == 0) throw DataError("classifier needs at least two labels and a positive dimension");
  if (weights_.size() != n_labels * dim || bias_.size() != n_labels) {
    throw DataError("classifier weights do not match its dimensions");
  }
}

namespace {

void softmax_inplace(std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

std::vector<double> unit(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  if (embed::is_zero(v)) throw DataError("cannot classify a zero vector");
  embed::normalize(v);
  return v;
}

}  // namespace

std::vector<double> SoftmaxClassifier::probabilities(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw DataError("classifier expects dimension " + std::to_string(dim_) + ", got " + std::to_string(x.size()));
  }
  const std::vector<double> v = unit(x);
  std::vector<double> z(n_labels_);
  simd::gemv(weights_, n_labels_, dim_, v, z);
  for (std::size_t l = 0; l < n_labels_; ++l) z[l] += bias_[l];
  softmax_inplace(z);
  return z;
}

std::string SoftmaxClassifier::to_json() const {
  io::json j;
  j["n_labels"] = n_labels_;
  j["dim"] = dim_;
  j["weights"] = weights_;
  j["bias"] = bias_;
  return j.dump();
}

SoftmaxClassifier SoftmaxClassifier::load(const std::filesystem::path& path) {
  const io::json j = io::read_json(path);
  try {
    return SoftmaxClassifier(j.at("n_labels").get<std::size_t>(), j.at("dim").get<std::size_t>(),
                             j.at("weights").get<std::vector<double>>(), j.at("bias").get<std::vector<double>>());
  } catch (const io::json::exception& e) {
    throw DataError(path.string() + ": malformed classifier: " + e.what());
  }
}

SoftmaxClassifier train_softmax_classifier(const corpus::Dataset& train, const embed::EmbeddingBackend& backend,
                                           std::size_t n_labels, const ClassifierConfig& cfg) {
  cfg.validate();
  std::vector<std::string> texts;
  std::vector<std::size_t> labels;
  for (const auto& r : train.records()) {
    if (!r.label) continue;
    if (r.label->index >= n_labels) throw DataError("record label outside the label set");
    texts.push_back(r.surface);
    labels.push_back(r.label->index);
  }
  const auto raw = backend.embed_batch(texts);
  if (raw.size() != texts.size()) throw DataError("embedding backend returned the wrong number of vectors");
  const std::size_t dim = backend.dim();

  std::vector<std::vector<double>> xs;
  std::vector<std::size_t> ys;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].dim() != dim) throw DataError("embedding dimension mismatch for '" + texts[i] + "'");
    if (embed::is_zero(raw[i].span())) continue;
    xs.push_back(unit(raw[i].span()));
    ys.push_back(labels[i]);
  }
  if (std::set<std::size_t>(ys.begin(), ys.end()).size() < 2) {
    throw DataError("classifier training data must cover at least two labels");
  }

  Rng rng(cfg.seed);
  std::vector<double> w(n_labels * dim);
  for (double& v : w) v = (2.0 * uniform_unit(rng) - 1.0) * cfg.init_scale;
  std::vector<double> b(n_labels, 0.0);

  const double inv_n = 1.0 / static_cast<double>(xs.size());
  std::vector<std::vector<double>> residual(xs.size(), std::vector<double>(n_labels));
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<double> grad_b(n_labels, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      auto& z = residual[i];
      simd::gemv(w, n_labels, dim, xs[i], z);
      for (std::size_t l = 0; l < n_labels; ++l) z[l] += b[l];
      softmax_inplace(z);
      z[ys[i]] -= 1.0;
      for (std::size_t l = 0; l < n_labels; ++l) grad_b[l] += z[l] * inv_n;
    }
    simd::scale(1.0 - cfg.learning_rate * cfg.l2, w);
    for (std::size_t i = 0; i < xs.size(); ++i) simd::rank1_update(-cfg.learning_rate * inv_n, residual[i], xs[i], w);
    for (std::size_t l = 0; l < n_labels; ++l) b[l] -= cfg.learning_rate * grad_b[l];
  }
  return SoftmaxClassifier(n_labels, dim, std::move(w), std::move(b));
}

namespace {

RankedPrediction classify_vectors(const std::string& term, const std::vector<std::string>& surfaces,
                                  std::span<const embed::EmbeddingVector> vectors, const SoftmaxClassifier& clf,
                                  std::vector<std::string>* warnings) {
  if (surfaces.empty()) throw DataError("no occurrences for term '" + term + "'");
  std::vector<std::size_t> order(surfaces.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return surfaces[a] < surfaces[b]; });

  std::vector<double> mean(clf.n_labels(), 0.0);
  std::size_t used = 0;
  for (std::size_t i : order) {
    if (embed::is_zero(vectors[i].span())) {
      if (warnings != nullptr) {
        warnings->push_back("term '" + term + "': skipped occurrence with a zero embedding: '" + surfaces[i] + "'");
      }
      continue;
    }
    const auto p = clf.probabilities(vectors[i].span());
    for (std::size_t l = 0; l < p.size(); ++l) mean[l] += p[l];
    ++used;
  }
  if (used == 0) throw DataError("every occurrence of term '" + term + "' embeds to a zero vector");
  for (double& v : mean) v /= static_cast<double>(used);
  return rank_scores(term, mean);
}

}  // namespace

RankedPrediction classify_term(const std::vector<std::string>& occurrences, const SoftmaxClassifier& classifier,
                               const embed::EmbeddingBackend& backend, const std::string& term,
                               std::vector<std::string>* warnings) {
  const auto vectors = backend.embed_batch(occurrences);
  return classify_vectors(term, occurrences, vectors, classifier, warnings);
}

std::vector<RankedPrediction> classify_all(const std::vector<corpus::TermOccurrences>& terms,
                                           const SoftmaxClassifier& classifier,
                                           const embed::EmbeddingBackend& backend,
                                           std::vector<std::string>* warnings) {
  std::vector<std::string> flat;
  for (const auto& t : terms) flat.insert(flat.end(), t.surfaces.begin(), t.surfaces.end());
  const auto vectors = backend.embed_batch(flat);
  if (vectors.size() != flat.size()) throw DataError("embedding backend returned the wrong number of vectors");
  std::vector<RankedPrediction> out;
  std::size_t offset = 0;
  for (const auto& t : terms) {
    out.push_back(classify_vectors(t.term, t.surfaces,
                                   std::span<const embed::EmbeddingVector>(vectors).subspan(offset, t.surfaces.size()),
                                   classifier, warnings));
    offset += t.surfaces.size();
  }
  return out;
}

}  // namespace hyprank::rank_eval
