#include <algorithm>
#include <numeric>

#include "hyprank/error.hpp"
#include "hyprank/rank_eval.hpp"

namespace hyprank::rank_eval {

RankedPrediction rank_scores(std::string term, std::span<const double> scores_by_label) {
  std::vector<std::size_t> order(scores_by_label.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores_by_label[a] > scores_by_label[b]; });
  RankedPrediction pred;
  pred.term = std::move(term);
  for (std::size_t i : order) {
    pred.ranked_labels.push_back(corpus::LabelId{static_cast<std::uint8_t>(i)});
    pred.scores.push_back(scores_by_label[i]);
  }
  return pred;
}

void validate_prediction(const RankedPrediction& pred, std::size_t n_labels) {
  if (pred.ranked_labels.size() != n_labels || pred.scores.size() != n_labels) {
    throw DataError("prediction for '" + pred.term + "' must rank all " + std::to_string(n_labels) + " labels");
  }
  std::vector<bool> seen(n_labels, false);
  for (auto id : pred.ranked_labels) {
    if (id.index >= n_labels || seen[id.index]) {
      throw DataError("prediction for '" + pred.term + "' is not a permutation of the labels");
    }
    seen[id.index] = true;
  }
  for (std::size_t i = 1; i < pred.scores.size(); ++i) {
    if (pred.scores[i] > pred.scores[i - 1]) {
      throw DataError("prediction for '" + pred.term + "' has increasing scores");
    }
  }
}

std::size_t position_of(const RankedPrediction& pred, corpus::LabelId label) {
  auto it = std::find(pred.ranked_labels.begin(), pred.ranked_labels.end(), label);
  if (it == pred.ranked_labels.end()) throw DataError("gold label missing from prediction for '" + pred.term + "'");
  return static_cast<std::size_t>(it - pred.ranked_labels.begin()) + 1;
}

SimilarityRanker::SimilarityRanker(const corpus::LabelCatalog& catalog, const embed::EmbeddingBackend& backend,
                                   const simtrain::ProjectionHead* head)
    : backend_(backend), head_(head) {
  std::vector<std::string> defs;
  for (auto id : catalog.labels().ids()) defs.push_back(catalog.definition(id));
  const auto raw = backend.embed_batch(defs);
  if (raw.size() != defs.size()) throw DataError("embedding backend returned the wrong number of vectors");
  const auto ids = catalog.labels().ids();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (embed::is_zero(raw[i].span())) {
      throw DataError("definition of '" + catalog.labels().name(ids[i]) + "' embeds to a zero vector");
    }
    label_vectors_.push_back(prepare(raw[i]));
  }
}

embed::EmbeddingVector SimilarityRanker::prepare(const embed::EmbeddingVector& raw) const {
  if (head_ != nullptr) return head_->project(raw.span());
  return raw;
}

namespace {

// Indices of `surfaces` in lexicographic order, so that averaging does not
// depend on the order occurrences arrive in.
std::vector<std::size_t> canonical_order(const std::vector<std::string>& surfaces) {
  std::vector<std::size_t> order(surfaces.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return surfaces[a] < surfaces[b]; });
  return order;
}

}  // namespace

RankedPrediction SimilarityRanker::rank_vectors(const std::string& term, const std::vector<std::string>& surfaces,
                                                const std::vector<embed::EmbeddingVector>& vectors,
                                                std::vector<std::string>* warnings) const {
  if (surfaces.empty()) throw DataError("no occurrences for term '" + term + "'");
  std::vector<double> sums(label_vectors_.size(), 0.0);
  std::size_t used = 0;
  for (std::size_t i : canonical_order(surfaces)) {
    if (embed::is_zero(vectors[i].span())) {
      if (warnings != nullptr) {
        warnings->push_back("term '" + term + "': skipped occurrence with a zero embedding: '" + surfaces[i] + "'");
      }
      continue;
    }
    const embed::EmbeddingVector v = prepare(vectors[i]);
    for (std::size_t l = 0; l < label_vectors_.size(); ++l) sums[l] += embed::cosine(v, label_vectors_[l]);
    ++used;
  }
  if (used == 0) throw DataError("every occurrence of term '" + term + "' embeds to a zero vector");
  for (double& s : sums) s /= static_cast<double>(used);
  return rank_scores(term, sums);
}

RankedPrediction SimilarityRanker::rank(const std::string& term, const std::vector<std::string>& occurrences,
                                        std::vector<std::string>* warnings) const {
  return rank_vectors(term, occurrences, backend_.embed_batch(occurrences), warnings);
}

std::vector<RankedPrediction> SimilarityRanker::rank_all(const std::vector<corpus::TermOccurrences>& terms,
                                                         std::vector<std::string>* warnings) const {
  std::vector<std::string> flat;
  for (const auto& t : terms) flat.insert(flat.end(), t.surfaces.begin(), t.surfaces.end());
  const auto vectors = backend_.embed_batch(flat);
  if (vectors.size() != flat.size()) throw DataError("embedding backend returned the wrong number of vectors");

  std::vector<RankedPrediction> out;
  out.reserve(terms.size());
  std::size_t offset = 0;
  for (const auto& t : terms) {
    std::vector<embed::EmbeddingVector> slice(vectors.begin() + static_cast<std::ptrdiff_t>(offset),
                                              vectors.begin() + static_cast<std::ptrdiff_t>(offset + t.surfaces.size()));
    out.push_back(rank_vectors(t.term, t.surfaces, slice, warnings));
    offset += t.surfaces.size();
  }
  return out;
}

RankedPrediction rank_term(const std::vector<std::string>& occurrences, const corpus::LabelCatalog& catalog,
                           const embed::EmbeddingBackend& backend, const simtrain::ProjectionHead* head,
                           const std::string& term) {
  return SimilarityRanker(catalog, backend, head).rank(term, occurrences);
}

}  // namespace hyprank::rank_eval
