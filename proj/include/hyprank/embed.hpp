#pragma once

// Embedding backends and the vector math every ranker shares.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyprank/textnorm.hpp"

namespace hyprank::embed {

struct EmbeddingVector {
  std::vector<double> values;

  EmbeddingVector() = default;
  explicit EmbeddingVector(std::size_t dim) : values(dim, 0.0) {}
  explicit EmbeddingVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t dim() const { return values.size(); }
  std::span<const double> span() const { return values; }
  std::span<double> span() { return values; }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> u);
bool is_zero(std::span<const double> u);

// dot / (|u| |v|). Throws DataError for a dimension mismatch or a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);
inline double cosine(const EmbeddingVector& u, const EmbeddingVector& v) { return cosine(u.span(), v.span()); }

// In-place L2 normalization; a zero vector is left untouched.
void normalize(std::span<double> u);

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  virtual std::size_t dim() const = 0;
  // One vector per text, in order, all of dim() entries.
  virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const = 0;
};

// ---- baseline: signed feature hashing of tf-idf weights ----

class IdfWeights {
 public:
  IdfWeights() = default;

  // idf(t) = ln((1 + N) / (1 + df(t))) + 1 over cleaned, tokenized documents.
  static IdfWeights fit(std::span<const std::string> corpus, const textnorm::Cleaner& cleaner = textnorm::default_cleaner());
  static IdfWeights load(const std::filesystem::path& path);
  std::string to_json() const;

  // 1.0 for tokens never seen during fitting.
  double weight(const std::string& token) const;
  std::size_t size() const { return weights_.size(); }

 private:
  std::unordered_map<std::string, double> weights_;
};

struct BaselineEmbedderConfig {
  std::size_t dim = 32768;
  std::uint64_t hash_seed = 0;
};

class BaselineEmbedder : public EmbeddingBackend {
 public:
  BaselineEmbedder(BaselineEmbedderConfig cfg, IdfWeights idf,
                   const textnorm::Cleaner& cleaner = textnorm::default_cleaner());

  std::size_t dim() const override { return cfg_.dim; }
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override;
  EmbeddingVector embed(const std::string& text) const;

  // Bucket and sign for a token; exposed for tests.
  std::size_t bucket(const std::string& token) const;
  double sign(const std::string& token) const;

 private:
  std::uint64_t hash(const std::string& token) const;

  BaselineEmbedderConfig cfg_;
  IdfWeights idf_;
  const textnorm::Cleaner* cleaner_;
};

// ---- remote service ----

struct RemoteConfig {
  std::string base_url;       // POST <base_url>/embed
  std::size_t dim = 0;        // 0: learn from the first response
  std::size_t batch_size = 64;
  std::size_t max_in_flight = 2;
  std::size_t max_retries = 3;
  std::chrono::milliseconds backoff{200};
  std::chrono::milliseconds timeout{30000};
};

class RemoteEmbedder : public EmbeddingBackend {
 public:
  explicit RemoteEmbedder(RemoteConfig cfg);

  // Issues a one-text probe when the dimension is not configured.
  std::size_t dim() const override;

  // Splits into batches of batch_size, at most max_in_flight outstanding.
  // ProtocolError on count or dimension mismatches; TransportError with
  // the failed batch's item range once retries are exhausted. An empty
  // input sends nothing.
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override;

  std::size_t requests_sent() const;

 private:
  std::vector<EmbeddingVector> post_batch(std::span<const std::string> texts, std::size_t begin) const;

  RemoteConfig cfg_;
  struct State;
  std::shared_ptr<State> state_;
};

std::unique_ptr<EmbeddingBackend> make_baseline(const BaselineEmbedderConfig& cfg, IdfWeights idf);

}  // namespace hyprank::embed
