#include <cmath>
#include <map>
#include <set>

#include "hyprank/embed.hpp"
#include "hyprank/error.hpp"
#include "hyprank/io.hpp"
#include "hyprank/rng.hpp"

namespace hyprank::embed {
namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

IdfWeights IdfWeights::fit(std::span<const std::string> corpus, const textnorm::Cleaner& cleaner) {
  if (corpus.empty()) throw DataError("cannot fit idf weights on an empty corpus");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    for (const auto& t : textnorm::token_set(cleaner.clean(doc))) ++df[t];
  }
  const double n = static_cast<double>(corpus.size());
  IdfWeights out;
  for (const auto& [token, count] : df) {
    out.weights_.emplace(token, std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return out;
}

IdfWeights IdfWeights::load(const std::filesystem::path& path) {
  io::json doc = io::read_json(path);
  if (!doc.is_object()) throw DataError(path.string() + ": idf weights must be a JSON object");
  IdfWeights out;
  for (const auto& [token, w] : doc.items()) {
    if (!w.is_number()) throw DataError(path.string() + ": idf weight of '" + token + "' is not a number");
    out.weights_.emplace(token, w.get<double>());
  }
  return out;
}

std::string IdfWeights::to_json() const {
  io::json doc = io::json::object();
  for (const auto& [token, w] : weights_) doc[token] = w;
  return doc.dump(1) + "\n";
}

double IdfWeights::weight(const std::string& token) const {
  auto it = weights_.find(token);
  return it == weights_.end() ? 1.0 : it->second;
}

BaselineEmbedder::BaselineEmbedder(BaselineEmbedderConfig cfg, IdfWeights idf, const textnorm::Cleaner& cleaner)
    : cfg_(cfg), idf_(std::move(idf)), cleaner_(&cleaner) {
  if (cfg_.dim == 0 || (cfg_.dim & (cfg_.dim - 1)) != 0) {
    throw ConfigError("baseline embedding dimension must be a power of two, got " + std::to_string(cfg_.dim));
  }
}

std::uint64_t BaselineEmbedder::hash(const std::string& token) const { return mix64(fnv1a(token) ^ cfg_.hash_seed); }

std::size_t BaselineEmbedder::bucket(const std::string& token) const {
  return static_cast<std::size_t>(hash(token) & (cfg_.dim - 1));
}

double BaselineEmbedder::sign(const std::string& token) const { return (hash(token) >> 63) ? -1.0 : 1.0; }

EmbeddingVector BaselineEmbedder::embed(const std::string& text) const {
  EmbeddingVector v(cfg_.dim);
  std::map<std::string, std::size_t> tf;
  for (auto& t : textnorm::tokens(cleaner_->clean(text))) ++tf[t];
  for (const auto& [token, count] : tf) {
    v.values[bucket(token)] += sign(token) * static_cast<double>(count) * idf_.weight(token);
  }
  normalize(v.span());
  return v;
}

std::vector<EmbeddingVector> BaselineEmbedder::embed_batch(std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

std::unique_ptr<EmbeddingBackend> make_baseline(const BaselineEmbedderConfig& cfg, IdfWeights idf) {
  return std::make_unique<BaselineEmbedder>(cfg, std::move(idf));
}

}  // namespace hyprank::embed
