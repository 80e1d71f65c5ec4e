#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "hyprank/embed.hpp"
#include "hyprank/error.hpp"
#include "hyprank/io.hpp"
#include "hyprank/net.hpp"

namespace hyprank::embed {

struct RemoteEmbedder::State {
  std::atomic<std::size_t> dim{0};
  std::atomic<std::size_t> requests{0};
};

RemoteEmbedder::RemoteEmbedder(RemoteConfig cfg) : cfg_(std::move(cfg)), state_(std::make_shared<State>()) {
  net::parse_url(cfg_.base_url);
  if (cfg_.batch_size == 0) throw ConfigError("remote batch size must be positive");
  if (cfg_.max_in_flight == 0) throw ConfigError("remote in-flight limit must be positive");
  state_->dim = cfg_.dim;
}

std::size_t RemoteEmbedder::requests_sent() const { return state_->requests; }

std::size_t RemoteEmbedder::dim() const {
  if (state_->dim == 0) {
    const std::string probe = "dimension probe";
    embed_batch(std::span<const std::string>(&probe, 1));
  }
  return state_->dim;
}

std::vector<EmbeddingVector> RemoteEmbedder::post_batch(std::span<const std::string> texts, std::size_t begin) const {
  const std::size_t end = begin + texts.size();
  net::Endpoint endpoint = net::parse_url(cfg_.base_url);
  std::string path = endpoint.path;
  if (path.empty() || path.back() != '/') path.push_back('/');
  path += "embed";

  io::json request = {{"texts", io::json::array()}};
  for (const auto& t : texts) request["texts"].push_back(t);
  const std::string body = request.dump();

  std::string last_error;
  for (std::size_t attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(cfg_.backoff * (1u << std::min<std::size_t>(attempt - 1, 16)));
    auto client = net::make_client(endpoint, cfg_.timeout);
    ++state_->requests;
    auto res = client->Post(path, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw ProtocolError("embedding service answered HTTP " + std::to_string(res->status));

    io::json doc;
    try {
      doc = io::json::parse(res->body);
    } catch (const io::json::exception& e) {
      throw ProtocolError(std::string("embedding response is not JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("vectors") || !doc["vectors"].is_array()) {
      throw ProtocolError("embedding response lacks a 'vectors' array");
    }
    const auto& vectors = doc["vectors"];
    if (vectors.size() != texts.size()) {
      throw ProtocolError("embedding service returned " + std::to_string(vectors.size()) + " vectors for " +
                          std::to_string(texts.size()) + " texts");
    }
    std::vector<EmbeddingVector> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) {
      if (!v.is_array() || v.empty()) throw ProtocolError("embedding vector must be a non-empty array");
      EmbeddingVector ev;
      ev.values.reserve(v.size());
      for (const auto& x : v) {
        if (!x.is_number()) throw ProtocolError("embedding vector holds a non-number");
        ev.values.push_back(x.get<double>());
      }
      if (!out.empty() && ev.dim() != out.front().dim()) throw ProtocolError("embedding vectors of mixed dimension");
      out.push_back(std::move(ev));
    }
    if (doc.contains("dim") && !out.empty() && doc["dim"].get<std::size_t>() != out.front().dim()) {
      throw ProtocolError("declared dim disagrees with vector length");
    }
    return out;
  }
  throw TransportError("embedding request for items [" + std::to_string(begin) + ", " + std::to_string(end) +
                           ") failed after " + std::to_string(cfg_.max_retries + 1) + " attempts: " + last_error,
                       begin, end);
}

std::vector<EmbeddingVector> RemoteEmbedder::embed_batch(std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  const std::size_t n_batches = (texts.size() + cfg_.batch_size - 1) / cfg_.batch_size;
  std::vector<std::vector<EmbeddingVector>> slots(n_batches);
  std::vector<std::exception_ptr> failures(n_batches);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto worker = [&] {
    for (std::size_t b = next++; b < n_batches && !abort; b = next++) {
      const std::size_t begin = b * cfg_.batch_size;
      const std::size_t count = std::min(cfg_.batch_size, texts.size() - begin);
      try {
        slots[b] = post_batch(texts.subspan(begin, count), begin);
      } catch (...) {
        failures[b] = std::current_exception();
        abort = true;
      }
    }
  };
  const std::size_t n_threads = std::min(cfg_.max_in_flight, n_batches);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (auto& slot : slots) {
    for (auto& v : slot) out.push_back(std::move(v));
  }
  std::size_t expected = state_->dim;
  if (expected == 0) {
    expected = out.front().dim();
    std::size_t zero = 0;
    state_->dim.compare_exchange_strong(zero, expected);
    expected = state_->dim;
  }
  for (const auto& v : out) {
    if (v.dim() != expected) {
      throw ProtocolError("embedding dimension " + std::to_string(v.dim()) + " differs from expected " +
                          std::to_string(expected));
    }
  }
  return out;
}

}  // namespace hyprank::embed
