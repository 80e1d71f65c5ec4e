#include <atomic>
#include <mutex>
#include <regex>
#include <thread>

#include <httplib.h>

#include "hyprank/error.hpp"
#include "hyprank/glossary.hpp"
#include "hyprank/io.hpp"
#include "hyprank/net.hpp"

namespace hyprank::glossary {
namespace {

std::string strip_markup(const std::string& s) {
  static const std::regex tag("<[^<>]*>");
  return std::regex_replace(s, tag, "");
}

// A field that is either a string or an array of strings; first non-empty.
std::string first_text(const io::json& doc, const char* key) {
  if (!doc.contains(key)) return {};
  const io::json& v = doc[key];
  if (v.is_string()) return strip_markup(v.get<std::string>());
  if (v.is_array()) {
    for (const auto& item : v) {
      if (item.is_string() && !item.get<std::string>().empty()) return strip_markup(item.get<std::string>());
    }
    return {};
  }
  if (v.is_null()) return {};
  throw ProtocolError(std::string("lookup field '") + key + "' is neither string nor array");
}

}  // namespace

std::string url_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 15]);
    }
  }
  return out;
}

std::vector<LookupCandidate> parse_lookup_response(const std::string& body) {
  io::json doc;
  try {
    doc = io::json::parse(body);
  } catch (const io::json::exception& e) {
    throw ProtocolError(std::string("lookup response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("docs") || !doc["docs"].is_array()) {
    throw ProtocolError("lookup response lacks a 'docs' array");
  }
  std::vector<LookupCandidate> out;
  std::size_t rank = 0;
  for (const auto& d : doc["docs"]) {
    if (!d.is_object()) throw ProtocolError("lookup doc is not an object");
    std::string label = first_text(d, "label");
    std::string description = first_text(d, "comment");
    if (description.empty()) description = first_text(d, "description");
    std::size_t position = rank++;
    if (label.empty()) continue;
    out.push_back(LookupCandidate{std::move(label), std::move(description), position});
  }
  return out;
}

LookupCache LookupCache::load(const std::filesystem::path& path) {
  io::json doc = io::read_json(path);
  if (!doc.is_object()) throw DataError(path.string() + ": lookup cache must be a JSON object");
  LookupCache cache;
  for (const auto& [query, list] : doc.items()) {
    if (!list.is_array()) throw DataError(path.string() + ": cache entry for '" + query + "' is not an array");
    std::vector<LookupCandidate> candidates;
    std::size_t rank = 0;
    for (const auto& item : list) {
      if (!item.is_object() || !item.value("label", io::json()).is_string()) {
        throw DataError(path.string() + ": cache candidates need a string 'label'");
      }
      std::string label = item["label"].get<std::string>();
      std::string description = item.value("description", std::string());
      std::size_t position = rank++;
      if (label.empty()) continue;
      candidates.push_back(LookupCandidate{std::move(label), std::move(description), position});
    }
    cache.entries_.emplace(query, std::move(candidates));
  }
  return cache;
}

const std::vector<LookupCandidate>* LookupCache::find(const std::string& query) const {
  auto it = entries_.find(query);
  return it == entries_.end() ? nullptr : &it->second;
}

void LookupCache::put(const std::string& query, std::vector<LookupCandidate> candidates) {
  entries_[query] = std::move(candidates);
}

std::string LookupCache::to_json() const {
  io::json doc = io::json::object();
  for (const auto& [query, list] : entries_) {
    io::json arr = io::json::array();
    for (const auto& c : list) arr.push_back({{"label", c.label}, {"description", c.description}});
    doc[query] = std::move(arr);
  }
  return doc.dump(2) + "\n";
}

LookupClient::LookupClient(LookupConfig config, LookupCache cache)
    : config_(std::move(config)), cache_(std::move(cache)) {}

std::vector<LookupCandidate> LookupClient::fetch(const std::string& query) const {
  net::Endpoint endpoint = net::parse_url(config_.base_url);
  const std::string target = endpoint.path + "?query=" + url_encode(query) +
                             "&format=JSON&maxResults=" + std::to_string(config_.max_results);
  std::string last_error;
  for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.backoff * (1u << (attempt - 1)));
    auto client = net::make_client(endpoint, config_.timeout);
    httplib::Headers headers = {{"Accept", "application/json"}};
    auto res = client->Get(target, headers);
    if (!res) {
      last_error = "transport: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      return parse_lookup_response(res->body);
    } catch (const ProtocolError& e) {
      last_error = e.what();
    }
  }
  throw LookupError("lookup failed for '" + query + "': " + last_error, query);
}

std::vector<LookupCandidate> LookupClient::lookup(const std::string& query) {
  if (query.empty()) throw LookupError("lookup query must not be empty", query);
  if (const auto* hit = cache_.find(query)) return *hit;
  if (config_.offline) return {};
  auto found = fetch(query);
  cache_.put(query, found);
  return found;
}

LookupClient::BatchResult LookupClient::lookup_all(const std::vector<std::string>& queries) {
  BatchResult out;
  out.candidates.resize(queries.size());
  out.errors.resize(queries.size());

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (queries[i].empty()) {
      out.errors[i] = "empty query";
    } else if (const auto* hit = cache_.find(queries[i])) {
      out.candidates[i] = *hit;
    } else if (!config_.offline) {
      pending.push_back(i);
    }
  }
  if (pending.empty()) return out;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < pending.size(); k = next++) {
      const std::size_t i = pending[k];
      try {
        out.candidates[i] = fetch(queries[i]);
      } catch (const LookupError& e) {
        out.errors[i] = e.what();
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(config_.max_in_flight, pending.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  for (std::size_t i : pending) {
    if (!out.errors[i]) cache_.put(queries[i], out.candidates[i]);
  }
  return out;
}

}  // namespace hyprank::glossary
