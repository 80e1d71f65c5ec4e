#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyprank {

// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or arguments (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// A remote peer answered with something that violates the wire contract.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A remote call failed after exhausting its retries. Carries the half-open
// range of batch items that were lost.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, std::size_t begin, std::size_t end)
      : Error(what), begin_(begin), end_(end) {}

  std::size_t begin() const { return begin_; }
  std::size_t end() const { return end_; }

 private:
  std::size_t begin_;
  std::size_t end_;
};

// Lookup failure for one query; the caller may retry.
class LookupError : public Error {
 public:
  LookupError(const std::string& what, std::string query)
      : Error(what), query_(std::move(query)) {}

  const std::string& query() const { return query_; }

 private:
  std::string query_;
};

}  // namespace hyprank
