#pragma once

// Thin helpers around cpp-httplib shared by the lookup and embedding clients.

#include <chrono>
#include <memory>
#include <string>

namespace httplib {
class Client;
}

namespace hyprank::net {

struct Endpoint {
  std::string scheme_host_port;  // "http://host:port"
  std::string path;              // "/api/search", never empty
};

// Throws ConfigError for anything that is not http(s)://host[:port][/path].
Endpoint parse_url(const std::string& url);

std::unique_ptr<httplib::Client> make_client(const Endpoint& endpoint, std::chrono::milliseconds timeout);

}  // namespace hyprank::net
