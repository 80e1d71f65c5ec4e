#include "hyprank/net.hpp"

#include <httplib.h>

#include "hyprank/error.hpp"

namespace hyprank::net {

Endpoint parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("URL needs a scheme: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("unsupported URL scheme: " + url);
  const auto path_begin = url.find('/', scheme_end + 3);
  Endpoint e;
  e.scheme_host_port = url.substr(0, path_begin);
  e.path = path_begin == std::string::npos ? "/" : url.substr(path_begin);
  if (e.scheme_host_port.size() <= scheme_end + 3) throw ConfigError("URL has no host: " + url);
  return e;
}

std::unique_ptr<httplib::Client> make_client(const Endpoint& endpoint, std::chrono::milliseconds timeout) {
  auto client = std::make_unique<httplib::Client>(endpoint.scheme_host_port);
  client->set_connection_timeout(timeout);
  client->set_read_timeout(timeout);
  client->set_write_timeout(timeout);
  return client;
}

}  // namespace hyprank::net
