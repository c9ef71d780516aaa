#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <cstdlib>

#include "json.hpp"
#include "readbench/judge.hpp"

namespace readbench {

bool is_retryable_status(int status) { return status == 0 || status == 408 || status == 429 || status >= 500; }

HttpChatEndpoint::HttpChatEndpoint(std::string base_url, std::string api_key, std::chrono::seconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  while (!base_url.empty() && base_url.back() == '/') base_url.pop_back();
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("judge base_url needs a scheme: " + base_url);
  const auto path_start = base_url.find('/', scheme_end + 3);
  scheme_host_port_ = base_url.substr(0, path_start);
  path_ = (path_start == std::string::npos ? std::string{} : base_url.substr(path_start)) + "/v1/chat/completions";
}

std::unique_ptr<HttpChatEndpoint> HttpChatEndpoint::from_environment(std::string base_url) {
  const char* key = std::getenv(kApiKeyEnv);
  if (!key || !*key) throw ConfigError(std::string(kApiKeyEnv) + " is not set");
  return std::make_unique<HttpChatEndpoint>(std::move(base_url), key);
}

std::string HttpChatEndpoint::complete(const ChatRequest& request) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
  auto res = client.Post(path_, headers, request.to_json(), "application/json");
  if (!res) throw EndpointError("request failed: " + httplib::to_string(res.error()), 0);
  if (res->status != 200) {
    throw EndpointError("endpoint returned HTTP " + std::to_string(res->status), res->status);
  }
  try {
    const auto body = nlohmann::json::parse(res->body);
    return body.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw EndpointError(std::string("malformed completion response: ") + e.what(), 502);
  }
}

}  // namespace readbench
