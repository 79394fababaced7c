#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "byos/llm/live_client.hpp"

#include <cstdlib>
#include <thread>

#include "byos/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace byos::llm {

namespace {

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

LiveClientConfig live_config_from_env(LiveClientConfig configured) {
  if (const char* base = std::getenv("BYOS_API_BASE"); base != nullptr && *base != '\0') configured.base_url = base;
  const char* key = std::getenv("BYOS_API_KEY");
  if (key == nullptr || *key == '\0') throw ConfigError("BYOS_API_KEY is not set");
  configured.api_key = key;
  if (configured.base_url.empty()) throw ConfigError("no completion endpoint: set BYOS_API_BASE or client.base_url");
  return configured;
}

LiveClient::LiveClient(LiveClientConfig config) : config_(std::move(config)) {
  const std::string& url = config_.base_url;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("base URL needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (config_.attempts < 1) config_.attempts = 1;
}

Completion LiveClient::complete(const std::string& prompt, const CompletionParams& params) {
  nlohmann::json body = {
      {"model", config_.model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", params.temperature},
      {"max_tokens", params.max_tokens},
  };
  const std::string payload = body.dump();
  httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};

  std::string last_error;
  auto backoff = config_.initial_backoff;
  for (int attempt = 1; attempt <= config_.attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client http(origin_);
    http.set_connection_timeout(config_.timeout);
    http.set_read_timeout(config_.timeout);
    http.set_write_timeout(config_.timeout);
    auto res = http.Post(path_prefix_ + "/chat/completions", headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      if (retryable_status(res->status)) continue;
      throw ClientError(last_error);
    }
    try {
      auto j = nlohmann::json::parse(res->body);
      Completion out;
      out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
      if (j.contains("usage") && j["usage"].is_object()) {
        out.usage.prompt_tokens = j["usage"].value("prompt_tokens", std::uint64_t{0});
        out.usage.completion_tokens = j["usage"].value("completion_tokens", std::uint64_t{0});
      }
      return out;
    } catch (const nlohmann::json::exception& e) {
      throw ClientError(std::string("malformed completion response: ") + e.what());
    }
  }
  throw ClientError("completion failed after " + std::to_string(config_.attempts) + " attempts: " + last_error);
}

}  // namespace byos::llm
