#pragma once

#include <chrono>
#include <string>

#include "byos/llm/client.hpp"

namespace byos::llm {

struct LiveClientConfig {
  /// Up to and including the API version segment, e.g. "https://host/v1".
  std::string base_url;
  std::string model;
  std::string api_key;
  std::chrono::seconds timeout{60};
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
};

/// Fills base_url and api_key from BYOS_API_BASE / BYOS_API_KEY. The base URL
/// from the environment wins over the configured one; a missing key is a ConfigError.
LiveClientConfig live_config_from_env(LiveClientConfig configured);

/// OpenAI-compatible chat-completions client over HTTP(S).
class LiveClient : public CompletionClient {
 public:
  explicit LiveClient(LiveClientConfig config);

  Completion complete(const std::string& prompt, const CompletionParams& params) override;

 private:
  LiveClientConfig config_;
  std::string origin_;
  std::string path_prefix_;
};

}  // namespace byos::llm
