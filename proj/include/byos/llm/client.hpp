#pragma once

#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "byos/llm/cassette.hpp"
#include "byos/llm/usage_ledger.hpp"

namespace byos::llm {

struct CompletionParams {
  double temperature = 0.0;
  int max_tokens = 1024;
  /// Prompt family ("extraction", "bool", ...) used for per-kind accounting.
  std::string kind;
};

struct Completion {
  std::string text;
  Usage usage;
};

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  /// Implementations must be safe to call from several threads.
  virtual Completion complete(const std::string& prompt, const CompletionParams& params) = 0;
};

/// Answers from a cassette only; a prompt that was never recorded is a ClientError.
class ReplayClient : public CompletionClient {
 public:
  explicit ReplayClient(Cassette cassette) : cassette_(std::move(cassette)) {}
  static ReplayClient from_file(const std::filesystem::path& path);

  Completion complete(const std::string& prompt, const CompletionParams& params) override;

 private:
  Cassette cassette_;
};

/// Forwards to `inner` and appends each new prompt/response pair to a cassette file.
class RecordingClient : public CompletionClient {
 public:
  RecordingClient(CompletionClient& inner, std::filesystem::path path);

  Completion complete(const std::string& prompt, const CompletionParams& params) override;

 private:
  CompletionClient& inner_;
  std::filesystem::path path_;
  std::mutex mutex_;
  Cassette seen_;
};

class Semaphore {
 public:
  explicit Semaphore(std::size_t count) : count_(count == 0 ? 1 : count) {}
  void acquire();
  void release();

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::size_t count_;
};

/// Bounds in-flight requests and records every call in a ledger.
class MeteredClient : public CompletionClient {
 public:
  explicit MeteredClient(CompletionClient& inner, std::size_t max_inflight = 4)
      : inner_(inner), slots_(max_inflight) {}

  Completion complete(const std::string& prompt, const CompletionParams& params) override;
  UsageLedger ledger() const;

 private:
  CompletionClient& inner_;
  Semaphore slots_;
  mutable std::mutex mutex_;
  UsageLedger ledger_;
};

}  // namespace byos::llm
