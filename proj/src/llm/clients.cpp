#include <chrono>

#include "byos/error.hpp"
#include "byos/llm/client.hpp"
#include "byos/odkg/hashing.hpp"

namespace byos::llm {

ReplayClient ReplayClient::from_file(const std::filesystem::path& path) { return ReplayClient(Cassette::load(path)); }

Completion ReplayClient::complete(const std::string& prompt, const CompletionParams& params) {
  const std::string hash = sha256_hex(prompt);
  const CassetteEntry* entry = cassette_.find(hash);
  if (entry == nullptr) {
    throw ClientError("cassette has no entry for " + (params.kind.empty() ? std::string("prompt") : params.kind) +
                      " prompt " + hash.substr(0, 12));
  }
  return {entry->response, entry->usage};
}

RecordingClient::RecordingClient(CompletionClient& inner, std::filesystem::path path)
    : inner_(inner), path_(std::move(path)) {
  std::error_code ec;
  if (std::filesystem::exists(path_, ec)) seen_ = Cassette::load(path_);
}

Completion RecordingClient::complete(const std::string& prompt, const CompletionParams& params) {
  Completion result = inner_.complete(prompt, params);
  CassetteEntry entry{sha256_hex(prompt), prompt, result.text, result.usage, params.kind};
  std::lock_guard lock(mutex_);
  if (!seen_.contains(entry.prompt_hash)) {
    Cassette::append(path_, entry);
    seen_.add(std::move(entry));
  }
  return result;
}

void Semaphore::acquire() {
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [this] { return count_ > 0; });
  --count_;
}

void Semaphore::release() {
  {
    std::lock_guard lock(mutex_);
    ++count_;
  }
  cv_.notify_one();
}

Completion MeteredClient::complete(const std::string& prompt, const CompletionParams& params) {
  slots_.acquire();
  const auto started = std::chrono::steady_clock::now();
  Completion result;
  try {
    result = inner_.complete(prompt, params);
  } catch (...) {
    slots_.release();
    throw;
  }
  slots_.release();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::lock_guard lock(mutex_);
  record_usage(ledger_, result.usage, params.kind, seconds);
  return result;
}

UsageLedger MeteredClient::ledger() const {
  std::lock_guard lock(mutex_);
  return ledger_;
}

}  // namespace byos::llm
