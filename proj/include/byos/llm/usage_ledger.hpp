#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace byos::llm {

struct Usage {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;

  bool operator==(const Usage&) const = default;
};

/// Counters for one session; every field only grows.
struct UsageLedger {
  std::uint64_t api_calls = 0;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  double wall_time_s = 0.0;
  std::map<std::string, std::uint64_t, std::less<>> calls_by_kind;

  std::uint64_t calls_of(std::string_view kind) const;
};

/// Adds one call. A call that reports no tokens still counts as a call.
void record_usage(UsageLedger& ledger, const Usage& usage, std::string_view kind = {}, double seconds = 0.0);

/// `api_calls N` / `prompt_tokens N` / `completion_tokens N`, one per line.
std::string format_ledger(const UsageLedger& ledger);

}  // namespace byos::llm
