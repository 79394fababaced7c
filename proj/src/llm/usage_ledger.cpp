#include "byos/llm/usage_ledger.hpp"

#include <sstream>

namespace byos::llm {

std::uint64_t UsageLedger::calls_of(std::string_view kind) const {
  auto it = calls_by_kind.find(kind);
  return it == calls_by_kind.end() ? 0 : it->second;
}

void record_usage(UsageLedger& ledger, const Usage& usage, std::string_view kind, double seconds) {
  ++ledger.api_calls;
  ledger.prompt_tokens += usage.prompt_tokens;
  ledger.completion_tokens += usage.completion_tokens;
  if (seconds > 0.0) ledger.wall_time_s += seconds;
  if (!kind.empty()) {
    auto it = ledger.calls_by_kind.find(kind);
    if (it == ledger.calls_by_kind.end()) {
      ledger.calls_by_kind.emplace(std::string(kind), 1);
    } else {
      ++it->second;
    }
  }
}

std::string format_ledger(const UsageLedger& ledger) {
  std::ostringstream out;
  out << "api_calls " << ledger.api_calls << "\n";
  out << "prompt_tokens " << ledger.prompt_tokens << "\n";
  out << "completion_tokens " << ledger.completion_tokens << "\n";
  return out.str();
}

}  // namespace byos::llm
