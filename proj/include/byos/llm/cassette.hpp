#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "byos/llm/usage_ledger.hpp"

namespace byos::llm {

struct CassetteEntry {
  std::string prompt_hash;
  std::string prompt;
  std::string response;
  Usage usage;
  std::string kind;
};

/// Append-only JSON-lines record of completions keyed by sha256(prompt).
class Cassette {
 public:
  static Cassette load(const std::filesystem::path& path);
  static void append(const std::filesystem::path& path, const CassetteEntry& entry);

  /// Keeps the first entry for a repeated hash.
  void add(CassetteEntry entry);
  const CassetteEntry* find(std::string_view prompt_hash) const;
  bool contains(std::string_view prompt_hash) const { return find(prompt_hash) != nullptr; }
  const std::vector<CassetteEntry>& entries() const { return entries_; }
  Usage total_usage() const;

 private:
  std::vector<CassetteEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace byos::llm
