#include "byos/llm/cassette.hpp"

#include <fstream>

#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"
#include "json.hpp"

namespace byos::llm {

Cassette Cassette::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  Cassette cassette;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    if (text::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      CassetteEntry entry;
      entry.prompt_hash = j.at("prompt_hash").get<std::string>();
      entry.prompt = j.at("prompt").get<std::string>();
      entry.response = j.at("response").get<std::string>();
      entry.usage.prompt_tokens = j.at("prompt_tokens").get<std::uint64_t>();
      entry.usage.completion_tokens = j.at("completion_tokens").get<std::uint64_t>();
      entry.kind = j.value("kind", "");
      cassette.add(std::move(entry));
    } catch (const nlohmann::json::exception& e) {
      throw CorruptFile(line_start, std::string("cassette entry: ") + e.what());
    }
  }
  return cassette;
}

void Cassette::append(const std::filesystem::path& path, const CassetteEntry& entry) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw WriteFailure(path.string());
  nlohmann::json j = {
      {"prompt_hash", entry.prompt_hash},
      {"prompt", entry.prompt},
      {"response", entry.response},
      {"prompt_tokens", entry.usage.prompt_tokens},
      {"completion_tokens", entry.usage.completion_tokens},
      {"kind", entry.kind},
  };
  out << j.dump() << "\n";
  if (!out) throw WriteFailure(path.string());
}

void Cassette::add(CassetteEntry entry) {
  if (index_.count(entry.prompt_hash) != 0) return;
  index_.emplace(entry.prompt_hash, entries_.size());
  entries_.push_back(std::move(entry));
}

const CassetteEntry* Cassette::find(std::string_view prompt_hash) const {
  auto it = index_.find(prompt_hash);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

Usage Cassette::total_usage() const {
  Usage total;
  for (const auto& e : entries_) {
    total.prompt_tokens += e.usage.prompt_tokens;
    total.completion_tokens += e.usage.completion_tokens;
  }
  return total;
}

}  // namespace byos::llm
