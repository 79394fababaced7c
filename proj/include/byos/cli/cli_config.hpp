#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "byos/kconfig/expr.hpp"
#include "byos/reasoner/reasoner.hpp"

namespace byos::cli {

enum class ClientMode { Live, Record, Replay };

std::string_view to_string(ClientMode mode);

struct ClientSettings {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o-mini";
  ClientMode mode = ClientMode::Replay;
  std::string cassette_path;
  std::size_t max_inflight = 4;
  int timeout_s = 60;
};

struct EngineSettings {
  std::size_t bool_batch_size = 9;
  kconfig::Tristate tristate_increase_value = kconfig::Tristate::y;
  bool step2_enabled = true;
};

enum class ScorerKind { None, Synthetic, Command };

struct ScorerSettings {
  ScorerKind kind = ScorerKind::None;
  std::string command;
  double timeout_s = 60.0;
  std::string pattern;
  std::map<std::string, std::string> targets;
  std::map<std::string, double> weights;
};

struct PathSettings {
  std::string kg_path;
  std::string templates_dir;
};

struct CliConfig {
  ClientSettings client;
  reasoner::ScoringParams reasoner;
  EngineSettings engine;
  ScorerSettings scorer;
  PathSettings paths;

  /// Throws ConfigError for values outside their domain.
  void validate() const;
};

/// Parses the sectioned key/value format: `[section]` headers, `key = value`
/// lines with quoted strings, integers, reals or booleans, `#` comments.
/// Unknown sections and keys are ConfigErrors.
CliConfig parse_cli_config(std::string_view text, std::string_view source = "config");

CliConfig load_cli_config(const std::filesystem::path& path);

}  // namespace byos::cli
