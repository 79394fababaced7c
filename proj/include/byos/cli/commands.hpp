#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "byos/cli/cli_config.hpp"
#include "byos/kconfig/space.hpp"
#include "byos/llm/client.hpp"

namespace byos::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInputError = 2,
  kNoAlignment = 3,
  kClientError = 4,
  kWriteFailure = 5,
};

int exit_code_for(const std::exception& error);

/// Text lines, or one JSON object per line with `json`.
class Output {
 public:
  Output(std::ostream& out, bool json) : out_(out), json_(json) {}

  void row(const std::string& key, const std::string& value);
  void row(const std::string& key, double value);
  void row(const std::string& key, std::uint64_t value);
  /// `text` in text mode, `{"record": kind, fields...}` in JSON mode.
  void record(const std::string& kind, const std::string& text, const std::vector<std::pair<std::string, std::string>>& fields);
  /// Multi-line text block printed verbatim in text mode only.
  void block(const std::string& text);
  bool json() const { return json_; }

 private:
  std::ostream& out_;
  bool json_;
};

struct Context {
  CliConfig config;
  kconfig::Environment env;
  Output& out;
  std::ostream& err;
  /// Used instead of the client selected by the settings when set.
  llm::CompletionClient* client = nullptr;
};

struct BuildKgArgs {
  std::filesystem::path kconfig;
  std::filesystem::path corpus;
  std::filesystem::path out;
  bool instance_only = false;
};

struct TuneArgs {
  std::string objective;
  std::filesystem::path kg;
  std::filesystem::path kconfig;
  std::filesystem::path out;
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> trace;
};

struct ValidateArgs {
  std::filesystem::path config;
  std::filesystem::path kconfig;
};

struct DiffArgs {
  std::filesystem::path old_root;
  std::filesystem::path new_root;
};

struct UpdateKgArgs {
  std::filesystem::path old_root;
  std::filesystem::path new_root;
  std::filesystem::path kg;
  std::optional<std::filesystem::path> out;
  bool apply = false;
  bool remap_modified = false;
  bool strict = false;
};

/// A Kconfig file, or a directory holding one named `Kconfig`.
kconfig::ConfigSpace load_space(const std::filesystem::path& root, const kconfig::Environment& env);

int cmd_build_kg(const BuildKgArgs& args, Context& context);
int cmd_tune(const TuneArgs& args, Context& context);
int cmd_validate(const ValidateArgs& args, Context& context);
int cmd_diff(const DiffArgs& args, Context& context);
int cmd_update_kg(const UpdateKgArgs& args, Context& context);
int cmd_stats(const std::filesystem::path& kg, Context& context);

/// Parses the command line and runs one subcommand; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace byos::cli
