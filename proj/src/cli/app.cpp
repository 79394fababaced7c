#include <cstdlib>
#include <map>

#include "CLI11.hpp"
#include "byos/cli/commands.hpp"
#include "byos/error.hpp"

namespace byos::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowledge-driven kernel configuration tuning", "byos"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  bool json = false;
  std::uint64_t seed = 0;
  std::string cassette;
  std::string mode;
  std::string templates;
  std::vector<std::string> env_pairs;
  app.add_option("--config", config_path, "Settings file (default: $BYOS_CONFIG)");
  app.add_flag("--json", json, "Line-delimited JSON output");
  app.add_option("--seed", seed, "Seed for randomized behavior; the pipeline itself draws no random numbers");
  app.add_option("--cassette", cassette, "Cassette file for record and replay modes");
  app.add_option("--mode", mode, "Client mode")->check(CLI::IsMember({"live", "record", "replay"}));
  app.add_option("--templates", templates, "Prompt template directory");
  app.add_option("--env", env_pairs, "KEY=VALUE made available to $(KEY) in Kconfig source paths");

  BuildKgArgs build;
  auto* build_cmd = app.add_subcommand("build-kg", "Build the knowledge graph from a Kconfig tree and a corpus");
  build_cmd->add_option("--kconfig", build.kconfig, "Root Kconfig file or directory")->required();
  build_cmd->add_option("--corpus", build.corpus, "Corpus directory");
  build_cmd->add_option("--out", build.out, "Output graph file")->required();
  build_cmd->add_flag("--instance-only", build.instance_only, "Skip the concept layer and links");

  TuneArgs tune;
  std::string tune_corpus;
  std::string tune_trace;
  auto* tune_cmd = app.add_subcommand("tune", "Generate a configuration for a tuning objective");
  tune_cmd->add_option("--objective", tune.objective, "Tuning objective text")->required();
  tune_cmd->add_option("--kg", tune.kg, "Graph file");
  tune_cmd->add_option("--kconfig", tune.kconfig, "Root Kconfig file or directory")->required();
  tune_cmd->add_option("--out", tune.out, "Output .config fragment")->required();
  tune_cmd->add_option("--corpus", tune_corpus, "Corpus directory for retrieved knowledge");
  tune_cmd->add_option("--trace", tune_trace, "Write the generation trace to this file");

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check a .config file against a Kconfig tree");
  validate_cmd->add_option("config", validate.config, ".config file")->required();
  validate_cmd->add_option("--kconfig", validate.kconfig, "Root Kconfig file or directory")->required();

  DiffArgs diff;
  auto* diff_cmd = app.add_subcommand("diff", "Report option changes between two Kconfig trees");
  diff_cmd->add_option("old", diff.old_root, "Old Kconfig root")->required();
  diff_cmd->add_option("new", diff.new_root, "New Kconfig root")->required();

  UpdateKgArgs update;
  std::string update_out;
  auto* update_cmd = app.add_subcommand("update-kg", "Move a graph to a new Kconfig tree");
  update_cmd->add_option("old", update.old_root, "Old Kconfig root")->required();
  update_cmd->add_option("new", update.new_root, "New Kconfig root")->required();
  update_cmd->add_option("--kg", update.kg, "Graph file");
  update_cmd->add_option("--out", update_out, "Write the updated graph here instead of --kg");
  update_cmd->add_flag("--apply", update.apply, "Apply the delta and save the graph");
  update_cmd->add_flag("--remap-modified", update.remap_modified, "Map modified options to concepts again");
  update_cmd->add_flag("--strict", update.strict, "Reject a delta that does not fit the graph");

  std::string stats_kg;
  auto* stats_cmd = app.add_subcommand("stats", "Print graph statistics");
  stats_cmd->add_option("--kg", stats_kg, "Graph file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  Output output(out, json);
  try {
    CliConfig config;
    if (config_path.empty()) {
      if (const char* env = std::getenv("BYOS_CONFIG"); env != nullptr && *env != '\0') config_path = env;
    }
    if (!config_path.empty()) config = load_cli_config(config_path);
    if (!cassette.empty()) config.client.cassette_path = cassette;
    if (mode == "live") config.client.mode = ClientMode::Live;
    if (mode == "record") config.client.mode = ClientMode::Record;
    if (mode == "replay") config.client.mode = ClientMode::Replay;
    if (!templates.empty()) config.paths.templates_dir = templates;

    kconfig::Environment env;
    for (const auto& pair : env_pairs) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--env expects KEY=VALUE, got " + pair);
      env[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
    Context context{config, env, output, err};

    auto graph_path = [&](const std::filesystem::path& given) -> std::filesystem::path {
      if (!given.empty()) return given;
      if (!config.paths.kg_path.empty()) return config.paths.kg_path;
      throw ConfigError("no graph file given (--kg or [paths] kg_path)");
    };

    if (*build_cmd) {
      if (!build.instance_only && build.corpus.empty()) throw ConfigError("--corpus is required unless --instance-only");
      return cmd_build_kg(build, context);
    }
    if (*tune_cmd) {
      tune.kg = graph_path(tune.kg);
      if (!tune_corpus.empty()) tune.corpus = tune_corpus;
      if (!tune_trace.empty()) tune.trace = tune_trace;
      return cmd_tune(tune, context);
    }
    if (*validate_cmd) return cmd_validate(validate, context);
    if (*diff_cmd) return cmd_diff(diff, context);
    if (*update_cmd) {
      if (update.apply) update.kg = graph_path(update.kg);
      if (!update_out.empty()) update.out = update_out;
      return cmd_update_kg(update, context);
    }
    if (*stats_cmd) return cmd_stats(graph_path(stats_kg), context);
  } catch (const NoAlignment& e) {
    err << "error: " << e.what();
    for (const auto& entity : e.entities()) err << (&entity == &e.entities().front() ? ": " : ", ") << entity;
    err << "\n";
    return kNoAlignment;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kFailure;
}

}  // namespace byos::cli
