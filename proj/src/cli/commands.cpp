#include "byos/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "byos/builder/knowledge_builder.hpp"
#include "byos/builder/retrieval.hpp"
#include "byos/engine/generate.hpp"
#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"
#include "byos/llm/live_client.hpp"
#include "byos/maintenance/maintenance.hpp"
#include "byos/odkg/odkg.hpp"
#include "byos/reasoner/reasoner.hpp"
#include "json.hpp"

namespace byos::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteFailure(path.string());
  out << content;
  out.flush();
  if (!out) throw WriteFailure(path.string());
}

// Owns the client chain selected by the [client] settings.
class ClientStack {
 public:
  explicit ClientStack(const Context& context) {
    const ClientSettings& settings = context.config.client;
    if (context.client != nullptr) {
      injected_ = context.client;
      return;
    }
    if (settings.mode == ClientMode::Replay) {
      if (settings.cassette_path.empty()) throw ConfigError("replay mode needs a cassette path");
      top_ = std::make_unique<llm::ReplayClient>(llm::ReplayClient::from_file(settings.cassette_path));
      return;
    }
    llm::LiveClientConfig live;
    live.base_url = settings.base_url;
    live.model = settings.model;
    live.timeout = std::chrono::seconds(settings.timeout_s);
    live_ = std::make_unique<llm::LiveClient>(llm::live_config_from_env(live));
    if (settings.mode == ClientMode::Record) {
      if (settings.cassette_path.empty()) throw ConfigError("record mode needs a cassette path");
      top_ = std::make_unique<llm::RecordingClient>(*live_, settings.cassette_path);
    }
  }

  llm::CompletionClient& get() {
    if (injected_ != nullptr) return *injected_;
    return top_ ? *top_ : *live_;
  }

 private:
  llm::CompletionClient* injected_ = nullptr;
  std::unique_ptr<llm::CompletionClient> live_;
  std::unique_ptr<llm::CompletionClient> top_;
};

llm::TemplateSet templates_for(const CliConfig& config) {
  return config.paths.templates_dir.empty() ? llm::TemplateSet::defaults()
                                            : llm::TemplateSet::load(config.paths.templates_dir);
}

void print_ledger(Output& out, const llm::UsageLedger& ledger) {
  out.row("api_calls", ledger.api_calls);
  for (const auto& [kind, n] : ledger.calls_by_kind) out.row("api_calls." + kind, n);
  out.row("prompt_tokens", ledger.prompt_tokens);
  out.row("completion_tokens", ledger.completion_tokens);
}

void print_stats(Output& out, const odkg::OdKg& kg) {
  for (const auto& line : text::split_lines(odkg::stats(kg))) {
    const auto space = line.find(' ');
    if (space == std::string::npos) continue;
    const std::string key = line.substr(0, space);
    const std::string value = line.substr(space + 1);
    if (key == "kernel_version") {
      out.row(key, value);
    } else {
      out.row(key, static_cast<std::uint64_t>(std::stoull(value)));
    }
  }
}

std::unique_ptr<engine::PerformanceScorer> make_scorer(const ScorerSettings& s) {
  switch (s.kind) {
    case ScorerKind::None:
      return nullptr;
    case ScorerKind::Synthetic:
      return std::make_unique<engine::SyntheticScorer>(s.targets, s.weights);
    case ScorerKind::Command:
      if (s.pattern.empty()) return std::make_unique<engine::CommandScorer>(s.command, s.timeout_s);
      return std::make_unique<engine::CommandScorer>(s.command, s.timeout_s, s.pattern);
  }
  return nullptr;
}

maintenance::KernelSnapshot snapshot(const fs::path& root, const kconfig::Environment& env) {
  return maintenance::make_snapshot(load_space(root, env));
}

}  // namespace

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const WriteFailure*>(&error)) return kWriteFailure;
  if (dynamic_cast<const ClientError*>(&error)) return kClientError;
  if (dynamic_cast<const NoAlignment*>(&error)) return kNoAlignment;
  if (dynamic_cast<const FileNotFound*>(&error) || dynamic_cast<const SyntaxError*>(&error) ||
      dynamic_cast<const CorruptFile*>(&error) || dynamic_cast<const UnsupportedConstruct*>(&error) ||
      dynamic_cast<const SchemaVersionTooNew*>(&error)) {
    return kInputError;
  }
  return kFailure;
}

void Output::row(const std::string& key, const std::string& value) {
  if (json_) {
    out_ << nlohmann::json{{"key", key}, {"value", value}}.dump() << "\n";
  } else {
    out_ << key << " " << value << "\n";
  }
}

void Output::row(const std::string& key, double value) {
  if (json_) {
    out_ << nlohmann::json{{"key", key}, {"value", value}}.dump() << "\n";
  } else {
    out_ << key << " " << text::format_double(value) << "\n";
  }
}

void Output::row(const std::string& key, std::uint64_t value) {
  if (json_) {
    out_ << nlohmann::json{{"key", key}, {"value", value}}.dump() << "\n";
  } else {
    out_ << key << " " << value << "\n";
  }
}

void Output::record(const std::string& kind, const std::string& text,
                    const std::vector<std::pair<std::string, std::string>>& fields) {
  if (!json_) {
    out_ << text << "\n";
    return;
  }
  nlohmann::json j{{"record", kind}};
  for (const auto& [k, v] : fields) j[k] = v;
  out_ << j.dump() << "\n";
}

void Output::block(const std::string& text) {
  if (!json_) out_ << text;
}

kconfig::ConfigSpace load_space(const fs::path& root, const kconfig::Environment& env) {
  std::error_code ec;
  const fs::path file = fs::is_directory(root, ec) ? root / "Kconfig" : root;
  if (!fs::is_regular_file(file, ec)) throw FileNotFound(file.string());
  kconfig::ConfigSpace space = kconfig::parse_kconfig_tree(file, env);
  if (space.kernel_version_label.empty()) {
    const fs::path dir = fs::is_directory(root, ec) ? root : root.parent_path();
    space.kernel_version_label = fs::absolute(dir).lexically_normal().filename().string();
    if (space.kernel_version_label.empty()) space.kernel_version_label = "kernel";
  }
  return space;
}

int cmd_build_kg(const BuildKgArgs& args, Context& context) {
  const kconfig::ConfigSpace space = load_space(args.kconfig, context.env);
  odkg::OdKg kg = odkg::build_instance_layer(space);
  llm::UsageLedger ledger;

  if (!args.instance_only) {
    const auto docs = builder::load_corpus(args.corpus);
    ClientStack stack(context);
    llm::MeteredClient client(stack.get(), context.config.client.max_inflight);
    const llm::TemplateSet templates = templates_for(context.config);
    builder::BuilderOptions options;
    options.parallelism = context.config.client.max_inflight;

    const builder::ExtractionResult extracted = builder::extract_concepts(docs, client, kg, templates, options);
    std::vector<std::string> symbols;
    for (const auto& [symbol, e] : kg.instance_entities()) symbols.push_back(symbol);
    const builder::CrossLayerResult mapped = builder::map_cross_layer(symbols, kg, client, templates, options);
    for (const auto& link : mapped.links) kg.upsert_link(link);

    context.out.row("documents", static_cast<std::uint64_t>(docs.size()));
    context.out.row("rejected_lines", static_cast<std::uint64_t>(extracted.rejected_lines.size() +
                                                                  mapped.rejected_lines.size()));
    context.out.row("unresolved_labels", static_cast<std::uint64_t>(mapped.unresolved.size()));
    ledger = client.ledger();
  }
  odkg::save(kg, args.out);
  print_stats(context.out, kg);
  print_ledger(context.out, ledger);
  return kOk;
}

int cmd_tune(const TuneArgs& args, Context& context) {
  const auto started = std::chrono::steady_clock::now();
  const CliConfig& config = context.config;
  const odkg::OdKg kg = odkg::load(args.kg);
  const kconfig::ConfigSpace space = load_space(args.kconfig, context.env);
  ClientStack stack(context);
  llm::MeteredClient client(stack.get(), config.client.max_inflight);
  const llm::TemplateSet templates = templates_for(config);

  builder::KeywordRetriever retriever;
  if (args.corpus) {
    for (const auto& doc : builder::load_corpus(*args.corpus)) retriever.add("doc:" + doc.id, doc.title + "\n" + doc.body);
    retriever.add_graph(kg);
  }

  const reasoner::TuningObjective objective = reasoner::parse_objective(args.objective, client, templates);
  const reasoner::Alignment alignment = reasoner::align_concepts(objective, kg, client, templates);
  const reasoner::CandidateSet kq = reasoner::extract_candidates(alignment.concept_ids, kg, config.reasoner);

  engine::GenerateOptions options;
  options.bool_batch_size = config.engine.bool_batch_size;
  options.tristate_increase_value = config.engine.tristate_increase_value;
  options.step2_enabled = config.engine.step2_enabled;
  options.max_inflight = config.client.max_inflight;
  if (args.corpus) options.retriever = &retriever;
  auto scorer = make_scorer(config.scorer);
  const engine::GenerationResult result = engine::generate(kq, space, kg, objective, alignment.concept_ids, client,
                                                           templates, scorer.get(), options);

  write_file(args.out, engine::emit_dotconfig(result.config));
  if (args.trace) write_file(*args.trace, engine::format_trace(result.trace) + reasoner::export_candidates(kq, kg));

  Output& out = context.out;
  out.row("objective_entities", static_cast<std::uint64_t>(objective.extracted_entities.size()));
  out.row("aligned_concepts", static_cast<std::uint64_t>(alignment.concept_ids.size()));
  out.row("unaligned_entities", static_cast<std::uint64_t>(alignment.unaligned.size()));
  out.row("kq_size", static_cast<std::uint64_t>(kq.options.size()));
  out.row("trace_events", static_cast<std::uint64_t>(result.trace.events.size()));
  out.row("accepted", static_cast<std::uint64_t>(result.trace.accepted()));
  out.row("pruned", static_cast<std::uint64_t>(result.trace.pruned()));
  if (result.step1_score) out.row("step1_score", *result.step1_score);
  if (result.final_score) out.row("final_score", *result.final_score);
  out.row("assignments", static_cast<std::uint64_t>(result.config.assignments.size()));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  char runtime[32];
  std::snprintf(runtime, sizeof runtime, "%.3f", seconds);
  out.row("runtime_s", std::string(runtime));
  print_ledger(out, client.ledger());
  return kOk;
}

int cmd_validate(const ValidateArgs& args, Context& context) {
  const std::string text = read_file(args.config);
  const kconfig::ConfigSpace space = load_space(args.kconfig, context.env);
  const engine::KernelConfiguration config = engine::parse_dotconfig(text, space);
  const engine::ValidityReport report = engine::check_validity(config, space);
  for (const auto& v : report.violations) {
    const std::string kind(engine::to_string(v.kind));
    context.out.record("violation", kind + " " + v.symbol + ": " + v.detail,
                       {{"kind", kind}, {"symbol", v.symbol}, {"detail", v.detail}});
  }
  context.out.row("assignments", static_cast<std::uint64_t>(config.assignments.size()));
  context.out.row("violations", static_cast<std::uint64_t>(report.violations.size()));
  context.out.row("valid", std::string(report.valid ? "yes" : "no"));
  return report.valid ? kOk : kFailure;
}

namespace {

void print_delta(Output& out, const maintenance::ConfigDelta& delta) {
  if (!out.json()) {
    out.block(maintenance::format_delta_report(delta));
    return;
  }
  for (const auto& s : delta.added) out.record("added", s, {{"symbol", s}});
  for (const auto& s : delta.removed) out.record("removed", s, {{"symbol", s}});
  for (const auto& [s, kinds] : delta.modified) {
    std::string list;
    for (auto k : kinds) list += (list.empty() ? "" : ",") + std::string(maintenance::to_string(k));
    out.record("modified", s, {{"symbol", s}, {"kinds", list}});
  }
}

}  // namespace

int cmd_diff(const DiffArgs& args, Context& context) {
  const auto before = snapshot(args.old_root, context.env);
  const auto after = snapshot(args.new_root, context.env);
  print_delta(context.out, maintenance::diff_spaces(before, after));
  return kOk;
}

int cmd_update_kg(const UpdateKgArgs& args, Context& context) {
  const auto before = snapshot(args.old_root, context.env);
  const auto after = snapshot(args.new_root, context.env);
  const maintenance::ConfigDelta delta = maintenance::diff_spaces(before, after);
  print_delta(context.out, delta);
  if (!args.apply) return kOk;

  const odkg::OdKg kg = odkg::load(args.kg);
  odkg::OdKg updated = maintenance::apply_instance_delta(
      kg, delta, after.space, args.strict ? maintenance::ApplyMode::Strict : maintenance::ApplyMode::Lenient);

  std::set<std::string> modified;
  for (const auto& [s, kinds] : delta.modified) modified.insert(s);
  const bool wants_links = !delta.added.empty() || (args.remap_modified && !modified.empty());
  llm::UsageLedger ledger;
  std::uint64_t added = 0;
  std::uint64_t removed = 0;
  if (wants_links && updated.concept_entities().empty()) {
    context.err << "note: concept layer is empty, no cross-layer links mapped\n";
  } else if (wants_links) {
    ClientStack stack(context);
    llm::MeteredClient client(stack.get(), context.config.client.max_inflight);
    const llm::TemplateSet templates = templates_for(context.config);
    auto update = maintenance::update_cross_links(updated, delta.added, client, templates);
    added += update.added.size();
    if (args.remap_modified) {
      auto remap = maintenance::remap_modified(updated, modified, client, templates);
      added += remap.added.size();
      removed += remap.removed.size();
    }
    ledger = client.ledger();
  }
  odkg::save(updated, args.out.value_or(args.kg));
  context.out.row("links_added", added);
  context.out.row("links_removed", removed);
  print_stats(context.out, updated);
  print_ledger(context.out, ledger);
  return kOk;
}

int cmd_stats(const fs::path& kg, Context& context) {
  print_stats(context.out, odkg::load(kg));
  return kOk;
}

}  // namespace byos::cli
