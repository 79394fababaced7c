#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "byos/builder/retrieval.hpp"
#include "byos/engine/config.hpp"
#include "byos/llm/client.hpp"
#include "byos/llm/prompt_template.hpp"
#include "byos/odkg/odkg.hpp"
#include "byos/reasoner/reasoner.hpp"

namespace byos::engine {

enum class PromptKind { Bool, Choice, Menu, Value };

std::string_view to_string(PromptKind kind);

/// Prompt family used for an option: Choice for choice containers and their
/// members, Menu for menus, Value for int/hex/string, Bool otherwise.
PromptKind prompt_kind_of(const ConfigSpace& space, std::string_view symbol);

enum class Effect { Increase, Decrease, CannotDetermine };

std::string_view to_string(Effect effect);

struct TraceEvent {
  std::string option;
  PromptKind prompt_kind = PromptKind::Bool;
  std::string proposed;
  bool accepted = false;
  std::string reason;
};

struct GenerationTrace {
  std::vector<TraceEvent> events;
  std::vector<std::string> notes;
  llm::UsageLedger ledger;

  std::size_t accepted() const;
  std::size_t pruned() const;
};

/// `accepted|pruned<TAB>option<TAB>kind<TAB>proposed<TAB>reason` lines, then `note<TAB>...` lines.
std::string format_trace(const GenerationTrace& trace);

/// What a prompt gets to see besides the options themselves.
struct InferenceContext {
  std::string target;
  std::string knowledge;
  const ConfigSpace* space = nullptr;
  const odkg::OdKg* kg = nullptr;
  /// The current partial configuration K_t, already completed with defaults.
  const KernelConfiguration* current = nullptr;
};

struct BoolInference {
  std::map<std::string, Effect> effects;
  /// One entry per option that fell back to cannot-determine.
  std::vector<std::string> log;
  std::vector<std::string> rejected_lines;
};

/// One Bool prompt for 1 to 9 bool/tristate options.
BoolInference infer_bool_batch(const std::vector<std::string>& options, const InferenceContext& context,
                               llm::CompletionClient& client, const llm::TemplateSet& templates,
                               const llm::CompletionParams& params = {});

struct Proposal {
  PromptKind kind = PromptKind::Value;
  /// Choice: the selected member; empty when the group default is kept.
  std::string member;
  bool fallback = false;
  /// Menu: explore the menu's children.
  bool explore = false;
  /// Value: the parsed, range-checked value; empty when the answer was unusable.
  std::optional<Value> value;
  std::vector<std::string> notes;
  std::size_t calls = 0;
};

/// Choice, Menu or Value inference for one option. For Choice, `option` may be
/// the choice container or any of its members.
Proposal infer_value(const std::string& option, PromptKind kind, const InferenceContext& context,
                     llm::CompletionClient& client, const llm::TemplateSet& templates,
                     const llm::CompletionParams& params = {});

class PerformanceScorer {
 public:
  virtual ~PerformanceScorer() = default;
  virtual double score(const KernelConfiguration& config, const reasoner::TuningObjective& objective) = 0;
};

/// Sum of weights over the target assignments the configuration matches.
/// Targets are value texts as in a .config file (y, m, n, 64, 0x10, text).
class SyntheticScorer : public PerformanceScorer {
 public:
  SyntheticScorer(std::map<std::string, std::string> targets, std::map<std::string, double> weights = {})
      : targets_(std::move(targets)), weights_(std::move(weights)) {}

  double score(const KernelConfiguration& config, const reasoner::TuningObjective& objective) override;

 private:
  std::map<std::string, std::string> targets_;
  std::map<std::string, double> weights_;
};

/// Writes the emitted .config to a temporary file, runs `command <file>` and
/// reads the first number matching `pattern` (first capture group if any).
class CommandScorer : public PerformanceScorer {
 public:
  CommandScorer(std::string command, double timeout_s = 60.0, std::string pattern = R"([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)")
      : command_(std::move(command)), timeout_s_(timeout_s), pattern_(std::move(pattern)) {}

  double score(const KernelConfiguration& config, const reasoner::TuningObjective& objective) override;

 private:
  std::string command_;
  double timeout_s_;
  std::string pattern_;
};

struct GenerateOptions {
  std::size_t bool_batch_size = 9;
  Tristate tristate_increase_value = Tristate::y;
  bool step2_enabled = true;
  std::size_t max_inflight = 4;
  llm::CompletionParams params;
  /// Optional source of extra knowledge snippets for prompts.
  const builder::KeywordRetriever* retriever = nullptr;
  std::size_t retrieved_snippets = 3;
};

struct GenerationResult {
  KernelConfiguration config;
  GenerationTrace trace;
  KernelConfiguration step1_config;
  std::optional<double> step1_score;
  std::optional<double> final_score;
};

/// Step 1 infers assignments for K_q in witness order, keeping only those
/// that leave the completed configuration valid. Step 2 (scorer given and
/// enabled) sweeps each option's domain and keeps strictly better values.
GenerationResult generate(const reasoner::CandidateSet& kq, const ConfigSpace& space, const odkg::OdKg& kg,
                          const reasoner::TuningObjective& objective, const std::set<std::string>& concepts,
                          llm::CompletionClient& client, const llm::TemplateSet& templates,
                          PerformanceScorer* scorer = nullptr, const GenerateOptions& options = {});

}  // namespace byos::engine
