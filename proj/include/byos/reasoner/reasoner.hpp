#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "byos/llm/client.hpp"
#include "byos/llm/prompt_template.hpp"
#include "byos/odkg/odkg.hpp"

namespace byos::reasoner {

struct TuningObjective {
  std::string text;
  std::vector<std::string> extracted_entities;
};

/// Asks the client for the entities of `q`, one per response line. Entities
/// are deduplicated case-insensitively, keeping the first spelling.
TuningObjective parse_objective(std::string_view q, llm::CompletionClient& client,
                                const llm::TemplateSet& templates, const llm::CompletionParams& params = {});

struct Alignment {
  std::set<std::string> concept_ids;
  /// Entity -> concepts it aligned to.
  std::map<std::string, std::set<std::string>> by_entity;
  std::vector<std::string> unaligned;
  std::size_t client_calls = 0;
};

/// Label match for one entity: case-insensitive exact, then equal word sets.
std::set<std::string> pattern_match(std::string_view entity, const odkg::OdKg& kg);

/// Pattern matching first, the client only for entities it misses. Throws
/// NoAlignment when no entity aligns.
Alignment align_concepts(const TuningObjective& objective, const odkg::OdKg& kg, llm::CompletionClient& client,
                         const llm::TemplateSet& templates, const llm::CompletionParams& params = {});

enum class NodeImportance { Uniform, DegreeNormalized };

struct ScoringParams {
  std::map<std::string, double, std::less<>> relation_strength = {
      {"select", 0.95},     {"depends_on", 0.90}, {"inclusion", 0.90}, {"related_to", 0.85},
      {"dependency", 0.85}, {"has_child", 0.80},  {"influence", 0.75}, {"imply", 0.70},
  };
  NodeImportance node_importance = NodeImportance::Uniform;
  double threshold = 0.30;
  int max_hops = 4;

  /// Throws ConfigError when a value is outside its domain.
  void validate() const;
};

double node_importance(std::string_view node, const odkg::OdKg& kg, NodeImportance mode);

struct PathStep {
  std::string relation;
  std::string node;
  /// False when the edge was traversed from its tail to its head.
  bool forward = true;

  auto operator<=>(const PathStep&) const = default;
};

struct ReasoningPath {
  std::string start;
  std::vector<PathStep> steps;
  double score = 1.0;

  const std::string& end() const { return steps.empty() ? start : steps.back().node; }
};

/// Product of sigma(relation) * omega(node) over the steps.
double score_path(const ReasoningPath& path, const ScoringParams& params, const odkg::OdKg& kg);

struct CandidateSet {
  std::set<std::string> options;
  std::map<std::string, ReasoningPath> witness;

  /// Options by descending witness score, ties by name.
  std::vector<std::string> ranked() const;
};

/// Every instance node on a simple path of at most max_hops edges from one
/// of `concepts` whose score is at least the threshold. Edges are followed in
/// both directions.
CandidateSet extract_candidates(const std::set<std::string>& concepts, const odkg::OdKg& kg,
                                const ScoringParams& params);

std::string format_path(const ReasoningPath& path, const odkg::OdKg& kg);

/// `symbol<TAB>score<TAB>path` lines sorted by symbol.
std::string export_candidates(const CandidateSet& candidates, const odkg::OdKg& kg);

}  // namespace byos::reasoner
