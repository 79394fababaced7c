#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "byos/llm/client.hpp"
#include "byos/llm/prompt_template.hpp"
#include "byos/odkg/odkg.hpp"

namespace byos::builder {

enum class SourceKind { BenchmarkDoc, Paper, Manual, Other };

std::string_view to_string(SourceKind kind);
std::optional<SourceKind> parse_source_kind(std::string_view text);

struct CorpusDocument {
  std::string id;
  std::string title;
  std::string body;
  SourceKind source_kind = SourceKind::Other;
};

/// Reads every *.md and *.txt file of `dir` in name order. The id is the file
/// stem, the title the first `# ` heading (or the stem), and an optional
/// leading `kind: <benchmark-doc|paper|manual|other>` line sets the source kind.
std::vector<CorpusDocument> load_corpus(const std::filesystem::path& dir);

struct RejectedLine {
  std::string raw;
  std::string reason;
};

struct ExtractionResult {
  std::vector<odkg::ConceptEntity> concepts;
  std::vector<odkg::ConceptTriple> triples;
  std::vector<RejectedLine> rejected_lines;
};

struct BuilderOptions {
  /// Documents processed concurrently during extraction.
  std::size_t parallelism = 4;
  /// Instance entities per cross-layer prompt.
  std::size_t link_batch_size = 9;
  llm::CompletionParams params;
};

/// Prompts once per document and merges the parsed concept layer into `kg`.
/// Nothing is merged unless every response yields at least one usable line.
ExtractionResult extract_concepts(const std::vector<CorpusDocument>& docs, llm::CompletionClient& client,
                                  odkg::OdKg& kg, const llm::TemplateSet& templates,
                                  const BuilderOptions& options = {});

struct UnresolvedLabel {
  std::string symbol;
  std::string label;

  auto operator<=>(const UnresolvedLabel&) const = default;
};

struct CrossLayerResult {
  std::set<odkg::CrossLayerLink> links;
  std::vector<UnresolvedLabel> unresolved;
  std::vector<RejectedLine> rejected_lines;
  std::size_t calls = 0;
};

/// Asks the client which existing concepts each option relates to. Labels
/// that name no concept are recorded, never stubbed. `kg` is not modified.
CrossLayerResult map_cross_layer(const std::vector<std::string>& symbols, const odkg::OdKg& kg,
                                 llm::CompletionClient& client, const llm::TemplateSet& templates,
                                 const BuilderOptions& options = {});

}  // namespace byos::builder
