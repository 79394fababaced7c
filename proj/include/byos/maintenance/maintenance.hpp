#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "byos/builder/knowledge_builder.hpp"
#include "byos/kconfig/space.hpp"
#include "byos/odkg/odkg.hpp"

namespace byos::maintenance {

using kconfig::ConfigSpace;

struct KernelSnapshot {
  ConfigSpace space;
  std::string version_label;
};

/// Uses the space's own label when `version_label` is empty; throws
/// PreconditionError when both are empty.
KernelSnapshot make_snapshot(ConfigSpace space, std::string version_label = {});

enum class ChangeKind { Domain, Dependency, Description };

std::string_view to_string(ChangeKind kind);

struct ConfigDelta {
  std::set<std::string> added;
  std::set<std::string> removed;
  std::map<std::string, std::set<ChangeKind>> modified;

  bool empty() const { return added.empty() && removed.empty() && modified.empty(); }
};

/// Canonical text of one aspect of an option: domain is type, range and
/// defaults; dependency is depends_on, selects, implies and parent;
/// description is the normalized description.
std::string aspect_text(const kconfig::ConfigOption& option, ChangeKind kind);

ConfigDelta diff_spaces(const KernelSnapshot& old_snapshot, const KernelSnapshot& new_snapshot);

/// ADDED / REMOVED / MODIFIED sections, entries sorted by symbol.
std::string format_delta_report(const ConfigDelta& delta);

/// Strict application rejects a delta that does not fit the graph with
/// StaleKg; lenient application skips what is already applied.
enum class ApplyMode { Strict, Lenient };

/// Returns `kg` with its instance layer moved to `new_space`. The concept
/// layer is untouched; links of removed options are dropped.
odkg::OdKg apply_instance_delta(const odkg::OdKg& kg, const ConfigDelta& delta, const ConfigSpace& new_space,
                                ApplyMode mode = ApplyMode::Lenient);

struct LinkUpdate {
  std::set<odkg::CrossLayerLink> added;
  std::set<odkg::CrossLayerLink> removed;
  std::vector<builder::UnresolvedLabel> unresolved;
  std::vector<builder::RejectedLine> rejected_lines;
  std::size_t calls = 0;
};

/// Maps `added` to concepts and inserts the new links (the set ΔL).
LinkUpdate update_cross_links(odkg::OdKg& kg, const std::set<std::string>& added, llm::CompletionClient& client,
                              const llm::TemplateSet& templates, const builder::BuilderOptions& options = {});

/// Drops the links of `modified` symbols and maps them again.
LinkUpdate remap_modified(odkg::OdKg& kg, const std::set<std::string>& modified, llm::CompletionClient& client,
                          const llm::TemplateSet& templates, const builder::BuilderOptions& options = {});

}  // namespace byos::maintenance
