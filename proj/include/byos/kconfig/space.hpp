#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "byos/kconfig/expr.hpp"

namespace byos::kconfig {

enum class OptionType { Bool, Tristate, Int, Hex, String, Choice, Menu };

std::string_view to_string(OptionType type);
std::optional<OptionType> parse_option_type(std::string_view text);

/// Choice and Menu nodes group other options and carry no value.
constexpr bool is_container(OptionType t) { return t == OptionType::Choice || t == OptionType::Menu; }
constexpr bool is_tristate_like(OptionType t) { return t == OptionType::Bool || t == OptionType::Tristate; }
constexpr bool is_value_type(OptionType t) {
  return t == OptionType::Int || t == OptionType::Hex || t == OptionType::String;
}

struct SourceLocation {
  std::string file;
  std::size_t line = 0;
};

/// One `default` line. `value` is the canonical text; `value_expr` is set
/// when the value is an expression rather than a number or string literal.
struct DefaultValue {
  std::string value;
  ExprPtr value_expr;
  ExprPtr guard;
};

/// A `select` or `imply` entry.
struct ReverseDependency {
  std::string target;
  ExprPtr guard;
};

struct Range {
  std::int64_t min = 0;
  std::int64_t max = 0;
};

struct ConfigOption {
  std::string name;
  OptionType type = OptionType::Bool;
  std::optional<std::string> prompt;
  std::optional<std::string> help_text;
  std::vector<DefaultValue> defaults;
  std::optional<Range> range;
  /// Own dependencies conjoined with every enclosing `if`, menu and choice
  /// condition, outermost first.
  ExprPtr depends_on;
  std::vector<ReverseDependency> selects;
  std::vector<ReverseDependency> implies;
  std::optional<std::string> parent;
  SourceLocation location;
  bool menuconfig = false;
  bool optional_choice = false;
};

enum class InstanceRelation { DependsOn, Select, Imply, HasChild };

std::string_view to_string(InstanceRelation relation);
std::optional<InstanceRelation> parse_instance_relation(std::string_view text);

struct InstanceTriple {
  std::string head;
  InstanceRelation relation;
  std::string tail;

  auto operator<=>(const InstanceTriple&) const = default;
};

struct UnresolvedReference {
  std::string symbol;
  std::string referenced_by;

  auto operator<=>(const UnresolvedReference&) const = default;
};

struct ParseReport {
  std::set<UnresolvedReference> unresolved;
  std::vector<std::string> notes;
};

/// The parsed option graph. Built once by the parser and treated as
/// immutable afterwards; concurrent readers need no synchronization.
struct ConfigSpace {
  std::map<std::string, ConfigOption, std::less<>> options;
  std::set<InstanceTriple> edges;
  std::map<std::string, std::vector<std::string>, std::less<>> choice_groups;
  /// Option names in declaration order.
  std::vector<std::string> declaration_order;
  std::string kernel_version_label;
  ParseReport report;

  const ConfigOption* find(std::string_view name) const;
  const ConfigOption& at(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  /// Choice container holding `member`, if any.
  const ConfigOption* choice_of(std::string_view member) const;
};

using Environment = std::map<std::string, std::string, std::less<>>;

/// Parses `root_file` and every file it sources. `source` paths are resolved
/// against the directory of `root_file`.
ConfigSpace parse_kconfig_tree(const std::filesystem::path& root_file, const Environment& env = {});

/// Parses in-memory Kconfig text; `source` lines resolve against `base_dir`.
ConfigSpace parse_kconfig_text(std::string_view text, std::string_view file_name = "Kconfig",
                               const std::filesystem::path& base_dir = ".", const Environment& env = {});

/// One depends_on triple per referenced symbol, one triple per select/imply
/// entry and one has_child triple per containment. Endpoints that are not
/// options of `space` are left out (they appear in the parse report).
std::set<InstanceTriple> extract_instance_triples(const ConfigSpace& space);

/// The triples an option's own declaration contributes: outgoing
/// depends_on/select/imply plus the has_child edge from its parent.
std::set<InstanceTriple> owned_triples(const ConfigSpace& space, std::string_view symbol);

/// `Config <NAME> description: <help>` with whitespace runs collapsed.
std::string normalize_description(const ConfigOption& option);

/// Canonical JSON serialization; equal spaces produce equal bytes.
std::string serialize_space(const ConfigSpace& space);

}  // namespace byos::kconfig
