#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "byos/kconfig/space.hpp"

namespace byos::engine {

using kconfig::ConfigSpace;
using kconfig::OptionType;
using kconfig::Tristate;

/// Tristate for bool/tristate options, integer for int/hex, text for string.
using Value = std::variant<Tristate, std::int64_t, std::string>;

enum class Origin { Inferred, Default, SelectForced, Refined, User };

std::string_view to_string(Origin origin);

struct Assignment {
  std::string symbol;
  OptionType type = OptionType::Bool;
  Value value = Tristate::n;
  Origin origin = Origin::Default;

  bool operator==(const Assignment&) const = default;
};

/// Kconfig-style text: y/m/n, decimal, 0x-prefixed lowercase hex, raw string.
std::string value_text(OptionType type, const Value& value);

enum class ViolationKind { Domain, Dependency, Constraint, ChoiceExclusivity, SelectConflict };

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string symbol;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

struct ValidityReport {
  bool valid = true;
  std::vector<Violation> violations;
};

struct KernelConfiguration {
  std::map<std::string, Assignment, std::less<>> assignments;
  std::string space_ref;
  std::optional<ValidityReport> validity;

  const Assignment* find(std::string_view symbol) const;
  /// Level of a bool/tristate assignment; n when unassigned or not tristate.
  Tristate tristate_of(std::string_view symbol) const;
  void set(const ConfigSpace& space, std::string_view symbol, Value value, Origin origin);
  void erase(std::string_view symbol) { assignments.erase(std::string(symbol)); }

  /// Same assignments and values (origins and validity are ignored).
  bool same_values(const KernelConfiguration& other) const;
};

/// Domain, dependency, select and choice checks; all violations are listed.
ValidityReport check_validity(const KernelConfiguration& config, const ConfigSpace& space);

/// Returns `partial` completed with defaults. Assignments whose origin is
/// default or select-forced are recomputed; all others stay as given.
KernelConfiguration resolve_defaults(const KernelConfiguration& partial, const ConfigSpace& space);

/// `CONFIG_<NAME>=...` / `# CONFIG_<NAME> is not set` lines sorted by name.
std::string emit_dotconfig(const KernelConfiguration& config);

/// Reads a .config file. Values are typed by `space`; unknown symbols throw
/// UnknownSymbol. Every assignment gets origin user.
KernelConfiguration parse_dotconfig(std::string_view text, const ConfigSpace& space);

}  // namespace byos::engine
