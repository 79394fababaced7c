#include <cstdio>

#include "byos/engine/config.hpp"
#include "byos/error.hpp"

namespace byos::engine {

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::Inferred:
      return "inferred";
    case Origin::Default:
      return "default";
    case Origin::SelectForced:
      return "select-forced";
    case Origin::Refined:
      return "refined";
    case Origin::User:
      return "user";
  }
  return "default";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Domain:
      return "domain";
    case ViolationKind::Dependency:
      return "dependency";
    case ViolationKind::Constraint:
      return "constraint";
    case ViolationKind::ChoiceExclusivity:
      return "choice-exclusivity";
    case ViolationKind::SelectConflict:
      return "select-conflict";
  }
  return "constraint";
}

std::string value_text(OptionType type, const Value& value) {
  if (const auto* t = std::get_if<Tristate>(&value)) return std::string(kconfig::to_string(*t));
  if (const auto* n = std::get_if<std::int64_t>(&value)) {
    if (type == OptionType::Hex) {
      char buffer[32];
      if (*n < 0) {
        std::snprintf(buffer, sizeof buffer, "-0x%llx", static_cast<unsigned long long>(-*n));
      } else {
        std::snprintf(buffer, sizeof buffer, "0x%llx", static_cast<unsigned long long>(*n));
      }
      return buffer;
    }
    return std::to_string(*n);
  }
  return std::get<std::string>(value);
}

const Assignment* KernelConfiguration::find(std::string_view symbol) const {
  auto it = assignments.find(symbol);
  return it == assignments.end() ? nullptr : &it->second;
}

Tristate KernelConfiguration::tristate_of(std::string_view symbol) const {
  const Assignment* a = find(symbol);
  if (a == nullptr || !kconfig::is_tristate_like(a->type)) return Tristate::n;
  const auto* t = std::get_if<Tristate>(&a->value);
  return t == nullptr ? Tristate::n : *t;
}

void KernelConfiguration::set(const ConfigSpace& space, std::string_view symbol, Value value, Origin origin) {
  const kconfig::ConfigOption& option = space.at(symbol);
  assignments.insert_or_assign(option.name, Assignment{option.name, option.type, std::move(value), origin});
}

bool KernelConfiguration::same_values(const KernelConfiguration& other) const {
  if (assignments.size() != other.assignments.size()) return false;
  for (const auto& [name, a] : assignments) {
    const Assignment* b = other.find(name);
    if (b == nullptr || b->type != a.type || b->value != a.value) return false;
  }
  return true;
}

}  // namespace byos::engine
