#include <algorithm>

#include "byos/engine/config.hpp"
#include "byos/error.hpp"
#include "lookup.hpp"

namespace byos::engine {

namespace {

std::string level_text(Tristate t) { return std::string(kconfig::to_string(t)); }

bool check_domain(const Assignment& a, const kconfig::ConfigOption& option, std::vector<Violation>& out) {
  auto fail = [&](const std::string& detail) {
    out.push_back({ViolationKind::Domain, a.symbol, detail});
    return false;
  };
  if (a.type != option.type) return fail("assigned as " + std::string(kconfig::to_string(a.type)) + " but declared " +
                                         std::string(kconfig::to_string(option.type)));
  switch (option.type) {
    case OptionType::Bool: {
      const auto* t = std::get_if<Tristate>(&a.value);
      if (t == nullptr) return fail("bool value must be y or n");
      if (*t == Tristate::m) return fail("bool option cannot be m");
      return true;
    }
    case OptionType::Tristate:
      if (!std::holds_alternative<Tristate>(a.value)) return fail("tristate value must be y, m or n");
      return true;
    case OptionType::Int:
    case OptionType::Hex: {
      const auto* n = std::get_if<std::int64_t>(&a.value);
      if (n == nullptr) return fail("value is not a number");
      if (option.range && (*n < option.range->min || *n > option.range->max)) {
        return fail(value_text(option.type, *n) + " outside range " + value_text(option.type, option.range->min) +
                    ".." + value_text(option.type, option.range->max));
      }
      return true;
    }
    case OptionType::String:
      if (!std::holds_alternative<std::string>(a.value)) return fail("value is not a string");
      return true;
    case OptionType::Choice:
    case OptionType::Menu:
      return false;
  }
  return false;
}

}  // namespace

ValidityReport check_validity(const KernelConfiguration& config, const ConfigSpace& space) {
  for (const auto& [name, a] : config.assignments) {
    if (!space.contains(name)) throw UnknownSymbol(name);
  }
  ValidityReport report;
  auto& out = report.violations;
  const detail::ConfigLookup lookup(config, space);

  std::set<std::string> well_typed;
  for (const auto& [name, a] : config.assignments) {
    const kconfig::ConfigOption& option = space.at(name);
    if (kconfig::is_container(option.type)) {
      out.push_back({ViolationKind::Constraint, name, "menus and choices carry no value"});
      continue;
    }
    if (check_domain(a, option, out)) well_typed.insert(name);
  }

  for (const auto& name : well_typed) {
    const Assignment& a = *config.find(name);
    const kconfig::ConfigOption& option = space.at(name);
    const Tristate dep = detail::eval_or_y(option.depends_on, lookup);
    if (kconfig::is_tristate_like(option.type)) {
      const Tristate level = std::get<Tristate>(a.value);
      if (level != Tristate::n && dep < level) {
        out.push_back({ViolationKind::Dependency, name,
                       "depends on " + kconfig::to_string(option.depends_on) + " (" + level_text(dep) +
                           ") but is " + level_text(level)});
      }
    } else if (dep == Tristate::n) {
      out.push_back({ViolationKind::Dependency, name,
                     "depends on " + kconfig::to_string(option.depends_on) + " (n) but is set"});
    }
  }

  for (const auto& name : well_typed) {
    const kconfig::ConfigOption& option = space.at(name);
    if (!kconfig::is_tristate_like(option.type)) continue;
    const Tristate level = config.tristate_of(name);
    if (level == Tristate::n) continue;
    for (const auto& s : option.selects) {
      if (detail::eval_or_y(s.guard, lookup) == Tristate::n) continue;
      const kconfig::ConfigOption* target = space.find(s.target);
      if (target == nullptr || !kconfig::is_tristate_like(target->type)) continue;
      const Tristate have = config.tristate_of(s.target);
      if (have < level) {
        out.push_back({ViolationKind::SelectConflict, s.target,
                       "selected by " + name + " (" + level_text(level) + ") but is " + level_text(have)});
      }
    }
  }

  for (const auto& [choice, members] : space.choice_groups) {
    std::vector<std::string> enabled;
    for (const auto& m : members) {
      if (config.tristate_of(m) == Tristate::y) enabled.push_back(m);
    }
    if (enabled.size() > 1) {
      std::string list;
      for (const auto& m : enabled) list += (list.empty() ? "" : ", ") + m;
      out.push_back({ViolationKind::ChoiceExclusivity, choice, "more than one member set to y: " + list});
    }
  }

  report.valid = out.empty();
  return report;
}

}  // namespace byos::engine
