#include <algorithm>
#include <charconv>

#include "byos/engine/config.hpp"
#include "byos/error.hpp"
#include "lookup.hpp"
#include "resolve.hpp"

namespace byos::engine {

namespace detail {

std::optional<std::int64_t> parse_number(std::string_view text, OptionType type) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  } else if (type == OptionType::Hex) {
    base = 16;
  }
  if (text.empty()) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return negative ? -value : value;
}

}  // namespace detail

namespace {

using kconfig::ConfigOption;
using kconfig::tri_and;
using kconfig::tri_or;

struct Reverse {
  std::string head;
  kconfig::ExprPtr guard;
};

class Resolver {
 public:
  Resolver(const KernelConfiguration& partial, const ConfigSpace& space,
           const std::set<std::string, std::less<>>& forced)
      : space_(space), lookup_(config_, space) {
    config_.space_ref = partial.space_ref.empty() ? space.kernel_version_label : partial.space_ref;
    for (const auto& [name, a] : partial.assignments) {
      bool pinned = forced.count(name) != 0 || (a.origin != Origin::Default && a.origin != Origin::SelectForced);
      if (pinned) {
        config_.assignments.emplace(name, a);
        pinned_.insert(name);
      }
    }
    for (const auto& [name, option] : space.options) {
      for (const auto& s : option.selects) selected_by_[s.target].push_back({name, s.guard});
      for (const auto& s : option.implies) implied_by_[s.target].push_back({name, s.guard});
    }
    for (const auto& name : space.declaration_order) {
      const ConfigOption& option = space.at(name);
      if (!kconfig::is_container(option.type) && pinned_.count(name) == 0) free_.push_back(&option);
    }
  }

  KernelConfiguration run() {
    const std::size_t bound = space_.options.size() + 1;
    std::vector<std::string> changed;
    for (std::size_t round = 0; round <= bound; ++round) {
      changed.clear();
      for (const ConfigOption* option : free_) {
        if (update(*option)) changed.push_back(option->name);
      }
      if (changed.empty()) return std::move(config_);
    }
    throw NonConvergence(changed);
  }

 private:
  Tristate level(const std::string& symbol) const { return config_.tristate_of(symbol); }
  Tristate eval(const kconfig::ExprPtr& e) const { return detail::eval_or_y(e, lookup_); }

  Tristate select_level(const std::string& target) const {
    Tristate out = Tristate::n;
    if (auto it = selected_by_.find(target); it != selected_by_.end()) {
      for (const auto& r : it->second) {
        Tristate head = level(r.head);
        if (head != Tristate::n && eval(r.guard) != Tristate::n) out = tri_or(out, head);
      }
    }
    return out;
  }

  Tristate imply_level(const std::string& target) const {
    Tristate out = Tristate::n;
    if (auto it = implied_by_.find(target); it != implied_by_.end()) {
      for (const auto& r : it->second) out = tri_or(out, tri_and(level(r.head), eval(r.guard)));
    }
    return out;
  }

  Tristate default_level(const ConfigOption& option) const {
    for (const auto& d : option.defaults) {
      Tristate guard = eval(d.guard);
      if (guard == Tristate::n) continue;
      Tristate v = d.value_expr ? eval(d.value_expr) : kconfig::parse_tristate(d.value).value_or(Tristate::n);
      return tri_and(v, guard);
    }
    return Tristate::n;
  }

  bool assign(const ConfigOption& option, Value value, Origin origin) {
    const Assignment* current = config_.find(option.name);
    if (current != nullptr && current->value == value && current->origin == origin) return false;
    config_.assignments.insert_or_assign(option.name, Assignment{option.name, option.type, std::move(value), origin});
    return true;
  }

  bool unassign(const ConfigOption& option) { return config_.assignments.erase(option.name) != 0; }

  bool update(const ConfigOption& option) {
    if (kconfig::is_tristate_like(option.type)) {
      if (const ConfigOption* choice = space_.choice_of(option.name)) return update_member(option, *choice);
      return update_tristate(option);
    }
    return update_value(option);
  }

  bool update_tristate(const ConfigOption& option) {
    const Tristate dep = eval(option.depends_on);
    const Tristate sel = select_level(option.name);
    const Tristate base = tri_and(tri_or(default_level(option), imply_level(option.name)), dep);
    const Tristate unforced = bool_rounded(option, base, dep);
    const Tristate value = bool_rounded(option, tri_or(base, sel), dep == Tristate::y || sel != Tristate::n ? Tristate::y : dep);
    return assign(option, value, value > unforced ? Origin::SelectForced : Origin::Default);
  }

  static Tristate bool_rounded(const ConfigOption& option, Tristate base, Tristate dep) {
    if (option.type == OptionType::Bool && base == Tristate::m) return dep == Tristate::y ? Tristate::y : Tristate::n;
    return base;
  }

  // The member of `choice` that resolution turns on, or empty.
  std::string choice_winner(const ConfigOption& choice) const {
    const auto& members = space_.choice_groups.at(choice.name);
    for (const auto& m : members) {
      if (pinned_.count(m) != 0 && level(m) == Tristate::y) return m;
    }
    for (const auto& m : members) {
      if (pinned_.count(m) == 0 && select_level(m) != Tristate::n) return m;
    }
    if (choice.optional_choice || eval(choice.depends_on) != Tristate::y) return {};
    auto visible = [&](const std::string& m) {
      return pinned_.count(m) == 0 && eval(space_.at(m).depends_on) == Tristate::y;
    };
    for (const auto& d : choice.defaults) {
      if (eval(d.guard) == Tristate::n) continue;
      const auto* ref = d.value_expr ? std::get_if<kconfig::SymbolRef>(&d.value_expr->node) : nullptr;
      std::string target = ref != nullptr ? ref->name : d.value;
      if (std::find(members.begin(), members.end(), target) != members.end() && visible(target)) return target;
    }
    for (const auto& m : members) {
      if (visible(m)) return m;
    }
    return {};
  }

  bool update_member(const ConfigOption& option, const ConfigOption& choice) {
    const std::string winner = choice_winner(choice);
    const bool on = winner == option.name;
    const Origin origin = on && select_level(option.name) != Tristate::n ? Origin::SelectForced : Origin::Default;
    return assign(option, on ? Tristate::y : Tristate::n, origin);
  }

  Value literal_value(const ConfigOption& option, const kconfig::DefaultValue& d) const {
    if (d.value_expr) {
      if (const auto* ref = std::get_if<kconfig::SymbolRef>(&d.value_expr->node)) {
        if (const Assignment* a = config_.find(ref->name); a != nullptr && !kconfig::is_tristate_like(a->type)) {
          if (option.type == OptionType::String) return value_text(a->type, a->value);
          if (const auto* n = std::get_if<std::int64_t>(&a->value)) return *n;
        }
      }
    }
    if (option.type == OptionType::String) return d.value;
    return detail::parse_number(d.value, option.type).value_or(0);
  }

  bool update_value(const ConfigOption& option) {
    if (eval(option.depends_on) == Tristate::n) return unassign(option);
    Value value = option.type == OptionType::String ? Value(std::string()) : Value(std::int64_t{0});
    for (const auto& d : option.defaults) {
      if (eval(d.guard) == Tristate::n) continue;
      value = literal_value(option, d);
      break;
    }
    if (auto* n = std::get_if<std::int64_t>(&value); n != nullptr && option.range) {
      *n = std::clamp(*n, option.range->min, option.range->max);
    }
    return assign(option, std::move(value), Origin::Default);
  }

  const ConfigSpace& space_;
  KernelConfiguration config_;
  detail::ConfigLookup lookup_;
  std::set<std::string, std::less<>> pinned_;
  std::vector<const ConfigOption*> free_;
  std::map<std::string, std::vector<Reverse>, std::less<>> selected_by_;
  std::map<std::string, std::vector<Reverse>, std::less<>> implied_by_;
};

}  // namespace

namespace detail {

KernelConfiguration resolve(const KernelConfiguration& partial, const ConfigSpace& space,
                            const std::set<std::string, std::less<>>& forced) {
  for (const auto& [name, a] : partial.assignments) {
    if (!space.contains(name)) throw UnknownSymbol(name);
  }
  return Resolver(partial, space, forced).run();
}

}  // namespace detail

KernelConfiguration resolve_defaults(const KernelConfiguration& partial, const ConfigSpace& space) {
  return detail::resolve(partial, space, {});
}

}  // namespace byos::engine
