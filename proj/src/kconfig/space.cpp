#include "byos/kconfig/space.hpp"

#include "json.hpp"

#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"

namespace byos::kconfig {

namespace {

constexpr std::pair<OptionType, std::string_view> kTypeNames[] = {
    {OptionType::Bool, "bool"},     {OptionType::Tristate, "tristate"}, {OptionType::Int, "int"},
    {OptionType::Hex, "hex"},       {OptionType::String, "string"},     {OptionType::Choice, "choice"},
    {OptionType::Menu, "menu"},
};

constexpr std::pair<InstanceRelation, std::string_view> kRelationNames[] = {
    {InstanceRelation::DependsOn, "depends_on"},
    {InstanceRelation::Select, "select"},
    {InstanceRelation::Imply, "imply"},
    {InstanceRelation::HasChild, "has_child"},
};

void add_option_triples(const ConfigSpace& space, const ConfigOption& option, std::set<InstanceTriple>& out) {
  if (option.depends_on) {
    for (const auto& symbol : referenced_symbols(*option.depends_on)) {
      if (space.contains(symbol)) out.insert({option.name, InstanceRelation::DependsOn, symbol});
    }
  }
  for (const auto& s : option.selects) {
    if (space.contains(s.target)) out.insert({option.name, InstanceRelation::Select, s.target});
  }
  for (const auto& s : option.implies) {
    if (space.contains(s.target)) out.insert({option.name, InstanceRelation::Imply, s.target});
  }
  if (option.parent && space.contains(*option.parent)) {
    out.insert({*option.parent, InstanceRelation::HasChild, option.name});
  }
}

nlohmann::json optional_text(const std::optional<std::string>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

nlohmann::json reverse_deps(const std::vector<ReverseDependency>& list) {
  auto out = nlohmann::json::array();
  for (const auto& r : list) out.push_back({{"target", r.target}, {"guard", to_string(r.guard)}});
  return out;
}

}  // namespace

std::string_view to_string(OptionType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "bool";
}

std::optional<OptionType> parse_option_type(std::string_view text) {
  for (const auto& [t, name] : kTypeNames) {
    if (name == text) return t;
  }
  return std::nullopt;
}

std::string_view to_string(InstanceRelation relation) {
  for (const auto& [r, name] : kRelationNames) {
    if (r == relation) return name;
  }
  return "depends_on";
}

std::optional<InstanceRelation> parse_instance_relation(std::string_view text) {
  for (const auto& [r, name] : kRelationNames) {
    if (name == text) return r;
  }
  return std::nullopt;
}

const ConfigOption* ConfigSpace::find(std::string_view name) const {
  auto it = options.find(name);
  return it == options.end() ? nullptr : &it->second;
}

const ConfigOption& ConfigSpace::at(std::string_view name) const {
  const ConfigOption* option = find(name);
  if (option == nullptr) throw UnknownSymbol(std::string(name));
  return *option;
}

const ConfigOption* ConfigSpace::choice_of(std::string_view member) const {
  const ConfigOption* option = find(member);
  if (option == nullptr || !option->parent) return nullptr;
  const ConfigOption* parent = find(*option->parent);
  return parent != nullptr && parent->type == OptionType::Choice ? parent : nullptr;
}

std::set<InstanceTriple> extract_instance_triples(const ConfigSpace& space) {
  std::set<InstanceTriple> out;
  for (const auto& [name, option] : space.options) add_option_triples(space, option, out);
  return out;
}

std::set<InstanceTriple> owned_triples(const ConfigSpace& space, std::string_view symbol) {
  std::set<InstanceTriple> out;
  if (const ConfigOption* option = space.find(symbol)) add_option_triples(space, *option, out);
  return out;
}

std::string normalize_description(const ConfigOption& option) {
  return "Config " + option.name + " description: " + text::collapse_whitespace(option.help_text.value_or(""));
}

std::string serialize_space(const ConfigSpace& space) {
  using nlohmann::json;
  json options = json::object();
  for (const auto& [name, o] : space.options) {
    json defaults = json::array();
    for (const auto& d : o.defaults) defaults.push_back({{"value", d.value}, {"guard", to_string(d.guard)}});
    json range = o.range ? json{{"min", o.range->min}, {"max", o.range->max}} : json(nullptr);
    options[name] = {
        {"type", to_string(o.type)},
        {"prompt", optional_text(o.prompt)},
        {"help", optional_text(o.help_text)},
        {"defaults", defaults},
        {"range", range},
        {"depends_on", to_string(o.depends_on)},
        {"selects", reverse_deps(o.selects)},
        {"implies", reverse_deps(o.implies)},
        {"parent", optional_text(o.parent)},
        {"location", {{"file", o.location.file}, {"line", o.location.line}}},
        {"menuconfig", o.menuconfig},
        {"optional", o.optional_choice},
    };
  }
  json edges = json::array();
  for (const auto& e : space.edges) edges.push_back({e.head, to_string(e.relation), e.tail});
  json unresolved = json::array();
  for (const auto& u : space.report.unresolved) unresolved.push_back({u.symbol, u.referenced_by});
  json doc = {
      {"label", space.kernel_version_label},
      {"options", options},
      {"edges", edges},
      {"choice_groups", space.choice_groups},
      {"declaration_order", space.declaration_order},
      {"unresolved", unresolved},
  };
  return doc.dump(1) + "\n";
}

}  // namespace byos::kconfig
