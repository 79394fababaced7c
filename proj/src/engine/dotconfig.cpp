#include <algorithm>
#include <regex>

#include "byos/engine/config.hpp"
#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"
#include "resolve.hpp"

namespace byos::engine {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '\\' || c == '"') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string unquote(std::string_view s) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') return std::string(s);
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\' && i + 2 < s.size()) ++i;
    out.push_back(s[i]);
  }
  return out;
}

}  // namespace

std::string emit_dotconfig(const KernelConfiguration& config) {
  if (!config.validity) throw InvalidConfig("configuration has not been checked");
  if (!config.validity->valid) {
    std::string first = config.validity->violations.empty() ? std::string() : config.validity->violations[0].symbol;
    throw InvalidConfig("configuration is not valid (first violation on " + first + ")");
  }
  std::string out;
  for (const auto& [name, a] : config.assignments) {
    if (const auto* t = std::get_if<Tristate>(&a.value); t != nullptr && *t == Tristate::n) {
      out += "# CONFIG_" + name + " is not set\n";
    } else if (a.type == OptionType::String) {
      out += "CONFIG_" + name + "=" + quote(value_text(a.type, a.value)) + "\n";
    } else {
      out += "CONFIG_" + name + "=" + value_text(a.type, a.value) + "\n";
    }
  }
  return out;
}

KernelConfiguration parse_dotconfig(std::string_view text, const ConfigSpace& space) {
  static const std::regex kUnset(R"(^#\s*CONFIG_([A-Za-z0-9_]+) is not set\s*$)");
  static const std::regex kSet(R"(^CONFIG_([A-Za-z0-9_]+)=(.*)$)");

  KernelConfiguration config;
  config.space_ref = space.kernel_version_label;
  for (const auto& raw : text::split_lines(text)) {
    std::string line = text::trim(raw);
    std::smatch m;
    std::string symbol;
    std::string value;
    if (std::regex_match(line, m, kUnset)) {
      symbol = m[1];
      value = "n";
    } else if (std::regex_match(line, m, kSet)) {
      symbol = m[1];
      value = m[2];
    } else {
      continue;
    }
    const kconfig::ConfigOption* option = space.find(symbol);
    if (option == nullptr) throw UnknownSymbol(symbol);

    Value typed = std::string(value);
    if (kconfig::is_tristate_like(option->type)) {
      if (auto t = kconfig::parse_tristate(value)) typed = *t;
    } else if (option->type == OptionType::Int || option->type == OptionType::Hex) {
      if (auto n = detail::parse_number(value, option->type)) typed = *n;
    } else if (option->type == OptionType::String) {
      typed = unquote(value);
    }
    config.assignments.insert_or_assign(symbol, Assignment{symbol, option->type, std::move(typed), Origin::User});
  }
  return config;
}

}  // namespace byos::engine
