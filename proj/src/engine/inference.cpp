#include <algorithm>
#include <regex>

#include "byos/engine/generate.hpp"
#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"
#include "byos/llm/response_lines.hpp"
#include "prompts.hpp"
#include "resolve.hpp"

namespace byos::engine {

namespace {

std::string upper_symbol(std::string_view text) {
  std::string s = text::to_upper(text::trim(text));
  if (s.starts_with("CONFIG_")) s.erase(0, 7);
  return s;
}

std::optional<Effect> parse_effect(std::string_view text) {
  const std::string s = text::to_lower(text);
  if (s.find("cannot") != std::string::npos || s.find("unknown") != std::string::npos) {
    return Effect::CannotDetermine;
  }
  if (s.find("increase") != std::string::npos) return Effect::Increase;
  if (s.find("decrease") != std::string::npos) return Effect::Decrease;
  return std::nullopt;
}

const kconfig::ConfigOption& require(const InferenceContext& context, std::string_view symbol) {
  if (context.space == nullptr || context.current == nullptr) throw PreconditionError("inference context is incomplete");
  return context.space->at(symbol);
}

std::string render(const llm::TemplateSet& templates, std::string_view name, const InferenceContext& context,
                   std::string_view key, const std::string& body) {
  return templates.render(name, {{"TARGET", context.target}, {"KNOWLEDGE", context.knowledge}, {std::string(key), body}});
}

std::string first_line(std::string_view response) {
  auto lines = llm::response_lines(response);
  return lines.empty() ? std::string() : lines.front();
}

Proposal infer_choice(const std::string& option, const InferenceContext& context, llm::CompletionClient& client,
                      const llm::TemplateSet& templates, const llm::CompletionParams& params) {
  const kconfig::ConfigOption& subject = require(context, option);
  const kconfig::ConfigOption* choice = subject.type == OptionType::Choice ? &subject : context.space->choice_of(option);
  if (choice == nullptr) throw PreconditionError(option + " is not part of a choice group");
  const auto& members = context.space->choice_groups.at(choice->name);

  Proposal out;
  out.kind = PromptKind::Choice;
  std::string configs;
  for (const auto& m : members) configs += detail::config_line(*context.space, context.kg, *context.current, m) + "\n";
  std::string prompt = render(templates, "choice", context, "CONFIGS", configs);

  for (int attempt = 0; attempt < 2; ++attempt) {
    ++out.calls;
    std::string answer = first_line(client.complete(prompt, params).text);
    if (auto fields = llm::parse_tuple_line(answer)) answer = fields->front();
    std::string symbol = upper_symbol(llm::clean_answer_line(answer));
    if (std::find(members.begin(), members.end(), symbol) != members.end()) {
      out.member = symbol;
      return out;
    }
    out.notes.push_back("choice " + choice->name + ": '" + answer + "' is not a member");
    std::string names;
    for (const auto& m : members) names += (names.empty() ? "" : ", ") + m;
    prompt += "\nThe answer must be exactly one of: " + names + "\n";
  }
  out.fallback = true;
  out.notes.push_back("choice " + choice->name + ": keeping the group default");
  return out;
}

Proposal infer_menu(const std::string& option, const InferenceContext& context, llm::CompletionClient& client,
                    const llm::TemplateSet& templates, const llm::CompletionParams& params) {
  const kconfig::ConfigOption& menu = require(context, option);
  if (menu.type != OptionType::Menu) throw PreconditionError(option + " is not a menu");
  Proposal out;
  out.kind = PromptKind::Menu;
  std::string directories = "Menu " + menu.prompt.value_or(menu.name) + ":\n";
  for (const auto& child : detail::children_of(*context.space, menu.name)) {
    const kconfig::ConfigOption& c = context.space->at(child);
    directories += "- " + child + " (" + std::string(kconfig::to_string(c.type)) + "): " + c.prompt.value_or("") + "\n";
  }
  ++out.calls;
  const std::string answer = text::to_lower(first_line(client.complete(render(templates, "menu", context,
                                                                              "DIRECTORIES", directories), params).text));
  if (answer.find("irrelevant") != std::string::npos) {
    out.explore = false;
  } else if (answer.find("relevant") != std::string::npos) {
    out.explore = true;
  } else {
    out.notes.push_back("menu " + option + ": unclear answer '" + answer + "', not explored");
  }
  return out;
}

Proposal infer_literal(const std::string& option, const InferenceContext& context, llm::CompletionClient& client,
                       const llm::TemplateSet& templates, const llm::CompletionParams& params) {
  const kconfig::ConfigOption& o = require(context, option);
  if (!kconfig::is_value_type(o.type)) throw PreconditionError(option + " does not take a value");
  Proposal out;
  out.kind = PromptKind::Value;
  std::string configs = detail::config_line(*context.space, context.kg, *context.current, option);
  if (o.range) configs += " [range: " + value_text(o.type, o.range->min) + ".." + value_text(o.type, o.range->max) + "]";
  ++out.calls;
  std::string answer = first_line(client.complete(render(templates, "value", context, "CONFIGS", configs + "\n"),
                                                  params).text);
  if (auto fields = llm::parse_tuple_line(answer)) answer = fields->back();
  answer = llm::clean_answer_line(answer);

  if (o.type == OptionType::String) {
    out.value = answer;
    return out;
  }
  static const std::regex kDecimal(R"([-+]?(0[xX][0-9a-fA-F]+|[0-9]+))");
  static const std::regex kHex(R"([-+]?(0[xX][0-9a-fA-F]+|[0-9a-fA-F]*[0-9][0-9a-fA-F]*))");
  const std::regex& kNumber = o.type == OptionType::Hex ? kHex : kDecimal;
  std::smatch m;
  std::optional<std::int64_t> n;
  std::string token;
  if (std::regex_search(answer, m, kNumber)) {
    token = m.str();
    if (token.front() == '+') token.erase(0, 1);
    n = detail::parse_number(token, o.type);
  }
  if (!n) {
    out.notes.push_back(option + ": no usable value in '" + answer + "'");
    return out;
  }
  if (o.range && (*n < o.range->min || *n > o.range->max)) {
    const std::int64_t clamped = std::clamp(*n, o.range->min, o.range->max);
    out.notes.push_back(option + ": " + token + " clamped to " + value_text(o.type, clamped));
    *n = clamped;
  }
  out.value = *n;
  return out;
}

}  // namespace

std::string_view to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::Bool:
      return "Bool";
    case PromptKind::Choice:
      return "Choice";
    case PromptKind::Menu:
      return "Menu";
    case PromptKind::Value:
      return "Value";
  }
  return "Bool";
}

std::string_view to_string(Effect effect) {
  switch (effect) {
    case Effect::Increase:
      return "increase";
    case Effect::Decrease:
      return "decrease";
    case Effect::CannotDetermine:
      return "cannot determine";
  }
  return "cannot determine";
}

PromptKind prompt_kind_of(const ConfigSpace& space, std::string_view symbol) {
  const kconfig::ConfigOption& o = space.at(symbol);
  if (o.type == OptionType::Choice || space.choice_of(symbol) != nullptr) return PromptKind::Choice;
  if (o.type == OptionType::Menu) return PromptKind::Menu;
  if (kconfig::is_value_type(o.type)) return PromptKind::Value;
  return PromptKind::Bool;
}

BoolInference infer_bool_batch(const std::vector<std::string>& options, const InferenceContext& context,
                               llm::CompletionClient& client, const llm::TemplateSet& templates,
                               const llm::CompletionParams& params) {
  if (options.empty() || options.size() > 9) throw PreconditionError("a Bool batch holds 1 to 9 options");
  std::string configs;
  for (const auto& o : options) {
    if (!kconfig::is_tristate_like(require(context, o).type)) throw PreconditionError(o + " is not bool or tristate");
    configs += detail::config_line(*context.space, context.kg, *context.current, o) + "\n";
  }
  llm::CompletionParams p = params;
  if (p.kind.empty()) p.kind = "bool";
  const std::string response = client.complete(render(templates, "bool", context, "CONFIGS", configs), p).text;

  BoolInference out;
  const std::set<std::string> batch(options.begin(), options.end());
  for (const auto& line : llm::response_lines(response)) {
    auto fields = llm::parse_tuple_line(line);
    if (!fields || fields->size() != 2) {
      out.rejected_lines.push_back(line);
      continue;
    }
    std::string symbol = upper_symbol((*fields)[0]);
    auto effect = parse_effect((*fields)[1]);
    if (batch.count(symbol) == 0 || !effect) {
      out.rejected_lines.push_back(line);
      continue;
    }
    out.effects.emplace(symbol, *effect);
  }
  for (const auto& o : options) {
    if (out.effects.emplace(o, Effect::CannotDetermine).second) {
      out.log.push_back(o + ": no effect in the response, cannot determine");
    }
  }
  return out;
}

Proposal infer_value(const std::string& option, PromptKind kind, const InferenceContext& context,
                     llm::CompletionClient& client, const llm::TemplateSet& templates,
                     const llm::CompletionParams& params) {
  llm::CompletionParams p = params;
  switch (kind) {
    case PromptKind::Choice:
      if (p.kind.empty()) p.kind = "choice";
      return infer_choice(option, context, client, templates, p);
    case PromptKind::Menu:
      if (p.kind.empty()) p.kind = "menu";
      return infer_menu(option, context, client, templates, p);
    case PromptKind::Value:
      if (p.kind.empty()) p.kind = "value";
      return infer_literal(option, context, client, templates, p);
    case PromptKind::Bool:
      break;
  }
  throw PreconditionError("Bool options are inferred in batches");
}

}  // namespace byos::engine
