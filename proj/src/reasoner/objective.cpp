#include <algorithm>

#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"
#include "byos/llm/response_lines.hpp"
#include "byos/reasoner/reasoner.hpp"

namespace byos::reasoner {

namespace {

std::set<std::string> word_set(std::string_view text) {
  auto words = text::word_tokens(text);
  return {words.begin(), words.end()};
}

std::string label_list(const odkg::OdKg& kg) {
  std::vector<std::string> labels;
  for (const auto& [id, c] : kg.concept_entities()) labels.push_back(c.label);
  std::sort(labels.begin(), labels.end());
  std::string out;
  for (const auto& l : labels) out += "- " + l + "\n";
  return out;
}

}  // namespace

TuningObjective parse_objective(std::string_view q, llm::CompletionClient& client,
                                const llm::TemplateSet& templates, const llm::CompletionParams& params) {
  TuningObjective objective;
  objective.text = text::collapse_whitespace(q);
  if (objective.text.empty()) throw EmptyObjective();

  llm::CompletionParams p = params;
  p.kind = "objective";
  auto response = client.complete(templates.render("objective", {{"TARGET", objective.text}}), p).text;

  std::set<std::string> seen;
  for (const auto& line : llm::response_lines(response)) {
    std::string entity;
    if (auto fields = llm::parse_tuple_line(line)) {
      entity = fields->front();
    } else {
      entity = llm::clean_answer_line(line);
    }
    entity = text::collapse_whitespace(entity);
    if (entity.empty() || entity.back() == ':' || text::to_lower(entity) == "none") continue;
    if (seen.insert(text::to_lower(entity)).second) objective.extracted_entities.push_back(entity);
  }
  return objective;
}

std::set<std::string> pattern_match(std::string_view entity, const odkg::OdKg& kg) {
  std::set<std::string> out;
  if (text::collapse_whitespace(entity).empty()) return out;
  if (const odkg::ConceptEntity* exact = kg.find_concept_by_label(entity)) {
    out.insert(exact->id);
    return out;
  }
  const auto words = word_set(entity);
  if (words.empty()) return out;
  for (const auto& [id, c] : kg.concept_entities()) {
    if (word_set(c.label) == words) out.insert(id);
  }
  return out;
}

Alignment align_concepts(const TuningObjective& objective, const odkg::OdKg& kg, llm::CompletionClient& client,
                         const llm::TemplateSet& templates, const llm::CompletionParams& params) {
  if (kg.concept_entities().empty()) throw PreconditionError("concept layer is empty");
  Alignment result;
  std::string labels;
  llm::CompletionParams p = params;
  p.kind = "align";

  for (const auto& entity : objective.extracted_entities) {
    auto matched = pattern_match(entity, kg);
    if (matched.empty()) {
      if (labels.empty()) labels = label_list(kg);
      ++result.client_calls;
      auto response = client.complete(templates.render("align", {{"ENTITY", entity}, {"LABELS", labels}}), p).text;
      for (const auto& line : llm::response_lines(response)) {
        std::string answer = llm::clean_answer_line(line);
        if (text::to_lower(answer) == "none") break;
        if (const odkg::ConceptEntity* c = kg.find_concept_by_label(answer)) {
          matched.insert(c->id);
          break;
        }
      }
    }
    if (matched.empty()) {
      result.unaligned.push_back(entity);
      continue;
    }
    result.concept_ids.insert(matched.begin(), matched.end());
    result.by_entity[entity] = std::move(matched);
  }
  if (result.concept_ids.empty()) {
    throw NoAlignment(result.unaligned.empty() ? objective.extracted_entities : result.unaligned);
  }
  return result;
}

}  // namespace byos::reasoner
