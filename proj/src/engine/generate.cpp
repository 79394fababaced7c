#include "byos/engine/generate.hpp"

#include <algorithm>

#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"
#include "prompts.hpp"
#include "resolve.hpp"

namespace byos::engine {

namespace detail {

std::string config_line(const ConfigSpace& space, const odkg::OdKg* kg, const KernelConfiguration& current,
                        const std::string& symbol) {
  const kconfig::ConfigOption& o = space.at(symbol);
  std::string description;
  if (kg != nullptr) {
    if (const odkg::InstanceEntity* e = kg->find_instance(symbol)) description = e->description;
  }
  if (description.empty()) description = kconfig::normalize_description(o);
  std::string value = kconfig::is_tristate_like(o.type) ? "n" : "unset";
  if (const Assignment* a = current.find(symbol)) value = value_text(a->type, a->value);
  return symbol + " (" + std::string(kconfig::to_string(o.type)) + "): " + description + " [current: " + value + "]";
}

std::vector<std::string> children_of(const ConfigSpace& space, const std::string& container) {
  std::vector<std::string> out;
  for (const auto& [name, o] : space.options) {
    if (o.parent == container) out.push_back(name);
  }
  return out;
}

}  // namespace detail

std::size_t GenerationTrace::accepted() const {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [](const auto& e) { return e.accepted; }));
}

std::size_t GenerationTrace::pruned() const { return events.size() - accepted(); }

std::string format_trace(const GenerationTrace& trace) {
  std::string out;
  for (const auto& e : trace.events) {
    out += std::string(e.accepted ? "accepted" : "pruned") + "\t" + e.option + "\t" + std::string(to_string(e.prompt_kind)) +
           "\t" + e.proposed + "\t" + e.reason + "\n";
  }
  for (const auto& n : trace.notes) out += "note\t" + n + "\n";
  return out;
}

namespace {

struct Attempt {
  std::optional<KernelConfiguration> config;
  std::string reason;
};

class Generator {
 public:
  Generator(const ConfigSpace& space, const odkg::OdKg& kg, const reasoner::TuningObjective& objective,
            const std::set<std::string>& concepts, llm::CompletionClient& client, const llm::TemplateSet& templates,
            PerformanceScorer* scorer, const GenerateOptions& options)
      : space_(space),
        kg_(kg),
        objective_(objective),
        concepts_(concepts),
        client_(client, options.max_inflight),
        templates_(templates),
        scorer_(scorer),
        options_(options) {
    pins_.space_ref = space.kernel_version_label;
  }

  GenerationResult run(const reasoner::CandidateSet& kq) {
    baseline();
    step1(kq.ranked());

    GenerationResult result;
    result.step1_config = current_;
    if (scorer_ != nullptr) {
      result.step1_score = scorer_->score(current_, objective_);
      result.final_score = result.step1_score;
      if (options_.step2_enabled) result.final_score = step2(*result.step1_score);
    }
    ValidityReport report = check_validity(current_, space_);
    if (!report.valid) throw InvalidConfig("generated configuration failed validation");
    current_.validity = std::move(report);
    result.config = current_;
    trace_.ledger = client_.ledger();
    result.trace = std::move(trace_);
    return result;
  }

 private:
  Attempt attempt(const KernelConfiguration& pins) const {
    try {
      KernelConfiguration config = detail::resolve(pins, space_, forced_);
      ValidityReport report = check_validity(config, space_);
      if (!report.valid) {
        const Violation& v = report.violations.front();
        return {std::nullopt, std::string(to_string(v.kind)) + " violation on " + v.symbol + ": " + v.detail};
      }
      config.validity = std::move(report);
      return {std::move(config), {}};
    } catch (const NonConvergence&) {
      return {std::nullopt, "defaults do not converge"};
    }
  }

  // Disables options whose default selects something that cannot be enabled.
  void baseline() {
    for (std::size_t round = 0; round <= space_.options.size(); ++round) {
      KernelConfiguration config = detail::resolve(pins_, space_, forced_);
      ValidityReport report = check_validity(config, space_);
      if (report.valid) {
        config.validity = std::move(report);
        current_ = std::move(config);
        return;
      }
      bool progress = false;
      for (const Violation& v : report.violations) {
        for (const auto& [name, option] : space_.options) {
          if (forced_.count(name) != 0 || config.tristate_of(name) == Tristate::n) continue;
          for (const auto& s : option.selects) {
            if (s.target != v.symbol) continue;
            pins_.set(space_, name, Tristate::n, Origin::Default);
            forced_.insert(name);
            trace_.notes.push_back("infeasible default: " + name + " selects " + v.symbol + " (" +
                                   std::string(to_string(v.kind)) + "), disabled");
            progress = true;
            break;
          }
        }
      }
      if (!progress) {
        const Violation& v = report.violations.front();
        throw InvalidConfig("default configuration is invalid: " + std::string(to_string(v.kind)) + " violation on " +
                            v.symbol + ": " + v.detail);
      }
    }
    throw InvalidConfig("default configuration could not be repaired");
  }

  InferenceContext context(const std::vector<std::string>& symbols) {
    knowledge_ = knowledge(symbols);
    return {objective_.text, knowledge_, &space_, &kg_, &current_};
  }

  std::string knowledge(const std::vector<std::string>& symbols) const {
    std::vector<std::string> labels;
    for (const auto& id : concepts_) {
      if (const odkg::ConceptEntity* c = kg_.find_concept(id)) labels.push_back(c->label);
    }
    std::sort(labels.begin(), labels.end());
    std::string out;
    for (const auto& l : labels) out += "- concept: " + l + "\n";
    const std::set<std::string, std::less<>> related{std::string(odkg::kRelatedTo)};
    for (const auto& s : symbols) {
      if (kg_.find_instance(s) == nullptr) continue;
      for (const auto& n : kg_.neighbors(s, odkg::Direction::Out, &related)) {
        if (const odkg::ConceptEntity* c = kg_.find_concept(n.node)) out += "- " + s + " related_to " + c->label + "\n";
      }
    }
    if (options_.retriever != nullptr && options_.retrieved_snippets > 0) {
      std::string query = objective_.text;
      for (const auto& s : symbols) query += " " + s;
      for (const auto& item : options_.retriever->top_k(query, options_.retrieved_snippets)) {
        std::string snippet = text::collapse_whitespace(item.text);
        if (snippet.size() > 300) snippet = snippet.substr(0, 300) + "...";
        out += "- " + item.id + ": " + snippet + "\n";
      }
    }
    return out.empty() ? "- none\n" : out;
  }

  void event(const std::string& option, PromptKind kind, std::string proposed, bool accepted, std::string reason) {
    trace_.events.push_back({option, kind, std::move(proposed), accepted, std::move(reason)});
  }

  bool tentative(const std::string& option, PromptKind kind, KernelConfiguration pins, const std::string& proposed) {
    Attempt a = attempt(pins);
    if (a.config) {
      pins_ = std::move(pins);
      current_ = std::move(*a.config);
      event(option, kind, proposed, true, "valid");
      return true;
    }
    event(option, kind, proposed, false, a.reason + "; default kept");
    return false;
  }

  void step1(std::vector<std::string> queue) {
    std::set<std::string> queued(queue.begin(), queue.end());
    std::set<std::string> done;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const std::string symbol = queue[i];
      if (done.count(symbol) != 0) continue;
      if (!space_.contains(symbol)) {
        event(symbol, PromptKind::Bool, "", false, "not in the configuration space");
        done.insert(symbol);
        continue;
      }
      switch (prompt_kind_of(space_, symbol)) {
        case PromptKind::Bool:
          bool_batch(queue, i, done);
          break;
        case PromptKind::Choice:
          choice_item(symbol);
          break;
        case PromptKind::Menu:
          menu_item(symbol, queue, queued);
          break;
        case PromptKind::Value:
          value_item(symbol);
          break;
      }
      done.insert(symbol);
      processed_.push_back(symbol);
    }
  }

  void bool_batch(const std::vector<std::string>& queue, std::size_t from, std::set<std::string>& done) {
    const std::size_t limit = std::clamp<std::size_t>(options_.bool_batch_size, 1, 9);
    std::vector<std::string> batch;
    for (std::size_t j = from; j < queue.size() && batch.size() < limit; ++j) {
      const std::string& s = queue[j];
      if (done.count(s) != 0 || !space_.contains(s) || prompt_kind_of(space_, s) != PromptKind::Bool) continue;
      if (std::find(batch.begin(), batch.end(), s) == batch.end()) batch.push_back(s);
    }
    llm::CompletionParams params = options_.params;
    params.kind = "bool";
    BoolInference inference = infer_bool_batch(batch, context(batch), client_, templates_, params);
    for (auto& l : inference.log) trace_.notes.push_back(std::move(l));

    for (const auto& s : batch) {
      const Effect effect = inference.effects.at(s);
      const kconfig::ConfigOption& o = space_.at(s);
      if (effect == Effect::CannotDetermine) {
        event(s, PromptKind::Bool, "default", true, "cannot determine; default kept");
      } else {
        Tristate v = Tristate::n;
        if (effect == Effect::Increase) v = o.type == OptionType::Tristate ? options_.tristate_increase_value : Tristate::y;
        KernelConfiguration pins = pins_;
        pins.set(space_, s, v, Origin::Inferred);
        tentative(s, PromptKind::Bool, std::move(pins), std::string(kconfig::to_string(v)));
      }
      if (s != queue[from]) {
        done.insert(s);
        processed_.push_back(s);
      }
    }
  }

  const kconfig::ConfigOption& choice_for(const std::string& symbol) const {
    const kconfig::ConfigOption& o = space_.at(symbol);
    return o.type == OptionType::Choice ? o : *space_.choice_of(symbol);
  }

  void choice_item(const std::string& symbol) {
    const kconfig::ConfigOption& choice = choice_for(symbol);
    if (auto it = choice_decisions_.find(choice.name); it != choice_decisions_.end()) {
      event(symbol, PromptKind::Choice, it->second.proposed, it->second.accepted,
            "decided with choice group " + choice.name);
      return;
    }
    llm::CompletionParams params = options_.params;
    params.kind = "choice";
    const auto& members = space_.choice_groups.at(choice.name);
    Proposal p = infer_value(choice.name, PromptKind::Choice, context(members), client_, templates_, params);
    for (auto& n : p.notes) trace_.notes.push_back(std::move(n));
    if (p.fallback) {
      event(symbol, PromptKind::Choice, "default", false, "no member named; group default kept");
    } else {
      KernelConfiguration pins = pins_;
      for (const auto& m : members) pins.erase(m);
      pins.set(space_, p.member, Tristate::y, Origin::Inferred);
      tentative(symbol, PromptKind::Choice, std::move(pins), p.member);
    }
    const TraceEvent& e = trace_.events.back();
    choice_decisions_[choice.name] = e;
  }

  void menu_item(const std::string& symbol, std::vector<std::string>& queue, std::set<std::string>& queued) {
    llm::CompletionParams params = options_.params;
    params.kind = "menu";
    Proposal p = infer_value(symbol, PromptKind::Menu, context({symbol}), client_, templates_, params);
    for (auto& n : p.notes) trace_.notes.push_back(std::move(n));
    if (!p.explore) {
      event(symbol, PromptKind::Menu, "skip", true, "menu not explored");
      return;
    }
    std::size_t added = 0;
    for (const auto& child : detail::children_of(space_, symbol)) {
      if (queued.insert(child).second) {
        queue.push_back(child);
        ++added;
      }
    }
    event(symbol, PromptKind::Menu, "explore", true, std::to_string(added) + " children queued");
  }

  void value_item(const std::string& symbol) {
    llm::CompletionParams params = options_.params;
    params.kind = "value";
    Proposal p = infer_value(symbol, PromptKind::Value, context({symbol}), client_, templates_, params);
    for (auto& n : p.notes) trace_.notes.push_back(std::move(n));
    if (!p.value) {
      event(symbol, PromptKind::Value, "", false, "no usable value; default kept");
      return;
    }
    const kconfig::ConfigOption& o = space_.at(symbol);
    KernelConfiguration pins = pins_;
    pins.set(space_, symbol, *p.value, Origin::Inferred);
    tentative(symbol, PromptKind::Value, std::move(pins), value_text(o.type, *p.value));
  }

  // Candidate pin sets for one option of the Step 2 sweep.
  std::vector<std::pair<std::string, KernelConfiguration>> sweep_candidates(const std::string& symbol) const {
    std::vector<std::pair<std::string, KernelConfiguration>> out;
    const kconfig::ConfigOption& o = space_.at(symbol);
    auto with = [&](const Value& v) {
      KernelConfiguration pins = pins_;
      pins.set(space_, symbol, v, Origin::Refined);
      out.emplace_back(value_text(o.type, v), std::move(pins));
    };
    if (o.type == OptionType::Bool) {
      with(Tristate::n);
      with(Tristate::y);
    } else if (o.type == OptionType::Tristate) {
      with(Tristate::n);
      with(Tristate::m);
      with(Tristate::y);
    } else {
      std::vector<Value> values;
      if (const Assignment* a = current_.find(symbol)) values.push_back(a->value);
      KernelConfiguration unpinned = pins_;
      unpinned.erase(symbol);
      try {
        KernelConfiguration defaults = detail::resolve(unpinned, space_, forced_);
        if (const Assignment* a = defaults.find(symbol)) values.push_back(a->value);
      } catch (const NonConvergence&) {
      }
      if (o.range && o.type != OptionType::String) {
        values.insert(values.begin(), Value(o.range->min));
        values.push_back(Value(o.range->max));
      }
      std::vector<Value> unique;
      for (auto& v : values) {
        if (std::find(unique.begin(), unique.end(), v) == unique.end()) unique.push_back(v);
      }
      for (const auto& v : unique) with(v);
    }
    return out;
  }

  double step2(double score) {
    std::set<std::string> swept;
    for (const auto& symbol : processed_) {
      const PromptKind kind = prompt_kind_of(space_, symbol);
      if (kind == PromptKind::Menu) continue;
      std::string key = symbol;
      std::vector<std::pair<std::string, KernelConfiguration>> candidates;
      if (kind == PromptKind::Choice) {
        const kconfig::ConfigOption& choice = choice_for(symbol);
        key = choice.name;
        if (swept.count(key) != 0) continue;
        const auto& members = space_.choice_groups.at(choice.name);
        for (const auto& m : members) {
          KernelConfiguration pins = pins_;
          for (const auto& other : members) pins.erase(other);
          pins.set(space_, m, Tristate::y, Origin::Refined);
          candidates.emplace_back(m, std::move(pins));
        }
      } else {
        candidates = sweep_candidates(symbol);
      }
      swept.insert(key);

      for (auto& [label, pins] : candidates) {
        Attempt a = attempt(pins);
        if (!a.config || a.config->same_values(current_)) continue;
        const double s = scorer_->score(*a.config, objective_);
        if (s > score) {
          trace_.notes.push_back("refined " + key + " to " + label + " (score " + text::format_double(score) + " -> " +
                                 text::format_double(s) + ")");
          score = s;
          pins_ = std::move(pins);
          current_ = std::move(*a.config);
        }
      }
    }
    return score;
  }

  const ConfigSpace& space_;
  const odkg::OdKg& kg_;
  const reasoner::TuningObjective& objective_;
  const std::set<std::string>& concepts_;
  llm::MeteredClient client_;
  const llm::TemplateSet& templates_;
  PerformanceScorer* scorer_;
  GenerateOptions options_;

  KernelConfiguration pins_;
  std::set<std::string, std::less<>> forced_;
  KernelConfiguration current_;
  GenerationTrace trace_;
  std::string knowledge_;
  std::vector<std::string> processed_;
  std::map<std::string, TraceEvent> choice_decisions_;
};

}  // namespace

GenerationResult generate(const reasoner::CandidateSet& kq, const ConfigSpace& space, const odkg::OdKg& kg,
                          const reasoner::TuningObjective& objective, const std::set<std::string>& concepts,
                          llm::CompletionClient& client, const llm::TemplateSet& templates,
                          PerformanceScorer* scorer, const GenerateOptions& options) {
  return Generator(space, kg, objective, concepts, client, templates, scorer, options).run(kq);
}

}  // namespace byos::engine
