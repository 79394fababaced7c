#include "random_fixtures.hpp"

#include <algorithm>
#include <sstream>

#include "byos/odkg/hashing.hpp"

namespace byos::testing {

namespace {

struct Declared {
  std::string name;
  bool tristate_like = false;
  bool choice_member = false;
};

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// A positive expression over up to two earlier tristate-like symbols.
std::string random_condition(std::mt19937_64& rng, const std::vector<Declared>& earlier) {
  std::vector<std::string> names;
  for (const auto& d : earlier) {
    if (d.tristate_like) names.push_back(d.name);
  }
  if (names.empty()) return {};
  std::string a = pick(rng, names);
  if (names.size() < 2 || chance(rng, 0.5)) return a;
  std::string b = pick(rng, names);
  if (b == a) return a;
  return a + (chance(rng, 0.5) ? " && " : " || ") + b;
}

}  // namespace

std::string random_kconfig(std::mt19937_64& rng, const KconfigShape& shape) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < shape.options; ++i) names.push_back("OPT" + std::to_string(i));

  // Types first so that select targets can be checked before declaration.
  std::vector<std::string> types(shape.options, "bool");
  for (auto& t : types) {
    const int r = std::uniform_int_distribution<int>(0, 99)(rng);
    if (r < 20) {
      t = "tristate";
    } else if (shape.with_values && r < 28) {
      t = "int";
    } else if (shape.with_values && r < 32) {
      t = "hex";
    } else if (shape.with_values && r < 35) {
      t = "string";
    }
  }
  const bool has_choice = shape.with_choice && shape.options >= 6;
  const std::size_t choice_at = has_choice ? std::uniform_int_distribution<std::size_t>(2, shape.options - 3)(rng)
                                           : shape.options;
  const std::size_t menu_at = shape.with_menu && shape.options >= 8
                                  ? std::uniform_int_distribution<std::size_t>(1, shape.options - 4)(rng)
                                  : shape.options;
  const std::size_t menu_end = std::min(shape.options, menu_at + 3);

  std::ostringstream out;
  std::vector<Declared> declared;
  bool in_menu = false;
  for (std::size_t i = 0; i < shape.options; ++i) {
    const bool overlaps = has_choice && choice_at < menu_end && menu_at < choice_at + 3;
    if (i == menu_at && !overlaps) {
      out << "menu \"Group " << i << "\"\n";
      if (std::string c = random_condition(rng, declared); !c.empty() && chance(rng, 0.5)) out << "\tdepends on " << c << "\n";
      out << "\n";
      in_menu = true;
    }
    if (i == choice_at) {
      out << "choice\n\tprompt \"Pick " << i << "\"\n";
      if (std::string c = random_condition(rng, declared); !c.empty() && chance(rng, 0.5)) out << "\tdepends on " << c << "\n";
      if (chance(rng, 0.6)) out << "\tdefault OPT" << i + 1 + (chance(rng, 0.5) ? 1 : 0) << "\n";
      out << "\n";
      const auto before = declared;
      for (std::size_t j = i; j < i + 3; ++j) {
        out << "config " << names[j] << "\n\tbool \"member " << j << "\"\n";
        if (std::string c = random_condition(rng, before); !c.empty() && chance(rng, 0.3)) out << "\tdepends on " << c << "\n";
        out << "\n";
        types[j] = "bool";
      }
      out << "endchoice\n\n";
      for (std::size_t j = i; j < i + 3; ++j) declared.push_back({names[j], true, true});
      i += 2;
      continue;
    }

    const std::string& type = types[i];
    out << "config " << names[i] << "\n\t" << type << " \"option " << i << "\"\n";
    if (std::string c = random_condition(rng, declared); !c.empty() && chance(rng, 0.55)) out << "\tdepends on " << c << "\n";
    if (type == "bool" || type == "tristate") {
      const int r = std::uniform_int_distribution<int>(0, 9)(rng);
      if (r < 3) {
        out << "\tdefault y\n";
      } else if (r < 5 && type == "tristate") {
        out << "\tdefault m\n";
      } else if (r < 6) {
        if (std::string c = random_condition(rng, declared); !c.empty()) out << "\tdefault y if " << c << "\n";
      }
      // Targets are later, non-member, tristate-like options.
      std::vector<std::string> targets;
      for (std::size_t j = i + 1; j < shape.options; ++j) {
        const bool member = has_choice && j >= choice_at && j < choice_at + 3;
        if (!member && (types[j] == "bool" || types[j] == "tristate")) targets.push_back(names[j]);
      }
      if (!targets.empty() && chance(rng, 0.3)) {
        out << "\tselect " << pick(rng, targets);
        if (std::string c = random_condition(rng, declared); !c.empty() && chance(rng, 0.3)) out << " if " << c;
        out << "\n";
      }
      if (!targets.empty() && chance(rng, 0.15)) out << "\timply " << pick(rng, targets) << "\n";
    } else if (type == "int") {
      const int lo = std::uniform_int_distribution<int>(0, 8)(rng);
      const int hi = lo + std::uniform_int_distribution<int>(1, 64)(rng);
      out << "\trange " << lo << " " << hi << "\n";
      out << "\tdefault " << std::uniform_int_distribution<int>(lo - 4, hi + 16)(rng) << "\n";
    } else if (type == "hex") {
      out << "\trange 0x10 0x1000\n\tdefault 0x" << std::hex << std::uniform_int_distribution<int>(0x8, 0x2000)(rng)
          << std::dec << "\n";
    } else {
      out << "\tdefault \"value" << i << "\"\n";
    }
    if (chance(rng, 0.4)) out << "\thelp\n\t  Random option number " << i << " for tests.\n";
    out << "\n";
    declared.push_back({names[i], type == "bool" || type == "tristate", false});
    if (in_menu && i + 1 >= menu_end) {
      out << "endmenu\n\n";
      in_menu = false;
    }
  }
  if (in_menu) out << "endmenu\n";
  return out.str();
}

odkg::OdKg random_dual_layer(std::mt19937_64& rng, const kconfig::ConfigSpace& space, std::size_t concepts) {
  odkg::OdKg kg = odkg::build_instance_layer(space);
  std::vector<std::string> ids;
  for (std::size_t c = 0; c < concepts; ++c) ids.push_back(kg.add_concept("Concept " + std::to_string(c), "test"));
  const odkg::ConceptRelation relations[] = {odkg::ConceptRelation::Inclusion, odkg::ConceptRelation::Dependency,
                                             odkg::ConceptRelation::Influence};
  for (std::size_t c = 0; c + 1 < ids.size(); ++c) {
    kg.upsert_triple(odkg::ConceptTriple{ids[c], relations[c % 3], ids[c + 1]});
  }
  std::vector<std::string> symbols;
  for (const auto& [name, e] : kg.instance_entities()) symbols.push_back(name);
  for (const auto& s : symbols) {
    if (chance(rng, 0.35)) kg.upsert_link({s, pick(rng, ids)});
  }
  kg.upsert_link({pick(rng, symbols), ids.front()});
  return kg;
}

odkg::OdKg random_small_graph(std::mt19937_64& rng, std::size_t instances, std::size_t concepts) {
  odkg::OdKg kg;
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < instances; ++i) {
    symbols.push_back("N" + std::to_string(i));
    kg.upsert_instance({symbols.back(), "Config " + symbols.back() + " description: ", kconfig::OptionType::Bool});
  }
  std::vector<std::string> ids;
  for (std::size_t c = 0; c < concepts; ++c) ids.push_back(kg.add_concept("Idea " + std::to_string(c), "test"));

  const kconfig::InstanceRelation irel[] = {kconfig::InstanceRelation::DependsOn, kconfig::InstanceRelation::Select,
                                            kconfig::InstanceRelation::Imply, kconfig::InstanceRelation::HasChild};
  const odkg::ConceptRelation crel[] = {odkg::ConceptRelation::Inclusion, odkg::ConceptRelation::Dependency,
                                        odkg::ConceptRelation::Influence};
  std::uniform_int_distribution<std::size_t> inst(0, instances - 1);
  std::uniform_int_distribution<std::size_t> conc(0, concepts - 1);
  const std::size_t instance_edges = instances + instances / 2;
  for (std::size_t e = 0; e < instance_edges; ++e) {
    std::size_t a = inst(rng);
    std::size_t b = inst(rng);
    if (a == b) continue;
    kg.upsert_triple(kconfig::InstanceTriple{symbols[a], irel[e % 4], symbols[b]});
  }
  for (std::size_t e = 0; e < concepts + 1; ++e) {
    std::size_t a = conc(rng);
    std::size_t b = conc(rng);
    if (a == b) continue;
    kg.upsert_triple(odkg::ConceptTriple{ids[a], crel[e % 3], ids[b]});
  }
  for (std::size_t l = 0; l < instances / 2 + 1; ++l) kg.upsert_link({symbols[inst(rng)], ids[conc(rng)]});
  return kg;
}

Responder random_responder(std::uint64_t seed) {
  return [seed](const std::string& prompt, const llm::CompletionParams& params) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(std::hash<std::string>{}(sha256_hex(prompt)))};
    std::mt19937_64 rng(seq);
    auto roll = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    const auto symbols = prompt_symbols(prompt);
    std::string out;
    if (params.kind == "bool") {
      if (roll(10) == 0) return std::string("I am not sure what you mean.");
      static const char* kEffects[] = {"increase", "decrease", "cannot determine", "maybe", "Increase."};
      for (const auto& s : symbols) {
        if (roll(8) == 0) continue;
        out += "(" + (roll(5) == 0 ? "CONFIG_" + s : s) + " | " + kEffects[roll(5)] + ")\n";
      }
      return out;
    }
    if (params.kind == "choice") {
      if (symbols.empty() || roll(4) == 0) return std::string("NOT_A_MEMBER");
      return symbols[static_cast<std::size_t>(roll(static_cast<int>(symbols.size())))];
    }
    if (params.kind == "menu") {
      static const char* kAnswers[] = {"relevant", "irrelevant", "perhaps"};
      return std::string(kAnswers[roll(3)]);
    }
    if (params.kind == "value") {
      switch (roll(4)) {
        case 0:
          return std::string("unknown");
        case 1:
          return "0x" + std::to_string(roll(4096));
        default:
          return std::to_string(roll(300) - 20);
      }
    }
    return std::string("NONE");
  };
}

}  // namespace byos::testing
