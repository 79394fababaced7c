#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "byos/kconfig/space.hpp"
#include "byos/odkg/odkg.hpp"
#include "byos/reasoner/reasoner.hpp"
#include "scripted_client.hpp"

namespace byos::testing {

/// Random Kconfig text. Dependencies only name earlier options and
/// select/imply targets are always declared after their head, so default
/// resolution always settles.
struct KconfigShape {
  std::size_t options = 14;
  bool with_choice = true;
  bool with_menu = true;
  bool with_values = true;
};

std::string random_kconfig(std::mt19937_64& rng, const KconfigShape& shape = {});

/// Instance layer of `space` plus a few concepts, concept triples and links.
odkg::OdKg random_dual_layer(std::mt19937_64& rng, const kconfig::ConfigSpace& space, std::size_t concepts = 4);

/// A small random graph for path-search checks: `instances` options,
/// `concepts` concepts, random typed edges in both layers and random links.
odkg::OdKg random_small_graph(std::mt19937_64& rng, std::size_t instances, std::size_t concepts);

/// Answers each prompt with a random but prompt-determined response, mixing
/// well-formed answers with garbage. Same seed and prompt, same answer.
Responder random_responder(std::uint64_t seed);

}  // namespace byos::testing
