#pragma once

#include <set>
#include <string>

#include "byos/engine/config.hpp"

namespace byos::engine::detail {

/// resolve_defaults, additionally keeping every symbol in `forced` as given
/// regardless of its origin.
KernelConfiguration resolve(const KernelConfiguration& partial, const ConfigSpace& space,
                            const std::set<std::string, std::less<>>& forced);

std::optional<std::int64_t> parse_number(std::string_view text, OptionType type);

}  // namespace byos::engine::detail
