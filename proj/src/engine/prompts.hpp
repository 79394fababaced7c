#pragma once

#include <string>
#include <vector>

#include "byos/engine/config.hpp"
#include "byos/odkg/odkg.hpp"

namespace byos::engine::detail {

/// `SYMBOL (type): description [current: value]`
std::string config_line(const ConfigSpace& space, const odkg::OdKg* kg, const KernelConfiguration& current,
                        const std::string& symbol);

/// Options whose parent is `container`, sorted by name.
std::vector<std::string> children_of(const ConfigSpace& space, const std::string& container);

}  // namespace byos::engine::detail
