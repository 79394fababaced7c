#pragma once

#include "byos/engine/config.hpp"

namespace byos::engine::detail {

/// Expression lookup over a configuration; non-tristate options are n in
/// boolean context and unassigned options compare as n or "".
class ConfigLookup : public kconfig::ValueLookup {
 public:
  ConfigLookup(const KernelConfiguration& config, const ConfigSpace& space) : config_(config), space_(space) {}

  Tristate tristate_of(std::string_view symbol) const override { return config_.tristate_of(symbol); }

  std::optional<std::string> text_of(std::string_view symbol) const override {
    if (const Assignment* a = config_.find(symbol)) return value_text(a->type, a->value);
    const kconfig::ConfigOption* option = space_.find(symbol);
    if (option == nullptr) return std::nullopt;
    return kconfig::is_tristate_like(option->type) ? std::string("n") : std::string();
  }

 private:
  const KernelConfiguration& config_;
  const ConfigSpace& space_;
};

inline Tristate eval_or_y(const kconfig::ExprPtr& expr, const kconfig::ValueLookup& lookup) {
  return expr ? kconfig::evaluate_expr(*expr, lookup) : Tristate::y;
}

}  // namespace byos::engine::detail
