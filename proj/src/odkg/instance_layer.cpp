#include "byos/odkg/odkg.hpp"

namespace byos::odkg {

OdKg build_instance_layer(const kconfig::ConfigSpace& space) {
  OdKg kg;
  kg.set_kernel_version_label(space.kernel_version_label);
  for (const auto& [name, option] : space.options) {
    kg.upsert_instance({name, kconfig::normalize_description(option), option.type});
  }
  for (const auto& triple : space.edges) kg.upsert_triple(triple);
  return kg;
}

}  // namespace byos::odkg
