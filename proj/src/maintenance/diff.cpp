#include "byos/error.hpp"
#include "byos/maintenance/maintenance.hpp"
#include "byos/odkg/hashing.hpp"

namespace byos::maintenance {

namespace {

constexpr ChangeKind kAspects[] = {ChangeKind::Domain, ChangeKind::Dependency, ChangeKind::Description};

std::string expr_text(const kconfig::ExprPtr& e) { return e ? kconfig::to_string(e) : std::string("<none>"); }

}  // namespace

KernelSnapshot make_snapshot(ConfigSpace space, std::string version_label) {
  if (version_label.empty()) version_label = space.kernel_version_label;
  if (version_label.empty()) throw PreconditionError("snapshot needs a version label");
  return {std::move(space), std::move(version_label)};
}

std::string_view to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::Domain:
      return "domain";
    case ChangeKind::Dependency:
      return "dependency";
    case ChangeKind::Description:
      return "description";
  }
  return "domain";
}

std::string aspect_text(const kconfig::ConfigOption& option, ChangeKind kind) {
  std::string out;
  switch (kind) {
    case ChangeKind::Domain:
      out = "type=" + std::string(kconfig::to_string(option.type)) + "\n";
      if (option.range) out += "range=" + std::to_string(option.range->min) + ".." + std::to_string(option.range->max) + "\n";
      for (const auto& d : option.defaults) out += "default=" + d.value + " if " + expr_text(d.guard) + "\n";
      break;
    case ChangeKind::Dependency:
      out = "depends_on=" + expr_text(option.depends_on) + "\n";
      for (const auto& s : option.selects) out += "select=" + s.target + " if " + expr_text(s.guard) + "\n";
      for (const auto& s : option.implies) out += "imply=" + s.target + " if " + expr_text(s.guard) + "\n";
      out += "parent=" + option.parent.value_or("") + "\n";
      break;
    case ChangeKind::Description:
      out = kconfig::normalize_description(option);
      break;
  }
  return out;
}

ConfigDelta diff_spaces(const KernelSnapshot& old_snapshot, const KernelSnapshot& new_snapshot) {
  ConfigDelta delta;
  const auto& before = old_snapshot.space.options;
  const auto& after = new_snapshot.space.options;
  for (const auto& [name, option] : after) {
    auto it = before.find(name);
    if (it == before.end()) {
      delta.added.insert(name);
      continue;
    }
    for (ChangeKind kind : kAspects) {
      if (sha256_hex(aspect_text(it->second, kind)) != sha256_hex(aspect_text(option, kind))) {
        delta.modified[name].insert(kind);
      }
    }
  }
  for (const auto& [name, option] : before) {
    if (after.count(name) == 0) delta.removed.insert(name);
  }
  return delta;
}

std::string format_delta_report(const ConfigDelta& delta) {
  std::string out = "ADDED " + std::to_string(delta.added.size()) + "\n";
  for (const auto& s : delta.added) out += "  " + s + "\n";
  out += "REMOVED " + std::to_string(delta.removed.size()) + "\n";
  for (const auto& s : delta.removed) out += "  " + s + "\n";
  out += "MODIFIED " + std::to_string(delta.modified.size()) + "\n";
  for (const auto& [s, kinds] : delta.modified) {
    std::string list;
    for (ChangeKind k : kinds) list += (list.empty() ? "" : ",") + std::string(to_string(k));
    out += "  " + s + " " + list + "\n";
  }
  return out;
}

}  // namespace byos::maintenance
