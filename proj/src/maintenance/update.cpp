#include "byos/error.hpp"
#include "byos/maintenance/maintenance.hpp"

namespace byos::maintenance {

namespace {

void check_fits(const odkg::OdKg& kg, const ConfigDelta& delta, const ConfigSpace& new_space) {
  for (const auto& s : delta.added) {
    if (!new_space.contains(s)) throw StaleKg("added option " + s + " is not in the new space");
    if (kg.find_instance(s) != nullptr) throw StaleKg("added option " + s + " is already in the graph");
  }
  for (const auto& s : delta.removed) {
    if (new_space.contains(s)) throw StaleKg("removed option " + s + " is still in the new space");
    if (kg.find_instance(s) == nullptr) throw StaleKg("removed option " + s + " is not in the graph");
  }
  for (const auto& [s, kinds] : delta.modified) {
    if (!new_space.contains(s)) throw StaleKg("modified option " + s + " is not in the new space");
    if (kg.find_instance(s) == nullptr) throw StaleKg("modified option " + s + " is not in the graph");
  }
}

void replace_owned_triples(odkg::OdKg& kg, const std::string& symbol, const ConfigSpace& new_space) {
  std::vector<odkg::InstanceTriple> stale;
  for (const auto& n : kg.neighbors(symbol, odkg::Direction::Both)) {
    auto relation = kconfig::parse_instance_relation(n.relation);
    if (!relation) continue;
    if (n.outgoing && *relation != kconfig::InstanceRelation::HasChild) {
      stale.push_back({symbol, *relation, n.node});
    } else if (!n.outgoing && *relation == kconfig::InstanceRelation::HasChild) {
      stale.push_back({n.node, *relation, symbol});
    }
  }
  for (const auto& t : stale) kg.remove_triple(t);
  for (const auto& t : kconfig::owned_triples(new_space, symbol)) kg.upsert_triple(t);
}

odkg::InstanceEntity entity_of(const ConfigSpace& space, const std::string& symbol) {
  const kconfig::ConfigOption& o = space.at(symbol);
  return {symbol, kconfig::normalize_description(o), o.type};
}

}  // namespace

odkg::OdKg apply_instance_delta(const odkg::OdKg& kg, const ConfigDelta& delta, const ConfigSpace& new_space,
                                ApplyMode mode) {
  if (mode == ApplyMode::Strict) check_fits(kg, delta, new_space);
  odkg::OdKg out = kg;
  const odkg::InsertMode insert_mode = out.mode();
  out.set_mode(odkg::InsertMode::Strict);

  for (const auto& s : delta.removed) {
    if (out.find_instance(s) != nullptr && !new_space.contains(s)) out.remove_entity(s);
  }
  for (const auto& s : delta.added) {
    if (new_space.contains(s)) out.upsert_instance(entity_of(new_space, s));
  }
  for (const auto& [s, kinds] : delta.modified) {
    if (!new_space.contains(s)) continue;
    out.upsert_instance(entity_of(new_space, s));
    replace_owned_triples(out, s, new_space);
  }
  for (const auto& t : new_space.edges) {
    if (delta.added.count(t.head) != 0 || delta.added.count(t.tail) != 0) out.upsert_triple(t);
  }
  out.set_kernel_version_label(new_space.kernel_version_label);
  out.set_mode(insert_mode);
  return out;
}

LinkUpdate update_cross_links(odkg::OdKg& kg, const std::set<std::string>& added, llm::CompletionClient& client,
                              const llm::TemplateSet& templates, const builder::BuilderOptions& options) {
  LinkUpdate update;
  if (added.empty()) return update;
  builder::CrossLayerResult mapped =
      builder::map_cross_layer({added.begin(), added.end()}, kg, client, templates, options);
  for (const auto& link : mapped.links) {
    if (kg.links().count(link) != 0) continue;
    kg.upsert_link(link);
    update.added.insert(link);
  }
  update.unresolved = std::move(mapped.unresolved);
  update.rejected_lines = std::move(mapped.rejected_lines);
  update.calls = mapped.calls;
  return update;
}

LinkUpdate remap_modified(odkg::OdKg& kg, const std::set<std::string>& modified, llm::CompletionClient& client,
                          const llm::TemplateSet& templates, const builder::BuilderOptions& options) {
  std::set<odkg::CrossLayerLink> old;
  for (const auto& link : kg.links()) {
    if (modified.count(link.instance) != 0) old.insert(link);
  }
  for (const auto& link : old) kg.remove_link(link);
  LinkUpdate update = update_cross_links(kg, modified, client, templates, options);
  for (const auto& link : old) {
    if (update.added.erase(link) == 0) update.removed.insert(link);
  }
  return update;
}

}  // namespace byos::maintenance
