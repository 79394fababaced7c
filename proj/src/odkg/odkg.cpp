#include "byos/odkg/odkg.hpp"

#include <sstream>

#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"
#include "byos/odkg/hashing.hpp"

namespace byos::odkg {

namespace {

constexpr std::pair<ConceptRelation, std::string_view> kConceptRelations[] = {
    {ConceptRelation::Inclusion, "inclusion"},
    {ConceptRelation::Dependency, "dependency"},
    {ConceptRelation::Influence, "influence"},
};

}  // namespace

std::string_view to_string(ConceptRelation relation) {
  for (const auto& [r, name] : kConceptRelations) {
    if (r == relation) return name;
  }
  return "inclusion";
}

std::optional<ConceptRelation> parse_concept_relation(std::string_view text) {
  for (const auto& [r, name] : kConceptRelations) {
    if (name == text) return r;
  }
  return std::nullopt;
}

bool is_concept_id(std::string_view key) { return key.starts_with("c:"); }

void OdKg::upsert_instance(InstanceEntity entity) {
  if (entity.symbol.empty() || is_concept_id(entity.symbol)) {
    throw LayerMismatch("not an instance symbol: " + entity.symbol);
  }
  auto key = entity.symbol;
  instances_.insert_or_assign(std::move(key), std::move(entity));
}

void OdKg::upsert_concept(ConceptEntity entity) {
  if (!is_concept_id(entity.id)) throw LayerMismatch("not a concept id: " + entity.id);
  if (entity.label.empty()) throw InvalidTriple("concept " + entity.id + " has an empty label");
  auto key = entity.id;
  concepts_.insert_or_assign(std::move(key), std::move(entity));
}

std::string OdKg::add_concept(std::string_view label, std::string_view provenance) {
  std::string clean = text::collapse_whitespace(label);
  if (clean.empty()) throw InvalidTriple("concept label is empty");
  std::string id = concept_id(clean);
  if (concepts_.find(id) == concepts_.end()) {
    concepts_.emplace(id, ConceptEntity{id, clean, std::string(provenance)});
  }
  return id;
}

void OdKg::require_instance(const std::string& symbol) {
  if (is_concept_id(symbol)) throw LayerMismatch("concept id used in the instance layer: " + symbol);
  if (instances_.count(symbol) != 0) return;
  if (mode_ == InsertMode::Strict) throw UnknownEntity(symbol);
  kconfig::ConfigOption stub;
  stub.name = symbol;
  instances_.emplace(symbol, InstanceEntity{symbol, kconfig::normalize_description(stub), OptionType::Bool});
}

void OdKg::require_concept(const std::string& id) {
  if (!is_concept_id(id)) throw LayerMismatch("symbol used in the concept layer: " + id);
  if (concepts_.count(id) != 0) return;
  if (mode_ == InsertMode::Strict) throw UnknownEntity(id);
  concepts_.emplace(id, ConceptEntity{id, id, "stub"});
}

void OdKg::add_edge(const std::string& head, std::string_view relation, const std::string& tail) {
  adjacency_[head].insert({std::string(relation), tail, true});
  adjacency_[tail].insert({std::string(relation), head, false});
}

void OdKg::drop_edge(const std::string& head, std::string_view relation, const std::string& tail) {
  if (auto it = adjacency_.find(head); it != adjacency_.end()) it->second.erase({std::string(relation), tail, true});
  if (auto it = adjacency_.find(tail); it != adjacency_.end()) it->second.erase({std::string(relation), head, false});
}

void OdKg::upsert_triple(const InstanceTriple& triple) {
  if (is_concept_id(triple.head) || is_concept_id(triple.tail)) {
    throw LayerMismatch("instance triple references a concept id");
  }
  require_instance(triple.head);
  require_instance(triple.tail);
  if (instance_triples_.insert(triple).second) add_edge(triple.head, kconfig::to_string(triple.relation), triple.tail);
}

void OdKg::upsert_triple(const ConceptTriple& triple) {
  if (!is_concept_id(triple.head) || !is_concept_id(triple.tail)) {
    throw LayerMismatch("concept triple references an instance symbol");
  }
  if (triple.head == triple.tail) throw InvalidTriple("concept self-loop on " + triple.head);
  require_concept(triple.head);
  require_concept(triple.tail);
  if (concept_triples_.insert(triple).second) add_edge(triple.head, to_string(triple.relation), triple.tail);
}

void OdKg::upsert_link(const CrossLayerLink& link) {
  if (is_concept_id(link.instance) || !is_concept_id(link.concept_id)) {
    throw LayerMismatch("cross-layer link must go from a symbol to a concept");
  }
  require_instance(link.instance);
  require_concept(link.concept_id);
  if (links_.insert(link).second) add_edge(link.instance, kRelatedTo, link.concept_id);
}

bool OdKg::remove_triple(const InstanceTriple& triple) {
  if (instance_triples_.erase(triple) == 0) return false;
  drop_edge(triple.head, kconfig::to_string(triple.relation), triple.tail);
  return true;
}

bool OdKg::remove_triple(const ConceptTriple& triple) {
  if (concept_triples_.erase(triple) == 0) return false;
  drop_edge(triple.head, to_string(triple.relation), triple.tail);
  return true;
}

bool OdKg::remove_link(const CrossLayerLink& link) {
  if (links_.erase(link) == 0) return false;
  drop_edge(link.instance, kRelatedTo, link.concept_id);
  return true;
}

void OdKg::remove_entity(std::string_view key) {
  if (!contains(key)) throw UnknownEntity(std::string(key));
  std::string node(key);
  if (auto it = adjacency_.find(node); it != adjacency_.end()) {
    const std::set<Neighbor> incident = it->second;
    for (const Neighbor& n : incident) {
      const std::string& head = n.outgoing ? node : n.node;
      const std::string& tail = n.outgoing ? n.node : node;
      if (n.relation == kRelatedTo) {
        remove_link({head, tail});
      } else if (auto cr = parse_concept_relation(n.relation)) {
        remove_triple(ConceptTriple{head, *cr, tail});
      } else if (auto ir = kconfig::parse_instance_relation(n.relation)) {
        remove_triple(InstanceTriple{head, *ir, tail});
      }
    }
    adjacency_.erase(node);
  }
  if (is_concept_id(node)) {
    concepts_.erase(node);
  } else {
    instances_.erase(node);
  }
}

const InstanceEntity* OdKg::find_instance(std::string_view symbol) const {
  auto it = instances_.find(symbol);
  return it == instances_.end() ? nullptr : &it->second;
}

const ConceptEntity* OdKg::find_concept(std::string_view id) const {
  auto it = concepts_.find(id);
  return it == concepts_.end() ? nullptr : &it->second;
}

const ConceptEntity* OdKg::find_concept_by_label(std::string_view label) const {
  return find_concept(concept_id(label));
}

bool OdKg::contains(std::string_view key) const {
  return is_concept_id(key) ? concepts_.count(key) != 0 : instances_.count(key) != 0;
}

std::vector<Neighbor> OdKg::neighbors(std::string_view node, Direction direction,
                                      const std::set<std::string, std::less<>>* relation_filter) const {
  if (!contains(node)) throw UnknownEntity(std::string(node));
  std::vector<Neighbor> out;
  auto it = adjacency_.find(node);
  if (it == adjacency_.end()) return out;
  for (const Neighbor& n : it->second) {
    if (direction == Direction::Out && !n.outgoing) continue;
    if (direction == Direction::In && n.outgoing) continue;
    if (relation_filter != nullptr && relation_filter->count(n.relation) == 0) continue;
    out.push_back(n);
  }
  return out;
}

std::size_t OdKg::degree(std::string_view node) const {
  auto it = adjacency_.find(node);
  return it == adjacency_.end() ? 0 : it->second.size();
}

void OdKg::check_integrity() const {
  for (const auto& t : instance_triples_) {
    if (is_concept_id(t.head) || is_concept_id(t.tail)) throw InvalidTriple("instance triple spans layers");
    if (!instances_.count(t.head) || !instances_.count(t.tail)) {
      throw InvalidTriple("dangling instance triple " + t.head + " -> " + t.tail);
    }
  }
  for (const auto& t : concept_triples_) {
    if (t.head == t.tail) throw InvalidTriple("concept self-loop on " + t.head);
    if (!concepts_.count(t.head) || !concepts_.count(t.tail)) {
      throw InvalidTriple("dangling concept triple " + t.head + " -> " + t.tail);
    }
  }
  for (const auto& l : links_) {
    if (!instances_.count(l.instance) || !concepts_.count(l.concept_id)) {
      throw InvalidTriple("dangling link " + l.instance + " -> " + l.concept_id);
    }
  }
  for (const auto& [id, c] : concepts_) {
    if (!is_concept_id(id) || c.id != id || c.label.empty()) throw InvalidTriple("malformed concept " + id);
  }
  for (const auto& [symbol, e] : instances_) {
    if (is_concept_id(symbol) || e.symbol != symbol) throw InvalidTriple("malformed instance " + symbol);
  }
}

bool OdKg::operator==(const OdKg& other) const {
  return label_ == other.label_ && instances_ == other.instances_ && concepts_ == other.concepts_ &&
         instance_triples_ == other.instance_triples_ && concept_triples_ == other.concept_triples_ &&
         links_ == other.links_;
}

std::string stats(const OdKg& kg) {
  std::map<std::string, std::size_t> instance_by_relation;
  std::map<std::string, std::size_t> concept_by_relation;
  for (const auto& t : kg.instance_triples()) ++instance_by_relation[std::string(kconfig::to_string(t.relation))];
  for (const auto& t : kg.concept_triples()) ++concept_by_relation[std::string(to_string(t.relation))];

  std::ostringstream out;
  out << "schema_version " << kSchemaVersion << "\n";
  out << "kernel_version " << kg.kernel_version_label() << "\n";
  out << "instance_entities " << kg.instance_entities().size() << "\n";
  out << "instance_triples " << kg.instance_triples().size() << "\n";
  for (const auto& [rel, n] : instance_by_relation) out << "instance_triples." << rel << " " << n << "\n";
  out << "concept_entities " << kg.concept_entities().size() << "\n";
  out << "concept_triples " << kg.concept_triples().size() << "\n";
  for (const auto& [rel, n] : concept_by_relation) out << "concept_triples." << rel << " " << n << "\n";
  out << "links " << kg.links().size() << "\n";
  return out.str();
}

}  // namespace byos::odkg
