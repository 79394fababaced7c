#pragma once

#include <compare>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "byos/kconfig/space.hpp"

namespace byos::odkg {

using kconfig::InstanceRelation;
using kconfig::InstanceTriple;
using kconfig::OptionType;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kRelatedTo = "related_to";

struct InstanceEntity {
  std::string symbol;
  std::string description;
  OptionType option_type = OptionType::Bool;

  bool operator==(const InstanceEntity&) const = default;
};

struct ConceptEntity {
  std::string id;
  std::string label;
  std::string provenance;

  bool operator==(const ConceptEntity&) const = default;
};

enum class ConceptRelation { Inclusion, Dependency, Influence };

std::string_view to_string(ConceptRelation relation);
std::optional<ConceptRelation> parse_concept_relation(std::string_view text);

struct ConceptTriple {
  std::string head;
  ConceptRelation relation;
  std::string tail;

  auto operator<=>(const ConceptTriple&) const = default;
};

/// (instance, related_to, concept); the relation is implicit.
struct CrossLayerLink {
  std::string instance;
  std::string concept_id;

  auto operator<=>(const CrossLayerLink&) const = default;
};

enum class Direction { Out, In, Both };

struct Neighbor {
  std::string relation;
  std::string node;
  bool outgoing = true;

  auto operator<=>(const Neighbor&) const = default;
};

/// Strict insertion rejects triples whose endpoints are missing; lenient
/// insertion creates stub entities for them.
enum class InsertMode { Strict, Lenient };

bool is_concept_id(std::string_view key);

/// The dual-layer graph. Not internally synchronized; see KgStore.
class OdKg {
 public:
  explicit OdKg(InsertMode mode = InsertMode::Strict) : mode_(mode) {}

  InsertMode mode() const noexcept { return mode_; }
  void set_mode(InsertMode mode) noexcept { mode_ = mode; }
  const std::string& kernel_version_label() const noexcept { return label_; }
  void set_kernel_version_label(std::string label) { label_ = std::move(label); }

  void upsert_instance(InstanceEntity entity);
  void upsert_concept(ConceptEntity entity);
  /// Inserts the concept for `label` (id derived from the label) and returns its id.
  /// An existing concept keeps its label and provenance.
  std::string add_concept(std::string_view label, std::string_view provenance);

  void upsert_triple(const InstanceTriple& triple);
  void upsert_triple(const ConceptTriple& triple);
  void upsert_link(const CrossLayerLink& link);

  bool remove_triple(const InstanceTriple& triple);
  bool remove_triple(const ConceptTriple& triple);
  bool remove_link(const CrossLayerLink& link);
  /// Removes a symbol or concept together with every triple and link touching it.
  void remove_entity(std::string_view key);

  const InstanceEntity* find_instance(std::string_view symbol) const;
  const ConceptEntity* find_concept(std::string_view id) const;
  const ConceptEntity* find_concept_by_label(std::string_view label) const;
  bool contains(std::string_view key) const;

  /// Incident edges sorted by (relation, node, direction).
  std::vector<Neighbor> neighbors(std::string_view node, Direction direction,
                                  const std::set<std::string, std::less<>>* relation_filter = nullptr) const;
  std::size_t degree(std::string_view node) const;

  const std::map<std::string, InstanceEntity, std::less<>>& instance_entities() const { return instances_; }
  const std::map<std::string, ConceptEntity, std::less<>>& concept_entities() const { return concepts_; }
  const std::set<InstanceTriple>& instance_triples() const { return instance_triples_; }
  const std::set<ConceptTriple>& concept_triples() const { return concept_triples_; }
  const std::set<CrossLayerLink>& links() const { return links_; }

  /// Throws InvalidTriple describing the first violation found.
  void check_integrity() const;

  /// Structural equality (mode is not part of the graph).
  bool operator==(const OdKg& other) const;

 private:
  void require_instance(const std::string& symbol);
  void require_concept(const std::string& id);
  void add_edge(const std::string& head, std::string_view relation, const std::string& tail);
  void drop_edge(const std::string& head, std::string_view relation, const std::string& tail);

  InsertMode mode_;
  std::string label_;
  std::map<std::string, InstanceEntity, std::less<>> instances_;
  std::map<std::string, ConceptEntity, std::less<>> concepts_;
  std::set<InstanceTriple> instance_triples_;
  std::set<ConceptTriple> concept_triples_;
  std::set<CrossLayerLink> links_;
  std::map<std::string, std::set<Neighbor>, std::less<>> adjacency_;
};

/// Line-oriented counts per layer and relation.
std::string stats(const OdKg& kg);

/// One instance entity per option and the parser's instance triples.
OdKg build_instance_layer(const kconfig::ConfigSpace& space);

/// Canonical JSON document: sorted keys, sorted entity and triple arrays.
std::string serialize(const OdKg& kg);
OdKg deserialize(std::string_view bytes);
void save(const OdKg& kg, const std::filesystem::path& path);
OdKg load(const std::filesystem::path& path);

/// Many readers or one writer over a shared graph.
class KgStore {
 public:
  explicit KgStore(OdKg kg = OdKg{}) : kg_(std::move(kg)) {}

  template <typename F>
  auto read(F&& fn) const {
    std::shared_lock lock(mutex_);
    return fn(static_cast<const OdKg&>(kg_));
  }

  template <typename F>
  auto write(F&& fn) {
    std::unique_lock lock(mutex_);
    return fn(kg_);
  }

  OdKg snapshot() const {
    std::shared_lock lock(mutex_);
    return kg_;
  }

 private:
  mutable std::shared_mutex mutex_;
  OdKg kg_;
};

}  // namespace byos::odkg
