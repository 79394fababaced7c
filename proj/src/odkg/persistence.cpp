#include <array>
#include <fstream>
#include <sstream>

#include "byos/error.hpp"
#include "byos/odkg/odkg.hpp"
#include "json.hpp"

namespace byos::odkg {

namespace {

using nlohmann::json;

const json& field(const json& object, const char* name) {
  if (!object.is_object() || !object.contains(name)) {
    throw CorruptFile(0, std::string("missing field '") + name + "'");
  }
  return object.at(name);
}

std::string text_field(const json& object, const char* name) {
  const json& value = field(object, name);
  if (!value.is_string()) throw CorruptFile(0, std::string("field '") + name + "' is not a string");
  return value.get<std::string>();
}

const json& array_field(const json& object, const char* name) {
  const json& value = field(object, name);
  if (!value.is_array()) throw CorruptFile(0, std::string("field '") + name + "' is not an array");
  return value;
}

std::array<std::string, 3> triple_of(const json& value) {
  if (!value.is_array() || value.size() != 3 || !value[0].is_string() || !value[1].is_string() ||
      !value[2].is_string()) {
    throw CorruptFile(0, "malformed triple " + value.dump());
  }
  return {value[0].get<std::string>(), value[1].get<std::string>(), value[2].get<std::string>()};
}

}  // namespace

std::string serialize(const OdKg& kg) {
  json instances = json::array();
  for (const auto& [symbol, e] : kg.instance_entities()) {
    instances.push_back({{"symbol", symbol}, {"description", e.description}, {"type", kconfig::to_string(e.option_type)}});
  }
  json instance_triples = json::array();
  for (const auto& t : kg.instance_triples()) {
    instance_triples.push_back({t.head, kconfig::to_string(t.relation), t.tail});
  }
  json concepts = json::array();
  for (const auto& [id, c] : kg.concept_entities()) {
    concepts.push_back({{"id", id}, {"label", c.label}, {"provenance", c.provenance}});
  }
  json concept_triples = json::array();
  for (const auto& t : kg.concept_triples()) concept_triples.push_back({t.head, to_string(t.relation), t.tail});
  json links = json::array();
  for (const auto& l : kg.links()) links.push_back({l.instance, kRelatedTo, l.concept_id});

  json doc = {
      {"schema_version", kSchemaVersion},
      {"kernel_version_label", kg.kernel_version_label()},
      {"instance_entities", instances},
      {"instance_triples", instance_triples},
      {"concept_entities", concepts},
      {"concept_triples", concept_triples},
      {"links", links},
  };
  return doc.dump(1) + "\n";
}

OdKg deserialize(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw CorruptFile(e.byte, e.what());
  }
  const json& version = field(doc, "schema_version");
  if (!version.is_number_integer()) throw CorruptFile(0, "schema_version is not an integer");
  int found = version.get<int>();
  if (found > kSchemaVersion) throw SchemaVersionTooNew(found, kSchemaVersion);
  if (found < 1) throw CorruptFile(0, "invalid schema_version");

  OdKg kg(InsertMode::Strict);
  try {
    kg.set_kernel_version_label(text_field(doc, "kernel_version_label"));
    for (const auto& e : array_field(doc, "instance_entities")) {
      auto type = kconfig::parse_option_type(text_field(e, "type"));
      if (!type) throw CorruptFile(0, "unknown option type in " + e.dump());
      kg.upsert_instance({text_field(e, "symbol"), text_field(e, "description"), *type});
    }
    for (const auto& c : array_field(doc, "concept_entities")) {
      kg.upsert_concept({text_field(c, "id"), text_field(c, "label"), text_field(c, "provenance")});
    }
    for (const auto& t : array_field(doc, "instance_triples")) {
      auto [head, rel, tail] = triple_of(t);
      auto relation = kconfig::parse_instance_relation(rel);
      if (!relation) throw CorruptFile(0, "unknown instance relation " + rel);
      kg.upsert_triple(InstanceTriple{head, *relation, tail});
    }
    for (const auto& t : array_field(doc, "concept_triples")) {
      auto [head, rel, tail] = triple_of(t);
      auto relation = parse_concept_relation(rel);
      if (!relation) throw CorruptFile(0, "unknown concept relation " + rel);
      kg.upsert_triple(ConceptTriple{head, *relation, tail});
    }
    for (const auto& t : array_field(doc, "links")) {
      auto [instance, rel, target] = triple_of(t);
      if (rel != kRelatedTo) throw CorruptFile(0, "unknown link relation " + rel);
      kg.upsert_link({instance, target});
    }
    kg.check_integrity();
  } catch (const CorruptFile&) {
    throw;
  } catch (const Error& e) {
    throw CorruptFile(0, e.what());
  }
  return kg;
}

void save(const OdKg& kg, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw WriteFailure(path.string());
    out << serialize(kg);
    out.flush();
    if (!out) throw WriteFailure(path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw WriteFailure(path.string());
  }
}

OdKg load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize(buffer.str());
}

}  // namespace byos::odkg
