#include <regex>

#include "byos/builder/knowledge_builder.hpp"
#include "byos/builder/retrieval.hpp"
#include "byos/error.hpp"
#include "byos/kconfig/space.hpp"
#include "byos/kconfig/text.hpp"
#include "byos/odkg/hashing.hpp"
#include "doctest.h"
#include "scripted_client.hpp"
#include "temp_dir.hpp"

using namespace byos;
using namespace byos::builder;
using byos::testing::read_file;
using byos::testing::RuleResponder;
using byos::testing::ScriptedClient;
using byos::testing::TempDir;

namespace {

const std::filesystem::path kFixtures = BYOS_FIXTURES_DIR;

struct OracleLayer {
  std::set<std::string> labels;  // normalized
  std::set<std::tuple<std::string, std::string, std::string>> triples;
  std::size_t rejected = 0;
};

std::string norm(std::string s) {
  s = std::regex_replace(s, std::regex("\\s+"), " ");
  s = std::regex_replace(s, std::regex("^ | $"), "");
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Independent reading of the extraction reply grammar.
void oracle_parse(const std::string& response, OracleLayer& layer) {
  static const std::regex kLine(
      R"(^\s*(?:[-*]\s+|\d+[.)]\s+)?\(?\s*([^|()]+?)\s*\|\s*([^|()]+?)\s*(?:\|\s*([^|()]+?)\s*)?\)?\s*,?\s*$)");
  std::istringstream in(response);
  std::string line;
  while (std::getline(in, line)) {
    if (std::regex_match(line, std::regex("\\s*"))) continue;
    std::smatch m;
    if (!std::regex_match(line, m, kLine)) {
      ++layer.rejected;
      continue;
    }
    if (!m[3].matched) {
      if (norm(m[1]) == "concept") {
        layer.labels.insert(norm(m[2]));
      } else {
        ++layer.rejected;
      }
      continue;
    }
    std::string rel = norm(m[2]);
    if ((rel != "inclusion" && rel != "dependency" && rel != "influence") || norm(m[1]) == norm(m[3])) {
      ++layer.rejected;
      continue;
    }
    layer.labels.insert(norm(m[1]));
    layer.labels.insert(norm(m[3]));
    layer.triples.insert({norm(m[1]), rel, norm(m[3])});
  }
}

RuleResponder corpus_responder(const std::vector<CorpusDocument>& docs) {
  RuleResponder r;
  for (const auto& d : docs) r.extractions[d.title] = read_file(kFixtures / "corpus_responses" / (d.id + ".txt"));
  return r;
}

odkg::OdKg numbered_instances(std::size_t n) {
  odkg::OdKg kg;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s = "OPT_" + std::to_string(100 + i);
    kg.upsert_instance({s, "Config " + s + " description: option number " + std::to_string(i), odkg::OptionType::Bool});
  }
  return kg;
}

}  // namespace

TEST_CASE("corpus loading reads titles, kinds and bodies in name order") {
  auto docs = load_corpus(kFixtures / "corpus");
  REQUIRE(docs.size() == 5);
  CHECK(docs[0].id == "01-zswap");
  CHECK(docs[0].title == "Compressed swap cache");
  CHECK(docs[0].source_kind == SourceKind::Manual);
  CHECK(docs[2].source_kind == SourceKind::BenchmarkDoc);
  CHECK(docs[3].source_kind == SourceKind::Paper);
  CHECK(docs[4].source_kind == SourceKind::Other);
  CHECK(docs[0].body.starts_with("Zswap keeps pages"));

  TempDir dir;
  dir.write("empty.md", "# Only a title\n");
  CHECK_THROWS_AS(load_corpus(dir.path()), SyntaxError);
  CHECK_THROWS_AS(load_corpus(dir / "absent"), FileNotFound);
  TempDir kinds;
  kinds.write("x.md", "kind: blog\nbody\n");
  CHECK_THROWS_AS(load_corpus(kinds.path()), SyntaxError);
}

TEST_CASE("the zswap document yields the memory pool influence triple") {
  CorpusDocument doc{"zswap", "Compressed swap cache", "Zswap keeps pages in a pool.", SourceKind::Manual};
  auto client = ScriptedClient::fixed("(RAM-based Memory Pool | influence | I/O Reduction)");
  odkg::OdKg kg;
  auto result = extract_concepts({doc}, client, kg, llm::TemplateSet::defaults());
  REQUIRE(result.triples.size() == 1);
  const auto& t = result.triples[0];
  CHECK(kg.find_concept(t.head)->label == "RAM-based Memory Pool");
  CHECK(t.relation == odkg::ConceptRelation::Influence);
  CHECK(kg.find_concept(t.tail)->label == "I/O Reduction");
  CHECK(kg.find_concept(t.head)->provenance == "corpus:zswap");
  CHECK(result.concepts.size() == 2);
  CHECK(client.calls()[0].prompt.find("Title: Compressed swap cache") != std::string::npos);
}

TEST_CASE("a response without usable lines is rejected as a whole") {
  std::vector<CorpusDocument> docs{{"a", "A", "alpha", SourceKind::Other}, {"b", "B", "beta", SourceKind::Other}};
  ScriptedClient client([](const std::string& prompt, const llm::CompletionParams&) {
    return prompt.find("Title: B") != std::string::npos ? std::string("I cannot help with that.")
                                                        : std::string("(X | influence | Y)");
  });
  odkg::OdKg kg;
  CHECK_THROWS_AS(extract_concepts(docs, client, kg, llm::TemplateSet::defaults()), ParseFailure);
  CHECK(kg.concept_entities().empty());
  CHECK_THROWS_AS(extract_concepts({}, client, kg, llm::TemplateSet::defaults()), PreconditionError);
}

TEST_CASE("five-document extraction equals the line-parser oracle") {
  auto docs = load_corpus(kFixtures / "corpus");
  OracleLayer oracle;
  for (const auto& d : docs) oracle_parse(read_file(kFixtures / "corpus_responses" / (d.id + ".txt")), oracle);

  for (std::size_t parallelism : {std::size_t{1}, std::size_t{4}}) {
    ScriptedClient client(corpus_responder(docs));
    odkg::OdKg kg;
    BuilderOptions options;
    options.parallelism = parallelism;
    auto result = extract_concepts(docs, client, kg, llm::TemplateSet::defaults(), options);

    std::set<std::string> labels;
    for (const auto& [id, c] : kg.concept_entities()) labels.insert(norm(c.label));
    CHECK(labels == oracle.labels);
    std::set<std::tuple<std::string, std::string, std::string>> triples;
    for (const auto& t : kg.concept_triples()) {
      triples.insert({norm(kg.find_concept(t.head)->label), std::string(odkg::to_string(t.relation)),
                      norm(kg.find_concept(t.tail)->label)});
    }
    CHECK(triples == oracle.triples);
    CHECK(result.rejected_lines.size() == oracle.rejected);
    CHECK(client.call_count() == 5);
    CHECK(kg.find_concept(odkg::concept_id("memory compaction"))->label == "Memory Compaction");
    kg.check_integrity();
  }
}

TEST_CASE("extraction is deterministic across runs") {
  auto docs = load_corpus(kFixtures / "corpus");
  auto run = [&] {
    ScriptedClient client(corpus_responder(docs));
    odkg::OdKg kg;
    extract_concepts(docs, client, kg, llm::TemplateSet::defaults());
    return odkg::serialize(kg);
  };
  CHECK(run() == run());
}

TEST_CASE("cross-layer mapping links ZSWAP to Swap Pages") {
  auto space = kconfig::parse_kconfig_tree(kFixtures / "zswap" / "Kconfig");
  odkg::OdKg kg = odkg::build_instance_layer(space);
  kg.add_concept("Swap Pages", "corpus:zswap");
  kg.add_concept("Request Latency", "corpus:redis");
  RuleResponder rules;
  rules.links["ZSWAP"] = {"Swap Pages"};
  ScriptedClient client(rules);
  auto result = map_cross_layer({"ZSWAP"}, kg, client, llm::TemplateSet::defaults());
  CHECK(result.links == std::set<odkg::CrossLayerLink>{{"ZSWAP", odkg::concept_id("Swap Pages")}});
  CHECK(result.unresolved.empty());
  CHECK(result.calls == 1);
  CHECK(client.calls()[0].prompt.find("- Config ZSWAP description: Compressed cache for swap pages") !=
        std::string::npos);
  CHECK(kg.links().empty());
}

TEST_CASE("labels outside the concept layer are recorded, not stubbed") {
  auto space = kconfig::parse_kconfig_tree(kFixtures / "zswap" / "Kconfig");
  odkg::OdKg kg = odkg::build_instance_layer(space);
  kg.add_concept("Swap Pages", "corpus:zswap");
  auto client = ScriptedClient::fixed("(ZSWAP | related_to | Network Throughput)\n(SWAP | related_to | Swap Pages)\n"
                                      "(ZSWAP | depends_on | Swap Pages)\nnonsense");
  auto result = map_cross_layer({"ZSWAP"}, kg, client, llm::TemplateSet::defaults());
  CHECK(result.links.empty());
  REQUIRE(result.unresolved.size() == 1);
  CHECK(result.unresolved[0].label == "Network Throughput");
  CHECK(result.rejected_lines.size() == 3);
  CHECK(kg.concept_entities().size() == 1);

  odkg::OdKg bare = odkg::build_instance_layer(space);
  CHECK_THROWS_AS(map_cross_layer({"ZSWAP"}, bare, client, llm::TemplateSet::defaults()), PreconditionError);
  CHECK_THROWS_AS(map_cross_layer({"NOPE"}, kg, client, llm::TemplateSet::defaults()), UnknownEntity);
  CHECK(map_cross_layer({}, bare, client, llm::TemplateSet::defaults()).calls == 0);
}

TEST_CASE("fifteen options map in two batches and match the resolution oracle") {
  odkg::OdKg kg = numbered_instances(15);
  const std::vector<std::string> labels = {"Swap Pages", "Request Latency", "Memory Compaction", "I/O Reduction"};
  for (const auto& l : labels) kg.add_concept(l, "test");

  RuleResponder rules;
  std::vector<std::string> symbols;
  for (const auto& [s, e] : kg.instance_entities()) symbols.push_back(s);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i % 4 == 3) continue;
    rules.links[symbols[i]] = {labels[i % labels.size()]};
    if (i % 5 == 0) rules.links[symbols[i]].push_back(i % 2 == 0 ? "request   latency" : "Unknown Concept");
  }

  std::set<odkg::CrossLayerLink> expected;
  std::set<std::pair<std::string, std::string>> expected_unresolved;
  std::map<std::string, std::string> by_norm;
  for (const auto& l : labels) by_norm[norm(l)] = l;
  for (const auto& [s, chosen] : rules.links) {
    for (const auto& l : chosen) {
      auto it = by_norm.find(norm(l));
      if (it != by_norm.end()) {
        expected.insert({s, odkg::concept_id(it->second)});
      } else {
        expected_unresolved.insert({s, l});
      }
    }
  }

  ScriptedClient client(rules);
  llm::MeteredClient metered(client);
  auto result = map_cross_layer(symbols, kg, metered, llm::TemplateSet::defaults());
  CHECK(result.links == expected);
  std::set<std::pair<std::string, std::string>> unresolved;
  for (const auto& u : result.unresolved) unresolved.insert({u.symbol, u.label});
  CHECK(unresolved == expected_unresolved);
  CHECK(result.calls == 2);
  CHECK(metered.ledger().api_calls == 2);
  CHECK(metered.ledger().calls_of("cross_layer") == 2);
  for (const auto& link : result.links) kg.upsert_link(link);
  kg.check_integrity();
}

TEST_CASE("keyword retrieval ranks by distinct overlapping words") {
  KeywordRetriever r;
  r.add("b", "swap latency");
  r.add("a", "swap swap swap");
  r.add("c", "network throughput");
  r.add("d", "the and of");
  auto top = r.top_k("Reduce swap latency for the database", 5);
  REQUIRE(top.size() == 2);
  CHECK(top[0].id == "b");
  CHECK(top[0].overlap == 2);
  CHECK(top[1].id == "a");
  CHECK(r.top_k("swap", 1).size() == 1);
  CHECK(r.top_k("swap", 1)[0].id == "a");
  CHECK(r.top_k("of the", 5).empty());

  odkg::OdKg kg = numbered_instances(2);
  kg.add_concept("Swap Pages", "x");
  KeywordRetriever g;
  g.add_graph(kg);
  CHECK(g.size() == 3);
  CHECK(g.top_k("pages")[0].id == "concept:Swap Pages");
}
