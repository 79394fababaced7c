#include "byos/builder/knowledge_builder.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"
#include "byos/llm/response_lines.hpp"
#include "byos/odkg/hashing.hpp"

namespace byos::builder {

namespace {

constexpr std::pair<SourceKind, std::string_view> kSourceKinds[] = {
    {SourceKind::BenchmarkDoc, "benchmark-doc"},
    {SourceKind::Paper, "paper"},
    {SourceKind::Manual, "manual"},
    {SourceKind::Other, "other"},
};

struct ParsedItem {
  std::string head;
  std::optional<odkg::ConceptRelation> relation;  // empty for a bare concept
  std::string tail;
};

struct ParsedResponse {
  std::vector<ParsedItem> items;
  std::vector<RejectedLine> rejected;
};

ParsedResponse parse_extraction(std::string_view response) {
  ParsedResponse out;
  for (const auto& line : llm::response_lines(response)) {
    auto fields = llm::parse_tuple_line(line);
    if (!fields) {
      out.rejected.push_back({line, "not a tuple"});
      continue;
    }
    if (fields->size() == 2 && text::to_lower((*fields)[0]) == "concept") {
      out.items.push_back({(*fields)[1], std::nullopt, {}});
      continue;
    }
    if (fields->size() != 3) {
      out.rejected.push_back({line, "expected three fields"});
      continue;
    }
    auto relation = odkg::parse_concept_relation(text::to_lower((*fields)[1]));
    if (!relation) {
      out.rejected.push_back({line, "relation '" + (*fields)[1] + "' is not inclusion, dependency or influence"});
      continue;
    }
    if (odkg::concept_id((*fields)[0]) == odkg::concept_id((*fields)[2])) {
      out.rejected.push_back({line, "self-loop"});
      continue;
    }
    out.items.push_back({(*fields)[0], relation, (*fields)[2]});
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads; rethrows the
// exception of the lowest failing index.
template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string upper_symbol(std::string_view text) {
  std::string s = text::to_upper(text::trim(text));
  if (s.starts_with("CONFIG_")) s.erase(0, 7);
  return s;
}

}  // namespace

std::string_view to_string(SourceKind kind) {
  for (const auto& [k, name] : kSourceKinds) {
    if (k == kind) return name;
  }
  return "other";
}

std::optional<SourceKind> parse_source_kind(std::string_view text) {
  for (const auto& [k, name] : kSourceKinds) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::vector<CorpusDocument> load_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw FileNotFound(dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".md" || ext == ".txt")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<CorpusDocument> docs;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    auto lines = text::split_lines(text::sanitize_utf8(buffer.str()));

    CorpusDocument doc;
    doc.id = path.stem().string();
    doc.title = doc.id;
    std::size_t first = 0;
    if (!lines.empty() && lines[0].starts_with("kind:")) {
      auto kind = parse_source_kind(text::trim(lines[0].substr(5)));
      if (!kind) throw SyntaxError(path.string(), 1, "unknown document kind");
      doc.source_kind = *kind;
      first = 1;
    }
    std::string body;
    bool titled = false;
    for (std::size_t i = first; i < lines.size(); ++i) {
      if (!titled && lines[i].starts_with("# ")) {
        doc.title = text::trim(lines[i].substr(2));
        titled = true;
        continue;
      }
      body += lines[i];
      body.push_back('\n');
    }
    doc.body = text::trim(body);
    if (doc.body.empty()) throw SyntaxError(path.string(), 1, "document body is empty");
    docs.push_back(std::move(doc));
  }
  return docs;
}

ExtractionResult extract_concepts(const std::vector<CorpusDocument>& docs, llm::CompletionClient& client,
                                  odkg::OdKg& kg, const llm::TemplateSet& templates, const BuilderOptions& options) {
  if (docs.empty()) throw PreconditionError("no corpus documents");
  llm::CompletionParams params = options.params;
  params.kind = "extraction";

  std::vector<ParsedResponse> parsed(docs.size());
  parallel_for(docs.size(), options.parallelism, [&](std::size_t i) {
    const CorpusDocument& doc = docs[i];
    std::string prompt = templates.render("extraction", {{"TITLE", doc.title}, {"DOCUMENT", doc.body}});
    parsed[i] = parse_extraction(client.complete(prompt, params).text);
    if (parsed[i].items.empty()) throw ParseFailure("no parseable lines in the response for document " + doc.id);
  });

  ExtractionResult result;
  std::set<std::string> reported;
  auto add = [&](const std::string& label, const std::string& provenance) {
    std::string id = kg.add_concept(label, provenance);
    if (reported.insert(id).second) result.concepts.push_back(*kg.find_concept(id));
    return id;
  };
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::string provenance = "corpus:" + docs[i].id;
    for (const ParsedItem& item : parsed[i].items) {
      std::string head = add(item.head, provenance);
      if (!item.relation) continue;
      std::string tail = add(item.tail, provenance);
      odkg::ConceptTriple triple{head, *item.relation, tail};
      kg.upsert_triple(triple);
      result.triples.push_back(triple);
    }
    for (auto& r : parsed[i].rejected) result.rejected_lines.push_back(std::move(r));
  }
  return result;
}

CrossLayerResult map_cross_layer(const std::vector<std::string>& symbols, const odkg::OdKg& kg,
                                 llm::CompletionClient& client, const llm::TemplateSet& templates,
                                 const BuilderOptions& options) {
  CrossLayerResult result;
  if (symbols.empty()) return result;
  if (kg.concept_entities().empty()) throw PreconditionError("concept layer is empty");

  std::vector<std::string> unique;
  std::set<std::string> seen;
  for (const auto& s : symbols) {
    if (kg.find_instance(s) == nullptr) throw UnknownEntity(s);
    if (seen.insert(s).second) unique.push_back(s);
  }

  std::vector<std::string> labels;
  for (const auto& [id, c] : kg.concept_entities()) labels.push_back(c.label);
  std::sort(labels.begin(), labels.end());
  std::string concept_list;
  for (const auto& l : labels) concept_list += "- " + l + "\n";

  llm::CompletionParams params = options.params;
  params.kind = "cross_layer";
  const std::size_t batch = std::clamp<std::size_t>(options.link_batch_size, 1, 9);

  for (std::size_t begin = 0; begin < unique.size(); begin += batch) {
    std::size_t end = std::min(unique.size(), begin + batch);
    std::set<std::string> members(unique.begin() + static_cast<std::ptrdiff_t>(begin),
                                  unique.begin() + static_cast<std::ptrdiff_t>(end));
    std::string configs;
    for (std::size_t i = begin; i < end; ++i) configs += "- " + kg.find_instance(unique[i])->description + "\n";

    std::string prompt = templates.render("cross_layer", {{"CONFIGS", configs}, {"CONCEPTS", concept_list}});
    ++result.calls;
    auto response = client.complete(prompt, params).text;

    for (const auto& line : llm::response_lines(response)) {
      auto fields = llm::parse_tuple_line(line);
      if (!fields || fields->size() < 2 || fields->size() > 3) {
        result.rejected_lines.push_back({line, "not a link tuple"});
        continue;
      }
      if (fields->size() == 3 && text::to_lower((*fields)[1]) != odkg::kRelatedTo) {
        result.rejected_lines.push_back({line, "relation must be related_to"});
        continue;
      }
      std::string symbol = upper_symbol(fields->front());
      const std::string& label = fields->back();
      if (members.count(symbol) == 0) {
        result.rejected_lines.push_back({line, "option " + symbol + " is not part of this batch"});
        continue;
      }
      if (const odkg::ConceptEntity* c = kg.find_concept_by_label(label)) {
        result.links.insert({symbol, c->id});
      } else {
        result.unresolved.push_back({symbol, label});
      }
    }
  }
  return result;
}

}  // namespace byos::builder
