#include "byos/builder/retrieval.hpp"

#include <algorithm>
#include <set>

#include "byos/kconfig/text.hpp"

namespace byos::builder {

namespace {

const std::set<std::string, std::less<>>& stopwords() {
  static const std::set<std::string, std::less<>> kWords = {
      "a",  "an",  "and", "are", "as",   "at",   "be",   "by",   "for", "from", "in",   "is",  "it",
      "of", "on",  "or",  "the", "this", "that", "to",   "with", "i",   "my",   "want", "os",  "config",
      "description", "y",  "n",   "m"};
  return kWords;
}

std::vector<std::string> content_words(std::string_view text) {
  std::vector<std::string> words;
  for (auto& w : text::word_tokens(text)) {
    if (stopwords().count(w) == 0) words.push_back(std::move(w));
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

}  // namespace

void KeywordRetriever::add(std::string id, std::string text) {
  Item item{std::move(id), std::move(text), {}};
  item.words = content_words(item.text);
  items_.push_back(std::move(item));
}

void KeywordRetriever::add_graph(const odkg::OdKg& kg) {
  for (const auto& [symbol, e] : kg.instance_entities()) add("option:" + symbol, e.description);
  for (const auto& [id, c] : kg.concept_entities()) add("concept:" + c.label, c.label);
}

std::vector<RetrievedItem> KeywordRetriever::top_k(std::string_view query, std::size_t k) const {
  const auto q = content_words(query);
  std::vector<RetrievedItem> scored;
  for (const Item& item : items_) {
    std::size_t overlap = 0;
    auto a = q.begin();
    auto b = item.words.begin();
    while (a != q.end() && b != item.words.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++overlap;
        ++a;
        ++b;
      }
    }
    if (overlap > 0) scored.push_back({item.id, item.text, overlap});
  }
  std::sort(scored.begin(), scored.end(), [](const RetrievedItem& x, const RetrievedItem& y) {
    if (x.overlap != y.overlap) return x.overlap > y.overlap;
    return x.id < y.id;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

}  // namespace byos::builder
