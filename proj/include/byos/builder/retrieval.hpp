#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "byos/odkg/odkg.hpp"

namespace byos::builder {

struct RetrievedItem {
  std::string id;
  std::string text;
  std::size_t overlap = 0;
};

/// Keyword-overlap ranking over corpus documents and graph descriptions.
/// Score is the number of distinct query words present in the item; ties
/// are broken by id.
class KeywordRetriever {
 public:
  void add(std::string id, std::string text);
  void add_graph(const odkg::OdKg& kg);

  std::vector<RetrievedItem> top_k(std::string_view query, std::size_t k = 5) const;
  std::size_t size() const { return items_.size(); }

 private:
  struct Item {
    std::string id;
    std::string text;
    std::vector<std::string> words;  // sorted, unique
  };
  std::vector<Item> items_;
};

}  // namespace byos::builder
