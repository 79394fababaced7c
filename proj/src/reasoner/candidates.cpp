#include <algorithm>
#include <cstdio>
#include <limits>
#include <queue>
#include <sstream>

#include "byos/error.hpp"
#include "byos/reasoner/reasoner.hpp"

namespace byos::reasoner {

namespace {

struct Label {
  std::string node;
  std::size_t parent;  // index into the arena, npos for a start
  PathStep step;
  double score;
  int hops;
};

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

ReasoningPath reconstruct(const std::vector<Label>& arena, std::size_t index) {
  ReasoningPath path;
  path.score = arena[index].score;
  std::vector<PathStep> reversed;
  while (arena[index].parent != kNone) {
    reversed.push_back(arena[index].step);
    index = arena[index].parent;
  }
  path.start = arena[index].node;
  path.steps.assign(reversed.rbegin(), reversed.rend());
  return path;
}

bool on_path(const std::vector<Label>& arena, std::size_t index, const std::string& node) {
  for (; index != kNone; index = arena[index].parent) {
    if (arena[index].node == node) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> CandidateSet::ranked() const {
  std::vector<std::string> out(options.begin(), options.end());
  std::stable_sort(out.begin(), out.end(), [this](const std::string& a, const std::string& b) {
    return witness.at(a).score > witness.at(b).score;
  });
  return out;
}

CandidateSet extract_candidates(const std::set<std::string>& concepts, const odkg::OdKg& kg,
                                const ScoringParams& params) {
  params.validate();
  CandidateSet result;

  // Label-setting search over (score, hops): labels leave the queue in
  // descending score order, so a label is dominated exactly when its node was
  // already settled with no more hops.
  std::vector<Label> arena;
  auto worse = [&arena](std::size_t a, std::size_t b) {
    if (arena[a].score != arena[b].score) return arena[a].score < arena[b].score;
    if (arena[a].hops != arena[b].hops) return arena[a].hops > arena[b].hops;
    return a > b;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> queue(worse);
  std::map<std::string, int, std::less<>> settled_hops;

  for (const auto& start : concepts) {
    if (!kg.contains(start)) throw UnknownEntity(start);
    arena.push_back({start, kNone, {}, 1.0, 0});
    queue.push(arena.size() - 1);
  }

  while (!queue.empty()) {
    const std::size_t index = queue.top();
    queue.pop();
    const Label current = arena[index];
    auto settled = settled_hops.find(current.node);
    if (settled != settled_hops.end() && settled->second <= current.hops) continue;
    const bool first_visit = settled == settled_hops.end();
    settled_hops[current.node] = current.hops;

    if (first_visit && !odkg::is_concept_id(current.node)) {
      result.options.insert(current.node);
      result.witness.emplace(current.node, reconstruct(arena, index));
    }
    if (current.hops >= params.max_hops) continue;

    auto neighbors = kg.neighbors(current.node, odkg::Direction::Both);
    std::sort(neighbors.begin(), neighbors.end(), [](const odkg::Neighbor& a, const odkg::Neighbor& b) {
      if (a.node != b.node) return a.node < b.node;
      if (a.relation != b.relation) return a.relation < b.relation;
      return a.outgoing > b.outgoing;
    });
    for (const odkg::Neighbor& n : neighbors) {
      auto sigma = params.relation_strength.find(n.relation);
      if (sigma == params.relation_strength.end()) throw UnknownRelation(n.relation);
      const double score = current.score * (sigma->second * node_importance(n.node, kg, params.node_importance));
      const int hops = current.hops + 1;
      if (score < params.threshold) continue;
      if (auto s = settled_hops.find(n.node); s != settled_hops.end() && s->second <= hops) continue;
      if (on_path(arena, index, n.node)) continue;
      arena.push_back({n.node, index, {n.relation, n.node, n.outgoing}, score, hops});
      queue.push(arena.size() - 1);
    }
  }
  return result;
}

std::string format_path(const ReasoningPath& path, const odkg::OdKg& kg) {
  auto display = [&kg](const std::string& node) {
    if (const odkg::ConceptEntity* c = kg.find_concept(node)) return "\"" + c->label + "\"";
    return node;
  };
  std::string out = display(path.start);
  for (const PathStep& step : path.steps) {
    out += step.forward ? " -" + step.relation + "-> " : " <-" + step.relation + "- ";
    out += display(step.node);
  }
  return out;
}

std::string export_candidates(const CandidateSet& candidates, const odkg::OdKg& kg) {
  std::ostringstream out;
  for (const auto& symbol : candidates.options) {
    const ReasoningPath& path = candidates.witness.at(symbol);
    char score[32];
    std::snprintf(score, sizeof score, "%.12g", path.score);
    out << symbol << '\t' << score << '\t' << format_path(path, kg) << '\n';
  }
  return out.str();
}

}  // namespace byos::reasoner
