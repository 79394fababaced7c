#include <cmath>

#include "byos/error.hpp"
#include "byos/reasoner/reasoner.hpp"

namespace byos::reasoner {

void ScoringParams::validate() const {
  for (const auto& [relation, sigma] : relation_strength) {
    if (!(sigma > 0.0 && sigma <= 1.0)) throw ConfigError("relation strength for " + relation + " must be in (0, 1]");
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("threshold must be in (0, 1]");
  if (max_hops < 1) throw ConfigError("max_hops must be at least 1");
}

double node_importance(std::string_view node, const odkg::OdKg& kg, NodeImportance mode) {
  if (mode == NodeImportance::Uniform) return 1.0;
  const double degree = static_cast<double>(kg.degree(node));
  const double omega = 1.0 / (1.0 + std::log(1.0 + degree));
  return omega > 1.0 ? 1.0 : omega;
}

double score_path(const ReasoningPath& path, const ScoringParams& params, const odkg::OdKg& kg) {
  double score = 1.0;
  for (const PathStep& step : path.steps) {
    auto it = params.relation_strength.find(step.relation);
    if (it == params.relation_strength.end()) throw UnknownRelation(step.relation);
    score *= it->second * node_importance(step.node, kg, params.node_importance);
  }
  return score;
}

}  // namespace byos::reasoner
