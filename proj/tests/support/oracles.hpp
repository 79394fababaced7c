#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "byos/odkg/odkg.hpp"
#include "byos/reasoner/reasoner.hpp"

namespace byos::testing {

/// Bool-only fixture with its constraints restated by hand, so that validity
/// can be decided without the library's parser or evaluator.
using BoolEnv = std::map<std::string, bool>;

struct OracleOption {
  std::string name;
  std::function<bool(const BoolEnv&)> dep;
};

struct OracleSelect {
  std::string head;
  std::string target;
  std::function<bool(const BoolEnv&)> guard;
};

struct Def2Fixture {
  std::string name;
  std::string kconfig;
  std::vector<OracleOption> options;
  std::vector<OracleSelect> selects;
  std::vector<std::vector<std::string>> choices;
};

/// The fixtures' options enabled = y, otherwise n. Valid iff every enabled
/// option's dependency holds, every active select's target is enabled, and
/// no choice has two enabled members.
bool def2_valid(const Def2Fixture& fixture, const BoolEnv& env);

std::vector<Def2Fixture> def2_fixtures();

/// Best score per instance node over all simple paths of at most
/// params.max_hops edges from any start, edges taken in either direction;
/// nodes whose best score is below the threshold are dropped.
std::map<std::string, double> exhaustive_path_scores(const odkg::OdKg& kg, const std::set<std::string>& starts,
                                                     const reasoner::ScoringParams& params);

}  // namespace byos::testing
