#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arena/agents.hpp"
#include "arena/rating.hpp"
#include "arena/tournament.hpp"

namespace arena {

// Ground-truth skill of a simulated agent: mean of its recall rates.
double profile_skill(const AgentProfile& profile);

struct SimulationOptions {
  int rounds = 4;
  int trees = 30;
  std::uint64_t seed = 0;
  int jobs = 1;
  MatchConfig match;
};

// One Swiss pairing: how far apart the two profiles are and how long their
// matches ran on average.
struct EfficiencyPoint {
  int round = 0;
  std::string agent_a;
  std::string agent_b;
  double skill_gap = 0.0;  // |skill(a) - skill(b)|
  double mean_rounds = 0.0;
  std::size_t matches = 0;
};

struct SimulationReport {
  TournamentResult tournament;
  std::vector<EfficiencyPoint> efficiency;
  std::optional<PearsonResult> gap_vs_rounds;  // absent when degenerate
  double ranking_spearman = 0.0;  // BT rating vs ground-truth skill
  bool order_recovered = false;   // BT order equals skill order exactly

  json to_json() const;
  std::string to_text() const;
};

// Runs a Swiss tournament between scripted agents judged by the simulated
// examiner on synthetic trees.
SimulationReport simulate(const std::vector<AgentProfile>& profiles,
                          const SimulationOptions& options);

}  // namespace arena
