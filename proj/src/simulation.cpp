#include "arena/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "arena/error.hpp"
#include "arena/sim_examiner.hpp"
#include "fmt/format.h"

namespace arena {

double profile_skill(const AgentProfile& profile) {
  return (profile.p_deep + profile.p_wide) / 2.0;
}

SimulationReport simulate(const std::vector<AgentProfile>& profiles,
                          const SimulationOptions& options) {
  if (profiles.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two profiles");
  if (options.trees < 1) throw Error(ErrorCode::kConfigError, "trees must be >= 1");

  std::vector<TournamentPlayer> players;
  for (const auto& p : profiles) players.push_back({p.name, std::make_shared<ScriptedAgent>(p)});
  SimulatedExaminer examiner;
  SyntheticTreeSource trees(static_cast<std::size_t>(options.trees), options.seed);
  TournamentConfig config;
  config.rounds = options.rounds;
  config.trees_per_pairing = options.trees;
  config.seed = options.seed;
  config.jobs = options.jobs;
  config.match = options.match;

  SimulationReport report;
  report.tournament = run_tournament(players, examiner, trees, config);

  std::map<std::pair<int, std::size_t>, EfficiencyPoint> points;
  for (const auto& m : report.tournament.matches) {
    auto& pt = points[{m.round, m.pairing}];
    pt.round = m.round;
    pt.agent_a = profiles[m.player_a].name;
    pt.agent_b = profiles[m.player_b].name;
    pt.skill_gap = std::abs(profile_skill(profiles[m.player_a]) - profile_skill(profiles[m.player_b]));
    pt.mean_rounds += static_cast<double>(m.result.rounds.size());
    ++pt.matches;
  }
  std::vector<double> gaps, lengths;
  for (auto& [key, pt] : points) {
    pt.mean_rounds /= static_cast<double>(pt.matches);
    gaps.push_back(pt.skill_gap);
    lengths.push_back(pt.mean_rounds);
    report.efficiency.push_back(pt);
  }
  try {
    report.gap_vs_rounds = pearson(gaps, lengths);
  } catch (const Error&) {
    report.gap_vs_rounds.reset();
  }

  std::vector<double> skill, rating;
  for (const auto& p : profiles) {
    skill.push_back(profile_skill(p));
    const auto& board = report.tournament.leaderboard.players;
    const auto it = std::find_if(board.begin(), board.end(),
                                 [&](const auto& e) { return e.name == p.name; });
    rating.push_back(it->bt_rating);
  }
  try {
    report.ranking_spearman = spearman(skill, rating);
  } catch (const Error&) {
    report.ranking_spearman = 0.0;
  }
  report.order_recovered = true;
  for (std::size_t i = 0; i < profiles.size(); ++i)
    for (std::size_t j = 0; j < profiles.size(); ++j)
      if (skill[i] > skill[j] && !(rating[i] > rating[j])) report.order_recovered = false;
  return report;
}

json SimulationReport::to_json() const {
  json points = json::array();
  for (const auto& p : efficiency) {
    points.push_back({{"round", p.round},
                      {"agent_a", p.agent_a},
                      {"agent_b", p.agent_b},
                      {"skill_gap", p.skill_gap},
                      {"mean_rounds", p.mean_rounds},
                      {"matches", p.matches}});
  }
  json doc = {{"leaderboard", tournament.leaderboard.to_json()},
              {"efficiency", points},
              {"ranking_spearman", ranking_spearman},
              {"order_recovered", order_recovered},
              {"warnings", tournament.warnings}};
  if (gap_vs_rounds) {
    doc["gap_vs_rounds"] = {{"pearson", gap_vs_rounds->r}};
    if (!std::isnan(gap_vs_rounds->p_value)) doc["gap_vs_rounds"]["p_value"] = gap_vs_rounds->p_value;
  } else {
    doc["gap_vs_rounds"] = nullptr;
  }
  return doc;
}

std::string SimulationReport::to_text() const {
  std::string out = tournament.leaderboard.to_text();
  out += fmt::format("\nranking spearman vs ground truth: {:.4f} ({})\n", ranking_spearman,
                     order_recovered ? "order recovered" : "order not recovered");
  out += "\nefficiency (skill gap vs match length):\n";
  for (const auto& p : efficiency) {
    out += fmt::format("  round {} {} vs {}: gap {:.3f}, mean rounds {:.2f}\n", p.round, p.agent_a,
                       p.agent_b, p.skill_gap, p.mean_rounds);
  }
  if (gap_vs_rounds) {
    out += fmt::format("pearson(gap, rounds) = {:.4f}", gap_vs_rounds->r);
    if (!std::isnan(gap_vs_rounds->p_value)) out += fmt::format(" (p = {:.4f})", gap_vs_rounds->p_value);
    out += "\n";
  } else {
    out += "pearson(gap, rounds) undefined (constant input)\n";
  }
  return out;
}

}  // namespace arena
