#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arena/adjudicate.hpp"
#include "arena/agents.hpp"
#include "arena/crawler.hpp"
#include "arena/infotree.hpp"
#include "arena/taskgen.hpp"

namespace arena {

enum class EvolutionAction { kPressureTest, kBacktrack, kProbeDepth, kProbeWidth, kTerminal };
enum class Termination { kScoreGap, kMaxRounds, kTreeExhausted };
enum class Winner { kA, kB, kDraw };

std::string_view to_string(EvolutionAction action);  // PRESSURE_TEST ...
std::string_view to_string(Termination termination);  // SCORE_GAP ...
std::string_view to_string(Winner winner);            // A, B, DRAW
EvolutionAction action_from_string(std::string_view text);
Termination termination_from_string(std::string_view text);
Winner winner_from_string(std::string_view text);

struct MatchConfig {
  double threshold = 2.0;
  int max_rounds = 5;
  int width_cap = 8;
  std::uint64_t seed = 0;
  bool parallel_agents = false;
  bool randomize_order = false;  // judge presentation order drawn per round
  TaskGenOptions taskgen;
  JudgeOptions judge;

  void validate() const;
};

struct MatchState {
  TreePath path;
  int width = 2;
  double score_a = 0.0;
  double score_b = 0.0;
  int round = 0;
};

struct RoundRecord {
  int round = 0;  // 1-based
  int depth = 0;
  int width = 2;
  Task task;
  AgentResponse response_a;
  AgentResponse response_b;
  Verdict verdict;
  EvolutionAction action = EvolutionAction::kTerminal;
  double score_a = 0.0;  // cumulative, after this round
  double score_b = 0.0;
  bool swapped = false;

  bool operator==(const RoundRecord&) const = default;
};

struct MatchResult {
  std::string topic;
  std::string agent_a;
  std::string agent_b;
  std::vector<RoundRecord> rounds;
  double score_a = 0.0;
  double score_b = 0.0;
  Winner winner = Winner::kDraw;
  Termination termination = Termination::kMaxRounds;
  std::string error;  // set when termination is kTreeExhausted
  std::uint64_t seed = 0;

  bool operator==(const MatchResult&) const = default;
};

Winner winner_for(double score_a, double score_b);

EvolutionAction transition(const Verdict& verdict);

int next_width(int width, EvolutionAction action, int cap);

// Descends to a uniformly chosen child, expanding a leaf first. Returns the
// path unchanged when the focal node has no reachable children.
TreePath attempt_descend(InfoTree& tree, const TreePath& path, Crawler& crawler, Rng& rng);

// Applies the action's effect on path and width. A depth probe that cannot
// descend widens instead; a backtrack that would leave a focal node at the
// root re-seeds the path.
void apply_action(MatchState& state, EvolutionAction action, InfoTree& tree,
                  Crawler& crawler, Rng& rng, int width_cap);

std::optional<Termination> should_stop(const MatchState& state, const MatchConfig& config);

// Runs one adaptive match. All randomness derives from config.seed.
MatchResult run_match(Agent& agent_a, Agent& agent_b, ChatClient& examiner,
                      InfoTree& tree, Crawler& crawler, const MatchConfig& config);

}  // namespace arena
