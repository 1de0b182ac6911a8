#include "arena/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "arena/error.hpp"
#include "fmt/format.h"
#include "spdlog/spdlog.h"

namespace arena {
namespace {

constexpr std::uint64_t kStateStream = 0x57a7e;
constexpr std::uint64_t kAgentStreamA = 0xa;
constexpr std::uint64_t kAgentStreamB = 0xb;

}  // namespace

std::string_view to_string(EvolutionAction action) {
  switch (action) {
    case EvolutionAction::kPressureTest: return "PRESSURE_TEST";
    case EvolutionAction::kBacktrack: return "BACKTRACK";
    case EvolutionAction::kProbeDepth: return "PROBE_DEPTH";
    case EvolutionAction::kProbeWidth: return "PROBE_WIDTH";
    case EvolutionAction::kTerminal: return "TERMINAL";
  }
  return "?";
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::kScoreGap: return "SCORE_GAP";
    case Termination::kMaxRounds: return "MAX_ROUNDS";
    case Termination::kTreeExhausted: return "TREE_EXHAUSTED";
  }
  return "?";
}

std::string_view to_string(Winner winner) {
  switch (winner) {
    case Winner::kA: return "A";
    case Winner::kB: return "B";
    case Winner::kDraw: return "DRAW";
  }
  return "?";
}

EvolutionAction action_from_string(std::string_view text) {
  for (auto a : {EvolutionAction::kPressureTest, EvolutionAction::kBacktrack,
                 EvolutionAction::kProbeDepth, EvolutionAction::kProbeWidth,
                 EvolutionAction::kTerminal})
    if (to_string(a) == text) return a;
  throw Error(ErrorCode::kUnknownEnum, "unknown action '" + std::string(text) + "'");
}

Termination termination_from_string(std::string_view text) {
  for (auto t : {Termination::kScoreGap, Termination::kMaxRounds, Termination::kTreeExhausted})
    if (to_string(t) == text) return t;
  throw Error(ErrorCode::kUnknownEnum, "unknown termination '" + std::string(text) + "'");
}

Winner winner_from_string(std::string_view text) {
  for (auto w : {Winner::kA, Winner::kB, Winner::kDraw})
    if (to_string(w) == text) return w;
  throw Error(ErrorCode::kUnknownEnum, "unknown winner '" + std::string(text) + "'");
}

void MatchConfig::validate() const {
  if (!(threshold > 0)) throw Error(ErrorCode::kConfigError, "threshold must be positive");
  if (max_rounds < 1) throw Error(ErrorCode::kConfigError, "max rounds must be >= 1");
  if (width_cap < 2) throw Error(ErrorCode::kConfigError, "width cap must be >= 2");
}

Winner winner_for(double score_a, double score_b) {
  if (score_a > score_b) return Winner::kA;
  if (score_b > score_a) return Winner::kB;
  return Winner::kDraw;
}

EvolutionAction transition(const Verdict& verdict) {
  if (verdict.is_tie())
    return verdict.tie_quality == TieQuality::kLow ? EvolutionAction::kBacktrack
                                                   : EvolutionAction::kPressureTest;
  switch (verdict.loser_failure_type) {
    case FailureType::kDeep: return EvolutionAction::kProbeDepth;
    case FailureType::kWide: return EvolutionAction::kProbeWidth;
    case FailureType::kBoth:
    case FailureType::kNone: return EvolutionAction::kPressureTest;
  }
  return EvolutionAction::kPressureTest;
}

int next_width(int width, EvolutionAction action, int cap) {
  switch (action) {
    case EvolutionAction::kPressureTest:
    case EvolutionAction::kProbeWidth: return std::min(cap, width + 1);
    case EvolutionAction::kBacktrack: return std::max(2, width - 1);
    case EvolutionAction::kProbeDepth:
    case EvolutionAction::kTerminal: return width;
  }
  return width;
}

TreePath attempt_descend(InfoTree& tree, const TreePath& path, Crawler& crawler, Rng& rng) {
  const NodeId focal = path.focal();
  if (tree.is_leaf(focal)) crawler.expand_depth(tree, focal);
  const auto& kids = tree.children(focal);
  if (kids.empty()) return path;
  TreePath next = path;
  next.nodes.push_back(kids[rng.index(kids.size())]);
  return next;
}

void apply_action(MatchState& state, EvolutionAction action, InfoTree& tree,
                  Crawler& crawler, Rng& rng, int width_cap) {
  switch (action) {
    case EvolutionAction::kPressureTest:
      state.width = next_width(state.width, action, width_cap);
      state.path = attempt_descend(tree, state.path, crawler, rng);
      break;
    case EvolutionAction::kBacktrack:
      state.width = next_width(state.width, action, width_cap);
      if (state.path.depth() >= 2) {
        state.path.nodes.pop_back();
      } else {
        state.path = tree.random_start(rng);
      }
      break;
    case EvolutionAction::kProbeDepth: {
      TreePath next = attempt_descend(tree, state.path, crawler, rng);
      if (next == state.path) {
        state.width = next_width(state.width, EvolutionAction::kProbeWidth, width_cap);
      } else {
        state.path = std::move(next);
      }
      break;
    }
    case EvolutionAction::kProbeWidth:
      state.width = next_width(state.width, action, width_cap);
      break;
    case EvolutionAction::kTerminal:
      break;
  }
}

std::optional<Termination> should_stop(const MatchState& state, const MatchConfig& config) {
  if (std::abs(state.score_a - state.score_b) >= config.threshold) return Termination::kScoreGap;
  if (state.round >= config.max_rounds) return Termination::kMaxRounds;
  return std::nullopt;
}

MatchResult run_match(Agent& agent_a, Agent& agent_b, ChatClient& examiner,
                      InfoTree& tree, Crawler& crawler, const MatchConfig& config) {
  config.validate();
  MatchResult result;
  result.topic = tree.topic();
  result.agent_a = agent_a.name();
  result.agent_b = agent_b.name();
  result.seed = config.seed;

  Rng rng(derive_seed(config.seed, {kStateStream}));
  MatchState state;
  state.path = tree.random_start(rng);

  std::optional<Termination> stop;
  while (!(stop = should_stop(state, config))) {
    RoundRecord record;
    record.round = state.round + 1;
    record.depth = state.path.depth();
    record.width = state.width;
    try {
      record.task = generate_task(examiner, tree, state.path, state.width, crawler, config.taskgen);
      Rng rng_a(derive_seed(config.seed, {static_cast<std::uint64_t>(record.round), kAgentStreamA}));
      Rng rng_b(derive_seed(config.seed, {static_cast<std::uint64_t>(record.round), kAgentStreamB}));
      if (config.parallel_agents) {
        auto fa = std::async(std::launch::async, [&] { return agent_a.respond(record.task, rng_a); });
        record.response_b = agent_b.respond(record.task, rng_b);
        record.response_a = fa.get();
      } else {
        record.response_a = agent_a.respond(record.task, rng_a);
        record.response_b = agent_b.respond(record.task, rng_b);
      }
      JudgeOptions judge_options = config.judge;
      if (config.randomize_order)
        judge_options.order = rng.bernoulli(0.5) ? OrderPolicy::kSwapped : OrderPolicy::kFixed;
      record.swapped = judge_options.order == OrderPolicy::kSwapped;
      record.verdict = judge(examiner, record.task, record.response_a, record.response_b,
                             judge_options);
    } catch (const Error& e) {
      spdlog::warn("match on '{}' stopped in round {}: {}", result.topic, record.round, e.what());
      result.error = fmt::format("round {}: {}", record.round, e.what());
      stop = Termination::kTreeExhausted;
      break;
    }

    const auto [da, db] = score_delta(record.verdict);
    state.score_a += da;
    state.score_b += db;
    state.round += 1;
    record.score_a = state.score_a;
    record.score_b = state.score_b;
    if (should_stop(state, config)) {
      record.action = EvolutionAction::kTerminal;
    } else {
      record.action = transition(record.verdict);
      apply_action(state, record.action, tree, crawler, rng, config.width_cap);
    }
    result.rounds.push_back(std::move(record));
  }

  result.score_a = state.score_a;
  result.score_b = state.score_b;
  result.winner = winner_for(state.score_a, state.score_b);
  result.termination = *stop;
  return result;
}

}  // namespace arena
