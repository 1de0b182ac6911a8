#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "arena/adjudicate.hpp"
#include "arena/agents.hpp"
#include "arena/chat.hpp"
#include "arena/evolve.hpp"
#include "arena/fixture_web.hpp"
#include "arena/infotree.hpp"
#include "arena/rng.hpp"

namespace arena::fx {

std::filesystem::path fixture(const std::string& relative);

FixtureWeb handheld_web();

// Compares `actual` with fixtures/golden/<name>. Returns "" on a match, else
// a short description of the first difference. With ARENA_UPDATE_GOLDEN set
// in the environment the file is rewritten instead.
std::string golden_mismatch(const std::string& name, const std::string& actual);

// Root -> one hub at depth 1 -> `leaves` same-relation children at depth 2.
// No page is fetchable, so the tree never grows during a match.
InfoTree flat_tree(int leaves, const std::string& topic = "Handheld game console");

// A well-formed examiner task reply.
std::string task_reply(const std::string& question =
                           "Which portable systems from the early nineties fit the clues?",
                       std::vector<std::string> depth = {"Identifies the 8-bit console"},
                       std::vector<std::string> width = {"Launch price", "Battery count"});

std::string verdict_reply(const std::string& outcome, const std::string& tie_quality = "N/A",
                          const std::string& failure = "NONE",
                          const std::string& reasoning = "scripted");

// The five recorded verdicts of the handheld-console trace, with the
// failure types stated there (rounds 1 and 3 give none).
std::vector<std::string> recorded_trace_verdicts();

// Examiner replaying the trace: task reply, verdict, task reply, ...
std::shared_ptr<ScriptedChatClient> trace_examiner();

// Runs the trace end to end on flat_tree(6) with scripted agents.
MatchResult run_trace_match(std::uint64_t seed = 7);

// Random expand_width / expand_depth sequences on the handheld corpus and
// on synthetic sites. Returns the first broken tree invariant, or "".
std::string random_expansion_check(int sequences, std::uint64_t seed);

// Drives the evolvement state machine with random verdicts and runs
// simulated matches; checks width bounds and path validity at every
// state. Returns the first violation, or "".
std::string random_match_state_check(int matches, std::uint64_t seed);

// One random single-field mutation of `log`, restricted to the fields that
// replay() recomputes (round counters, depth/width, paths, citation counts,
// verdict fields that change scores or the next action, scores, action,
// final block). `what` names the mutation.
MatchResult mutate_log(const MatchResult& log, Rng& rng, std::string& what);

// Applies `mutations` random mutations across `logs` and replays each one.
// Returns the first mutation replay() missed, or "".
std::string replay_mutation_check(const std::vector<MatchResult>& logs, int mutations,
                                  std::uint64_t seed);

AgentProfile profile(const std::string& name, double p_deep, double p_wide);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace arena::fx
