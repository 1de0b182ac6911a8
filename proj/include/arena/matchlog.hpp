#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "arena/evolve.hpp"

namespace arena {

inline constexpr const char* kLogVersion = "1";

json match_to_json(const MatchResult& result);
// Throws kSchemaVersionMismatch for other versions, kMissingField or
// kUnknownEnum for malformed content.
MatchResult match_from_json(const json& doc);

void write_match(const MatchResult& result, const std::filesystem::path& path);
MatchResult read_match(const std::filesystem::path& path);

struct Divergence {
  int round = 0;  // 0 for match-level fields
  std::string field;
  std::string expected;
  std::string recorded;
};

struct ReplayReport {
  std::vector<Divergence> divergences;
  double score_a = 0.0;  // recomputed
  double score_b = 0.0;
  Termination termination = Termination::kMaxRounds;
  std::vector<EvolutionAction> actions;

  bool ok() const { return divergences.empty(); }
  std::string to_text() const;
};

// Recomputes scores, transitions, stop decisions and the (depth, width)
// progression from the recorded verdicts and compares them with the log.
ReplayReport replay(const MatchResult& log, const MatchConfig& config = {});

struct DiagnosticsSummary {
  std::size_t matches = 0;
  std::size_t rounds = 0;
  std::map<std::string, double> verdict_distribution;  // MUCH_BETTER, BETTER, TIE
  std::map<std::string, double> failure_distribution;  // losers only: DEEP, WIDE, BOTH, NONE
  std::map<int, std::size_t> depth_histogram;
  std::map<int, std::size_t> width_histogram;
  std::vector<int> rounds_per_match;

  json to_json() const;
  std::string to_text() const;
};

DiagnosticsSummary summarize(const std::vector<MatchResult>& logs);

// Every *.json match log under `dir`, in path order.
std::vector<std::filesystem::path> list_logs(const std::filesystem::path& dir);

// Human-readable round-by-round trace.
std::string format_trace(const MatchResult& result);

}  // namespace arena
