#include "arena/matchlog.hpp"

#include <algorithm>
#include <cmath>

#include "arena/error.hpp"
#include "fmt/format.h"

namespace arena {
namespace {

json round_to_json(const RoundRecord& r) {
  return {{"round", r.round},
          {"depth", r.depth},
          {"width", r.width},
          {"task", r.task.to_json()},
          {"response_a", r.response_a.to_json()},
          {"response_b", r.response_b.to_json()},
          {"verdict", r.verdict.to_json()},
          {"action", std::string(to_string(r.action))},
          {"score_a", r.score_a},
          {"score_b", r.score_b},
          {"swapped", r.swapped}};
}

RoundRecord round_from_json(const json& doc) {
  RoundRecord r;
  r.round = doc.at("round").get<int>();
  r.depth = doc.at("depth").get<int>();
  r.width = doc.at("width").get<int>();
  r.task = Task::from_json(doc.at("task"));
  r.response_a = AgentResponse::from_json(doc.at("response_a"));
  r.response_b = AgentResponse::from_json(doc.at("response_b"));
  const json& v = doc.at("verdict");
  r.verdict.outcome = outcome_from_string(v.at("verdict").get<std::string>());
  r.verdict.tie_quality = tie_quality_from_string(v.at("tie_quality").get<std::string>());
  r.verdict.loser_failure_type =
      failure_type_from_string(v.at("loser_failure_type").get<std::string>());
  r.verdict.reasoning = v.value("reasoning", "");
  r.action = action_from_string(doc.at("action").get<std::string>());
  r.score_a = doc.at("score_a").get<double>();
  r.score_b = doc.at("score_b").get<double>();
  r.swapped = doc.value("swapped", false);
  return r;
}

std::string num(double v) { return fmt::format("{:.4f}", v); }

std::string path_text(const TreePath& p) {
  std::string out;
  for (NodeId id : p.nodes) out += (out.empty() ? "" : "/") + std::to_string(to_int(id));
  return out;
}

bool extends_by_one(const TreePath& next, const TreePath& path) {
  return next.nodes.size() == path.nodes.size() + 1 &&
         std::equal(path.nodes.begin(), path.nodes.end(), next.nodes.begin());
}

std::string tier_of(Outcome o) {
  switch (o) {
    case Outcome::kAMuchBetter:
    case Outcome::kBMuchBetter: return "MUCH_BETTER";
    case Outcome::kABetter:
    case Outcome::kBBetter: return "BETTER";
    case Outcome::kTie: return "TIE";
  }
  return "TIE";
}

std::string clip(const std::string& s, std::size_t n) {
  std::string one_line = s;
  std::replace(one_line.begin(), one_line.end(), '\n', ' ');
  if (one_line.size() <= n) return one_line;
  std::size_t cut = n;
  while (cut > 0 && (static_cast<unsigned char>(one_line[cut]) & 0xC0) == 0x80) --cut;
  return one_line.substr(0, cut) + "...";
}

}  // namespace

json match_to_json(const MatchResult& result) {
  json rounds = json::array();
  for (const auto& r : result.rounds) rounds.push_back(round_to_json(r));
  json final_block = {{"score_a", result.score_a},
                      {"score_b", result.score_b},
                      {"winner", std::string(to_string(result.winner))},
                      {"termination", std::string(to_string(result.termination))}};
  if (!result.error.empty()) final_block["error"] = result.error;
  return {{"version", kLogVersion},
          {"topic", result.topic},
          {"agent_a", result.agent_a},
          {"agent_b", result.agent_b},
          {"rounds", rounds},
          {"final", final_block},
          {"seed", result.seed}};
}

MatchResult match_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("version"))
    throw Error(ErrorCode::kMissingField, "match log lacks 'version'");
  const std::string version =
      doc["version"].is_string() ? doc["version"].get<std::string>() : doc["version"].dump();
  if (version != kLogVersion)
    throw Error(ErrorCode::kSchemaVersionMismatch,
                fmt::format("match log version {} is not supported (expected {})", version,
                            kLogVersion));
  try {
    MatchResult m;
    m.topic = doc.at("topic").get<std::string>();
    m.agent_a = doc.at("agent_a").get<std::string>();
    m.agent_b = doc.at("agent_b").get<std::string>();
    for (const auto& r : doc.at("rounds")) m.rounds.push_back(round_from_json(r));
    const json& f = doc.at("final");
    m.score_a = f.at("score_a").get<double>();
    m.score_b = f.at("score_b").get<double>();
    m.winner = winner_from_string(f.at("winner").get<std::string>());
    m.termination = termination_from_string(f.at("termination").get<std::string>());
    m.error = f.value("error", "");
    m.seed = doc.at("seed").get<std::uint64_t>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMissingField, std::string("match log: ") + e.what());
  }
}

void write_match(const MatchResult& result, const std::filesystem::path& path) {
  write_text_file(path, canonical_dump(match_to_json(result)));
}

MatchResult read_match(const std::filesystem::path& path) {
  return match_from_json(read_json_file(path));
}

std::string ReplayReport::to_text() const {
  std::string out = fmt::format("recomputed score {} vs {}, termination {}\n", num(score_a),
                                num(score_b), to_string(termination));
  if (divergences.empty()) return out + "0 divergences\n";
  out += fmt::format("{} divergence(s):\n", divergences.size());
  for (const auto& d : divergences) {
    out += fmt::format("  {}{}: expected {}, recorded {}\n",
                       d.round > 0 ? fmt::format("round {} ", d.round) : std::string(), d.field,
                       d.expected, d.recorded);
  }
  return out;
}

ReplayReport replay(const MatchResult& log, const MatchConfig& config) {
  ReplayReport report;
  auto diverge = [&](int round, std::string field, std::string expected, std::string recorded) {
    report.divergences.push_back({round, std::move(field), std::move(expected), std::move(recorded)});
  };
  auto check_int = [&](int round, const char* field, long long expected, long long recorded) {
    if (expected != recorded) diverge(round, field, std::to_string(expected), std::to_string(recorded));
  };
  auto check_num = [&](int round, const char* field, double expected, double recorded) {
    if (std::abs(expected - recorded) > 1e-9) diverge(round, field, num(expected), num(recorded));
  };

  MatchState state;
  std::optional<Termination> stop;
  for (std::size_t i = 0; i < log.rounds.size(); ++i) {
    const RoundRecord& r = log.rounds[i];
    const int k = static_cast<int>(i) + 1;
    if (stop) {
      diverge(k, "round", "no further rounds", fmt::format("round after {}", to_string(*stop)));
      break;
    }
    check_int(k, "round", k, r.round);
    if (i == 0) check_int(k, "width", 2, r.width);
    check_int(k, "task.depth", r.depth, r.task.depth);
    check_int(k, "task.width", r.width, r.task.width);
    check_int(k, "task.source_path length", r.depth + 1,
              static_cast<long long>(r.task.source_path.nodes.size()));
    if (r.width < 2 || r.width > config.width_cap)
      diverge(k, "width", fmt::format("within [2, {}]", config.width_cap), std::to_string(r.width));
    check_int(k, "response_a.citation_count", count_citations(r.response_a.text),
              r.response_a.citation_count);
    check_int(k, "response_b.citation_count", count_citations(r.response_b.text),
              r.response_b.citation_count);
    try {
      validate(r.verdict);
    } catch (const Error& e) {
      diverge(k, "verdict", "consistent tie/failure fields", e.what());
    }

    const auto [da, db] = score_delta(r.verdict);
    state.score_a += da;
    state.score_b += db;
    state.round = k;
    check_num(k, "score_a", state.score_a, r.score_a);
    check_num(k, "score_b", state.score_b, r.score_b);

    stop = should_stop(state, config);
    const EvolutionAction expected = stop ? EvolutionAction::kTerminal : transition(r.verdict);
    report.actions.push_back(expected);
    if (expected != r.action)
      diverge(k, "action", std::string(to_string(expected)), std::string(to_string(r.action)));

    if (stop || i + 1 >= log.rounds.size()) continue;
    const RoundRecord& next = log.rounds[i + 1];
    const TreePath& path = r.task.source_path;
    const TreePath& next_path = next.task.source_path;
    const int widened = std::min(config.width_cap, r.width + 1);
    switch (expected) {
      case EvolutionAction::kProbeWidth:
        check_int(k + 1, "width", widened, next.width);
        if (next_path != path) diverge(k + 1, "task.source_path", path_text(path), path_text(next_path));
        break;
      case EvolutionAction::kPressureTest:
        check_int(k + 1, "width", widened, next.width);
        if (next_path != path && !extends_by_one(next_path, path))
          diverge(k + 1, "task.source_path", path_text(path) + " or one child deeper",
                  path_text(next_path));
        break;
      case EvolutionAction::kProbeDepth:
        if (extends_by_one(next_path, path)) {
          check_int(k + 1, "width", r.width, next.width);
        } else if (next_path == path) {
          check_int(k + 1, "width", widened, next.width);
        } else {
          diverge(k + 1, "task.source_path", "one child below " + path_text(path),
                  path_text(next_path));
        }
        break;
      case EvolutionAction::kBacktrack: {
        check_int(k + 1, "width", std::max(2, r.width - 1), next.width);
        if (path.nodes.size() >= 3) {
          TreePath parent = path;
          parent.nodes.pop_back();
          if (next_path != parent)
            diverge(k + 1, "task.source_path", path_text(parent), path_text(next_path));
        }
        break;
      }
      case EvolutionAction::kTerminal:
        break;
    }
  }

  report.score_a = state.score_a;
  report.score_b = state.score_b;
  if (!log.error.empty()) {
    report.termination = Termination::kTreeExhausted;
  } else if (stop) {
    report.termination = *stop;
  } else {
    report.termination = Termination::kTreeExhausted;
    diverge(0, "rounds", "a stop condition after the last round",
            fmt::format("{} round(s) without one", log.rounds.size()));
  }
  if (report.termination != log.termination)
    diverge(0, "final.termination", std::string(to_string(report.termination)),
            std::string(to_string(log.termination)));
  check_num(0, "final.score_a", report.score_a, log.score_a);
  check_num(0, "final.score_b", report.score_b, log.score_b);
  const Winner winner = winner_for(report.score_a, report.score_b);
  if (winner != log.winner)
    diverge(0, "final.winner", std::string(to_string(winner)), std::string(to_string(log.winner)));
  return report;
}

json DiagnosticsSummary::to_json() const {
  json depth = json::object(), width = json::object();
  for (const auto& [k, v] : depth_histogram) depth[std::to_string(k)] = v;
  for (const auto& [k, v] : width_histogram) width[std::to_string(k)] = v;
  return {{"matches", matches},
          {"rounds", rounds},
          {"verdict_distribution", verdict_distribution},
          {"failure_distribution", failure_distribution},
          {"depth_histogram", depth},
          {"width_histogram", width},
          {"rounds_per_match", rounds_per_match}};
}

std::string DiagnosticsSummary::to_text() const {
  std::string out = fmt::format("{} matches, {} rounds\n", matches, rounds);
  out += "verdicts:";
  for (const auto& [k, v] : verdict_distribution) out += fmt::format(" {}={:.3f}", k, v);
  out += "\nloser failures:";
  for (const auto& [k, v] : failure_distribution) out += fmt::format(" {}={:.3f}", k, v);
  out += "\ndepth histogram:";
  for (const auto& [k, v] : depth_histogram) out += fmt::format(" {}:{}", k, v);
  out += "\nwidth histogram:";
  for (const auto& [k, v] : width_histogram) out += fmt::format(" {}:{}", k, v);
  double mean = 0;
  for (int r : rounds_per_match) mean += r;
  if (!rounds_per_match.empty()) mean /= static_cast<double>(rounds_per_match.size());
  out += fmt::format("\nmean rounds per match: {:.3f}\n", mean);
  return out;
}

DiagnosticsSummary summarize(const std::vector<MatchResult>& logs) {
  if (logs.empty()) throw Error(ErrorCode::kEmptyCollection, "no match logs to summarize");
  DiagnosticsSummary s;
  s.matches = logs.size();
  std::map<std::string, std::size_t> tiers, failures;
  std::size_t decided = 0;
  for (const auto& log : logs) {
    s.rounds_per_match.push_back(static_cast<int>(log.rounds.size()));
    for (const auto& r : log.rounds) {
      ++s.rounds;
      ++tiers[tier_of(r.verdict.outcome)];
      if (!r.verdict.is_tie()) {
        ++decided;
        ++failures[std::string(to_string(r.verdict.loser_failure_type))];
      }
      ++s.depth_histogram[r.depth];
      ++s.width_histogram[r.width];
    }
  }
  for (const char* tier : {"MUCH_BETTER", "BETTER", "TIE"})
    s.verdict_distribution[tier] =
        s.rounds ? static_cast<double>(tiers[tier]) / static_cast<double>(s.rounds) : 0.0;
  for (const char* f : {"DEEP", "WIDE", "BOTH", "NONE"})
    s.failure_distribution[f] =
        decided ? static_cast<double>(failures[f]) / static_cast<double>(decided) : 0.0;
  return s;
}

std::vector<std::filesystem::path> list_logs(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec))
    throw Error(ErrorCode::kIoError, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string format_trace(const MatchResult& m) {
  std::string out = fmt::format("Topic: {}\nAgents: Agent A ({}) vs. Agent B ({})\nSeed: {}\n\n",
                                m.topic, m.agent_a, m.agent_b, m.seed);
  for (const auto& r : m.rounds) {
    out += fmt::format("=== ROUND {} ===\n", r.round);
    out += fmt::format("State: Depth {} | Width {}\n", r.depth, r.width);
    out += fmt::format("Question: {}\n", r.task.question);
    out += fmt::format("Agent A Response ({} citations): {}\n", r.response_a.citation_count,
                       clip(r.response_a.text, 240));
    out += fmt::format("Agent B Response ({} citations): {}\n", r.response_b.citation_count,
                       clip(r.response_b.text, 240));
    out += fmt::format("Verdict: {}", to_string(r.verdict.outcome));
    if (r.verdict.is_tie()) {
      out += fmt::format(" ({} quality)", to_string(r.verdict.tie_quality));
    } else {
      out += fmt::format(" (loser failure {})", to_string(r.verdict.loser_failure_type));
    }
    out += fmt::format("\nReasoning: {}\n", clip(r.verdict.reasoning, 400));
    out += fmt::format("Score: {:.1f} vs {:.1f}\n", r.score_a, r.score_b);
    out += fmt::format("Evolution: {}\n\n", to_string(r.action));
  }
  out += "--- FINAL RESULT ---\n";
  out += fmt::format("Score: Agent A ({:.1f}) vs. Agent B ({:.1f})\n", m.score_a, m.score_b);
  out += fmt::format("Status: {}\n", to_string(m.termination));
  if (!m.error.empty()) out += fmt::format("Error: {}\n", m.error);
  out += fmt::format("Winner: {}\n", m.winner == Winner::kDraw
                                         ? std::string("DRAW")
                                         : (m.winner == Winner::kA ? "Agent A (" + m.agent_a + ")"
                                                                   : "Agent B (" + m.agent_b + ")"));
  return out;
}

}  // namespace arena
