#include "support.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <set>

#include "arena/crawler.hpp"
#include "arena/matchlog.hpp"
#include "arena/sim_examiner.hpp"
#include "arena/topics.hpp"
#include "fmt/format.h"

namespace arena::fx {

std::filesystem::path fixture(const std::string& relative) {
  return std::filesystem::path(ARENA_FIXTURES) / relative;
}

FixtureWeb handheld_web() { return FixtureWeb::load_dir(fixture("handheld")); }

std::string golden_mismatch(const std::string& name, const std::string& actual) {
  const auto path = fixture("golden/" + name);
  if (std::getenv("ARENA_UPDATE_GOLDEN") != nullptr) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << actual;
    return {};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing golden file " + path.string();
  const std::string expected((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (expected == actual) return {};
  std::size_t i = 0;
  while (i < expected.size() && i < actual.size() && expected[i] == actual[i]) ++i;
  return fmt::format("{} differs at byte {} (expected {} bytes, got {})", name, i, expected.size(),
                     actual.size());
}

InfoTree flat_tree(int leaves, const std::string& topic) {
  InfoTree tree(topic, "https://consoles.example.com/hub", "Portable Gaming Overview",
                "Overview of portable systems.");
  const NodeId hub = tree.add_child(tree.root(), "https://consoles.example.com/hub/lineup",
                                    "Lineup", "Systems by maker.", "varieties");
  for (int i = 0; i < leaves; ++i) {
    tree.add_child(hub, "https://consoles.example.com/hub/lineup/" + std::to_string(i),
                   "Unit " + std::to_string(i), "Fact: unit " + std::to_string(i) + " exists.",
                   "members");
  }
  return tree;
}

std::string task_reply(const std::string& question, std::vector<std::string> depth,
                       std::vector<std::string> width) {
  json doc = {{"question", question},
              {"checklist_depth", depth},
              {"checklist_width", width},
              {"rationale", "scripted"}};
  return doc.dump();
}

std::string verdict_reply(const std::string& outcome, const std::string& tie_quality,
                          const std::string& failure, const std::string& reasoning) {
  json doc = {{"verdict", outcome},
              {"tie_quality", tie_quality},
              {"loser_failure_type", failure},
              {"reasoning", reasoning}};
  return "```json\n" + doc.dump(2) + "\n```";
}

std::vector<std::string> recorded_trace_verdicts() {
  return {verdict_reply("[[A_BETTER]]", "N/A", "NONE", "presentation"),
          verdict_reply("[[B_BETTER]]", "N/A", "WIDE", "content accuracy"),
          verdict_reply("[[A_BETTER]]", "N/A", "NONE", "technical accuracy"),
          verdict_reply("[[B_MUCH_BETTER]]", "N/A", "WIDE", "primary competitor"),
          verdict_reply("[[B_MUCH_BETTER]]", "N/A", "DEEP", "core entity missed")};
}

std::shared_ptr<ScriptedChatClient> trace_examiner() {
  auto examiner = std::make_shared<ScriptedChatClient>();
  for (const auto& v : recorded_trace_verdicts()) {
    examiner->push_sequence(task_reply());
    examiner->push_sequence(v);
  }
  return examiner;
}

MatchResult run_trace_match(std::uint64_t seed) {
  InfoTree tree = flat_tree(6);
  FixtureWeb empty;
  Crawler crawler(empty);
  ScriptedAgent a(profile("sonar", 0.9, 0.9));
  ScriptedAgent b(profile("opus", 0.9, 0.9));
  auto examiner = trace_examiner();
  MatchConfig config;
  config.seed = seed;
  return run_match(a, b, *examiner, tree, crawler, config);
}

namespace {

// Independent of InfoTree::check_invariants: recomputes everything from the
// node list.
std::string audit_tree(const InfoTree& tree) {
  std::set<std::string> urls;
  for (const auto& n : tree.nodes()) {
    if (!urls.insert(normalize_url(n.url)).second) return "duplicate url " + n.url;
    if (n.id == tree.root()) {
      if (n.parent || n.depth != 0) return "bad root";
      continue;
    }
    if (!n.parent) return fmt::format("node {} has no parent", to_int(n.id));
    if (to_int(*n.parent) >= to_int(n.id)) return fmt::format("node {} precedes its parent", to_int(n.id));
    if (n.depth != tree.node(*n.parent).depth + 1)
      return fmt::format("node {} depth {} under parent depth {}", to_int(n.id), n.depth,
                         tree.node(*n.parent).depth);
  }
  const auto problems = tree.check_invariants();
  return problems.empty() ? std::string() : problems.front();
}

}  // namespace

std::string random_expansion_check(int sequences, std::uint64_t seed) {
  static const FixtureWeb handheld = handheld_web();
  const auto& topics = default_topics();
  for (int s = 0; s < sequences; ++s) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(s)}));
    CrawlOptions options;
    options.depth_fanout = 1 + rng.index(3);
    std::unique_ptr<SyntheticWeb> synthetic;
    const Fetcher* fetcher = &handheld;
    const Searcher* searcher = &handheld;
    std::string topic = "handheld consoles";
    if (s % 2 == 1) {
      SyntheticWebOptions web_options;
      web_options.seed = rng.next();
      web_options.links_per_relation = 3 + rng.index(5);
      topic = topic_query(topics[rng.index(topics.size())]);
      synthetic = std::make_unique<SyntheticWeb>(topic, web_options);
      fetcher = synthetic.get();
      searcher = synthetic.get();
    }
    Crawler crawler(*fetcher, annotation_labels, options);
    InfoTree tree = crawler.build_tree(topic, *searcher, 2 + rng.index(10));
    if (auto problem = audit_tree(tree); !problem.empty())
      return fmt::format("sequence {} after build: {}", s, problem);
    for (int step = 0; step < 12; ++step) {
      const NodeId node{static_cast<std::int32_t>(rng.index(tree.size()))};
      if (rng.bernoulli(0.5)) {
        crawler.expand_width(tree, node, 2 + static_cast<int>(rng.index(6)));
      } else {
        crawler.expand_depth(tree, node);
      }
      if (auto problem = audit_tree(tree); !problem.empty())
        return fmt::format("sequence {} step {}: {}", s, step, problem);
    }
  }
  return {};
}

std::string random_match_state_check(int matches, std::uint64_t seed) {
  const auto& topics = default_topics();
  const Outcome outcomes[] = {Outcome::kAMuchBetter, Outcome::kABetter, Outcome::kTie,
                              Outcome::kBBetter, Outcome::kBMuchBetter};
  const FailureType failures[] = {FailureType::kDeep, FailureType::kWide, FailureType::kBoth,
                                  FailureType::kNone};
  SimulatedExaminer examiner;
  for (int m = 0; m < matches; ++m) {
    Rng rng(derive_seed(seed, {0x51a7e, static_cast<std::uint64_t>(m)}));
    SyntheticWebOptions web_options;
    web_options.seed = rng.next();
    const std::string topic = topic_query(topics[rng.index(topics.size())]);
    SyntheticWeb web(topic, web_options);
    Crawler crawler(web);
    InfoTree tree = crawler.build_tree(topic, web);
    MatchConfig config;
    config.width_cap = 3 + static_cast<int>(rng.index(6));
    config.seed = rng.next();

    if (m % 2 == 0) {
      // Direct drive: random verdicts through transition/apply_action.
      MatchState state;
      state.path = tree.random_start(rng);
      for (int round = 0; round < 12; ++round) {
        Verdict v;
        v.outcome = outcomes[rng.index(5)];
        if (v.outcome == Outcome::kTie) {
          v.tie_quality = rng.bernoulli(0.5) ? TieQuality::kHigh : TieQuality::kLow;
        } else {
          v.loser_failure_type = failures[rng.index(4)];
        }
        apply_action(state, transition(v), tree, crawler, rng, config.width_cap);
        if (state.width < 2 || state.width > config.width_cap)
          return fmt::format("match {} round {}: width {}", m, round, state.width);
        if (!tree.is_valid_path(state.path))
          return fmt::format("match {} round {}: invalid path", m, round);
      }
    } else {
      ScriptedAgent a(profile("a", rng.uniform01(), rng.uniform01()));
      ScriptedAgent b(profile("b", rng.uniform01(), rng.uniform01()));
      config.max_rounds = 3 + static_cast<int>(rng.index(6));
      const MatchResult result = run_match(a, b, examiner, tree, crawler, config);
      for (const auto& r : result.rounds) {
        if (r.width < 2 || r.width > config.width_cap)
          return fmt::format("match {} round {}: width {}", m, r.round, r.width);
        if (!tree.is_valid_path(r.task.source_path))
          return fmt::format("match {} round {}: invalid path", m, r.round);
      }
      if (!result.error.empty()) return fmt::format("match {}: {}", m, result.error);
    }
  }
  return {};
}

namespace {

// PRESSURE_TEST and BOTH/NONE share a class: swapping inside it is invisible.
int failure_class(FailureType f) {
  switch (f) {
    case FailureType::kDeep: return 0;
    case FailureType::kWide: return 1;
    default: return 2;
  }
}

}  // namespace

MatchResult mutate_log(const MatchResult& log, Rng& rng, std::string& what) {
  MatchResult m = log;
  const bool has_rounds = !m.rounds.empty();
  for (;;) {
    const std::size_t kind = rng.index(has_rounds ? 16 : 4);
    if (kind == 0) {
      m.score_a += 0.5;
      what = "final.score_a";
    } else if (kind == 1) {
      m.score_b -= 1.0;
      what = "final.score_b";
    } else if (kind == 2) {
      m.winner = m.winner == Winner::kA ? Winner::kB : Winner::kA;
      what = "final.winner";
    } else if (kind == 3) {
      m.termination = m.termination == Termination::kScoreGap ? Termination::kMaxRounds
                                                                : Termination::kScoreGap;
      what = "final.termination";
    } else {
      const std::size_t i = rng.index(m.rounds.size());
      RoundRecord& r = m.rounds[i];
      const bool last = i + 1 == m.rounds.size();
      what = fmt::format("round {} ", i + 1);
      switch (kind) {
        case 4: r.round += 1; what += "round"; break;
        case 5: r.depth += 1; what += "depth"; break;
        case 6: r.width += 1; what += "width"; break;
        case 7: r.task.width -= 1; what += "task.width"; break;
        case 8:
          if (r.task.source_path.nodes.size() > 1) {
            r.task.source_path.nodes.pop_back();
          } else {
            r.task.source_path.nodes.push_back(NodeId{999});
          }
          what += "task.source_path";
          break;
        case 9: r.response_a.citation_count += 1; what += "response_a.citation_count"; break;
        case 10: r.response_b.citation_count += 2; what += "response_b.citation_count"; break;
        case 11: {
          const auto old = r.verdict.outcome;
          while (r.verdict.outcome == old) r.verdict.outcome = static_cast<Outcome>(rng.index(5));
          what += "verdict.outcome";
          break;
        }
        case 12:
          if (r.verdict.is_tie()) {
            r.verdict.tie_quality = last ? TieQuality::kNA
                                         : (r.verdict.tie_quality == TieQuality::kHigh
                                                ? TieQuality::kLow
                                                : TieQuality::kHigh);
          } else {
            r.verdict.tie_quality = rng.bernoulli(0.5) ? TieQuality::kHigh : TieQuality::kLow;
          }
          what += "verdict.tie_quality";
          break;
        case 13: {
          if (r.verdict.is_tie()) {
            r.verdict.loser_failure_type = FailureType::kDeep;
          } else if (last) {
            continue;  // a winner's failure type on the final round sets no action
          } else {
            const int cls = failure_class(r.verdict.loser_failure_type);
            while (failure_class(r.verdict.loser_failure_type) == cls)
              r.verdict.loser_failure_type = static_cast<FailureType>(rng.index(4));
          }
          what += "verdict.loser_failure_type";
          break;
        }
        case 14: r.score_b += 1.0; what += "score_b"; break;
        default: {
          const auto old = r.action;
          while (r.action == old) r.action = static_cast<EvolutionAction>(rng.index(5));
          what += "action";
          break;
        }
      }
    }
    return m;
  }
}

std::string replay_mutation_check(const std::vector<MatchResult>& logs, int mutations,
                                  std::uint64_t seed) {
  Rng rng(seed);
  for (int k = 0; k < mutations; ++k) {
    const MatchResult& log = logs[rng.index(logs.size())];
    std::string what;
    const MatchResult mutated = mutate_log(log, rng, what);
    if (replay(mutated).ok())
      return fmt::format("mutation {} ({}) on {} vs {} went undetected", k, what, log.agent_a,
                         log.agent_b);
  }
  return {};
}

AgentProfile profile(const std::string& name, double p_deep, double p_wide) {
  AgentProfile p;
  p.name = name;
  p.p_deep = p_deep;
  p.p_wide = p_wide;
  return p;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = std::filesystem::temp_directory_path() /
          ("arena-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace arena::fx
