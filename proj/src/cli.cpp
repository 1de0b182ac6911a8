#include "arena/cli.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "arena/config.hpp"
#include "arena/crawler.hpp"
#include "arena/error.hpp"
#include "arena/fixture_web.hpp"
#include "arena/http_web.hpp"
#include "arena/matchlog.hpp"
#include "arena/simulation.hpp"
#include "arena/taskgen.hpp"
#include "fmt/format.h"
#include "spdlog/spdlog.h"

namespace arena {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int verbosity = 0;
  std::optional<std::uint64_t> seed;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  // build-tree
  std::string topic;
  std::string out;
  std::size_t budget = 12;
  std::string fixture_dir;
  bool synthetic = false;
  std::string search_config;

  // match
  std::string tree;
  std::string agent_a;
  std::string agent_b;
  std::string examiner;
  double threshold = 2.0;
  int max_rounds = 5;
  int width_cap = 8;

  // tournament / simulate
  std::string config;
  std::string out_dir;
  std::string profiles;
  int rounds = 4;
  int trees = 30;

  // analysis
  std::string log;
  std::string logs;
  std::string ours;
  std::string reference;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& out) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  out << "seed: " << s << "\n";
  return s;
}

std::shared_ptr<ChatClient> load_examiner(const std::string& path) {
  if (path.empty()) return make_examiner(EndpointConfig::from_json({{"kind", "scripted"}}));
  return make_examiner(load_endpoint(path), fs::path(path).parent_path());
}

std::shared_ptr<Agent> load_agent(const std::string& path) {
  return make_agent(load_endpoint(path), fs::path(path).parent_path());
}

void write_logs(const std::vector<PlayedMatch>& matches, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& m : matches) {
    write_match(m.result, dir / fmt::format("round{}_pair{}_tree{:03}.json", m.round, m.pairing,
                                            m.tree));
  }
}

int cmd_build_tree(const Options& o, std::ostream& out) {
  const int sources = (!o.fixture_dir.empty()) + o.synthetic + (!o.search_config.empty());
  if (sources != 1)
    throw UsageError("build-tree needs exactly one of --fixture-dir, --synthetic, --search-config");
  std::shared_ptr<Searcher> searcher;
  std::shared_ptr<Fetcher> fetcher;
  if (!o.fixture_dir.empty()) {
    auto web = std::make_shared<FixtureWeb>(FixtureWeb::load_dir(o.fixture_dir));
    searcher = web;
    fetcher = web;
  } else if (o.synthetic) {
    auto web = std::make_shared<SyntheticWeb>(o.topic);
    searcher = web;
    fetcher = web;
  } else {
    searcher = std::make_shared<HttpSearcher>(load_endpoint(o.search_config));
    fetcher = std::make_shared<HttpFetcher>();
  }
  std::shared_ptr<ChatClient> examiner;
  RelationLabeler labeler = annotation_labels;
  if (!o.examiner.empty()) {
    examiner = load_examiner(o.examiner);
    labeler = examiner_labeler(*examiner);
  }
  Crawler crawler(*fetcher, labeler);
  const InfoTree tree = crawler.build_tree(o.topic, *searcher, o.budget);
  write_text_file(o.out, canonical_dump(tree.to_json()));
  out << fmt::format("tree for '{}': {} nodes, max depth {} -> {}\n", o.topic, tree.size(),
                     tree.max_depth(), o.out);
  if (crawler.fetch_failures() > 0)
    out << fmt::format("{} page(s) could not be fetched\n", crawler.fetch_failures());
  return 0;
}

int cmd_match(const Options& o, std::ostream& out, std::ostream& err) {
  InfoTree tree = InfoTree::from_json(read_json_file(o.tree));
  auto agent_a = load_agent(o.agent_a);
  auto agent_b = load_agent(o.agent_b);
  auto examiner = load_examiner(o.examiner);
  std::shared_ptr<Fetcher> fetcher;
  if (!o.fixture_dir.empty()) {
    fetcher = std::make_shared<FixtureWeb>(FixtureWeb::load_dir(o.fixture_dir));
  } else if (o.synthetic) {
    fetcher = std::make_shared<SyntheticWeb>(tree.topic());
  } else {
    fetcher = std::make_shared<FixtureWeb>();
  }
  Crawler crawler(*fetcher);
  MatchConfig config;
  config.threshold = o.threshold;
  config.max_rounds = o.max_rounds;
  config.width_cap = o.width_cap;
  config.seed = resolve_seed(o.seed, out);
  config.validate();
  const MatchResult result = run_match(*agent_a, *agent_b, *examiner, tree, crawler, config);
  write_match(result, o.out);
  out << format_trace(result);
  out << "log written to " << o.out << "\n";
  if (!result.error.empty()) {
    err << "match aborted: " << result.error << "\n";
    return 1;
  }
  return 0;
}

int cmd_tournament(const Options& o, std::ostream& out, std::ostream& err) {
  ArenaConfig cfg = ArenaConfig::load(o.config);
  if (o.seed) {
    cfg.tournament.seed = *o.seed;
  } else if (!cfg.has_seed) {
    cfg.tournament.seed = resolve_seed(std::nullopt, out);
  }
  cfg.tournament.jobs = o.jobs;
  std::vector<TournamentPlayer> players;
  for (const auto& p : cfg.players) players.push_back({p.name, make_agent(p, cfg.base_dir)});
  auto examiner = make_examiner(cfg.examiner, cfg.base_dir);
  auto trees = make_tree_source(cfg.trees, cfg.tournament.seed, cfg.base_dir);
  const TournamentResult result = run_tournament(players, *examiner, *trees, cfg.tournament);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  const fs::path dir = o.out_dir;
  write_logs(result.matches, dir / "logs");
  write_text_file(dir / "leaderboard.json", canonical_dump(result.leaderboard.to_json()));
  out << result.leaderboard.to_text();
  out << fmt::format("{} matches logged under {}\n", result.matches.size(), (dir / "logs").string());
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  SimulationOptions options;
  options.rounds = o.rounds;
  options.trees = o.trees;
  options.seed = resolve_seed(o.seed, out);
  options.jobs = o.jobs;
  const SimulationReport report = simulate(load_profiles(o.profiles), options);
  for (const auto& w : report.tournament.warnings) err << "warning: " << w << "\n";
  out << report.to_text();
  if (!o.out_dir.empty()) {
    const fs::path dir = o.out_dir;
    write_logs(report.tournament.matches, dir / "logs");
    write_text_file(dir / "report.json", canonical_dump(report.to_json()));
  }
  return 0;
}

int cmd_replay(const Options& o, std::ostream& out) {
  MatchConfig config;
  config.threshold = o.threshold;
  config.max_rounds = o.max_rounds;
  config.width_cap = o.width_cap;
  config.validate();
  const ReplayReport report = replay(read_match(o.log), config);
  out << report.to_text();
  return report.ok() ? 0 : 1;
}

int cmd_summarize(const Options& o, std::ostream& out) {
  std::vector<fs::path> files =
      fs::is_directory(o.logs) ? list_logs(o.logs) : std::vector<fs::path>{o.logs};
  if (!fs::exists(o.logs)) throw Error(ErrorCode::kIoError, "no such path: " + o.logs);
  if (files.empty()) throw Error(ErrorCode::kEmptyCollection, "no match logs under " + o.logs);
  std::vector<MatchResult> logs;
  for (const auto& f : files) logs.push_back(read_match(f));
  const DiagnosticsSummary summary = summarize(logs);
  out << summary.to_text();
  if (!o.out.empty()) write_text_file(o.out, canonical_dump(summary.to_json()));
  return 0;
}

// Accepts [{"name": ..., "value": ...}, ...] or {"name": value, ...}.
std::vector<std::pair<std::string, double>> load_series(const std::string& path) {
  const json doc = read_json_file(path);
  std::vector<std::pair<std::string, double>> series;
  try {
    if (doc.is_array()) {
      for (const auto& e : doc) series.emplace_back(e.at("name").get<std::string>(), e.at("value").get<double>());
    } else if (doc.is_object()) {
      for (auto it = doc.begin(); it != doc.end(); ++it) series.emplace_back(it.key(), it.value().get<double>());
    } else {
      throw Error(ErrorCode::kConfigError, path + ": expected an array or object");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMissingField, path + ": " + e.what());
  }
  return series;
}

int cmd_correlate(const Options& o, std::ostream& out) {
  const auto ours = load_series(o.ours);
  const auto reference = load_series(o.reference);
  std::map<std::string, double> ref(reference.begin(), reference.end());
  if (ours.size() != reference.size())
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} entries vs {} reference entries", ours.size(), reference.size()));
  std::vector<double> xs, ys;
  for (const auto& [name, value] : ours) {
    const auto it = ref.find(name);
    if (it == ref.end()) throw Error(ErrorCode::kLengthMismatch, "no reference value for '" + name + "'");
    xs.push_back(value);
    ys.push_back(it->second);
  }
  const double rho = spearman(xs, ys);
  const PearsonResult pr = pearson(xs, ys);
  out << fmt::format("spearman={:.2f}, pearson={:.2f}\n", rho, pr.r);
  json report = {{"n", xs.size()}, {"spearman", rho}, {"pearson", pr.r}};
  if (!std::isnan(pr.p_value)) report["pearson_p_value"] = pr.p_value;
  out << report.dump(2) << "\n";
  if (!o.out.empty()) write_text_file(o.out, canonical_dump(report));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Adaptive arena for evaluating research agents"};
  app.name("arena");
  app.require_subcommand(1, 1);
  app.add_flag("-v,--verbose", o.verbosity, "More logging (repeatable)");

  auto* build = app.add_subcommand("build-tree", "Crawl an information tree for a topic");
  build->add_option("--topic", o.topic, "Topic query")->required();
  build->add_option("--out", o.out, "Output tree file")->required();
  build->add_option("--budget", o.budget, "Maximum node count")->check(CLI::PositiveNumber);
  build->add_option("--fixture-dir", o.fixture_dir, "Recorded corpus directory")
      ->check(CLI::ExistingDirectory);
  build->add_flag("--synthetic", o.synthetic, "Use the procedural synthetic site");
  build->add_option("--search-config", o.search_config, "Search endpoint config (live crawl)")
      ->check(CLI::ExistingFile);
  build->add_option("--examiner", o.examiner, "Examiner config used to label relations")
      ->check(CLI::ExistingFile);

  auto* match = app.add_subcommand("match", "Run one adaptive match");
  match->add_option("--tree", o.tree, "Tree file")->required()->check(CLI::ExistingFile);
  match->add_option("--agent-a", o.agent_a, "Agent A config")->required()->check(CLI::ExistingFile);
  match->add_option("--agent-b", o.agent_b, "Agent B config")->required()->check(CLI::ExistingFile);
  match->add_option("--examiner", o.examiner, "Examiner config (default: simulated)")
      ->check(CLI::ExistingFile);
  match->add_option("--threshold", o.threshold, "Score gap that ends the match");
  match->add_option("--max-rounds", o.max_rounds, "Round limit");
  match->add_option("--width-cap", o.width_cap, "Largest width a task may request");
  match->add_option("--seed", o.seed, "Random seed");
  match->add_option("--out", o.out, "Match log file");
  match->add_option("--fixture-dir", o.fixture_dir, "Corpus used for tree expansion")
      ->check(CLI::ExistingDirectory);
  match->add_flag("--synthetic", o.synthetic, "Expand through the synthetic site");

  auto* tournament = app.add_subcommand("tournament", "Run a Swiss tournament");
  tournament->add_option("--config", o.config, "Tournament config")->required()->check(CLI::ExistingFile);
  tournament->add_option("--out-dir", o.out_dir, "Directory for logs and leaderboard");
  tournament->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  tournament->add_option("--seed", o.seed, "Random seed (overrides the config)");

  auto* sim = app.add_subcommand("simulate", "Tournament between simulated agents");
  sim->add_option("--profiles", o.profiles, "Agent profiles JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--rounds", o.rounds, "Swiss rounds")->check(CLI::PositiveNumber);
  sim->add_option("--trees", o.trees, "Trees per pairing")->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed, "Random seed");
  sim->add_option("--out-dir", o.out_dir, "Directory for logs and report");
  sim->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* rep = app.add_subcommand("replay", "Audit a match log");
  rep->add_option("--log", o.log, "Match log")->required()->check(CLI::ExistingFile);
  rep->add_option("--threshold", o.threshold, "Score gap the match was run with");
  rep->add_option("--max-rounds", o.max_rounds, "Round limit the match was run with");
  rep->add_option("--width-cap", o.width_cap, "Width cap the match was run with");

  auto* sum = app.add_subcommand("summarize", "Verdict, failure and topology statistics");
  sum->add_option("--logs", o.logs, "Log directory or file")->required();
  sum->add_option("--out", o.out, "Optional JSON output");

  auto* cor = app.add_subcommand("correlate", "Rank and linear correlation of two ratings");
  cor->add_option("--ours", o.ours, "Our ratings")->required()->check(CLI::ExistingFile);
  cor->add_option("--reference", o.reference, "Reference ratings")->required()->check(CLI::ExistingFile);
  cor->add_option("--out", o.out, "Optional JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  spdlog::set_level(o.verbosity >= 2   ? spdlog::level::debug
                    : o.verbosity == 1 ? spdlog::level::info
                                       : spdlog::level::warn);

  try {
    if (*build) return cmd_build_tree(o, out);
    if (*match) {
      if (o.out.empty()) o.out = "match_log.json";
      return cmd_match(o, out, err);
    }
    if (*tournament) {
      if (o.out_dir.empty()) o.out_dir = "tournament_out";
      return cmd_tournament(o, out, err);
    }
    if (*sim) return cmd_simulate(o, out, err);
    if (*rep) return cmd_replay(o, out);
    if (*sum) return cmd_summarize(o, out);
    if (*cor) return cmd_correlate(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace arena
