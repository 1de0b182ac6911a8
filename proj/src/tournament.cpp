#include "arena/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include "arena/error.hpp"
#include "arena/fixture_web.hpp"
#include "arena/topics.hpp"
#include "fmt/format.h"
#include "spdlog/spdlog.h"

namespace arena {
namespace {

constexpr std::uint64_t kPairingStream = 0x5a1551;
constexpr std::uint64_t kMatchStream = 0x3a7c4;
constexpr std::uint64_t kTreeStream = 0x7733;

// Depth-first search over matchings of `order` in list order; keeps the
// first matching with the fewest repeats.
class MatchingSearch {
 public:
  MatchingSearch(const Standings& standings, std::vector<std::size_t> order)
      : standings_(standings), order_(std::move(order)), used_(order_.size(), false) {}

  std::vector<std::pair<std::size_t, std::size_t>> run(int& repeats) {
    search(0);
    repeats = best_cost_;
    return best_;
  }

 private:
  void search(int cost) {
    if (cost >= best_cost_) return;
    std::size_t first = 0;
    while (first < order_.size() && used_[first]) ++first;
    if (first == order_.size()) {
      best_cost_ = cost;
      best_ = current_;
      return;
    }
    used_[first] = true;
    for (std::size_t j = first + 1; j < order_.size() && best_cost_ > 0; ++j) {
      if (used_[j]) continue;
      const int extra = standings_.played(order_[first], order_[j]) ? 1 : 0;
      used_[j] = true;
      current_.emplace_back(order_[first], order_[j]);
      search(cost + extra);
      current_.pop_back();
      used_[j] = false;
    }
    used_[first] = false;
  }

  const Standings& standings_;
  std::vector<std::size_t> order_;
  std::vector<bool> used_;
  std::vector<std::pair<std::size_t, std::size_t>> current_;
  std::vector<std::pair<std::size_t, std::size_t>> best_;
  int best_cost_ = std::numeric_limits<int>::max();
};

std::vector<GameRecord> games_of(const std::vector<PlayedMatch>& matches) {
  std::vector<GameRecord> games;
  for (const auto& m : matches) {
    if (m.result.rounds.empty()) continue;
    games.push_back({m.player_a, m.player_b, pairing_to_game(m.result)});
  }
  return games;
}

}  // namespace

int min_rounds(std::size_t players) {
  if (players < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two players");
  int rounds = 0;
  std::size_t capacity = 1;
  while (capacity < players) {
    capacity *= 2;
    ++rounds;
  }
  return rounds;
}

Standings::Standings(const std::vector<std::string>& names, double initial_rating) {
  for (const auto& name : names) {
    PlayerStanding p;
    p.name = name;
    p.rating = initial_rating;
    players_.push_back(std::move(p));
  }
}

bool Standings::played(std::size_t a, std::size_t b) const {
  return players_.at(a).opponents.count(b) > 0;
}

void Standings::record_pairing(std::size_t a, std::size_t b) {
  if (a == b) throw Error(ErrorCode::kInvalidArgument, "a player cannot meet itself");
  players_.at(a).opponents.insert(b);
  players_.at(b).opponents.insert(a);
}

SwissRound swiss_pair(const Standings& standings, int round_index, Rng& rng) {
  const std::size_t n = standings.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two players to pair");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (round_index == 0) {
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return standings[a].rating > standings[b].rating;
    });
  }

  SwissRound round;
  if (n % 2 == 1) {
    int fewest = std::numeric_limits<int>::max();
    for (auto i : order) fewest = std::min(fewest, standings[i].byes);
    // Walk from the bottom of the order: the lowest-rated eligible player.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (standings[*it].byes == fewest) {
        round.bye = *it;
        break;
      }
    }
    order.erase(std::find(order.begin(), order.end(), *round.bye));
  }
  if (round_index == 0) {
    for (std::size_t i = 0; i + 1 < order.size(); i += 2)
      round.pairs.emplace_back(order[i], order[i + 1]);
    for (const auto& [a, b] : round.pairs) round.repeats += standings.played(a, b) ? 1 : 0;
    return round;
  }
  round.pairs = MatchingSearch(standings, order).run(round.repeats);
  return round;
}

double pairing_to_game(const MatchResult& match) {
  switch (match.winner) {
    case Winner::kA: return 1.0;
    case Winner::kB: return 0.0;
    case Winner::kDraw: return 0.5;
  }
  return 0.5;
}

SyntheticTreeSource::SyntheticTreeSource(std::size_t count, std::uint64_t seed,
                                         CrawlOptions crawl)
    : count_(count), seed_(seed), crawl_(crawl) {}

TreeContext SyntheticTreeSource::get(std::size_t index) {
  if (index >= count_) throw Error(ErrorCode::kInvalidArgument, "tree index out of range");
  std::lock_guard lock(mutex_);
  if (auto it = cache_.find(index); it != cache_.end()) return it->second;
  const auto& topics = default_topics();
  const std::string topic = topic_query(topics[index % topics.size()]);
  SyntheticWebOptions web_options;
  web_options.seed = derive_seed(seed_, {kTreeStream, index});
  auto web = std::make_shared<SyntheticWeb>(topic, web_options);
  Crawler crawler(*web, annotation_labels, crawl_);
  TreeContext ctx{crawler.build_tree(topic, *web), web, crawl_};
  cache_.emplace(index, ctx);
  return ctx;
}

FixedTreeSource::FixedTreeSource(std::vector<InfoTree> trees,
                                 std::shared_ptr<const Fetcher> fetcher, CrawlOptions crawl)
    : trees_(std::move(trees)), fetcher_(std::move(fetcher)), crawl_(crawl) {}

TreeContext FixedTreeSource::get(std::size_t index) {
  return TreeContext{trees_.at(index), fetcher_, crawl_};
}

json Leaderboard::to_json() const {
  json rows = json::array();
  for (const auto& p : players) {
    rows.push_back({{"name", p.name},
                    {"elo", p.elo},
                    {"bt_rating", p.bt_rating},
                    {"wins", p.wins},
                    {"losses", p.losses},
                    {"draws", p.draws}});
  }
  return {{"players", rows}};
}

std::string Leaderboard::to_text() const {
  std::size_t width = 6;
  for (const auto& p : players) width = std::max(width, p.name.size());
  std::string out = fmt::format("{:>4}  {:<{}}  {:>9}  {:>9}  {:>5}  {:>5}  {:>5}\n", "Rank",
                                "Player", width, "BT", "Elo", "W", "L", "D");
  for (std::size_t i = 0; i < players.size(); ++i) {
    const auto& p = players[i];
    out += fmt::format("{:>4}  {:<{}}  {:>9.1f}  {:>9.1f}  {:>5}  {:>5}  {:>5}\n", i + 1, p.name,
                       width, p.bt_rating, p.elo, p.wins, p.losses, p.draws);
  }
  return out;
}

TournamentResult run_tournament(const std::vector<TournamentPlayer>& players,
                                ChatClient& examiner, TreeSource& trees,
                                const TournamentConfig& config) {
  const std::size_t n = players.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "a tournament needs at least two players");
  if (config.rounds < 1) throw Error(ErrorCode::kConfigError, "rounds must be >= 1");
  if (config.trees_per_pairing < 1)
    throw Error(ErrorCode::kConfigError, "trees per pairing must be >= 1");
  if (trees.size() < static_cast<std::size_t>(config.trees_per_pairing))
    throw Error(ErrorCode::kConfigError,
                fmt::format("tree source holds {} trees, {} needed per pairing", trees.size(),
                            config.trees_per_pairing));
  config.match.validate();

  std::vector<std::string> names;
  for (const auto& p : players) {
    if (!p.agent) throw Error(ErrorCode::kConfigError, "player '" + p.name + "' has no agent");
    names.push_back(p.name);
  }
  TournamentResult result;
  result.standings = Standings(names, config.elo.initial);
  Standings& standings = result.standings;
  if (config.rounds < min_rounds(n))
    result.warnings.push_back(fmt::format("{} rounds is below the recommended {} for {} players",
                                          config.rounds, min_rounds(n), n));

  const std::size_t per_pairing = static_cast<std::size_t>(config.trees_per_pairing);
  for (int round = 0; round < config.rounds; ++round) {
    Rng pair_rng(derive_seed(config.seed, {kPairingStream, static_cast<std::uint64_t>(round)}));
    RoundLog log;
    log.round = round + 1;
    log.pairing = swiss_pair(standings, round, pair_rng);
    if (log.pairing.repeats > 0)
      result.warnings.push_back(fmt::format("round {}: {} repeated pairing(s) were unavoidable",
                                            round + 1, log.pairing.repeats));

    const std::size_t jobs_total = log.pairing.pairs.size() * per_pairing;
    std::vector<PlayedMatch> played(jobs_total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t job = next++; job < jobs_total; job = next++) {
        const std::size_t pairing = job / per_pairing;
        const std::size_t tree_index = job % per_pairing;
        const auto [a, b] = log.pairing.pairs[pairing];
        PlayedMatch& slot = played[job];
        slot.round = round + 1;
        slot.pairing = pairing;
        slot.tree = tree_index;
        slot.player_a = a;
        slot.player_b = b;
        MatchConfig mc = config.match;
        mc.seed = derive_seed(config.seed, {kMatchStream, static_cast<std::uint64_t>(round),
                                            pairing, tree_index});
        try {
          TreeContext ctx = trees.get(tree_index);
          Crawler crawler(*ctx.fetcher, annotation_labels, ctx.crawl);
          slot.result = run_match(*players[a].agent, *players[b].agent, examiner, ctx.tree,
                                  crawler, mc);
        } catch (const std::exception& e) {
          slot.result = MatchResult{};
          slot.result.agent_a = players[a].name;
          slot.result.agent_b = players[b].name;
          slot.result.seed = mc.seed;
          slot.result.termination = Termination::kTreeExhausted;
          slot.result.error = e.what();
        }
      }
    };
    const int threads = std::max(1, std::min<int>(config.jobs, static_cast<int>(jobs_total)));
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    // Rating barrier: every delta is computed from the start-of-round snapshot.
    std::vector<double> snapshot(n), delta(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) snapshot[i] = standings[i].rating;
    for (const auto& [a, b] : log.pairing.pairs) standings.record_pairing(a, b);
    for (const auto& m : played) {
      if (!m.result.error.empty())
        result.warnings.push_back(fmt::format("round {} {} vs {} tree {}: {}", m.round,
                                              players[m.player_a].name, players[m.player_b].name,
                                              m.tree, m.result.error));
      if (m.result.rounds.empty()) continue;
      const double s = pairing_to_game(m.result);
      const double d = config.elo.k * (s - elo_expected(snapshot[m.player_a], snapshot[m.player_b],
                                                        config.elo.scale));
      delta[m.player_a] += d;
      delta[m.player_b] -= d;
      auto& pa = standings[m.player_a];
      auto& pb = standings[m.player_b];
      pa.points += s;
      pb.points += 1.0 - s;
      if (s == 1.0) {
        ++pa.wins;
        ++pb.losses;
      } else if (s == 0.0) {
        ++pb.wins;
        ++pa.losses;
      } else {
        ++pa.draws;
        ++pb.draws;
      }
    }
    if (log.pairing.bye) {
      standings[*log.pairing.bye].byes += 1;
      standings[*log.pairing.bye].points += 0.5;
    }
    for (std::size_t i = 0; i < n; ++i) {
      standings[i].rating += delta[i];
      log.ratings_after.push_back(standings[i].rating);
    }
    result.rounds.push_back(std::move(log));
    for (auto& m : played) result.matches.push_back(std::move(m));
  }

  result.games = games_of(result.matches);
  BtResult fit;
  try {
    fit = bt_fit(n, result.games, config.bt);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDisconnectedGraph && e.code() != ErrorCode::kNonConvergence)
      throw;
    BtOptions regularized = config.bt;
    regularized.virtual_draws = std::max(1.0, config.bt.virtual_draws);
    fit = bt_fit(n, result.games, regularized);
    result.bt_regularized = true;
    result.warnings.push_back(std::string("Bradley-Terry fit used virtual draws: ") + e.what());
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = standings[i];
    result.leaderboard.players.push_back(
        {s.name, s.rating, fit.ratings[i], s.wins, s.losses, s.draws});
  }
  std::stable_sort(result.leaderboard.players.begin(), result.leaderboard.players.end(),
                   [](const auto& x, const auto& y) { return x.bt_rating > y.bt_rating; });
  return result;
}

}  // namespace arena
