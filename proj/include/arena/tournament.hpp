#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "arena/agents.hpp"
#include "arena/crawler.hpp"
#include "arena/evolve.hpp"
#include "arena/rating.hpp"

namespace arena {

// ceil(log2 n); throws kInvalidArgument for n < 2.
int min_rounds(std::size_t players);

struct PlayerStanding {
  std::string name;
  double rating = 1000.0;
  int wins = 0;
  int losses = 0;
  int draws = 0;
  int byes = 0;
  double points = 0.0;  // game credit: 1 / 0.5 / 0 per tree-match, 0.5 per bye
  std::set<std::size_t> opponents;
};

class Standings {
 public:
  Standings() = default;
  explicit Standings(const std::vector<std::string>& names, double initial_rating = 1000.0);

  std::size_t size() const { return players_.size(); }
  const PlayerStanding& operator[](std::size_t i) const { return players_.at(i); }
  PlayerStanding& operator[](std::size_t i) { return players_.at(i); }
  const std::vector<PlayerStanding>& players() const { return players_; }

  bool played(std::size_t a, std::size_t b) const;
  void record_pairing(std::size_t a, std::size_t b);

 private:
  std::vector<PlayerStanding> players_;
};

struct SwissRound {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::optional<std::size_t> bye;
  int repeats = 0;  // > 0 only when no repeat-free matching exists
};

// Round 0: uniform random matching. Later rounds: players sorted by rating
// (descending) are paired greedily with backtracking so nobody meets the
// same opponent twice; if that is impossible the matching with the fewest
// repeats is returned and `repeats` says how many. With an odd count the
// bye goes to the lowest-rated player among those with the fewest byes.
SwissRound swiss_pair(const Standings& standings, int round_index, Rng& rng);

// Game score for player A of a finished match: 1, 0.5 or 0.
double pairing_to_game(const MatchResult& match);

struct TreeContext {
  InfoTree tree;
  std::shared_ptr<const Fetcher> fetcher;
  CrawlOptions crawl;
};

class TreeSource {
 public:
  virtual ~TreeSource() = default;
  virtual std::size_t size() const = 0;
  // A fresh copy; matches mutate their trees through expansion.
  virtual TreeContext get(std::size_t index) = 0;
};

// Trees grown from synthetic sites, one per topic in a cycling topic list.
// Built lazily and cached; safe to call from several workers.
class SyntheticTreeSource : public TreeSource {
 public:
  SyntheticTreeSource(std::size_t count, std::uint64_t seed, CrawlOptions crawl = {});

  std::size_t size() const override { return count_; }
  TreeContext get(std::size_t index) override;

 private:
  std::size_t count_;
  std::uint64_t seed_;
  CrawlOptions crawl_;
  std::mutex mutex_;
  std::map<std::size_t, TreeContext> cache_;
};

// Pre-built trees sharing one fetcher for expansion.
class FixedTreeSource : public TreeSource {
 public:
  FixedTreeSource(std::vector<InfoTree> trees, std::shared_ptr<const Fetcher> fetcher,
                  CrawlOptions crawl = {});

  std::size_t size() const override { return trees_.size(); }
  TreeContext get(std::size_t index) override;

 private:
  std::vector<InfoTree> trees_;
  std::shared_ptr<const Fetcher> fetcher_;
  CrawlOptions crawl_;
};

struct TournamentPlayer {
  std::string name;
  std::shared_ptr<Agent> agent;
};

struct TournamentConfig {
  int rounds = 4;
  int trees_per_pairing = 30;
  MatchConfig match;
  EloParams elo;
  BtOptions bt;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct PlayedMatch {
  int round = 0;
  std::size_t pairing = 0;
  std::size_t tree = 0;
  std::size_t player_a = 0;
  std::size_t player_b = 0;
  MatchResult result;
};

struct LeaderboardEntry {
  std::string name;
  double elo = 0.0;
  double bt_rating = 0.0;
  int wins = 0;
  int losses = 0;
  int draws = 0;
};

struct Leaderboard {
  std::vector<LeaderboardEntry> players;  // sorted by bt_rating, descending

  json to_json() const;
  std::string to_text() const;
};

struct RoundLog {
  int round = 0;
  SwissRound pairing;
  std::vector<double> ratings_after;
};

struct TournamentResult {
  Leaderboard leaderboard;
  Standings standings;
  std::vector<RoundLog> rounds;
  std::vector<PlayedMatch> matches;
  std::vector<GameRecord> games;
  bool bt_regularized = false;  // plain fit impossible; virtual draws used
  std::vector<std::string> warnings;
};

TournamentResult run_tournament(const std::vector<TournamentPlayer>& players,
                                ChatClient& examiner, TreeSource& trees,
                                const TournamentConfig& config);

}  // namespace arena
