#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace arena {

struct EloParams {
  double initial = 1000.0;
  double k = 32.0;
  double scale = 400.0;
};

double elo_expected(double r_a, double r_b, double scale = 400.0);

// Returns the updated (r_a, r_b); score_a is 1, 0.5 or 0.
std::pair<double, double> elo_update(double r_a, double r_b, double score_a,
                                     const EloParams& params = {});

// One decided comparison between two player indices.
struct GameRecord {
  std::size_t a = 0;
  std::size_t b = 0;
  double score_a = 0.5;
};

struct BtOptions {
  int max_iterations = 10000;
  double tolerance = 1e-8;
  double scale = 400.0;
  double mean_rating = 1000.0;
  // Draws added between every pair of players before fitting. Zero means
  // a plain maximum-likelihood fit, which needs every player to have both
  // won and lost within each cut of the comparison graph.
  double virtual_draws = 0.0;
};

struct BtResult {
  std::vector<double> strengths;  // geometric mean 1
  std::vector<double> ratings;    // scale * log10(strength), mean shifted to mean_rating
  int iterations = 0;
};

// True when "i scored against j" edges (draws count both ways) form a
// strongly connected graph, the condition for a finite MLE.
bool strongly_connected(std::size_t players, const std::vector<GameRecord>& games);

// Minorization-maximization fit. Throws kDisconnectedGraph when no finite
// MLE exists and kNonConvergence when the iteration budget runs out.
BtResult bt_fit(std::size_t players, const std::vector<GameRecord>& games,
                const BtOptions& options = {});

// Average ranks (1-based); ties share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values);

double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct PearsonResult {
  double r = 0.0;
  double p_value = 1.0;  // two-sided, t with n-2 dof; NaN when n < 3
};

PearsonResult pearson(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace arena
