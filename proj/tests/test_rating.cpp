#include <gtest/gtest.h>

#include <cmath>

#include "arena/rating.hpp"
#include "arena/rng.hpp"
#include "checks.hpp"

namespace arena {
namespace {

// Search-arena and our Elo columns of the six-model leaderboard.
const std::vector<double> kHumanElo = {1201, 1142, 1139, 1138, 1130, 1125};
const std::vector<double> kArenaElo = {1084, 1054, 1041, 958, 921, 942};

// ---- Elo ---------------------------------------------------------------------------

TEST(Elo, EqualRatingsMoveByHalfK) {
  const auto [a, b] = elo_update(1000, 1000, 1.0);
  EXPECT_DOUBLE_EQ(a, 1016.0);
  EXPECT_DOUBLE_EQ(b, 984.0);
  const auto [c, d] = elo_update(1000, 1000, 0.5);
  EXPECT_DOUBLE_EQ(c, 1000.0);
  EXPECT_DOUBLE_EQ(d, 1000.0);
}

TEST(Elo, ExpectedScore) {
  EXPECT_DOUBLE_EQ(elo_expected(1000, 1000), 0.5);
  EXPECT_NEAR(elo_expected(1400, 1000), 10.0 / 11.0, 1e-12);
  EXPECT_NEAR(elo_expected(1000, 1400) + elo_expected(1400, 1000), 1.0, 1e-12);
}

TEST(Elo, UpdateConservesTotalAndRejectsBadScores) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double ra = 800 + 600 * rng.uniform01(), rb = 800 + 600 * rng.uniform01();
    const double s = static_cast<double>(rng.index(3)) / 2.0;
    const auto [a, b] = elo_update(ra, rb, s);
    EXPECT_NEAR(a + b, ra + rb, 1e-9);
  }
  EXPECT_ARENA_ERROR(elo_update(1000, 1000, 0.7), ErrorCode::kInvalidArgument);
}

// ---- Bradley-Terry -------------------------------------------------------------------

TEST(BradleyTerry, ThreeToOneGap) {
  const std::vector<GameRecord> games = {{0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {0, 1, 0}};
  const BtResult fit = bt_fit(2, games);
  EXPECT_NEAR(fit.ratings[0] - fit.ratings[1], 400 * std::log10(3.0), 0.1);
  EXPECT_NEAR(fit.ratings[0] - fit.ratings[1], 190.8485, 0.1);
  EXPECT_NEAR((fit.ratings[0] + fit.ratings[1]) / 2, 1000.0, 1e-9);
  EXPECT_NEAR(fit.strengths[0] * fit.strengths[1], 1.0, 1e-9);
}

TEST(BradleyTerry, FitSatisfiesScoreEquations) {
  // MLE stationarity: each player's expected wins equal the observed wins.
  const std::vector<GameRecord> games = {{0, 1, 1}, {1, 0, 1}, {0, 2, 1}, {2, 0, 0.5}, {1, 2, 1},
                                         {2, 1, 1}, {2, 3, 1}, {3, 0, 1}, {1, 3, 0}, {3, 2, 0.5}};
  const BtResult fit = bt_fit(4, games);
  std::vector<double> observed(4, 0.0), expected(4, 0.0);
  for (const auto& g : games) {
    observed[g.a] += g.score_a;
    observed[g.b] += 1 - g.score_a;
    const double pa = fit.strengths[g.a] / (fit.strengths[g.a] + fit.strengths[g.b]);
    expected[g.a] += pa;
    expected[g.b] += 1 - pa;
  }
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(expected[i], observed[i], 1e-6);
}

TEST(BradleyTerry, RecoversPlantedRatings) {
  const std::vector<double> truth = {1200, 1100, 1000, 950, 900, 850};
  const double mean = 1000.0;
  Rng rng(2024);
  std::vector<GameRecord> games;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t a = rng.index(6);
    std::size_t b = rng.index(5);
    if (b >= a) ++b;
    const double p = elo_expected(truth[a], truth[b]);
    games.push_back({a, b, rng.bernoulli(p) ? 1.0 : 0.0});
  }
  BtOptions options;
  options.mean_rating = mean;
  const BtResult fit = bt_fit(6, games, options);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(fit.ratings[i], truth[i], 15.0) << "player " << i;
}

TEST(BradleyTerry, UndefeatedPlayerHasNoFiniteFit) {
  const std::vector<GameRecord> games = {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {2, 1, 1}};
  EXPECT_FALSE(strongly_connected(3, games));
  EXPECT_ARENA_ERROR(bt_fit(3, games), ErrorCode::kDisconnectedGraph);
  BtOptions options;
  options.virtual_draws = 1.0;
  const BtResult fit = bt_fit(3, games, options);
  EXPECT_GT(fit.ratings[0], fit.ratings[1]);
  EXPECT_TRUE(std::isfinite(fit.ratings[0]));
}

TEST(BradleyTerry, DrawsConnectBothWays) {
  EXPECT_TRUE(strongly_connected(2, {{0, 1, 0.5}}));
  EXPECT_FALSE(strongly_connected(2, {{0, 1, 1.0}}));
  EXPECT_FALSE(strongly_connected(3, {{0, 1, 0.5}}));
}

TEST(BradleyTerry, Rejections) {
  EXPECT_ARENA_ERROR(bt_fit(1, {}), ErrorCode::kInvalidArgument);
  EXPECT_ARENA_ERROR(bt_fit(2, {{0, 2, 1}}), ErrorCode::kInvalidArgument);
  EXPECT_ARENA_ERROR(bt_fit(2, {{0, 0, 1}}), ErrorCode::kInvalidArgument);
  EXPECT_ARENA_ERROR(bt_fit(2, {{0, 1, 1.5}}), ErrorCode::kInvalidArgument);
  BtOptions options;
  options.max_iterations = 1;
  options.tolerance = 0;
  EXPECT_ARENA_ERROR(bt_fit(2, {{0, 1, 1}, {0, 1, 0}, {0, 1, 1}}, options), ErrorCode::kNonConvergence);
}

TEST(BradleyTerry, InvariantToGameOrder) {
  std::vector<GameRecord> games = {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {0, 2, 0.5}, {1, 0, 0}};
  const BtResult a = bt_fit(3, games);
  std::reverse(games.begin(), games.end());
  const BtResult b = bt_fit(3, games);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a.ratings[i], b.ratings[i], 1e-6);
}

// ---- Correlation ------------------------------------------------------------------------

TEST(Correlation, LeaderboardColumns) {
  const PearsonResult p = pearson(kHumanElo, kArenaElo);
  EXPECT_NEAR(p.r, 0.7365421, 1e-6);
  EXPECT_NEAR(p.p_value, 0.0949718, 1e-6);
  EXPECT_NEAR(p.r, 0.74, 0.01);
  const std::vector<double> human_rank = {1, 2, 3, 4, 5, 6};
  const std::vector<double> arena_rank = {1, 2, 3, 4, 6, 5};
  EXPECT_NEAR(spearman(human_rank, arena_rank), 0.942857, 1e-6);
  EXPECT_NEAR(spearman(kHumanElo, kArenaElo), 0.942857, 1e-6);
}

TEST(Correlation, SmallReferenceValues) {
  const PearsonResult p = pearson({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5});
  EXPECT_NEAR(p.r, 0.8, 1e-12);
  EXPECT_NEAR(p.p_value, 0.10409, 1e-5);
  EXPECT_NEAR(spearman({1, 2, 2, 3}, {1, 3, 2, 4}), 0.948683, 1e-6);
  EXPECT_TRUE(std::isnan(pearson({1, 2}, {3, 5}).p_value));
  EXPECT_DOUBLE_EQ(pearson({1, 2, 3}, {2, 4, 6}).p_value, 0.0);
}

TEST(Correlation, AverageRanksShareTies) {
  EXPECT_EQ(average_ranks({10, 20, 20, 5}), (std::vector<double>{2, 3.5, 3.5, 1}));
  EXPECT_EQ(average_ranks({}), std::vector<double>{});
}

TEST(Correlation, Invariances) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(8), y(8);
    for (int i = 0; i < 8; ++i) {
      x[i] = rng.normal();
      y[i] = x[i] + rng.normal();
    }
    const double r = pearson(x, y).r;
    const double rho = spearman(x, y);
    std::vector<double> affine(8), negated(8), warped(8);
    for (int i = 0; i < 8; ++i) {
      affine[i] = 3.0 * y[i] + 7.0;
      negated[i] = -y[i];
      warped[i] = std::exp(y[i]) * 10.0;
    }
    EXPECT_NEAR(pearson(x, affine).r, r, 1e-12);
    EXPECT_NEAR(pearson(x, negated).r, -r, 1e-12);
    EXPECT_NEAR(pearson(y, x).r, r, 1e-12);
    EXPECT_NEAR(spearman(x, warped), rho, 1e-12);
    EXPECT_NEAR(spearman(x, negated), -rho, 1e-12);
    EXPECT_LE(std::abs(r), 1.0);
  }
}

TEST(Correlation, Rejections) {
  EXPECT_ARENA_ERROR(pearson({1, 2, 3}, {1, 2}), ErrorCode::kLengthMismatch);
  EXPECT_ARENA_ERROR(spearman({1}, {1}), ErrorCode::kInvalidArgument);
  EXPECT_ARENA_ERROR(pearson({1, 1, 1}, {1, 2, 3}), ErrorCode::kDegenerate);
  EXPECT_ARENA_ERROR(spearman({1, 2, 3}, {4, 4, 4}), ErrorCode::kDegenerate);
}

}  // namespace
}  // namespace arena
