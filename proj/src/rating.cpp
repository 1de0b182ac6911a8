#include "arena/rating.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "arena/error.hpp"
#include "fmt/format.h"

namespace arena {
namespace {

void check_pair(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("lists have {} and {} entries", xs.size(), ys.size()));
  if (xs.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two pairs");
}

double correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0 || syy <= 0) throw Error(ErrorCode::kDegenerate, "zero variance input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double elo_expected(double r_a, double r_b, double scale) {
  return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / scale));
}

std::pair<double, double> elo_update(double r_a, double r_b, double score_a,
                                     const EloParams& params) {
  if (score_a != 0.0 && score_a != 0.5 && score_a != 1.0)
    throw Error(ErrorCode::kInvalidArgument, "game score must be 0, 0.5 or 1");
  const double delta = params.k * (score_a - elo_expected(r_a, r_b, params.scale));
  return {r_a + delta, r_b - delta};
}

bool strongly_connected(std::size_t players, const std::vector<GameRecord>& games) {
  if (players == 0) return false;
  std::vector<std::vector<std::size_t>> out(players), in(players);
  for (const auto& g : games) {
    if (g.score_a > 0) {
      out[g.a].push_back(g.b);
      in[g.b].push_back(g.a);
    }
    if (g.score_a < 1) {
      out[g.b].push_back(g.a);
      in[g.a].push_back(g.b);
    }
  }
  auto reaches_all = [&](const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<bool> seen(players, false);
    std::vector<std::size_t> stack = {0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == players;
  };
  return reaches_all(out) && reaches_all(in);
}

BtResult bt_fit(std::size_t players, const std::vector<GameRecord>& games,
                const BtOptions& options) {
  if (players < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two players");
  for (const auto& g : games) {
    if (g.a >= players || g.b >= players || g.a == g.b)
      throw Error(ErrorCode::kInvalidArgument, "game refers to an invalid player pair");
    if (g.score_a < 0 || g.score_a > 1)
      throw Error(ErrorCode::kInvalidArgument, "game score outside [0, 1]");
  }
  std::vector<double> wins(players, 0.0);
  std::vector<std::vector<double>> count(players, std::vector<double>(players, 0.0));
  for (const auto& g : games) {
    wins[g.a] += g.score_a;
    wins[g.b] += 1.0 - g.score_a;
    count[g.a][g.b] += 1.0;
    count[g.b][g.a] += 1.0;
  }
  if (options.virtual_draws > 0) {
    for (std::size_t i = 0; i < players; ++i) {
      for (std::size_t j = 0; j < players; ++j) {
        if (i == j) continue;
        count[i][j] += options.virtual_draws;
        wins[i] += 0.5 * options.virtual_draws;
      }
    }
  } else if (!strongly_connected(players, games)) {
    throw Error(ErrorCode::kDisconnectedGraph,
                "comparison graph is not strongly connected; no finite maximum-likelihood fit");
  }

  std::vector<double> p(players, 1.0), next(players);
  BtResult result;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    for (std::size_t i = 0; i < players; ++i) {
      double denom = 0.0;
      for (std::size_t j = 0; j < players; ++j)
        if (count[i][j] > 0) denom += count[i][j] / (p[i] + p[j]);
      next[i] = wins[i] / denom;
    }
    double log_mean = 0.0;
    for (double v : next) log_mean += std::log(v);
    const double norm = std::exp(log_mean / static_cast<double>(players));
    double change = 0.0;
    for (std::size_t i = 0; i < players; ++i) {
      next[i] /= norm;
      change = std::max(change, std::abs(next[i] - p[i]) / p[i]);
    }
    p.swap(next);
    if (change < options.tolerance) {
      result.iterations = iter;
      result.strengths = p;
      result.ratings.resize(players);
      double mean = 0.0;
      for (std::size_t i = 0; i < players; ++i) {
        result.ratings[i] = options.scale * std::log10(p[i]);
        mean += result.ratings[i];
      }
      mean /= static_cast<double>(players);
      for (auto& r : result.ratings) r += options.mean_rating - mean;
      return result;
    }
  }
  throw Error(ErrorCode::kNonConvergence,
              fmt::format("no convergence within {} iterations", options.max_iterations));
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  check_pair(xs, ys);
  return correlation(average_ranks(xs), average_ranks(ys));
}

PearsonResult pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  check_pair(xs, ys);
  PearsonResult out;
  out.r = correlation(xs, ys);
  const std::size_t n = xs.size();
  if (n < 3) {
    out.p_value = std::numeric_limits<double>::quiet_NaN();
  } else if (std::abs(out.r) >= 1.0) {
    out.p_value = 0.0;
  } else {
    const double dof = static_cast<double>(n - 2);
    const double t = out.r * std::sqrt(dof / (1.0 - out.r * out.r));
    boost::math::students_t dist(dof);
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  }
  return out;
}

}  // namespace arena
