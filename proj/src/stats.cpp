/*
 * Copyright 2026 The kmbin Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "kmbin/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace kmbin {

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw StatsError(std::string(what) + ": non-finite value");
  }
}

}  // namespace

double mse(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size()) throw StatsError("mse: length mismatch");
  if (y_true.empty()) throw StatsError("mse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double d = y_true[i] - y_pred[i];
    sum += d * d;
  }
  return sum / static_cast<double>(y_true.size());
}

double roc_auc(std::span<const double> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) throw StatsError("roc_auc: length mismatch");
  check_finite(scores, "roc_auc");
  std::size_t n_pos = 0;
  for (double y : y_true) {
    if (y == 1.0) ++n_pos;
    else if (y != 0.0) throw StatsError("roc_auc: labels must be 0 or 1");
  }
  const std::size_t n_neg = y_true.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw StatsError("roc_auc: both classes must be present");

  // Midranks of the scores; the positive rank sum gives U.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (y_true[order[k]] == 1.0) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

double delta_percent(double mse_quantile, double mse_kmeans) {
  if (!(mse_quantile > 0.0)) throw StatsError("delta_percent: baseline MSE must be positive");
  return 100.0 * (mse_quantile - mse_kmeans) / mse_quantile;
}

double paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw StatsError("paired_t_test: length mismatch");
  if (a.size() < 2) throw StatsError("paired_t_test: need at least 2 pairs");
  check_finite(a, "paired_t_test");
  check_finite(b, "paired_t_test");

  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);

  const bool all_zero = std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; });
  if (all_zero) return 1.0;
  constexpr double kTiny = std::numeric_limits<double>::denorm_min();
  if (ss == 0.0) return kTiny;

  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  boost::math::students_t dist(static_cast<double>(n - 1));
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return std::clamp(p, kTiny, 1.0);
}

BhResult bh_adjust(std::span<const double> p_values, double alpha) {
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw StatsError("bh_adjust: p-values must lie in [0, 1]");
  }
  const std::size_t m = p_values.size();
  BhResult out{std::vector<double>(m), std::vector<bool>(m)};
  if (m == 0) return out;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  // Running minimum from the largest p downwards.
  double running = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    const std::size_t idx = order[k];
    // p * m / m can round one ulp below p.
    const double scaled = std::max(
        p_values[idx], p_values[idx] * static_cast<double>(m) / static_cast<double>(k + 1));
    running = std::min(running, std::min(scaled, 1.0));
    out.adjusted[idx] = running;
  }
  for (std::size_t i = 0; i < m; ++i) out.reject[i] = out.adjusted[i] <= alpha;
  return out;
}

std::vector<double> mrr(const RankTable& table) {
  const std::size_t k = table.methods.size();
  if (k != 3) throw StatsError("mrr: expected exactly 3 methods, got " + std::to_string(k));
  if (table.rows.empty()) throw StatsError("mrr: no datasets");

  std::vector<double> total(k, 0.0);
  for (const auto& row : table.rows) {
    if (row.size() != k) throw StatsError("mrr: wrong method count in a dataset row");
    check_finite(row, "mrr");
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return table.direction == Direction::lower_better ? row[a] < row[b] : row[a] > row[b];
    });
    for (std::size_t i = 0; i < k;) {
      std::size_t j = i;
      double rr = 0.0;
      while (j < k && row[order[j]] == row[order[i]]) {
        rr += 1.0 / static_cast<double>(j + 1);
        ++j;
      }
      rr /= static_cast<double>(j - i);
      for (std::size_t q = i; q < j; ++q) total[order[q]] += rr;
      i = j;
    }
  }
  for (double& t : total) t /= static_cast<double>(table.rows.size());
  return total;
}

}  // namespace kmbin
