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


#include "kmbin/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kmbin {

double WeightedPoints::total_count() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

WeightedPoints compress_sorted(std::span<const double> sorted_values) {
  WeightedPoints out;
  for (std::size_t i = 0; i < sorted_values.size();) {
    std::size_t j = i + 1;
    while (j < sorted_values.size() && sorted_values[j] == sorted_values[i]) ++j;
    out.values.push_back(sorted_values[i]);
    out.counts.push_back(static_cast<double>(j - i));
    i = j;
  }
  return out;
}

WeightedPoints compress(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return compress_sorted(sorted);
}

namespace {

// First distinct-value index that belongs to the cluster right of the
// boundary between centroids a < b. Values equal to the midpoint stay left.
std::size_t split_position(const WeightedPoints& points, double a, double b) {
  const double mid = std::midpoint(a, b);
  return static_cast<std::size_t>(
      std::upper_bound(points.values.begin(), points.values.end(), mid) -
      points.values.begin());
}

}  // namespace

std::vector<double> quantile_seeds(const WeightedPoints& points, int n_clusters) {
  if (points.size() == 0 || n_clusters < 1) return {};
  // Cumulative counts; counts are integral so the sums are exact.
  std::vector<double> cum(points.size());
  std::partial_sum(points.counts.begin(), points.counts.end(), cum.begin());
  const double n = cum.back();

  std::vector<double> seeds;
  seeds.reserve(static_cast<std::size_t>(n_clusters));
  for (int k = 1; k <= n_clusters; ++k) {
    // Lower empirical quantile: smallest order statistic x_(r) with r >= q*n,
    // where r = ceil((2k - 1) * n / (2B)).
    const double rank =
        std::ceil((2.0 * k - 1.0) * n / (2.0 * static_cast<double>(n_clusters)));
    const auto it = std::lower_bound(cum.begin(), cum.end(), std::max(rank, 1.0));
    const double v = points.values[static_cast<std::size_t>(it - cum.begin())];
    if (seeds.empty() || v > seeds.back()) seeds.push_back(v);
  }
  return seeds;
}

double weighted_sse(const WeightedPoints& points,
                    std::span<const double> centroids) {
  if (centroids.empty()) return 0.0;
  double sse = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = points.values[i];
    while (c + 1 < centroids.size() && v > std::midpoint(centroids[c], centroids[c + 1])) ++c;
    const double d = v - centroids[c];
    sse += points.counts[i] * d * d;
  }
  return sse;
}

LloydResult run_lloyd(const WeightedPoints& points, std::vector<double> seeds,
                      int max_iter, double tol, bool record_objective) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("tol must be non-negative");

  LloydResult result;
  const std::size_t n = points.size();
  if (n == 0 || seeds.empty()) return result;

  // Prefix sums of weight and weighted value, extended precision so that
  // interval means stay accurate on large inputs.
  std::vector<long double> cum_w(n + 1, 0.0L), cum_wv(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    cum_w[i + 1] = cum_w[i] + points.counts[i];
    cum_wv[i + 1] =
        cum_wv[i] + static_cast<long double>(points.counts[i]) * points.values[i];
  }

  std::vector<double> centroids = std::move(seeds);
  if (record_objective) result.objective.push_back(weighted_sse(points, centroids));

  std::vector<double> next;
  std::vector<std::size_t> starts;
  for (int iter = 0; iter < max_iter; ++iter) {
    const std::size_t k = centroids.size();
    starts.assign(k + 1, 0);
    starts[k] = n;
    for (std::size_t j = 1; j < k; ++j) {
      starts[j] = split_position(points, centroids[j - 1], centroids[j]);
    }

    next.clear();
    bool dropped = false;
    double max_shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t lo = starts[j], hi = starts[j + 1];
      if (hi <= lo) {
        dropped = true;
        continue;
      }
      double mean = static_cast<double>((cum_wv[hi] - cum_wv[lo]) / (cum_w[hi] - cum_w[lo]));
      // Rounding must not push the mean outside its own interval.
      mean = std::clamp(mean, points.values[lo], points.values[hi - 1]);
      max_shift = std::max(max_shift, std::abs(mean - centroids[j]));
      next.push_back(mean);
    }
    centroids.swap(next);
    result.iterations = iter + 1;
    if (record_objective) result.objective.push_back(weighted_sse(points, centroids));
    if (!dropped && max_shift <= tol) {
      result.converged = true;
      break;
    }
  }
  result.centroids = std::move(centroids);
  return result;
}

}  // namespace kmbin
