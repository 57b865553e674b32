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


#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kmbin {

// Sorted distinct values with their multiplicities.
struct WeightedPoints {
  std::vector<double> values;
  std::vector<double> counts;

  std::size_t size() const { return values.size(); }
  double total_count() const;
};

WeightedPoints compress_sorted(std::span<const double> sorted_values);
WeightedPoints compress(std::span<const double> values);

struct LloydResult {
  std::vector<double> centroids;  // ascending, one per non-empty cluster
  int iterations = 0;
  bool converged = false;
  // Weighted SSE after seeding (index 0) and after every update step.
  // Filled only when requested.
  std::vector<double> objective;
};

// ((k - 0.5) / B)-quantiles of the weighted sample, k = 1..B, deduplicated.
std::vector<double> quantile_seeds(const WeightedPoints& points, int n_clusters);

// 1-D Lloyd iterations on weighted distinct points. Clusters are contiguous
// intervals split at centroid midpoints (ties go left); empty clusters are
// dropped. Stops when the largest centroid shift is <= tol or after max_iter.
LloydResult run_lloyd(const WeightedPoints& points, std::vector<double> seeds,
                      int max_iter, double tol, bool record_objective = false);

// Weighted within-cluster sum of squares for points assigned to the nearest
// of the (ascending) centroids, computed by direct summation.
double weighted_sse(const WeightedPoints& points,
                    std::span<const double> centroids);

}  // namespace kmbin
