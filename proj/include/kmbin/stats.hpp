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

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kmbin {

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double mse(std::span<const double> y_true, std::span<const double> y_pred);

// Mann-Whitney formulation; tied scores count one half.
double roc_auc(std::span<const double> y_true, std::span<const double> scores);

// 100 * (mse_quantile - mse_kmeans) / mse_quantile.
double delta_percent(double mse_quantile, double mse_kmeans);

// Two-sided paired t-test p-value on a - b with n - 1 degrees of freedom.
// All-zero differences give 1; zero variance with a nonzero mean gives the
// smallest positive double.
double paired_t_test(std::span<const double> a, std::span<const double> b);

struct BhResult {
  std::vector<double> adjusted;  // input order
  std::vector<bool> reject;
};

// Benjamini-Hochberg step-up adjustment.
BhResult bh_adjust(std::span<const double> p_values, double alpha = 0.05);

enum class Direction { lower_better, higher_better };

// Metric values of the three histogram methods for each dataset.
struct RankTable {
  std::vector<std::string> methods;
  std::vector<std::vector<double>> rows;
  Direction direction = Direction::lower_better;
};

// Mean reciprocal rank per method. Exact ties share the average of the tied
// reciprocal ranks.
std::vector<double> mrr(const RankTable& table);

}  // namespace kmbin
