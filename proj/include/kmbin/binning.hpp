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
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kmbin/matrix.hpp"

namespace kmbin {

// Default histogram resolution.
inline constexpr int kDefaultBinBudget = 255;
// Low-budget preset (GPU-style training).
inline constexpr int kLowBinBudget = 63;
inline constexpr int kMaxBinBudget = 65535;

enum class BinMethod { quantile, uniform, kmeans, exact };

std::string_view to_string(BinMethod method);
// Throws std::invalid_argument on an unknown name.
BinMethod parse_bin_method(std::string_view name);

// Raised for invalid fitting/transform input (empty data, NaN/inf, bad budget).
class BinningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fitted cut points for one feature. Bin i covers (edges[i-1], edges[i]];
// bin 0 is unbounded below and the last bin is unbounded above.
struct BinEdges {
  std::vector<double> edges;
  BinMethod method = BinMethod::quantile;
  int bin_budget = kDefaultBinBudget;
  std::size_t n_fitted = 0;

  std::size_t n_bins() const { return edges.size() + 1; }
};

struct BinnedColumn {
  std::vector<std::uint16_t> indices;
  int n_bins = 1;
};

struct BinnedMatrix {
  std::vector<BinnedColumn> columns;
  std::vector<BinEdges> edges_per_feature;
  std::size_t n_rows = 0;

  std::size_t n_features() const { return columns.size(); }
};

// Lloyd stopping rule. A missing tolerance means 1e-6 times the data range.
struct KMeansOptions {
  int max_iter = 100;
  std::optional<double> tol;
};

BinEdges fit_uniform(std::span<const double> values, int bin_budget);
BinEdges fit_quantile(std::span<const double> values, int bin_budget);
BinEdges fit_kmeans(std::span<const double> values, int bin_budget,
                    const KMeansOptions& options = {});

// Dispatches on method; BinMethod::exact is rejected (it has no edges).
BinEdges fit_edges(std::span<const double> values, BinMethod method,
                   int bin_budget, const KMeansOptions& options = {});

// Index of v = number of edges strictly below v.
std::uint16_t bin_index(double v, std::span<const double> edges);
BinnedColumn transform(std::span<const double> values, const BinEdges& edges);

// Fits one set of edges per column, then bins every column. Errors carry the
// column index ("feature 3: non-finite input").
BinnedMatrix fit_transform_matrix(const Matrix& x, BinMethod method,
                                  int bin_budget,
                                  const KMeansOptions& options = {});

// Applies previously fitted edges (e.g. training edges to test rows).
BinnedMatrix transform_matrix(const Matrix& x,
                              std::span<const BinEdges> edges_per_feature);

// Bin-edge cache. All features must share one method and budget.
std::string save_edges(std::span<const BinEdges> edges_per_feature);
// Throws BinningError naming the offending feature index on malformed input.
std::vector<BinEdges> load_edges(std::string_view text);

void save_edges_file(const std::string& path,
                     std::span<const BinEdges> edges_per_feature);
std::vector<BinEdges> load_edges_file(const std::string& path);

}  // namespace kmbin
