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
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kmbin/binning.hpp"
#include "kmbin/matrix.hpp"

namespace kmbin {

enum class Loss { squared_error, binary_logloss };

std::string_view to_string(Loss loss);
Loss parse_loss(std::string_view name);

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Defaults are the synthetic-suite settings: 100 trees, learning rate 0.1,
// depth 5, 80% row subsampling.
struct FitParams {
  int n_trees = 100;
  double learning_rate = 0.1;
  int max_depth = 5;  // 0 grows a single leaf per round
  double subsample = 0.8;
  int min_samples_leaf = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

// Internal nodes send rows with code <= split_bin left. For histogram models
// the code is the bin index; for exact models it is the rank of the value
// among the training distinct values, and threshold holds the raw cut.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  int split_bin = 0;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::size_t depth() const;
  std::size_t n_leaves() const;
};

struct GbmModel {
  double init_score = 0.0;
  double learning_rate = 1.0;
  Loss loss = Loss::squared_error;
  std::size_t n_features = 0;
  std::vector<Tree> trees;
  // Empty for exact models, which predict through raw thresholds.
  std::vector<BinEdges> edges_per_feature;

  bool uses_bins() const { return !edges_per_feature.empty(); }
};

// Per-bin gradient statistics.
struct BinStats {
  double grad = 0.0;
  double hess = 0.0;
  std::size_t count = 0;
};
using FeatureHistogram = std::vector<BinStats>;

struct SplitCandidate {
  int feature = -1;
  int split_bin = -1;
  double gain = 0.0;

  bool valid() const { return feature >= 0; }
};

// Newton gain with no regularization: G_L^2/H_L + G_R^2/H_R - G^2/H.
double split_gain(double grad_left, double hess_left, double grad_total, double hess_total);

// Best (feature, boundary) over all features by one cumulative scan each.
// Totals are the node's row-order sums; the overload without totals derives
// them from the first feature's histogram. Ties go to the lowest feature,
// then the lowest bin. Returns an invalid candidate when no split has
// positive gain or every split leaves a child under min_samples_leaf.
SplitCandidate find_best_split(std::span<const FeatureHistogram> hists, const BinStats& totals,
                               int min_samples_leaf = 1);
SplitCandidate find_best_split(std::span<const FeatureHistogram> hists,
                               int min_samples_leaf = 1);

// Histogram GBDT on pre-binned features.
GbmModel fit_gbm(const BinnedMatrix& binned, std::span<const double> y, const FitParams& params,
                 Loss loss);

// Exact-split GBDT: every boundary between distinct raw values present at a
// node is a candidate, and the cut is placed halfway to the next distinct
// training value of that feature.
GbmModel fit_exact(const Matrix& x, std::span<const double> y, const FitParams& params,
                   Loss loss);

// Raw margins (init + eta * sum of tree outputs) using at most max_trees trees.
std::vector<double> predict_raw(const GbmModel& model, const Matrix& x,
                                std::size_t max_trees = std::numeric_limits<std::size_t>::max());
// Margins for squared error, probabilities for log loss.
std::vector<double> predict(const GbmModel& model, const Matrix& x);

double sigmoid(double z);

// JSON model file: {init_score, learning_rate, loss, n_features, trees:[{nodes:[...]}],
// edges: <bin-edge cache document or null>}.
std::string save_model(const GbmModel& model);
GbmModel load_model(std::string_view text);

}  // namespace kmbin
