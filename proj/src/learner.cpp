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


#include "kmbin/learner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "kmbin/rng.hpp"

namespace kmbin {

std::string_view to_string(Loss loss) {
  return loss == Loss::squared_error ? "squared_error" : "binary_logloss";
}

Loss parse_loss(std::string_view name) {
  if (name == "squared_error") return Loss::squared_error;
  if (name == "binary_logloss") return Loss::binary_logloss;
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

void FitParams::validate() const {
  if (n_trees < 0) throw FitError("n_trees must be >= 0");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw FitError("learning_rate must be in (0, 1]");
  }
  if (max_depth < 0) throw FitError("max_depth must be >= 0");
  if (!(subsample > 0.0 && subsample <= 1.0)) throw FitError("subsample must be in (0, 1]");
  if (min_samples_leaf < 1) throw FitError("min_samples_leaf must be >= 1");
}

std::size_t Tree::depth() const {
  if (nodes.empty()) return 0;
  std::size_t best = 0;
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const TreeNode& n = nodes[static_cast<std::size_t>(id)];
    if (!n.is_leaf()) {
      stack.emplace_back(n.left, d + 1);
      stack.emplace_back(n.right, d + 1);
    }
  }
  return best;
}

std::size_t Tree::n_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double split_gain(double grad_left, double hess_left, double grad_total, double hess_total) {
  const double grad_right = grad_total - grad_left;
  const double hess_right = hess_total - hess_left;
  if (!(hess_left > 0.0) || !(hess_right > 0.0) || !(hess_total > 0.0)) return 0.0;
  return grad_left * grad_left / hess_left + grad_right * grad_right / hess_right -
         grad_total * grad_total / hess_total;
}

SplitCandidate find_best_split(std::span<const FeatureHistogram> hists, const BinStats& totals,
                               int min_samples_leaf) {
  const std::size_t min_leaf = static_cast<std::size_t>(std::max(min_samples_leaf, 1));
  SplitCandidate best;
  for (std::size_t f = 0; f < hists.size(); ++f) {
    const FeatureHistogram& hist = hists[f];
    double grad_left = 0.0, hess_left = 0.0;
    std::size_t count_left = 0;
    for (std::size_t b = 0; b + 1 < hist.size(); ++b) {
      grad_left += hist[b].grad;
      hess_left += hist[b].hess;
      count_left += hist[b].count;
      if (count_left < min_leaf) continue;
      if (totals.count < count_left + min_leaf) break;
      const double gain = split_gain(grad_left, hess_left, totals.grad, totals.hess);
      if (gain > best.gain) best = {static_cast<int>(f), static_cast<int>(b), gain};
    }
  }
  return best;
}

SplitCandidate find_best_split(std::span<const FeatureHistogram> hists, int min_samples_leaf) {
  if (hists.empty()) return {};
  BinStats totals;
  for (const BinStats& s : hists.front()) {
    totals.grad += s.grad;
    totals.hess += s.hess;
    totals.count += s.count;
  }
  return find_best_split(hists, totals, min_samples_leaf);
}

namespace {

using RowIndex = std::uint32_t;

// Split search over pre-binned columns: per-node histograms, rebuilt from
// the node's rows.
class HistogramSplitter {
 public:
  explicit HistogramSplitter(const BinnedMatrix& binned) : binned_(binned) {
    hists_.resize(binned.n_features());
  }

  std::size_t n_features() const { return binned_.n_features(); }

  std::uint32_t code(std::size_t feature, std::size_t row) const {
    return binned_.columns[feature].indices[row];
  }

  SplitCandidate best(std::span<const RowIndex> rows, std::span<const double> grad,
                      std::span<const double> hess, const BinStats& totals, int min_leaf) {
    for (std::size_t f = 0; f < hists_.size(); ++f) {
      const BinnedColumn& col = binned_.columns[f];
      FeatureHistogram& hist = hists_[f];
      hist.assign(static_cast<std::size_t>(col.n_bins), BinStats{});
      for (RowIndex r : rows) {
        BinStats& s = hist[col.indices[r]];
        s.grad += grad[r];
        s.hess += hess[r];
        ++s.count;
      }
    }
    return find_best_split(hists_, totals, min_leaf);
  }

  double threshold(const SplitCandidate& split) const {
    return binned_.edges_per_feature[static_cast<std::size_t>(split.feature)]
        .edges[static_cast<std::size_t>(split.split_bin)];
  }

 private:
  const BinnedMatrix& binned_;
  std::vector<FeatureHistogram> hists_;
};

// Exact split search: rows are visited in presorted value order and grouped
// by distinct value, so every boundary between distinct values present at
// the node is scored.
class ExactSplitter {
 public:
  explicit ExactSplitter(const Matrix& x) : n_rows_(x.rows()) {
    levels_.resize(x.cols());
    ranks_.resize(x.cols());
    order_.resize(x.cols());
    for (std::size_t f = 0; f < x.cols(); ++f) {
      auto col = x.column(f);
      for (double v : col) {
        if (!std::isfinite(v)) {
          throw FitError("feature " + std::to_string(f) + ": non-finite input");
        }
      }
      std::vector<RowIndex>& order = order_[f];
      order.resize(n_rows_);
      std::iota(order.begin(), order.end(), RowIndex{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](RowIndex a, RowIndex b) { return col[a] < col[b]; });
      std::vector<std::uint32_t>& rank = ranks_[f];
      rank.resize(n_rows_);
      std::vector<double>& levels = levels_[f];
      for (RowIndex r : order) {
        if (levels.empty() || col[r] != levels.back()) levels.push_back(col[r]);
        rank[r] = static_cast<std::uint32_t>(levels.size() - 1);
      }
    }
    mark_.assign(n_rows_, 0);
  }

  std::size_t n_features() const { return ranks_.size(); }

  std::uint32_t code(std::size_t feature, std::size_t row) const { return ranks_[feature][row]; }

  SplitCandidate best(std::span<const RowIndex> rows, std::span<const double> grad,
                      std::span<const double> hess, const BinStats& totals, int min_leaf_param) {
    const std::size_t min_leaf = static_cast<std::size_t>(std::max(min_leaf_param, 1));
    ++stamp_;
    for (RowIndex r : rows) mark_[r] = stamp_;

    SplitCandidate best;
    for (std::size_t f = 0; f < order_.size(); ++f) {
      const std::vector<std::uint32_t>& rank = ranks_[f];
      double grad_left = 0.0, hess_left = 0.0;
      std::size_t count_left = 0;
      double group_grad = 0.0, group_hess = 0.0;
      std::size_t group_count = 0;
      bool have_group = false;
      std::uint32_t group_rank = 0;
      for (RowIndex r : order_[f]) {
        if (mark_[r] != stamp_) continue;
        if (have_group && rank[r] != group_rank) {
          // Boundary between the finished group and the next present value.
          grad_left += group_grad;
          hess_left += group_hess;
          count_left += group_count;
          group_grad = group_hess = 0.0;
          group_count = 0;
          if (count_left >= min_leaf && totals.count >= count_left + min_leaf) {
            const double gain = split_gain(grad_left, hess_left, totals.grad, totals.hess);
            if (gain > best.gain) {
              best = {static_cast<int>(f), static_cast<int>(group_rank), gain};
            }
          }
        }
        have_group = true;
        group_rank = rank[r];
        group_grad += grad[r];
        group_hess += hess[r];
        ++group_count;
      }
    }
    return best;
  }

  double threshold(const SplitCandidate& split) const {
    const auto& levels = levels_[static_cast<std::size_t>(split.feature)];
    const auto b = static_cast<std::size_t>(split.split_bin);
    return std::midpoint(levels[b], levels[b + 1]);
  }

 private:
  std::size_t n_rows_;
  std::vector<std::vector<double>> levels_;
  std::vector<std::vector<std::uint32_t>> ranks_;
  std::vector<std::vector<RowIndex>> order_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
};

void check_targets(std::size_t n_rows, std::span<const double> y, Loss loss) {
  if (n_rows != y.size()) {
    throw FitError("row count mismatch: " + std::to_string(n_rows) + " feature rows vs " +
                   std::to_string(y.size()) + " targets");
  }
  if (y.size() < 2) throw FitError("need at least 2 rows");
  for (double v : y) {
    if (!std::isfinite(v)) throw FitError("non-finite target");
  }
  if (loss == Loss::binary_logloss) {
    bool has0 = false, has1 = false;
    for (double v : y) {
      if (v == 0.0) has0 = true;
      else if (v == 1.0) has1 = true;
      else throw FitError("binary_logloss targets must be 0 or 1");
    }
    if (!has0 || !has1) throw FitError("binary_logloss needs both classes present");
  }
}

double initial_score(std::span<const double> y, Loss loss) {
  // Shifted mean: exact for constant targets.
  const double anchor = y.front();
  double shifted = 0.0;
  for (double v : y) shifted += v - anchor;
  const double mean = anchor + shifted / static_cast<double>(y.size());
  if (loss == Loss::squared_error) return mean;
  return std::log(mean / (1.0 - mean));
}

BinStats node_totals(std::span<const RowIndex> rows, std::span<const double> grad,
                     std::span<const double> hess) {
  BinStats t;
  for (RowIndex r : rows) {
    t.grad += grad[r];
    t.hess += hess[r];
  }
  t.count = rows.size();
  return t;
}

template <class Splitter>
std::size_t route(const Tree& tree, const Splitter& splitter, std::size_t row) {
  std::size_t id = 0;
  while (!tree.nodes[id].is_leaf()) {
    const TreeNode& n = tree.nodes[id];
    id = static_cast<std::size_t>(
        splitter.code(static_cast<std::size_t>(n.feature), row) <= static_cast<std::uint32_t>(n.split_bin)
            ? n.left
            : n.right);
  }
  return id;
}

// Depth-wise (level-order) growth. Rows must be ascending; partitions keep
// that order so every sum is accumulated in row order.
template <class Splitter>
Tree grow_tree(Splitter& splitter, std::vector<RowIndex> rows, std::span<const double> grad,
               std::span<const double> hess, const FitParams& params) {
  struct Task {
    int node;
    std::vector<RowIndex> rows;
    int depth;
  };
  Tree tree;
  tree.nodes.emplace_back();
  std::deque<Task> queue;
  queue.push_back({0, std::move(rows), 0});
  const std::size_t min_leaf = static_cast<std::size_t>(params.min_samples_leaf);

  while (!queue.empty()) {
    Task task = std::move(queue.front());
    queue.pop_front();
    const BinStats totals = node_totals(task.rows, grad, hess);

    SplitCandidate split;
    if (task.depth < params.max_depth && task.rows.size() >= 2 * min_leaf) {
      split = splitter.best(task.rows, grad, hess, totals, params.min_samples_leaf);
    }
    if (!split.valid()) {
      tree.nodes[static_cast<std::size_t>(task.node)].value =
          totals.hess > 0.0 ? -totals.grad / totals.hess : 0.0;
      continue;
    }

    std::vector<RowIndex> left, right;
    const auto feature = static_cast<std::size_t>(split.feature);
    for (RowIndex r : task.rows) {
      (splitter.code(feature, r) <= static_cast<std::uint32_t>(split.split_bin) ? left : right)
          .push_back(r);
    }
    const int left_id = static_cast<int>(tree.nodes.size());
    TreeNode& node = tree.nodes[static_cast<std::size_t>(task.node)];
    node.feature = split.feature;
    node.split_bin = split.split_bin;
    node.threshold = splitter.threshold(split);
    node.left = left_id;
    node.right = left_id + 1;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    queue.push_back({left_id, std::move(left), task.depth + 1});
    queue.push_back({left_id + 1, std::move(right), task.depth + 1});
  }
  return tree;
}

template <class Splitter>
GbmModel boost(Splitter& splitter, std::size_t n_rows, std::span<const double> y,
               const FitParams& params, Loss loss, GbmModel model) {
  model.init_score = initial_score(y, loss);
  model.learning_rate = params.learning_rate;
  model.loss = loss;
  model.n_features = splitter.n_features();
  model.trees.reserve(static_cast<std::size_t>(params.n_trees));

  std::vector<double> margin(n_rows, model.init_score);
  std::vector<double> grad(n_rows), hess(n_rows);
  std::vector<RowIndex> perm(n_rows);
  Rng rng(params.seed);
  const auto n_sub = std::max<std::size_t>(
      1, static_cast<std::size_t>(params.subsample * static_cast<double>(n_rows)));

  for (int t = 0; t < params.n_trees; ++t) {
    for (std::size_t i = 0; i < n_rows; ++i) {
      if (loss == Loss::squared_error) {
        grad[i] = margin[i] - y[i];
        hess[i] = 1.0;
      } else {
        const double p = sigmoid(margin[i]);
        grad[i] = p - y[i];
        hess[i] = p * (1.0 - p);
      }
    }

    std::iota(perm.begin(), perm.end(), RowIndex{0});
    std::vector<RowIndex> rows;
    if (n_sub >= n_rows) {
      rows = perm;
    } else {
      // Partial Fisher-Yates: the first n_sub slots are a uniform sample
      // without replacement.
      for (std::size_t i = 0; i < n_sub; ++i) {
        std::swap(perm[i], perm[i + rng.below(n_rows - i)]);
      }
      rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_sub));
      std::sort(rows.begin(), rows.end());
    }

    Tree tree = grow_tree(splitter, std::move(rows), grad, hess, params);
    for (std::size_t i = 0; i < n_rows; ++i) {
      margin[i] += params.learning_rate * tree.nodes[route(tree, splitter, i)].value;
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace

GbmModel fit_gbm(const BinnedMatrix& binned, std::span<const double> y, const FitParams& params,
                 Loss loss) {
  params.validate();
  check_targets(binned.n_rows, y, loss);
  if (binned.edges_per_feature.size() != binned.columns.size()) {
    throw FitError("binned matrix has mismatched edges and columns");
  }
  for (const BinnedColumn& c : binned.columns) {
    if (c.indices.size() != binned.n_rows) throw FitError("binned column length mismatch");
  }
  HistogramSplitter splitter(binned);
  GbmModel model;
  model.edges_per_feature = binned.edges_per_feature;
  return boost(splitter, binned.n_rows, y, params, loss, std::move(model));
}

GbmModel fit_exact(const Matrix& x, std::span<const double> y, const FitParams& params,
                   Loss loss) {
  params.validate();
  check_targets(x.rows(), y, loss);
  ExactSplitter splitter(x);
  return boost(splitter, x.rows(), y, params, loss, GbmModel{});
}

std::vector<double> predict_raw(const GbmModel& model, const Matrix& x, std::size_t max_trees) {
  if (x.cols() != model.n_features) {
    throw FitError("feature count mismatch: model has " + std::to_string(model.n_features) +
                   ", input has " + std::to_string(x.cols()));
  }
  for (std::size_t f = 0; f < x.cols(); ++f) {
    for (double v : x.column(f)) {
      if (!std::isfinite(v)) throw FitError("feature " + std::to_string(f) + ": non-finite input");
    }
  }
  const std::size_t n_trees = std::min(max_trees, model.trees.size());
  std::vector<double> out(x.rows(), model.init_score);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t t = 0; t < n_trees; ++t) {
      const Tree& tree = model.trees[t];
      std::size_t id = 0;
      while (!tree.nodes[id].is_leaf()) {
        const TreeNode& n = tree.nodes[id];
        const auto f = static_cast<std::size_t>(n.feature);
        bool left;
        if (model.uses_bins()) {
          left = bin_index(x(i, f), model.edges_per_feature[f].edges) <= n.split_bin;
        } else {
          left = x(i, f) <= n.threshold;
        }
        id = static_cast<std::size_t>(left ? n.left : n.right);
      }
      out[i] += model.learning_rate * tree.nodes[id].value;
    }
  }
  return out;
}

std::vector<double> predict(const GbmModel& model, const Matrix& x) {
  std::vector<double> out = predict_raw(model, x);
  if (model.loss == Loss::binary_logloss) {
    for (double& v : out) v = sigmoid(v);
  }
  return out;
}

}  // namespace kmbin
