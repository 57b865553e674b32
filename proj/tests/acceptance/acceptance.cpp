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


// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails. "--only N" runs a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "kmbin/bench.hpp"
#include "kmbin/binning.hpp"
#include "kmbin/kmeans.hpp"
#include "kmbin/learner.hpp"
#include "kmbin/rng.hpp"
#include "kmbin/stats.hpp"
#include "oracles.hpp"

using namespace kmbin;

namespace {

struct Outcome {
  enum Status { pass, fail, excluded } status = fail;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Outcome::pass : Outcome::fail, std::move(detail)};
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// 1. Histogram learners on data with at most B distinct values per feature
// reproduce the exact learner bit for bit.
Outcome exact_recovery() {
  Rng rng(20240601);
  const int instances = 60;
  int matched = 0;
  for (int t = 0; t < instances; ++t) {
    const std::size_t n = 10 + rng.below(150);
    const std::size_t feats = 1 + rng.below(4);
    const int bins = 4 + static_cast<int>(rng.below(60));
    Matrix x(n, feats);
    for (std::size_t j = 0; j < feats; ++j) {
      const std::size_t levels = 1 + rng.below(static_cast<std::uint64_t>(bins));
      std::vector<double> lv(levels);
      for (auto& v : lv) v = rng.normal() * 3;
      for (std::size_t i = 0; i < n; ++i) x(i, j) = lv[rng.below(levels)];
    }
    const bool cls = t % 3 == 2;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < feats; ++j) s += x(i, j) * (j % 2 ? -1 : 1);
      y[i] = cls ? (s + rng.normal() > 0 ? 1.0 : 0.0) : s + rng.normal(0, 0.5);
    }
    if (cls) {
      y[0] = 0.0;
      y[1] = 1.0;
    }
    FitParams p;
    p.n_trees = 5 + static_cast<int>(rng.below(30));
    p.learning_rate = 0.05 + rng.uniform() * 0.5;
    p.max_depth = static_cast<int>(rng.below(6));
    p.subsample = t % 2 ? 1.0 : 0.5 + rng.uniform() * 0.5;
    p.min_samples_leaf = 1 + static_cast<int>(rng.below(4));
    p.seed = rng.next();
    const Loss loss = cls ? Loss::binary_logloss : Loss::squared_error;

    const auto exact = predict(fit_exact(x, y, p, loss), x);
    const auto q = predict(fit_gbm(fit_transform_matrix(x, BinMethod::quantile, bins), y, p, loss), x);
    const auto k = predict(fit_gbm(fit_transform_matrix(x, BinMethod::kmeans, bins), y, p, loss), x);
    matched += q == exact && k == exact;
  }
  return verdict(matched == instances,
                 fmt("%d/%d random instances identical (zero tolerance)", matched, instances));
}

// 2. Split scan against brute-force enumeration.
Outcome split_oracle() {
  Rng rng(7);
  const int instances = 5000;
  int agree = 0;
  for (int t = 0; t < instances; ++t) {
    const std::size_t rows = 1 + rng.below(8);
    const std::size_t feats = 1 + rng.below(3);
    const int msl = 1 + static_cast<int>(rng.below(2));
    std::vector<double> g(rows), h(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      g[r] = (static_cast<double>(rng.below(17)) - 8) / 8;
      h[r] = t % 2 ? 1.0 : 0.25 * static_cast<double>(1 + rng.below(8));
    }
    std::vector<std::vector<int>> codes(feats, std::vector<int>(rows));
    std::vector<int> n_bins(feats);
    std::vector<FeatureHistogram> hists(feats);
    BinStats totals;
    for (std::size_t r = 0; r < rows; ++r) {
      totals.grad += g[r];
      totals.hess += h[r];
      ++totals.count;
    }
    for (std::size_t f = 0; f < feats; ++f) {
      n_bins[f] = 1 + static_cast<int>(rng.below(4));
      hists[f].assign(static_cast<std::size_t>(n_bins[f]), BinStats{});
      for (std::size_t r = 0; r < rows; ++r) {
        codes[f][r] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_bins[f])));
        auto& b = hists[f][static_cast<std::size_t>(codes[f][r])];
        b.grad += g[r];
        b.hess += h[r];
        ++b.count;
      }
    }
    const auto got = find_best_split(hists, totals, msl);
    const auto want = oracle::brute_force_split(codes, n_bins, g, h, msl);
    const bool same = got.feature == want.feature &&
                      (want.feature < 0 || (got.split_bin == want.boundary && got.gain == want.gain));
    agree += same;
  }
  return verdict(agree == instances, fmt("%d/%d instances match brute force", agree, instances));
}

// 3. Lloyd monotonicity, midpoint edges, and the outlier instance.
Outcome lloyd() {
  Rng rng(3);
  int monotone = 0, midpoints = 0;
  const int fits = 100;
  for (int f = 0; f < fits; ++f) {
    std::vector<double> v(100 + rng.below(3000));
    for (auto& x : v) {
      x = f % 2 ? rng.normal() + (rng.uniform() < 0.02 ? rng.exponential(15) : 0)
                : std::round(rng.normal() * 20) / 4;
    }
    const auto points = compress(v);
    // Fewer bins than distinct values, so Lloyd actually runs.
    const auto cap = std::min<std::size_t>(63, points.size() - 2);
    const int bins = 2 + static_cast<int>(rng.below(cap));
    const double tol = 1e-6 * (points.values.back() - points.values.front());
    const auto res = run_lloyd(points, quantile_seeds(points, bins), 100, tol, true);
    bool ok = true;
    for (std::size_t i = 1; i < res.objective.size(); ++i)
      ok = ok && res.objective[i] <= res.objective[i - 1] * (1 + 1e-12);
    monotone += ok;
    const auto edges = fit_kmeans(v, bins).edges;
    bool mid = edges.size() + 1 == res.centroids.size();
    for (std::size_t i = 0; mid && i < edges.size(); ++i)
      mid = edges[i] == std::midpoint(res.centroids[i], res.centroids[i + 1]);
    midpoints += mid;
  }

  Rng orng(42);
  std::vector<double> v(990);
  for (auto& x : v) x = orng.normal();
  v.insert(v.end(), 10, 20.0);
  const double top = fit_kmeans(v, 8).edges.back();
  std::vector<std::size_t> kmeans_top;
  std::sort(v.begin(), v.end());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > top) kmeans_top.push_back(i);
  const auto dp = oracle::dp_kmeans(v, 8);
  std::vector<std::size_t> dp_top(v.size() - dp.starts.back());
  std::iota(dp_top.begin(), dp_top.end(), dp.starts.back());
  const bool isolated = kmeans_top.size() == 10 && v[kmeans_top.front()] == 20.0 &&
                        kmeans_top == dp_top;

  return verdict(monotone == fits && midpoints == fits && isolated,
                 fmt("monotone %d/%d, midpoint edges %d/%d, outlier bin %s (top bin %zu rows, "
                     "DP top cluster %zu rows)",
                     monotone, fits, midpoints, fits, isolated ? "matches DP" : "differs",
                     kmeans_top.size(), dp_top.size()));
}

const CellResult& find_cell(const std::vector<CellResult>& cells, double row, double col) {
  for (const auto& c : cells)
    if (c.row_value == row && c.col_value == col) return c;
  throw std::runtime_error("cell not in grid");
}

std::vector<CellResult> run_preset(Experiment id) {
  GridSpec spec = preset_grid(id);
  spec.include_exact = false;  // not needed for the delta and the test
  return run_synth_grid(spec, jobs());
}

// 4. Experiment 1, p_out = 0.01, beta = 20.
Outcome outlier_cell() {
  const auto cells = run_preset(Experiment::outlier_mass_vs_scale);
  const auto& c = find_cell(cells, 0.01, 20.0);
  return verdict(c.delta_percent >= 50 && c.significant,
                 fmt("delta%% = %.1f (need >= 50), p_adj = %.3g over %zu cells", c.delta_percent,
                     c.p_adj, cells.size()));
}

// 5. Experiment 5, p_out = 0, B = 16.
Outcome low_budget_cell() {
  const auto cells = run_preset(Experiment::bin_budget);
  const auto& c = find_cell(cells, 0.0, 16.0);
  return verdict(c.delta_percent >= 20,
                 fmt("delta%% = %.1f (need >= 20), p_adj = %.3g", c.delta_percent, c.p_adj));
}

// 6. Experiment 5, p_out = 0, B = 255.
Outcome benign_cell() {
  const auto cells = run_preset(Experiment::bin_budget);
  const auto& c = find_cell(cells, 0.0, 255.0);
  double mq = 0, mk = 0;
  for (double v : c.metric(BinMethod::quantile)) mq += v;
  for (double v : c.metric(BinMethod::kmeans)) mk += v;
  mq /= c.metric(BinMethod::quantile).size();
  mk /= c.metric(BinMethod::kmeans).size();
  return verdict(std::abs(c.delta_percent) <= 5 && !c.significant,
                 fmt("delta%% = %.2f (need |.| <= 5), p_adj = %.3g (need > 0.05); mean MSE "
                     "quantile %.5f, k-means %.5f",
                     c.delta_percent, c.p_adj, mq, mk));
}

// 7. Timing envelope at one million rows.
Outcome timing() {
  const std::vector<std::size_t> sizes{1000000};
  const std::vector<BinMethod> methods{BinMethod::quantile, BinMethod::kmeans};
  const auto res = time_binning(sizes, methods, 3);
  const double q = res[0].seconds, k = res[1].seconds;
  return verdict(q <= 5.0 && k / q <= 5.0,
                 fmt("quantile %.3f s (need <= 5), k-means %.3f s, ratio %.2f (need <= 5)", q, k,
                     k / q));
}

// 8. Statistics checks against hand values and oracles.
Outcome statistics() {
  const auto bh = bh_adjust(std::vector<double>{0.01, 0.02, 0.04});
  const bool bh_ok = bh.reject == std::vector<bool>{true, true, true};

  Rng rng(8);
  double worst_t = 0;
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 3 + rng.below(40);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal();
      b[i] = a[i] + rng.normal(0.4, 1);
    }
    const double tt = oracle::paired_t_statistic(a, b);
    worst_t = std::max(worst_t,
                       std::abs(paired_t_test(a, b) - oracle::t_two_sided_p(tt, n - 1.0)));
  }

  int auc_exact = 0;
  const int auc_trials = 200;
  for (int t = 0; t < auc_trials; ++t) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> y(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<double>(i % 2);
      s[i] = std::round(rng.normal() * 4) / 4;
    }
    auc_exact += roc_auc(y, s) == oracle::auc_pairwise(y, s);
  }

  const double d = delta_percent(5.382e-3, 2.433e-3);
  const bool delta_ok = std::abs(d - 54.8) <= 0.05;
  return verdict(bh_ok && worst_t < 1e-6 && auc_exact == auc_trials && delta_ok,
                 fmt("BH example %s, t-test max |p - oracle| = %.2e, AUC exact %d/%d, "
                     "delta%% = %.3f",
                     bh_ok ? "ok" : "wrong", worst_t, auc_exact, auc_trials, d));
}

// 9. Not a runnable check.
Outcome excluded() {
  return {Outcome::excluded,
          "benchmark-suite sweeps, the B = 63 table and third-party GBDT tables are not "
          "reproduced; criteria 1-6 stand in for them"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact-recovery equivalence", exact_recovery},
      {"split scan vs brute force", split_oracle},
      {"Lloyd correctness", lloyd},
      {"tail cell (p_out 0.01, beta 20, B 255)", outlier_cell},
      {"low-budget cell (p_out 0, B 16)", low_budget_cell},
      {"benign cell (p_out 0, B 255)", benign_cell},
      {"binning time at 1e6 rows", timing},
      {"statistics suite", statistics},
      {"desk-scale exclusions", excluded},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "--only must be 1..%zu\n", criteria.size());
    return 2;
  }

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Outcome::fail, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = o.status == Outcome::pass ? "PASS" : o.status == Outcome::fail ? "FAIL" : "EXCLUDED";
    std::printf("criterion %zu %-8s %s: %s [%.1f s]\n", i + 1, tag, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.status == Outcome::fail;
  }
  return failed ? 1 : 0;
}
