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


#include "kmbin/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "kmbin/rng.hpp"
#include "kmbin/stats.hpp"

namespace kmbin {

std::size_t method_slot(BinMethod method) {
  switch (method) {
    case BinMethod::quantile: return 0;
    case BinMethod::uniform: return 1;
    case BinMethod::kmeans: return 2;
    case BinMethod::exact: return 3;
  }
  return 0;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception is
// rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  return format_double(v);
}

// Shuffled row split; returns (train, test) row lists in ascending order.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> shuffle_split(
    std::size_t n, double train_fraction, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
  const auto n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(n));
  std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

// Per-class shuffle split so both classes appear on each side.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const double> y, double train_fraction, Rng& rng) {
  std::vector<std::size_t> train, test;
  for (double cls : {0.0, 1.0}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == cls) idx.push_back(i);
    }
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    auto n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(idx.size()));
    n_train = std::clamp<std::size_t>(n_train, 1, idx.size() > 1 ? idx.size() - 1 : 1);
    train.insert(train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

std::vector<double> select(std::span<const double> v, std::span<const std::size_t> rows) {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = v[rows[i]];
  return out;
}

// Fits one method on the training rows and returns test predictions.
std::vector<double> fit_and_predict(BinMethod method, const Matrix& x_train,
                                    std::span<const double> y_train, const Matrix& x_test,
                                    int bin_budget, const FitParams& params, Loss loss) {
  GbmModel model;
  if (method == BinMethod::exact) {
    model = fit_exact(x_train, y_train, params, loss);
  } else {
    const BinnedMatrix binned = fit_transform_matrix(x_train, method, bin_budget);
    model = fit_gbm(binned, y_train, params, loss);
  }
  return predict(model, x_test);
}

}  // namespace

// ---------------------------------------------------------------------------
// Synthetic grids
// ---------------------------------------------------------------------------

std::string_view to_string(Experiment id) {
  switch (id) {
    case Experiment::outlier_mass_vs_scale: return "outlier_mass_vs_scale";
    case Experiment::modes_vs_scale: return "modes_vs_scale";
    case Experiment::modes_vs_mass: return "modes_vs_mass";
    case Experiment::sample_size: return "sample_size";
    case Experiment::bin_budget: return "bin_budget";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view text) {
  for (int i = 1; i <= 5; ++i) {
    const auto id = static_cast<Experiment>(i);
    if (text == to_string(id) || text == std::to_string(i)) return id;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(text) + "'");
}

std::string_view to_string(GridAxis axis) {
  switch (axis) {
    case GridAxis::p_out: return "p_out";
    case GridAxis::beta: return "beta";
    case GridAxis::n_modes: return "n_modes";
    case GridAxis::n_obs: return "n_obs";
    case GridAxis::bin_budget: return "bin_budget";
  }
  return "unknown";
}

void GridSpec::validate() const {
  if (row_values.empty() || col_values.empty()) {
    throw BenchError("grid needs at least one row and one column value");
  }
  if (n_repeats < 2) throw BenchError("n_repeats must be >= 2");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw BenchError("train_fraction must be in (0, 1)");
  }
  if (row_axis == col_axis) throw BenchError("row and column axes must differ");
  learner.validate();
}

GridSpec preset_grid(Experiment id) {
  GridSpec spec;
  spec.experiment = id;
  spec.base.n_obs = kDeskObs;
  spec.base.n_feat = 3;
  spec.base.dist = 4.0;
  const std::vector<double> betas = {5, 10, 15, 20};
  const std::vector<double> modes = {1, 2, 5, 10, 20};
  switch (id) {
    case Experiment::outlier_mass_vs_scale:
      spec.row_axis = GridAxis::p_out;
      spec.row_values = {0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
      spec.col_axis = GridAxis::beta;
      spec.col_values = betas;
      break;
    case Experiment::modes_vs_scale:
      spec.base.p_out = 0.01;
      spec.row_axis = GridAxis::n_modes;
      spec.row_values = modes;
      spec.col_axis = GridAxis::beta;
      spec.col_values = betas;
      break;
    case Experiment::modes_vs_mass:
      spec.base.beta = 5.0;
      spec.row_axis = GridAxis::n_modes;
      spec.row_values = modes;
      spec.col_axis = GridAxis::p_out;
      spec.col_values = {0.0, 0.01, 0.02, 0.05};
      break;
    case Experiment::sample_size:
      spec.base.beta = 10.0;
      spec.row_axis = GridAxis::p_out;
      spec.row_values = {0.0, 0.01, 0.05};
      spec.col_axis = GridAxis::n_obs;
      spec.col_values = {2000, 5000, 10000, 20000, 50000};
      break;
    case Experiment::bin_budget:
      spec.base.beta = 10.0;
      spec.row_axis = GridAxis::p_out;
      spec.row_values = {0.0, 0.01, 0.05, 1.0};
      spec.col_axis = GridAxis::bin_budget;
      spec.col_values = {16, 32, 64, 128, 255};
      break;
  }
  return spec;
}

std::uint64_t unit_seed(std::uint64_t base_seed, std::size_t row, std::size_t col, int repeat) {
  return derive_seed(base_seed, {row, col, static_cast<std::uint64_t>(repeat)});
}

namespace {

void apply_axis(GridAxis axis, double value, SynthConfig& cfg, int& bin_budget) {
  switch (axis) {
    case GridAxis::p_out: cfg.p_out = value; break;
    case GridAxis::beta: cfg.beta = value; break;
    case GridAxis::n_modes: cfg.n_modes = static_cast<std::size_t>(value); break;
    case GridAxis::n_obs: cfg.n_obs = static_cast<std::size_t>(value); break;
    case GridAxis::bin_budget: bin_budget = static_cast<int>(value); break;
  }
}

}  // namespace

SynthConfig cell_config(const GridSpec& spec, std::size_t row, std::size_t col, int repeat,
                        int* bin_budget_out) {
  SynthConfig cfg = spec.base;
  int budget = spec.bin_budget;
  apply_axis(spec.row_axis, spec.row_values.at(row), cfg, budget);
  apply_axis(spec.col_axis, spec.col_values.at(col), cfg, budget);
  cfg.seed = derive_seed(unit_seed(spec.base_seed, row, col, repeat), {0});
  if (bin_budget_out) *bin_budget_out = budget;
  return cfg;
}

std::array<double, 4> run_synth_repeat(const GridSpec& spec, std::size_t row, std::size_t col,
                                       int repeat) {
  int budget = spec.bin_budget;
  const SynthConfig cfg = cell_config(spec, row, col, repeat, &budget);
  const std::uint64_t seed = unit_seed(spec.base_seed, row, col, repeat);

  const SynthData data = make_synth(cfg);
  Rng split_rng(derive_seed(seed, {1}));
  const auto [train, test] = shuffle_split(cfg.n_obs, spec.train_fraction, split_rng);
  const Matrix x_train = data.x.select_rows(train);
  const Matrix x_test = data.x.select_rows(test);
  const std::vector<double> y_train = select(data.y, train);
  const std::vector<double> y_test = select(data.y, test);

  FitParams params = spec.learner;
  params.seed = derive_seed(seed, {2});

  std::array<double, 4> out;
  out.fill(std::numeric_limits<double>::quiet_NaN());
  for (BinMethod m : kBenchMethods) {
    if (m == BinMethod::exact && !spec.include_exact) continue;
    const auto pred =
        fit_and_predict(m, x_train, y_train, x_test, budget, params, Loss::squared_error);
    out[method_slot(m)] = mse(y_test, pred);
  }
  return out;
}

void summarize_cells(std::vector<CellResult>& cells) {
  std::vector<double> p(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult& cell = cells[c];
    const auto& q = cell.metric(BinMethod::quantile);
    const auto& k = cell.metric(BinMethod::kmeans);
    double sum = 0.0;
    for (std::size_t r = 0; r < q.size(); ++r) sum += delta_percent(q[r], k[r]);
    cell.delta_percent = sum / static_cast<double>(q.size());
    cell.p_raw = paired_t_test(q, k);
    p[c] = cell.p_raw;
  }
  const BhResult bh = bh_adjust(p);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    cells[c].p_adj = bh.adjusted[c];
    cells[c].significant = bh.reject[c];
  }
}

std::vector<CellResult> run_synth_grid(const GridSpec& spec, int jobs) {
  spec.validate();
  const std::size_t n_rows = spec.row_values.size(), n_cols = spec.col_values.size();
  const auto n_rep = static_cast<std::size_t>(spec.n_repeats);
  const std::size_t n_units = n_rows * n_cols * n_rep;

  std::vector<std::array<double, 4>> unit_mse(n_units);
  parallel_for(n_units, jobs, [&](std::size_t u) {
    const std::size_t rep = u % n_rep;
    const std::size_t cell = u / n_rep;
    const std::size_t row = cell / n_cols, col = cell % n_cols;
    try {
      unit_mse[u] = run_synth_repeat(spec, row, col, static_cast<int>(rep));
    } catch (const std::exception& e) {
      throw BenchError("cell (row=" + std::to_string(row) + ", col=" + std::to_string(col) +
                       ", repeat=" + std::to_string(rep) + "): " + e.what());
    }
  });

  std::vector<CellResult> cells;
  cells.reserve(n_rows * n_cols);
  for (std::size_t row = 0; row < n_rows; ++row) {
    for (std::size_t col = 0; col < n_cols; ++col) {
      CellResult cell;
      cell.row_index = row;
      cell.col_index = col;
      cell.row_value = spec.row_values[row];
      cell.col_value = spec.col_values[col];
      for (std::size_t rep = 0; rep < n_rep; ++rep) {
        const auto& m = unit_mse[(row * n_cols + col) * n_rep + rep];
        for (BinMethod method : kBenchMethods) {
          if (method == BinMethod::exact && !spec.include_exact) continue;
          cell.mse[method_slot(method)].push_back(m[method_slot(method)]);
        }
      }
      cells.push_back(std::move(cell));
    }
  }
  summarize_cells(cells);
  return cells;
}

namespace {

const std::vector<std::string> kResultHeader = {"experiment", "row",   "col",   "method",
                                                "mean_metric", "std_metric", "delta_pct",
                                                "p_raw",      "p_adj", "significant"};

}  // namespace

void write_grid_results(std::ostream& out, const GridSpec& spec,
                        std::span<const CellResult> cells) {
  write_csv_row(out, kResultHeader);
  for (const CellResult& cell : cells) {
    for (BinMethod m : kBenchMethods) {
      const auto& v = cell.metric(m);
      if (v.empty()) continue;
      const std::vector<std::string> row = {std::string(to_string(spec.experiment)),
                                            csv_number(cell.row_value),
                                            csv_number(cell.col_value),
                                            std::string(to_string(m)),
                                            csv_number(mean_of(v)),
                                            csv_number(sample_sd(v)),
                                            csv_number(cell.delta_percent),
                                            csv_number(cell.p_raw),
                                            csv_number(cell.p_adj),
                                            cell.significant ? "1" : "0"};
      write_csv_row(out, row);
    }
  }
}

namespace {

template <class Value>
void write_pivot(std::ostream& out, const GridSpec& spec, std::span<const CellResult> cells,
                 Value value) {
  std::vector<std::string> header = {std::string(to_string(spec.row_axis)) + "\\" +
                                     std::string(to_string(spec.col_axis))};
  for (double c : spec.col_values) header.push_back(csv_number(c));
  write_csv_row(out, header);
  for (std::size_t r = 0; r < spec.row_values.size(); ++r) {
    std::vector<std::string> row = {csv_number(spec.row_values[r])};
    for (std::size_t c = 0; c < spec.col_values.size(); ++c) {
      const auto it = std::find_if(cells.begin(), cells.end(), [&](const CellResult& cell) {
        return cell.row_index == r && cell.col_index == c;
      });
      row.push_back(it == cells.end() ? "nan" : value(*it));
    }
    write_csv_row(out, row);
  }
}

}  // namespace

void write_grid_pivot(std::ostream& out, const GridSpec& spec, std::span<const CellResult> cells) {
  write_pivot(out, spec, cells, [](const CellResult& c) { return csv_number(c.delta_percent); });
}

void write_grid_significance_pivot(std::ostream& out, const GridSpec& spec,
                                   std::span<const CellResult> cells) {
  write_pivot(out, spec, cells,
              [](const CellResult& c) { return std::string(c.significant ? "1" : "0"); });
}

// ---------------------------------------------------------------------------
// CSV datasets
// ---------------------------------------------------------------------------

std::string_view to_string(Task task) {
  return task == Task::regression ? "regression" : "classification";
}

Task parse_task(std::string_view text) {
  if (text == "regression") return Task::regression;
  if (text == "classification") return Task::classification;
  throw std::invalid_argument("unknown task '" + std::string(text) + "'");
}

double DatasetReport::mean_score(BinMethod m) const { return mean_of(scores[method_slot(m)]); }

std::vector<double> binarize_target(std::span<const double> y) {
  std::vector<double> levels(y.begin(), y.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.size() != 2) {
    throw BenchError("classification target not binary: " + std::to_string(levels.size()) +
                     " distinct values");
  }
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] == levels[0] ? 0.0 : 1.0;
  return out;
}

DatasetReport run_csv_benchmark(const Dataset& data, const CsvBenchOptions& options) {
  if (options.n_splits < 2) throw BenchError("n_splits must be >= 2");
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
    throw BenchError("train_fraction must be in (0, 1)");
  }
  options.learner.validate();
  const bool classify = options.task == Task::classification;
  const std::vector<double> y =
      classify ? binarize_target(data.y) : std::vector<double>(data.y.begin(), data.y.end());
  const Loss loss = classify ? Loss::binary_logloss : Loss::squared_error;

  const auto n_splits = static_cast<std::size_t>(options.n_splits);
  std::vector<std::array<double, 4>> per_split(n_splits);
  parallel_for(n_splits, options.jobs, [&](std::size_t s) {
    const std::uint64_t seed = derive_seed(options.seed, {s});
    Rng rng(derive_seed(seed, {1}));
    auto [train, test] = classify ? stratified_split(y, options.train_fraction, rng)
                                  : shuffle_split(y.size(), options.train_fraction, rng);
    const Matrix x_train = data.x.select_rows(train);
    const Matrix x_test = data.x.select_rows(test);
    const std::vector<double> y_train = select(y, train);
    const std::vector<double> y_test = select(y, test);
    FitParams params = options.learner;
    params.seed = derive_seed(seed, {2});
    for (BinMethod m : kBenchMethods) {
      try {
        const auto pred =
            fit_and_predict(m, x_train, y_train, x_test, options.bin_budget, params, loss);
        per_split[s][method_slot(m)] = classify ? roc_auc(y_test, pred) : mse(y_test, pred);
      } catch (const std::exception& e) {
        throw BenchError(data.name + " split " + std::to_string(s) + " (" +
                         std::string(to_string(m)) + "): " + e.what());
      }
    }
  });

  DatasetReport report;
  report.name = data.name;
  report.task = options.task;
  for (const auto& split : per_split) {
    for (BinMethod m : kBenchMethods) report.scores[method_slot(m)].push_back(split[method_slot(m)]);
  }

  report.ranking = kHistogramMethods;
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](BinMethod a, BinMethod b) {
    return classify ? report.mean_score(a) > report.mean_score(b)
                    : report.mean_score(a) < report.mean_score(b);
  });

  const auto& q = report.scores[method_slot(BinMethod::quantile)];
  const auto& k = report.scores[method_slot(BinMethod::kmeans)];
  double sum = 0.0;
  for (std::size_t s = 0; s < n_splits; ++s) {
    // Positive when k-means is better, for either metric direction.
    sum += classify ? 100.0 * (k[s] - q[s]) / q[s] : delta_percent(q[s], k[s]);
  }
  report.delta_percent = sum / static_cast<double>(n_splits);
  report.p_raw = paired_t_test(report.scores[method_slot(report.ranking[0])],
                               report.scores[method_slot(report.ranking[1])]);
  report.p_adj = report.p_raw;
  report.significant = report.p_adj <= 0.05;
  return report;
}

CsvBenchReport run_csv_benchmarks(std::span<const Dataset> data, const CsvBenchOptions& options) {
  if (data.empty()) throw BenchError("no datasets");
  CsvBenchReport report;
  report.task = options.task;
  for (const Dataset& d : data) report.datasets.push_back(run_csv_benchmark(d, options));

  std::vector<double> p;
  RankTable table;
  table.direction = options.task == Task::classification ? Direction::higher_better
                                                         : Direction::lower_better;
  for (BinMethod m : kHistogramMethods) table.methods.emplace_back(to_string(m));
  for (const DatasetReport& d : report.datasets) {
    p.push_back(d.p_raw);
    std::vector<double> row;
    for (BinMethod m : kHistogramMethods) row.push_back(d.mean_score(m));
    table.rows.push_back(std::move(row));
  }
  const BhResult bh = bh_adjust(p);
  for (std::size_t i = 0; i < report.datasets.size(); ++i) {
    report.datasets[i].p_adj = bh.adjusted[i];
    report.datasets[i].significant = bh.reject[i];
  }
  const std::vector<double> m = mrr(table);
  std::copy(m.begin(), m.end(), report.mrr.begin());
  return report;
}

void write_data_results(std::ostream& out, const CsvBenchReport& report) {
  write_csv_row(out, kResultHeader);
  for (const DatasetReport& d : report.datasets) {
    for (BinMethod m : kBenchMethods) {
      const auto& v = d.scores[method_slot(m)];
      const std::vector<std::string> row = {"data",
                                            d.name,
                                            std::string(to_string(d.task)),
                                            std::string(to_string(m)),
                                            csv_number(mean_of(v)),
                                            csv_number(sample_sd(v)),
                                            csv_number(d.delta_percent),
                                            csv_number(d.p_raw),
                                            csv_number(d.p_adj),
                                            d.significant ? "1" : "0"};
      write_csv_row(out, row);
    }
  }
}

void write_mrr(std::ostream& out, const CsvBenchReport& report) {
  const std::vector<std::string> header = {"method", "mrr"};
  write_csv_row(out, header);
  for (std::size_t i = 0; i < kHistogramMethods.size(); ++i) {
    const std::vector<std::string> row = {std::string(to_string(kHistogramMethods[i])),
                                          csv_number(report.mrr[i])};
    write_csv_row(out, row);
  }
}

// ---------------------------------------------------------------------------
// Timing
// ---------------------------------------------------------------------------

std::vector<TimingResult> time_binning(std::span<const std::size_t> sizes,
                                       std::span<const BinMethod> methods, int runs,
                                       int bin_budget, std::uint64_t seed) {
  if (runs < 1) throw BenchError("runs must be >= 1");
  std::vector<TimingResult> out;
  for (std::size_t n : sizes) {
    if (n == 0) throw BenchError("timing sizes must be positive");
    Rng rng(derive_seed(seed, {n}));
    std::vector<double> values(n);
    for (double& v : values) v = rng.uniform();

    for (BinMethod m : methods) {
      if (m == BinMethod::exact) throw BenchError("exact splitting has no binning pass to time");
      TimingResult r{.n_rows = n, .method = m, .seconds = 0.0, .samples = {}};
      for (int run = 0; run < runs; ++run) {
        const auto start = std::chrono::steady_clock::now();
        const BinEdges edges = fit_edges(values, m, bin_budget);
        const BinnedColumn col = transform(values, edges);
        const auto stop = std::chrono::steady_clock::now();
        // Keep the result observable so the work is not optimized away.
        if (col.indices.size() != n) throw BenchError("internal: transform size mismatch");
        r.samples.push_back(std::chrono::duration<double>(stop - start).count());
      }
      std::vector<double> sorted = r.samples;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t mid = sorted.size() / 2;
      r.seconds = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
      out.push_back(std::move(r));
    }
  }
  return out;
}

void write_timing(std::ostream& out, std::span<const TimingResult> results) {
  const std::vector<std::string> header = {"n_rows", "method", "median_seconds", "runs"};
  write_csv_row(out, header);
  for (const TimingResult& r : results) {
    const std::vector<std::string> row = {std::to_string(r.n_rows), std::string(to_string(r.method)),
                                          csv_number(r.seconds), std::to_string(r.samples.size())};
    write_csv_row(out, row);
  }
}

}  // namespace kmbin
