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
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kmbin/binning.hpp"
#include "kmbin/csv.hpp"
#include "kmbin/learner.hpp"
#include "kmbin/synth.hpp"

namespace kmbin {

// Methods compared by every benchmark, in reporting order.
inline constexpr std::array<BinMethod, 4> kBenchMethods = {
    BinMethod::quantile, BinMethod::uniform, BinMethod::kmeans, BinMethod::exact};
inline constexpr std::array<BinMethod, 3> kHistogramMethods = {
    BinMethod::quantile, BinMethod::uniform, BinMethod::kmeans};

std::size_t method_slot(BinMethod method);

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Synthetic grids
// ---------------------------------------------------------------------------

enum class Experiment {
  outlier_mass_vs_scale = 1,
  modes_vs_scale = 2,
  modes_vs_mass = 3,
  sample_size = 4,
  bin_budget = 5,
};

std::string_view to_string(Experiment id);
// Accepts the name or its number ("1".."5").
Experiment parse_experiment(std::string_view text);

enum class GridAxis { p_out, beta, n_modes, n_obs, bin_budget };
std::string_view to_string(GridAxis axis);

inline constexpr int kDeskRepeats = 20;
inline constexpr int kFullRepeats = 50;
inline constexpr std::size_t kDeskObs = 10000;

struct GridSpec {
  Experiment experiment = Experiment::outlier_mass_vs_scale;
  GridAxis row_axis = GridAxis::p_out;
  std::vector<double> row_values;
  GridAxis col_axis = GridAxis::beta;
  std::vector<double> col_values;
  SynthConfig base;  // seed is ignored; each repeat derives its own
  int bin_budget = kDefaultBinBudget;
  int n_repeats = kDeskRepeats;
  std::uint64_t base_seed = 0;
  FitParams learner;
  double train_fraction = 0.8;
  bool include_exact = true;

  void validate() const;
};

// Desk-scale preset (n_obs = 10,000, 20 repeats) for the given experiment.
GridSpec preset_grid(Experiment id);

struct CellResult {
  std::size_t row_index = 0;
  std::size_t col_index = 0;
  double row_value = 0.0;
  double col_value = 0.0;
  // Test MSE per repeat, indexed by method_slot(). The exact list is empty
  // when the grid skips the exact learner.
  std::array<std::vector<double>, 4> mse;
  double delta_percent = 0.0;  // mean over repeats, k-means vs quantile
  double p_raw = 1.0;          // paired t-test, quantile vs k-means
  double p_adj = 1.0;          // Benjamini-Hochberg over the whole grid
  bool significant = false;

  const std::vector<double>& metric(BinMethod m) const { return mse[method_slot(m)]; }
};

// Configuration and seed of one (row, col, repeat) unit.
SynthConfig cell_config(const GridSpec& spec, std::size_t row, std::size_t col, int repeat,
                        int* bin_budget_out = nullptr);
std::uint64_t unit_seed(std::uint64_t base_seed, std::size_t row, std::size_t col, int repeat);

// Test MSE of each method for one repeat of one cell (NaN for a skipped exact).
std::array<double, 4> run_synth_repeat(const GridSpec& spec, std::size_t row, std::size_t col,
                                       int repeat);

// Runs every (cell, repeat) unit on `jobs` worker threads. Results do not
// depend on jobs or on scheduling.
std::vector<CellResult> run_synth_grid(const GridSpec& spec, int jobs = 1);

// Fills delta_percent, p_raw, p_adj and significant from the stored MSEs.
void summarize_cells(std::vector<CellResult>& cells);

// experiment,row,col,method,mean_metric,std_metric,delta_pct,p_raw,p_adj,significant
void write_grid_results(std::ostream& out, const GridSpec& spec,
                        std::span<const CellResult> cells);
// Delta% matrix: first column is the row value, one column per column value.
void write_grid_pivot(std::ostream& out, const GridSpec& spec, std::span<const CellResult> cells);
// Same layout with 0/1 significance flags.
void write_grid_significance_pivot(std::ostream& out, const GridSpec& spec,
                                   std::span<const CellResult> cells);

// ---------------------------------------------------------------------------
// CSV datasets
// ---------------------------------------------------------------------------

enum class Task { regression, classification };
std::string_view to_string(Task task);
Task parse_task(std::string_view text);

struct CsvBenchOptions {
  Task task = Task::regression;
  int bin_budget = kDefaultBinBudget;
  int n_splits = 20;
  std::uint64_t seed = 0;
  FitParams learner;
  double train_fraction = 0.8;
  int jobs = 1;
};

struct DatasetReport {
  std::string name;
  Task task = Task::regression;
  // Per-split test score (MSE or ROC-AUC), indexed by method_slot().
  std::array<std::vector<double>, 4> scores;
  std::array<BinMethod, 3> ranking{};  // histogram methods, best first
  double delta_percent = 0.0;  // k-means improvement over quantile, mean over splits
  double p_raw = 1.0;          // paired t-test, ranking[0] vs ranking[1]
  double p_adj = 1.0;
  bool significant = false;

  double mean_score(BinMethod m) const;
};

struct CsvBenchReport {
  Task task = Task::regression;
  std::vector<DatasetReport> datasets;
  std::array<double, 3> mrr{};  // in kHistogramMethods order
};

// Classification targets must take exactly two distinct values; the smaller
// maps to 0. Throws BenchError otherwise.
std::vector<double> binarize_target(std::span<const double> y);

DatasetReport run_csv_benchmark(const Dataset& data, const CsvBenchOptions& options);
// Benchmarks several datasets; the BH family is all of them.
CsvBenchReport run_csv_benchmarks(std::span<const Dataset> data, const CsvBenchOptions& options);

void write_data_results(std::ostream& out, const CsvBenchReport& report);
void write_mrr(std::ostream& out, const CsvBenchReport& report);

// ---------------------------------------------------------------------------
// Bin-construction timing
// ---------------------------------------------------------------------------

struct TimingResult {
  std::size_t n_rows = 0;
  BinMethod method = BinMethod::quantile;
  double seconds = 0.0;  // median
  std::vector<double> samples;
};

// Fits and applies edges to one Uniform(0,1) feature per size. Generation is
// outside the timed region; runs are single-threaded.
std::vector<TimingResult> time_binning(std::span<const std::size_t> sizes,
                                       std::span<const BinMethod> methods, int runs,
                                       int bin_budget = kDefaultBinBudget,
                                       std::uint64_t seed = 0);

void write_timing(std::ostream& out, std::span<const TimingResult> results);

}  // namespace kmbin
