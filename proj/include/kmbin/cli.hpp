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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kmbin/binning.hpp"
#include "kmbin/learner.hpp"

namespace kmbin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;    // usage, ingestion or malformed input
inline constexpr int kExitNumeric = 3;  // fitting or numeric failure

// Environment variable consulted when --out-dir is not given.
inline constexpr const char* kOutDirEnv = "KMBIN_OUT_DIR";

struct LearnerFlags {
  std::optional<int> n_trees;
  std::optional<double> learning_rate;
  std::optional<int> max_depth;
  std::optional<double> subsample;
  std::optional<int> min_samples_leaf;

  FitParams apply(FitParams base) const;
};

struct BinCommand {
  std::string input;
  BinMethod method = BinMethod::quantile;
  int bins = kDefaultBinBudget;
  std::optional<std::string> edges_out;
  std::optional<std::string> edges_in;
  std::optional<std::string> binned_out;
  std::optional<std::string> target;  // column excluded from binning
  bool last_is_target = false;
};

struct SynthBenchCommand {
  std::string experiment;
  std::string out_dir = ".";
  std::optional<int> repeats;
  std::optional<std::size_t> n_obs;
  std::optional<int> bins;
  bool full_scale = false;
  bool skip_exact = false;
  std::uint64_t seed = 0;
  int jobs = 1;
  LearnerFlags learner;
};

struct DataBenchCommand {
  std::vector<std::string> data;
  std::string task = "regression";
  std::optional<std::string> target;
  int bins = kDefaultBinBudget;
  int splits = 20;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out_dir = ".";
  LearnerFlags learner;
};

struct TimingCommand {
  std::vector<double> sizes = {1e4, 1e5, 1e6};
  std::vector<std::string> methods = {"quantile", "uniform", "kmeans"};
  int runs = 3;
  int bins = kDefaultBinBudget;
  std::uint64_t seed = 0;
  std::string out = "timing.csv";
};

struct SynthCommand {
  std::size_t n_obs = 10000;
  std::size_t n_feat = 3;
  std::size_t n_modes = 1;
  double dist = 4.0;
  double p_out = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::string out = "synth.csv";
};

int cmd_bin(const BinCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_bench_synth(const SynthBenchCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_bench_data(const DataBenchCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_time_binning(const TimingCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthCommand& cmd, std::ostream& out, std::ostream& err);

// Full command line without the program name. "--config file.json" supplies
// defaults for any flag of the chosen subcommand that is not given explicitly.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmbin::cli
