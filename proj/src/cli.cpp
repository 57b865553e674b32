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


#include "kmbin/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "kmbin/bench.hpp"
#include "kmbin/csv.hpp"
#include "kmbin/synth.hpp"

namespace kmbin::cli {

namespace fs = std::filesystem;

FitParams LearnerFlags::apply(FitParams base) const {
  if (n_trees) base.n_trees = *n_trees;
  if (learning_rate) base.learning_rate = *learning_rate;
  if (max_depth) base.max_depth = *max_depth;
  if (subsample) base.subsample = *subsample;
  if (min_samples_leaf) base.min_samples_leaf = *min_samples_leaf;
  return base;
}

namespace {

// Input problems that map to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_readable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
}

void require_writable_file(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw UsageError("cannot create directory " + parent.string());
  }
  std::ofstream probe(path, std::ios::app);
  if (!probe) throw UsageError("cannot write " + path);
}

void require_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory " + dir);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

void check_bins(int bins) {
  if (bins < 2 || bins > kMaxBinBudget) {
    throw UsageError("--bins must be in [2, " + std::to_string(kMaxBinBudget) + "]");
  }
}

}  // namespace

int cmd_bin(const BinCommand& cmd, std::ostream& out, std::ostream& err) {
  CsvTable table;
  std::vector<std::size_t> columns;
  std::vector<BinEdges> cached;
  try {
    check_bins(cmd.bins);
    if (cmd.method == BinMethod::exact) throw UsageError("exact is not a binning method");
    require_readable(cmd.input);
    if (cmd.edges_in) require_readable(*cmd.edges_in);
    if (cmd.edges_out) require_writable_file(*cmd.edges_out);
    if (cmd.binned_out) require_writable_file(*cmd.binned_out);

    table = read_csv_file(cmd.input);
    std::optional<std::size_t> excluded;
    if (cmd.target) {
      const auto it = std::find(table.header.begin(), table.header.end(), *cmd.target);
      if (it == table.header.end()) throw UsageError("target column '" + *cmd.target + "' not found");
      excluded = static_cast<std::size_t>(it - table.header.begin());
    } else if (cmd.last_is_target) {
      excluded = table.header.size() - 1;
    }
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c != excluded) columns.push_back(c);
    }
    if (columns.empty()) throw UsageError("no feature columns");
    if (table.rows.empty()) throw UsageError("no data rows");
    if (cmd.edges_in) {
      cached = load_edges_file(*cmd.edges_in);
      if (cached.size() != columns.size()) {
        throw UsageError("edge cache has " + std::to_string(cached.size()) + " features, input has " +
                         std::to_string(columns.size()));
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  Matrix x;
  try {
    x = to_matrix(table, columns);
  } catch (const IngestError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::vector<BinEdges> edges = std::move(cached);
  if (edges.empty()) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      try {
        edges.push_back(fit_edges(x.column(j), cmd.method, cmd.bins));
      } catch (const std::exception& e) {
        err << "error: feature " << j << " (" << table.header[columns[j]] << "): " << e.what() << "\n";
        return kExitNumeric;
      }
    }
  }

  try {
    const BinnedMatrix binned = transform_matrix(x, edges);
    if (cmd.edges_out) save_edges_file(*cmd.edges_out, edges);
    if (cmd.binned_out) {
      std::ofstream f = open_out(*cmd.binned_out);
      std::vector<std::string> row;
      for (std::size_t c : columns) row.push_back(table.header[c]);
      write_csv_row(f, row);
      for (std::size_t i = 0; i < binned.n_rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
          row[j] = std::to_string(binned.columns[j].indices[i]);
        }
        write_csv_row(f, row);
      }
    }
    for (std::size_t j = 0; j < columns.size(); ++j) {
      out << table.header[columns[j]] << ": " << edges[j].n_bins() << " bins\n";
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_bench_synth(const SynthBenchCommand& cmd, std::ostream& out, std::ostream& err) {
  GridSpec spec;
  try {
    spec = preset_grid(parse_experiment(cmd.experiment));
    spec.n_repeats = cmd.repeats.value_or(cmd.full_scale ? kFullRepeats : kDeskRepeats);
    if (cmd.n_obs) spec.base.n_obs = *cmd.n_obs;
    if (cmd.bins) {
      check_bins(*cmd.bins);
      spec.bin_budget = *cmd.bins;
    }
    spec.base_seed = cmd.seed;
    spec.include_exact = !cmd.skip_exact;
    spec.learner = cmd.learner.apply(FitParams{});
    spec.validate();
    require_out_dir(cmd.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::vector<CellResult> cells;
  try {
    cells = run_synth_grid(spec, cmd.jobs);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }

  const std::string stem = (fs::path(cmd.out_dir) / std::string(to_string(spec.experiment))).string();
  try {
    auto results = open_out(stem + "_results.csv");
    write_grid_results(results, spec, cells);
    auto pivot = open_out(stem + "_pivot.csv");
    write_grid_pivot(pivot, spec, cells);
    auto sig = open_out(stem + "_significance.csv");
    write_grid_significance_pivot(sig, spec, cells);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  out << to_string(spec.experiment) << " (" << spec.n_repeats << " repeats, B=" << spec.bin_budget
      << "): delta% of k-means over quantile\n";
  for (const CellResult& c : cells) {
    out << "  " << to_string(spec.row_axis) << "=" << c.row_value << " "
        << to_string(spec.col_axis) << "=" << c.col_value << "  delta%=" << std::fixed
        << std::setprecision(1) << c.delta_percent << std::defaultfloat << "  p_adj=" << c.p_adj
        << (c.significant ? " *" : "") << "\n";
  }
  return kExitOk;
}

int cmd_bench_data(const DataBenchCommand& cmd, std::ostream& out, std::ostream& err) {
  std::vector<Dataset> datasets;
  CsvBenchOptions options;
  try {
    if (cmd.data.empty()) throw UsageError("at least one --data file is required");
    check_bins(cmd.bins);
    options.task = parse_task(cmd.task);
    options.bin_budget = cmd.bins;
    options.n_splits = cmd.splits;
    options.seed = cmd.seed;
    options.jobs = cmd.jobs;
    options.learner = cmd.learner.apply(FitParams{});
    options.learner.validate();
    if (options.n_splits < 2) throw UsageError("--splits must be >= 2");
    for (const auto& path : cmd.data) require_readable(path);
    require_out_dir(cmd.out_dir);
    for (const auto& path : cmd.data) {
      datasets.push_back(load_dataset(path, cmd.target));
      if (options.task == Task::classification) binarize_target(datasets.back().y);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  CsvBenchReport report;
  try {
    report = run_csv_benchmarks(datasets, options);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }

  try {
    const fs::path dir(cmd.out_dir);
    auto results = open_out((dir / "data_results.csv").string());
    write_data_results(results, report);
    auto m = open_out((dir / "data_mrr.csv").string());
    write_mrr(m, report);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  for (const DatasetReport& d : report.datasets) {
    out << d.name << " (" << to_string(d.task) << ")\n";
    for (BinMethod m : kBenchMethods) {
      out << "  " << std::setw(8) << to_string(m) << "  " << d.mean_score(m) << "\n";
    }
    out << "  best " << to_string(d.ranking[0]) << " vs " << to_string(d.ranking[1])
        << ": p_adj=" << d.p_adj << (d.significant ? " *" : "") << "\n";
  }
  out << "MRR";
  for (std::size_t i = 0; i < kHistogramMethods.size(); ++i) {
    out << "  " << to_string(kHistogramMethods[i]) << "=" << report.mrr[i];
  }
  out << "\n";
  return kExitOk;
}

int cmd_time_binning(const TimingCommand& cmd, std::ostream& out, std::ostream& err) {
  std::vector<std::size_t> sizes;
  std::vector<BinMethod> methods;
  try {
    check_bins(cmd.bins);
    if (cmd.runs < 1) throw UsageError("--runs must be >= 1");
    for (double s : cmd.sizes) {
      if (!(s >= 1.0) || s > 1e10) throw UsageError("sizes must be in [1, 1e10]");
      sizes.push_back(static_cast<std::size_t>(std::llround(s)));
    }
    for (const auto& m : cmd.methods) {
      methods.push_back(parse_bin_method(m));
      if (methods.back() == BinMethod::exact) throw UsageError("exact has no binning pass");
    }
    require_writable_file(cmd.out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::vector<TimingResult> results;
  try {
    results = time_binning(sizes, methods, cmd.runs, cmd.bins, cmd.seed);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  try {
    auto f = open_out(cmd.out);
    write_timing(f, results);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  for (const TimingResult& r : results) {
    out << std::setw(10) << r.n_rows << "  " << std::setw(8) << to_string(r.method) << "  "
        << r.seconds << " s\n";
  }
  return kExitOk;
}

int cmd_synth(const SynthCommand& cmd, std::ostream& out, std::ostream& err) {
  SynthConfig cfg{.n_obs = cmd.n_obs, .n_feat = cmd.n_feat, .n_modes = cmd.n_modes,
                  .dist = cmd.dist, .p_out = cmd.p_out, .beta = cmd.beta, .seed = cmd.seed};
  SynthData data;
  try {
    cfg.validate();
    require_writable_file(cmd.out);
    data = make_synth(cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  try {
    auto f = open_out(cmd.out);
    write_synth_csv(f, data);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  out << "wrote " << cfg.n_obs << " rows to " << cmd.out << "\n";
  return kExitOk;
}

namespace {

void add_learner_flags(CLI::App* sub, LearnerFlags& f) {
  sub->add_option("--trees", f.n_trees, "Number of boosting rounds");
  sub->add_option("--learning-rate", f.learning_rate, "Shrinkage");
  sub->add_option("--max-depth", f.max_depth, "Tree depth");
  sub->add_option("--subsample", f.subsample, "Row fraction per tree");
  sub->add_option("--min-samples-leaf", f.min_samples_leaf, "Minimum rows per leaf");
}

std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? std::string(env) : std::string(".");
}

// Turns a JSON object into extra "--key value" arguments for keys that are
// not already on the command line.
std::vector<std::string> config_args(const std::string& path, const std::vector<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config " + path + ": expected a JSON object");

  auto scalar = [&](const std::string& key, const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    throw UsageError("config " + path + ": unsupported value for '" + key + "'");
  };

  std::vector<std::string> extra;
  for (const auto& [key, value] : doc.items()) {
    const std::string flag = "--" + key;
    const bool present = std::any_of(given.begin(), given.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (present) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        extra.push_back(flag);
        extra.push_back(scalar(key, v));
      }
    } else {
      extra.push_back(flag);
      extra.push_back(scalar(key, value));
    }
  }
  return extra;
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args_in.size(); ++i) {
    if (args_in[i] == "--config" && i + 1 < args_in.size()) {
      config_path = args_in[++i];
    } else if (args_in[i].rfind("--config=", 0) == 0) {
      config_path = args_in[i].substr(9);
    } else {
      args.push_back(args_in[i]);
    }
  }
  if (config_path) {
    try {
      const auto extra = config_args(*config_path, args);
      args.insert(args.end(), extra.begin(), extra.end());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitInput;
    }
  }

  CLI::App app{"Quantile, uniform and k-means feature binning for histogram GBDTs", "kmbin"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  BinCommand bin;
  std::string bin_method = "quantile";
  auto* sub_bin = app.add_subcommand("bin", "Fit bin edges and bin a CSV");
  sub_bin->add_option("--input,-i", bin.input, "Input CSV")->required();
  sub_bin->add_option("--method,-m", bin_method, "quantile | uniform | kmeans")
      ->capture_default_str();
  sub_bin->add_option("--bins,-B", bin.bins, "Bin budget (63 is the low-budget preset)")
      ->capture_default_str();
  sub_bin->add_option("--edges-out", bin.edges_out, "Write the edge cache (JSON)");
  sub_bin->add_option("--edges-in", bin.edges_in, "Reuse a cached edge file instead of fitting");
  sub_bin->add_option("--binned-out", bin.binned_out, "Write bin indices as CSV");
  sub_bin->add_option("--target", bin.target, "Column to leave out of binning");
  sub_bin->add_flag("--last-is-target", bin.last_is_target, "Leave the last column out");

  SynthBenchCommand synth_bench;
  synth_bench.out_dir = default_out_dir();
  auto* sub_synth_bench = app.add_subcommand("bench-synth", "Run a synthetic grid experiment");
  sub_synth_bench
      ->add_option("--experiment,-e", synth_bench.experiment,
                   "1..5 or outlier_mass_vs_scale | modes_vs_scale | modes_vs_mass | "
                   "sample_size | bin_budget")
      ->required();
  sub_synth_bench->add_option("--out-dir,-o", synth_bench.out_dir, "Output directory")
      ->envname(kOutDirEnv);
  sub_synth_bench->add_option("--repeats", synth_bench.repeats, "Draws per cell (default 20)");
  sub_synth_bench->add_option("--n-obs", synth_bench.n_obs, "Rows per draw (default 10000)");
  sub_synth_bench->add_option("--bins,-B", synth_bench.bins, "Bin budget (default 255)");
  sub_synth_bench->add_flag("--full-scale", synth_bench.full_scale, "50 draws per cell");
  sub_synth_bench->add_flag("--skip-exact", synth_bench.skip_exact, "Do not fit the exact learner");
  sub_synth_bench->add_option("--seed", synth_bench.seed, "Base seed");
  sub_synth_bench->add_option("--jobs,-j", synth_bench.jobs, "Worker threads")
      ->default_val(std::max(1u, std::thread::hardware_concurrency()));
  add_learner_flags(sub_synth_bench, synth_bench.learner);

  DataBenchCommand data_bench;
  data_bench.out_dir = default_out_dir();
  auto* sub_data = app.add_subcommand("bench-data", "Compare binning methods on CSV datasets");
  sub_data->add_option("--data,-d", data_bench.data, "Dataset CSV (repeatable)")->required();
  sub_data->add_option("--task", data_bench.task, "regression | classification")
      ->capture_default_str();
  sub_data->add_option("--target", data_bench.target, "Target column (default: last)");
  sub_data->add_option("--bins,-B", data_bench.bins, "Bin budget")->capture_default_str();
  sub_data->add_option("--splits", data_bench.splits, "Random 80/20 splits")->capture_default_str();
  sub_data->add_option("--seed", data_bench.seed, "Seed");
  sub_data->add_option("--jobs,-j", data_bench.jobs, "Worker threads")
      ->default_val(std::max(1u, std::thread::hardware_concurrency()));
  sub_data->add_option("--out-dir,-o", data_bench.out_dir, "Output directory")->envname(kOutDirEnv);
  add_learner_flags(sub_data, data_bench.learner);

  TimingCommand timing;
  timing.out = (fs::path(default_out_dir()) / "timing.csv").string();
  auto* sub_time = app.add_subcommand("time-binning", "Time bin construction on one feature");
  sub_time->add_option("--sizes", timing.sizes, "Row counts")->capture_default_str();
  sub_time->add_option("--methods", timing.methods, "Methods to time")->capture_default_str();
  sub_time->add_option("--runs", timing.runs, "Runs per point (median reported)")
      ->capture_default_str();
  sub_time->add_option("--bins,-B", timing.bins, "Bin budget")->capture_default_str();
  sub_time->add_option("--seed", timing.seed, "Seed");
  sub_time->add_option("--out,-o", timing.out, "Output CSV")->capture_default_str();

  SynthCommand synth;
  auto* sub_synth = app.add_subcommand("synth", "Write one synthetic dataset as CSV");
  sub_synth->add_option("--n-obs", synth.n_obs)->capture_default_str();
  sub_synth->add_option("--n-feat", synth.n_feat)->capture_default_str();
  sub_synth->add_option("--n-modes", synth.n_modes)->capture_default_str();
  sub_synth->add_option("--dist", synth.dist)->capture_default_str();
  sub_synth->add_option("--p-out", synth.p_out)->capture_default_str();
  sub_synth->add_option("--beta", synth.beta)->capture_default_str();
  sub_synth->add_option("--seed", synth.seed);
  sub_synth->add_option("--out,-o", synth.out)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  if (sub_bin->parsed()) {
    try {
      bin.method = parse_bin_method(bin_method);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitInput;
    }
    return cmd_bin(bin, out, err);
  }
  if (sub_synth_bench->parsed()) return cmd_bench_synth(synth_bench, out, err);
  if (sub_data->parsed()) return cmd_bench_data(data_bench, out, err);
  if (sub_time->parsed()) return cmd_time_binning(timing, out, err);
  if (sub_synth->parsed()) return cmd_synth(synth, out, err);
  return kExitInput;
}

}  // namespace kmbin::cli
