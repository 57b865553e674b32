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


#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kmbin/binning.hpp"
#include "kmbin/cli.hpp"
#include "kmbin/csv.hpp"
#include "kmbin/synth.hpp"

using namespace kmbin;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(KMBIN_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

fs::path synth_csv(const fs::path& dir, std::size_t n, double p_out, double beta,
                   std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n_obs = n;
  cfg.p_out = p_out;
  cfg.beta = beta;
  cfg.seed = seed;
  const fs::path p = dir / ("synth_" + std::to_string(seed) + ".csv");
  std::ofstream f(p);
  write_synth_csv(f, make_synth(cfg));
  return p;
}

}  // namespace

TEST_CASE("bin writes the expected edges and reuses them") {
  const auto dir = scratch("bin");
  write_file(dir / "tiny.csv", "x\n1\n2\n3\n4\n");
  const auto edges = (dir / "edges.json").string();
  const auto binned = (dir / "binned.csv").string();
  REQUIRE(run({"bin", "--input", (dir / "tiny.csv").string(), "--method", "quantile", "--bins",
               "2", "--edges-out", edges, "--binned-out", binned}) == cli::kExitOk);
  const auto loaded = load_edges_file(edges);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].edges == std::vector<double>{2.5});
  CHECK(read_file(binned) == "x\n0\n0\n1\n1\n");

  const auto again = (dir / "again.csv").string();
  // A different method is ignored when the cache is supplied.
  REQUIRE(run({"bin", "--input", (dir / "tiny.csv").string(), "--method", "uniform",
               "--edges-in", edges, "--binned-out", again}) == cli::kExitOk);
  CHECK(read_file(again) == read_file(binned));
}

TEST_CASE("bin excludes a named target") {
  const auto dir = scratch("bin_target");
  write_file(dir / "d.csv", "a,b,y\n1,5,0\n2,6,1\n3,7,0\n4,8,1\n");
  const auto edges = (dir / "e.json").string();
  REQUIRE(run({"bin", "-i", (dir / "d.csv").string(), "-B", "2", "--target", "y", "--edges-out",
               edges}) == cli::kExitOk);
  CHECK(load_edges_file(edges).size() == 2);
  REQUIRE(run({"bin", "-i", (dir / "d.csv").string(), "-B", "2", "--last-is-target",
               "--edges-out", edges}) == cli::kExitOk);
  CHECK(load_edges_file(edges).size() == 2);
}

TEST_CASE("bad input exits with code 2") {
  const auto dir = scratch("bad");
  write_file(dir / "ragged.csv", "a,b\n1,2\n3\n");
  write_file(dir / "text.csv", "a,b\n1,2\n3,oops\n");
  CHECK(run({"bin", "-i", (dir / "ragged.csv").string()}) == cli::kExitInput);
  CHECK(run({"bin", "-i", (dir / "text.csv").string()}) == cli::kExitInput);
  CHECK(run({"bin", "-i", (dir / "missing.csv").string()}) == cli::kExitInput);
  CHECK(run({"bin", "-i", (dir / "text.csv").string(), "-B", "1"}) == cli::kExitInput);
  CHECK(run({"bench-synth", "-e", "9", "-o", dir.string()}) == cli::kExitInput);
  CHECK(run({"bench-synth", "-e", "nonsense", "-o", dir.string()}) == cli::kExitInput);
  CHECK(run({"no-such-command"}) == cli::kExitInput);
  CHECK(run({}) == cli::kExitInput);

  std::ostringstream out, err;
  cli::run({"bin", "-i", (dir / "text.csv").string()}, out, err);
  CHECK(err.str().find("row 2") != std::string::npos);
  CHECK(err.str().find("column 1") != std::string::npos);
}

TEST_CASE("bench-synth smoke run writes parseable tables") {
  const auto dir = scratch("synth_bench");
  REQUIRE(run({"bench-synth", "-e", "1", "--repeats", "2", "--n-obs", "300", "--trees", "5",
               "-j", "2", "-o", dir.string()}) == cli::kExitOk);
  const auto results = read_csv_file((dir / "outlier_mass_vs_scale_results.csv").string());
  CHECK(results.header.size() == 10);
  CHECK(results.rows.size() == 6 * 4 * 4);
  const auto pivot = read_csv_file((dir / "outlier_mass_vs_scale_pivot.csv").string());
  CHECK(pivot.header.size() == 5);  // row value plus beta in {5,10,15,20}
  CHECK(pivot.header[1] == "5");
  CHECK(pivot.header[4] == "20");
  CHECK(pivot.rows.size() == 6);
  CHECK(fs::exists(dir / "outlier_mass_vs_scale_significance.csv"));
}

TEST_CASE("bench-data regression and classification") {
  const auto dir = scratch("data_bench");
  const auto csv = synth_csv(dir, 400, 0.01, 10, 1);
  const auto out_a = dir / "a";
  const auto out_b = dir / "b";
  const std::vector<std::string> base{"bench-data", "-d", csv.string(), "--splits", "3",
                                      "--seed", "7", "--trees", "10"};
  auto args = base;
  args.insert(args.end(), {"-o", out_a.string()});
  REQUIRE(run(args) == cli::kExitOk);
  args = base;
  args.insert(args.end(), {"-o", out_b.string(), "-j", "3"});
  REQUIRE(run(args) == cli::kExitOk);
  const auto a = read_file(out_a / "data_results.csv");
  CHECK(a == read_file(out_b / "data_results.csv"));
  std::istringstream in(a);
  CHECK(read_csv(in).rows.size() == 4);
  CHECK(read_csv_file((out_a / "data_mrr.csv").string()).rows.size() == 3);

  CHECK(run({"bench-data", "-d", csv.string(), "--task", "classification", "-o",
             (dir / "c").string()}) == cli::kExitInput);

  write_file(dir / "cls.csv", "f,label\n0.1,1\n0.5,0\n0.2,1\n0.9,0\n0.3,1\n0.8,0\n0.4,1\n0.7,0\n"
                              "0.15,1\n0.95,0\n");
  CHECK(run({"bench-data", "-d", (dir / "cls.csv").string(), "--task", "classification",
             "--splits", "2", "--trees", "5", "-o", (dir / "c").string()}) == cli::kExitOk);
}

TEST_CASE("time-binning writes one row per size and method") {
  const auto dir = scratch("timing");
  const auto out = (dir / "t.csv").string();
  REQUIRE(run({"time-binning", "--sizes", "1000", "10000", "--methods", "quantile", "kmeans",
               "uniform", "--runs", "3", "-o", out}) == cli::kExitOk);
  const auto t = read_csv_file(out);
  CHECK(t.header == std::vector<std::string>{"n_rows", "method", "median_seconds", "runs"});
  CHECK(t.rows.size() == 6);
  CHECK(run({"time-binning", "--methods", "exact", "-o", out}) == cli::kExitInput);
}

TEST_CASE("config file supplies missing flags") {
  const auto dir = scratch("config");
  write_file(dir / "tiny.csv", "x\n1\n2\n3\n4\n");
  const auto edges = (dir / "e.json").string();
  write_file(dir / "cfg.json", "{\"bins\": 4, \"method\": \"kmeans\", \"edges-out\": \"" +
                                   edges + "\"}");
  REQUIRE(run({"--config", (dir / "cfg.json").string(), "bin", "-i",
               (dir / "tiny.csv").string()}) == cli::kExitOk);
  auto e = load_edges_file(edges);
  CHECK(e[0].method == BinMethod::kmeans);
  CHECK(e[0].edges == std::vector<double>{1.5, 2.5, 3.5});
  // Command-line flags win.
  REQUIRE(run({"--config", (dir / "cfg.json").string(), "bin", "-i",
               (dir / "tiny.csv").string(), "--bins", "2"}) == cli::kExitOk);
  CHECK(load_edges_file(edges)[0].edges == std::vector<double>{2.5});

  write_file(dir / "broken.json", "{\"bins\": ");
  CHECK(run({"--config", (dir / "broken.json").string(), "bin", "-i",
             (dir / "tiny.csv").string()}) == cli::kExitInput);
}

TEST_CASE("synth subcommand is deterministic") {
  const auto dir = scratch("synth_cmd");
  const auto a = (dir / "a.csv").string();
  const auto b = (dir / "b.csv").string();
  REQUIRE(run({"synth", "--n-obs", "100", "--p-out", "0.05", "--beta", "10", "--seed", "3", "-o",
               a}) == cli::kExitOk);
  REQUIRE(run({"synth", "--n-obs", "100", "--p-out", "0.05", "--beta", "10", "--seed", "3", "-o",
               b}) == cli::kExitOk);
  CHECK(read_file(a) == read_file(b));
  const auto ds = load_dataset(a);
  CHECK(ds.x.rows() == 100);
  CHECK(run({"synth", "--n-modes", "0", "-o", a}) == cli::kExitInput);
}
