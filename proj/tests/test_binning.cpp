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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "kmbin/binning.hpp"
#include "kmbin/rng.hpp"
#include "oracles.hpp"

using namespace kmbin;

namespace {

std::vector<double> draw_mixed(Rng& rng, std::size_t n, int kind) {
  std::vector<double> v(n);
  for (auto& x : v) {
    switch (kind) {
      case 0: x = rng.normal(); break;
      case 1: x = static_cast<double>(rng.below(7)); break;  // heavy ties
      case 2: x = rng.uniform() < 0.1 ? 30 + rng.exponential(5) : rng.normal(); break;
      default: x = std::round(rng.normal() * 4) / 4; break;
    }
  }
  return v;
}

void check_edges_inside(const BinEdges& e, const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  for (std::size_t i = 0; i < e.edges.size(); ++i) {
    CHECK(e.edges[i] > *lo);
    CHECK(e.edges[i] < *hi);
    if (i > 0) CHECK(e.edges[i] > e.edges[i - 1]);
  }
}

}  // namespace

TEST_CASE("uniform edges split the range evenly") {
  CHECK(fit_uniform(std::vector<double>{0, 10}, 5).edges == std::vector<double>{2, 4, 6, 8});
  CHECK(fit_uniform(std::vector<double>{3, 3, 3}, 4).edges.empty());

  Rng rng(11);
  std::vector<double> v(1000);
  for (auto& x : v) x = rng.uniform();
  const auto e = fit_uniform(v, 10).edges;
  REQUIRE(e.size() == 9);
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  for (int k = 1; k <= 9; ++k) {
    const double direct = *lo + (*hi - *lo) * k / 10.0;
    CHECK(e[k - 1] == doctest::Approx(direct).epsilon(1e-12));
    CHECK(std::abs(e[k - 1] - k / 10.0) < 0.05);
  }
}

TEST_CASE("quantile edges on small inputs") {
  CHECK(fit_quantile(std::vector<double>{1, 2, 3, 4}, 2).edges == std::vector<double>{2.5});
  CHECK(fit_quantile(std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8}, 4).edges ==
        std::vector<double>{2.5, 4.5, 6.5});
  const std::vector<double> ties{0, 0, 0, 0, 0, 0, 1, 2};
  CHECK(fit_quantile(ties, 4).edges == std::vector<double>{0.5, 1.5});
  CHECK(oracle::quantile_edges(ties, 4) == std::vector<double>{0.5, 1.5});
}

TEST_CASE("quantile edges match the scanning oracle") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(60);
    const int bins = 2 + static_cast<int>(rng.below(20));
    const auto v = draw_mixed(rng, n, trial % 4);
    CAPTURE(trial);
    CHECK(fit_quantile(v, bins).edges == oracle::quantile_edges(v, bins));
  }
}

TEST_CASE("k-means edges on small inputs") {
  CHECK(fit_kmeans(std::vector<double>{0, 0, 0, 10, 10, 10}, 2).edges ==
        std::vector<double>{5});
  CHECK(fit_kmeans(std::vector<double>{1, 2, 3, 4}, 4).edges ==
        std::vector<double>{1.5, 2.5, 3.5});
}

TEST_CASE("fitters reject bad input") {
  const std::vector<double> empty;
  const std::vector<double> with_nan{1.0, std::nan(""), 2.0};
  const std::vector<double> with_inf{1.0, std::numeric_limits<double>::infinity()};
  for (BinMethod m : {BinMethod::quantile, BinMethod::uniform, BinMethod::kmeans}) {
    CHECK_THROWS_WITH_AS(fit_edges(empty, m, 4), "no data", BinningError);
    CHECK_THROWS_WITH_AS(fit_edges(with_nan, m, 4), "non-finite input", BinningError);
    CHECK_THROWS_WITH_AS(fit_edges(with_inf, m, 4), "non-finite input", BinningError);
  }
  CHECK_THROWS_AS(fit_edges(std::vector<double>{1, 2}, BinMethod::exact, 4), BinningError);
  CHECK_THROWS_AS(fit_quantile(std::vector<double>{1, 2}, 0), BinningError);
  BinEdges e;
  e.edges = {2.5};
  CHECK_THROWS_AS(transform(with_nan, e), BinningError);
}

TEST_CASE("transform uses upper-inclusive bins") {
  const std::vector<double> edges{2.5};
  CHECK(bin_index(-99, edges) == 0);
  CHECK(bin_index(2.5, edges) == 0);
  CHECK(bin_index(2.6, edges) == 1);
  const std::vector<double> v{1, 2, 3, 4};
  const auto col = transform(v, fit_quantile(v, 2));
  CHECK(col.indices == std::vector<std::uint16_t>{0, 0, 1, 1});
  CHECK(col.n_bins == 2);
}

TEST_CASE("fit_transform_matrix shapes and errors") {
  Matrix one(4, 1);
  for (std::size_t i = 0; i < 4; ++i) one(i, 0) = static_cast<double>(i + 1);
  const auto b = fit_transform_matrix(one, BinMethod::quantile, 2);
  CHECK(b.columns[0].indices == std::vector<std::uint16_t>{0, 0, 1, 1});
  CHECK(b.n_rows == 4);

  Matrix constant(5, 2, 7.0);
  for (std::size_t i = 0; i < 5; ++i) constant(i, 1) = static_cast<double>(i);
  for (BinMethod m : {BinMethod::quantile, BinMethod::uniform, BinMethod::kmeans}) {
    const auto bm = fit_transform_matrix(constant, m, 16);
    CHECK(bm.columns.size() == 2);
    CHECK(bm.edges_per_feature.size() == 2);
    CHECK(bm.columns[0].n_bins == 1);
    CHECK(bm.columns[0].indices == std::vector<std::uint16_t>(5, 0));
  }

  Matrix bad(3, 4, 1.0);
  bad(1, 3) = std::nan("");
  CHECK_THROWS_WITH_AS(fit_transform_matrix(bad, BinMethod::quantile, 4),
                       "feature 3: non-finite input", BinningError);
}

TEST_CASE("edges are strictly increasing and inside the data range") {
  Rng rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    const auto v = draw_mixed(rng, 1 + rng.below(400), trial % 4);
    const int bins = 2 + static_cast<int>(rng.below(40));
    CAPTURE(trial);
    check_edges_inside(fit_quantile(v, bins), v);
    check_edges_inside(fit_uniform(v, bins), v);
    check_edges_inside(fit_kmeans(v, bins), v);
  }
}

TEST_CASE("quantile bins hold equal counts for unique values") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int bins = 2 + static_cast<int>(rng.below(10));
    const std::size_t n = static_cast<std::size_t>(bins) * (1 + rng.below(30));
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    const auto col = transform(v, fit_quantile(v, bins));
    std::vector<std::size_t> counts(static_cast<std::size_t>(col.n_bins), 0);
    for (auto i : col.indices) ++counts[i];
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    CHECK(*hi - *lo <= 1);
  }
}

TEST_CASE("quantile and k-means agree when distinct values fit the budget") {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const int bins = 2 + static_cast<int>(rng.below(30));
    const std::size_t distinct = 1 + rng.below(static_cast<std::uint64_t>(bins));
    std::vector<double> levels(distinct);
    for (auto& l : levels) l = rng.normal() * 10;
    std::vector<double> v(5 + rng.below(200));
    for (auto& x : v) x = levels[rng.below(distinct)];
    const auto q = transform(v, fit_quantile(v, bins));
    const auto k = transform(v, fit_kmeans(v, bins));
    CHECK(q.indices == k.indices);
    // One bin per distinct value.
    std::vector<double> u = v;
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    CHECK(static_cast<std::size_t>(q.n_bins) == u.size());
  }
}

TEST_CASE("transform is monotone and stable on bin representatives") {
  Rng rng(31);
  for (BinMethod m : {BinMethod::quantile, BinMethod::uniform, BinMethod::kmeans}) {
    std::vector<double> v(500);
    for (auto& x : v) x = rng.normal();
    const auto e = fit_edges(v, m, 20);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const auto col = transform(sorted, e);
    CHECK(std::is_sorted(col.indices.begin(), col.indices.end()));
    // The mean of the values in a bin maps back to that bin.
    std::vector<double> sum(e.n_bins(), 0.0), cnt(e.n_bins(), 0.0);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      sum[col.indices[i]] += sorted[i];
      cnt[col.indices[i]] += 1;
    }
    for (std::size_t b = 0; b < e.n_bins(); ++b) {
      if (cnt[b] == 0) continue;
      CHECK(bin_index(sum[b] / cnt[b], e.edges) == b);
    }
  }
}

TEST_CASE("fitters ignore row order") {
  Rng rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    auto v = draw_mixed(rng, 50 + rng.below(300), trial % 4);
    auto shuffled = v;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    for (BinMethod m : {BinMethod::quantile, BinMethod::uniform, BinMethod::kmeans}) {
      CHECK(fit_edges(v, m, 16).edges == fit_edges(shuffled, m, 16).edges);
      CHECK(fit_edges(v, m, 16).edges == fit_edges(v, m, 16).edges);
    }
  }
}

TEST_CASE("edge cache round-trips") {
  Rng rng(41);
  Matrix x(300, 3);
  for (std::size_t i = 0; i < 300; ++i)
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal() * (j + 1);
  for (BinMethod m : {BinMethod::quantile, BinMethod::uniform, BinMethod::kmeans}) {
    const auto fitted = fit_transform_matrix(x, m, 32).edges_per_feature;
    const auto loaded = load_edges(save_edges(fitted));
    REQUIRE(loaded.size() == fitted.size());
    for (std::size_t j = 0; j < fitted.size(); ++j) {
      CHECK(loaded[j].edges == fitted[j].edges);
      CHECK(loaded[j].method == m);
      CHECK(loaded[j].bin_budget == 32);
    }
  }

  BinEdges e;
  e.edges = {2.5};
  e.bin_budget = 2;
  const std::vector<BinEdges> one{e};
  const std::string text = save_edges(one);
  CHECK(text.find("2.5") != std::string::npos);
  CHECK(text.find("\"version\":1") != std::string::npos);
  CHECK_THROWS_AS(load_edges(text.substr(0, text.size() / 2)), BinningError);
}

TEST_CASE("edge cache errors name the feature") {
  const std::string bad =
      R"({"version":1,"bin_budget":4,"method":"quantile","features":[)"
      R"({"index":0,"edges":[1,2]},{"index":1,"edges":[3,"x"]}]})";
  CHECK_THROWS_WITH_AS(load_edges(bad), doctest::Contains("feature 1"), BinningError);
  const std::string unsorted =
      R"({"version":1,"bin_budget":4,"method":"quantile","features":[)"
      R"({"index":0,"edges":[2,1]}]})";
  CHECK_THROWS_WITH_AS(load_edges(unsorted), doctest::Contains("feature 0"), BinningError);
}

TEST_CASE("method names parse") {
  CHECK(parse_bin_method("kmeans") == BinMethod::kmeans);
  CHECK(parse_bin_method("k-means") == BinMethod::kmeans);
  CHECK(parse_bin_method("quantile") == BinMethod::quantile);
  CHECK(to_string(BinMethod::uniform) == "uniform");
  CHECK_THROWS(parse_bin_method("median"));
}
