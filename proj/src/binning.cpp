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


#include "kmbin/binning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "kmbin/kmeans.hpp"

namespace kmbin {

std::string_view to_string(BinMethod method) {
  switch (method) {
    case BinMethod::quantile: return "quantile";
    case BinMethod::uniform: return "uniform";
    case BinMethod::kmeans: return "kmeans";
    case BinMethod::exact: return "exact";
  }
  return "unknown";
}

BinMethod parse_bin_method(std::string_view name) {
  if (name == "quantile") return BinMethod::quantile;
  if (name == "uniform") return BinMethod::uniform;
  if (name == "kmeans" || name == "k-means") return BinMethod::kmeans;
  if (name == "exact") return BinMethod::exact;
  throw std::invalid_argument("unknown bin method '" + std::string(name) + "'");
}

namespace {

void check_input(std::span<const double> values, int bin_budget) {
  if (values.empty()) throw BinningError("no data");
  if (bin_budget < 2 || bin_budget > kMaxBinBudget) {
    throw BinningError("bin budget must be in [2, " + std::to_string(kMaxBinBudget) +
                       "], got " + std::to_string(bin_budget));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw BinningError("non-finite input");
  }
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// Midpoints of consecutive distinct values: every distinct value gets a bin.
std::vector<double> distinct_midpoints(std::span<const double> distinct) {
  std::vector<double> edges;
  if (distinct.size() < 2) return edges;
  edges.reserve(distinct.size() - 1);
  for (std::size_t i = 1; i < distinct.size(); ++i) {
    edges.push_back(std::midpoint(distinct[i - 1], distinct[i]));
  }
  return edges;
}

// Keeps only edges strictly inside (lo, hi) and strictly increasing.
void sanitize(std::vector<double>& edges, double lo, double hi) {
  std::vector<double> out;
  out.reserve(edges.size());
  for (double e : edges) {
    if (e > lo && e < hi && (out.empty() || e > out.back())) out.push_back(e);
  }
  edges.swap(out);
}

}  // namespace

BinEdges fit_uniform(std::span<const double> values, int bin_budget) {
  check_input(values, bin_budget);
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it, hi = *max_it;

  BinEdges out{.edges = {}, .method = BinMethod::uniform, .bin_budget = bin_budget, .n_fitted = values.size()};
  if (lo == hi) return out;
  const double width = hi - lo;
  out.edges.reserve(static_cast<std::size_t>(bin_budget - 1));
  for (int k = 1; k < bin_budget; ++k) out.edges.push_back(lo + width * k / bin_budget);
  sanitize(out.edges, lo, hi);
  return out;
}

BinEdges fit_quantile(std::span<const double> values, int bin_budget) {
  check_input(values, bin_budget);
  const std::vector<double> sorted = sorted_copy(values);
  const WeightedPoints distinct = compress_sorted(sorted);

  BinEdges out{.edges = {}, .method = BinMethod::quantile, .bin_budget = bin_budget, .n_fitted = values.size()};
  if (distinct.size() <= static_cast<std::size_t>(bin_budget)) {
    out.edges = distinct_midpoints(distinct.values);
    return out;
  }

  const std::size_t n = sorted.size();
  const auto b = static_cast<std::size_t>(bin_budget);
  for (std::size_t k = 1; k < b; ++k) {
    // Lower empirical (k/B)-quantile: order statistic of rank ceil(k*n/B).
    const std::size_t pos = (k * n + b - 1) / b - 1;
    const double v = sorted[pos];
    const auto succ = std::upper_bound(sorted.begin() + static_cast<std::ptrdiff_t>(pos),
                                       sorted.end(), v);
    if (succ == sorted.end()) continue;
    const double edge = std::midpoint(v, *succ);
    if (out.edges.empty() || edge > out.edges.back()) out.edges.push_back(edge);
  }
  return out;
}

BinEdges fit_kmeans(std::span<const double> values, int bin_budget,
                    const KMeansOptions& options) {
  check_input(values, bin_budget);
  if (options.max_iter < 1) throw BinningError("max_iter must be >= 1");
  if (options.tol && !(*options.tol >= 0.0)) throw BinningError("tol must be non-negative");

  const WeightedPoints points = compress(values);
  BinEdges out{.edges = {}, .method = BinMethod::kmeans, .bin_budget = bin_budget, .n_fitted = values.size()};
  // One cluster per distinct value is already a zero-SSE fixed point.
  if (points.size() <= static_cast<std::size_t>(bin_budget)) {
    out.edges = distinct_midpoints(points.values);
    return out;
  }

  const double lo = points.values.front(), hi = points.values.back();
  const double tol = options.tol.value_or(1e-6 * (hi - lo));
  LloydResult fit = run_lloyd(points, quantile_seeds(points, bin_budget),
                              options.max_iter, tol);
  out.edges = distinct_midpoints(fit.centroids);
  sanitize(out.edges, lo, hi);
  return out;
}

BinEdges fit_edges(std::span<const double> values, BinMethod method, int bin_budget,
                   const KMeansOptions& options) {
  switch (method) {
    case BinMethod::quantile: return fit_quantile(values, bin_budget);
    case BinMethod::uniform: return fit_uniform(values, bin_budget);
    case BinMethod::kmeans: return fit_kmeans(values, bin_budget, options);
    case BinMethod::exact: break;
  }
  throw BinningError("exact splitting has no bin edges");
}

std::uint16_t bin_index(double v, std::span<const double> edges) {
  return static_cast<std::uint16_t>(std::lower_bound(edges.begin(), edges.end(), v) -
                                    edges.begin());
}

BinnedColumn transform(std::span<const double> values, const BinEdges& edges) {
  BinnedColumn out;
  out.n_bins = static_cast<int>(edges.n_bins());
  out.indices.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw BinningError("non-finite input");
    out.indices[i] = bin_index(values[i], edges.edges);
  }
  return out;
}

namespace {

[[noreturn]] void rethrow_for_feature(std::size_t j, const std::exception& e) {
  throw BinningError("feature " + std::to_string(j) + ": " + e.what());
}

}  // namespace

BinnedMatrix fit_transform_matrix(const Matrix& x, BinMethod method, int bin_budget,
                                  const KMeansOptions& options) {
  std::vector<BinEdges> edges;
  edges.reserve(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    try {
      edges.push_back(fit_edges(x.column(j), method, bin_budget, options));
    } catch (const BinningError& e) {
      rethrow_for_feature(j, e);
    }
  }
  return transform_matrix(x, edges);
}

BinnedMatrix transform_matrix(const Matrix& x, std::span<const BinEdges> edges_per_feature) {
  if (edges_per_feature.size() != x.cols()) {
    throw BinningError("expected " + std::to_string(edges_per_feature.size()) +
                       " features, got " + std::to_string(x.cols()));
  }
  BinnedMatrix out;
  out.n_rows = x.rows();
  out.edges_per_feature.assign(edges_per_feature.begin(), edges_per_feature.end());
  out.columns.reserve(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    try {
      out.columns.push_back(transform(x.column(j), edges_per_feature[j]));
    } catch (const BinningError& e) {
      rethrow_for_feature(j, e);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Edge cache
// ---------------------------------------------------------------------------

std::string save_edges(std::span<const BinEdges> edges_per_feature) {
  if (edges_per_feature.empty()) throw BinningError("no features to save");
  const BinEdges& first = edges_per_feature.front();
  nlohmann::json features = nlohmann::json::array();
  for (std::size_t i = 0; i < edges_per_feature.size(); ++i) {
    const BinEdges& e = edges_per_feature[i];
    if (e.method != first.method || e.bin_budget != first.bin_budget) {
      throw BinningError("feature " + std::to_string(i) +
                         ": method/budget differs from feature 0");
    }
    features.push_back({{"index", i}, {"edges", e.edges}});
  }
  nlohmann::json doc = {{"version", 1},
                        {"bin_budget", first.bin_budget},
                        {"method", std::string(to_string(first.method))},
                        {"features", std::move(features)}};
  return doc.dump() + "\n";
}

std::vector<BinEdges> load_edges(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw BinningError(std::string("edge cache parse error: ") + e.what());
  }
  if (!doc.is_object() || doc.value("version", 0) != 1) {
    throw BinningError("edge cache parse error: missing or unsupported version");
  }
  if (!doc.contains("bin_budget") || !doc["bin_budget"].is_number_integer() ||
      !doc.contains("method") || !doc["method"].is_string() ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw BinningError("edge cache parse error: missing bin_budget, method or features");
  }
  const int budget = doc["bin_budget"].get<int>();
  BinMethod method;
  try {
    method = parse_bin_method(doc["method"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw BinningError(std::string("edge cache parse error: ") + e.what());
  }
  if (method == BinMethod::exact) throw BinningError("edge cache parse error: method exact");

  std::vector<BinEdges> out;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    const std::string where = "edge cache parse error in feature " + std::to_string(i);
    if (!f.is_object() || !f.contains("index") || !f.contains("edges") ||
        !f["edges"].is_array()) {
      throw BinningError(where + ": expected {\"index\", \"edges\"}");
    }
    if (!f["index"].is_number_integer() || f["index"].get<long long>() != static_cast<long long>(i)) {
      throw BinningError(where + ": index out of order");
    }
    BinEdges e{.edges = {}, .method = method, .bin_budget = budget};
    for (const auto& v : f["edges"]) {
      if (!v.is_number()) throw BinningError(where + ": non-numeric edge");
      const double d = v.get<double>();
      if (!std::isfinite(d) || (!e.edges.empty() && d <= e.edges.back())) {
        throw BinningError(where + ": edges must be finite and strictly increasing");
      }
      e.edges.push_back(d);
    }
    if (e.edges.size() + 1 > static_cast<std::size_t>(budget)) {
      throw BinningError(where + ": more edges than the bin budget allows");
    }
    out.push_back(std::move(e));
  }
  return out;
}

void save_edges_file(const std::string& path, std::span<const BinEdges> edges_per_feature) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << save_edges(edges_per_feature);
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<BinEdges> load_edges_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_edges(buf.str());
}

}  // namespace kmbin
