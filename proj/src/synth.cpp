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


#include "kmbin/synth.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "kmbin/csv.hpp"
#include "kmbin/rng.hpp"

namespace kmbin {

void SynthConfig::validate() const {
  if (n_obs == 0) throw std::invalid_argument("n_obs must be positive");
  if (n_feat == 0) throw std::invalid_argument("n_feat must be positive");
  if (n_modes == 0) throw std::invalid_argument("n_modes must be positive");
  if (!(p_out >= 0.0 && p_out <= 1.0)) throw std::invalid_argument("p_out must be in [0, 1]");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be >= 0");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw std::invalid_argument("noise_sd must be >= 0");
  }
  if (!std::isfinite(dist)) throw std::invalid_argument("dist must be finite");
}

SynthData make_synth(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SynthData out{Matrix(cfg.n_obs, cfg.n_feat), std::vector<double>(cfg.n_obs, 0.0), 0};

  // linspace(0, dist * (n_modes - 1), n_modes)
  std::vector<double> means(cfg.n_modes);
  for (std::size_t m = 0; m < cfg.n_modes; ++m) means[m] = cfg.dist * static_cast<double>(m);

  const double n = static_cast<double>(cfg.n_obs);
  for (std::size_t j = 0; j < cfg.n_feat; ++j) {
    auto col = out.x.column(j);
    for (std::size_t i = 0; i < cfg.n_obs; ++i) {
      const std::size_t mode = rng.below(cfg.n_modes);
      col[i] = rng.normal(means[mode], 1.0);
    }

    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);
    const double scale = sd > 0.0 ? 1.0 / sd : 1.0;

    for (std::size_t i = 0; i < cfg.n_obs; ++i) {
      col[i] = (col[i] - mean) * scale;
      if (rng.uniform() < cfg.p_out) {
        col[i] += rng.exponential(cfg.beta);
        ++out.n_outlier_cells;
      }
    }
  }

  for (std::size_t i = 0; i < cfg.n_obs; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cfg.n_feat; ++j) sum += out.x(i, j);
    out.y[i] = sum + rng.normal(0.0, cfg.noise_sd);
  }
  return out;
}

void write_synth_csv(std::ostream& out, const SynthData& data) {
  std::vector<std::string> header;
  for (std::size_t j = 0; j < data.x.cols(); ++j) header.push_back("x" + std::to_string(j));
  header.push_back("y");
  write_csv_row(out, header);
  std::vector<std::string> row(header.size());
  for (std::size_t i = 0; i < data.x.rows(); ++i) {
    for (std::size_t j = 0; j < data.x.cols(); ++j) row[j] = format_double(data.x(i, j));
    row.back() = format_double(data.y[i]);
    write_csv_row(out, row);
  }
}

}  // namespace kmbin
