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
#include <stdexcept>
#include <vector>

#include "kmbin/matrix.hpp"

namespace kmbin {

// Knobs of the multimodal-Gaussian-plus-exponential-tail generator.
struct SynthConfig {
  std::size_t n_obs = 10000;
  std::size_t n_feat = 3;
  std::size_t n_modes = 1;
  double dist = 4.0;       // spacing between adjacent mode means
  double p_out = 0.0;      // per-cell outlier probability
  double beta = 0.0;       // exponential scale (mean) of the outlier shift
  double noise_sd = 0.1;   // target noise
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthData {
  Matrix x;
  std::vector<double> y;
  std::size_t n_outlier_cells = 0;  // cells that received an outlier shift
};

// For every feature: draw a mode per row, sample N(mode mean, 1), standardize
// the column with its population mean/std, then shift each cell by Exp(beta)
// with probability p_out. The target is the row sum plus N(0, noise_sd^2).
SynthData make_synth(const SynthConfig& cfg);

// CSV with header x0..x{k-1},y.
void write_synth_csv(std::ostream& out, const SynthData& data);

}  // namespace kmbin
