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
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kmbin/matrix.hpp"

namespace kmbin {

// Malformed or non-numeric input. Row numbers are 1-based data rows (the
// header is row 0); columns are 0-based.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Comma-separated, header required, optional double quotes ("" escapes a quote).
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

void write_csv_row(std::ostream& out, std::span<const std::string> fields);
// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text, std::size_t row, std::size_t col);

struct Dataset {
  std::string name;
  std::vector<std::string> feature_names;
  std::string target_name;
  Matrix x;
  std::vector<double> y;
};

// Every column except the target becomes a feature. The target is the last
// column unless target names one.
Dataset to_dataset(const CsvTable& table, const std::optional<std::string>& target = std::nullopt);
Dataset load_dataset(const std::string& path,
                     const std::optional<std::string>& target = std::nullopt);

// All listed columns as a numeric matrix.
Matrix to_matrix(const CsvTable& table, std::span<const std::size_t> columns);

}  // namespace kmbin
