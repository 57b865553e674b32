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


#include "kmbin/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

namespace kmbin {

namespace {

std::vector<std::string> split_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw IngestError("row " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      // Tolerate a UTF-8 byte order mark.
      if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (line.empty()) throw IngestError("row 0: empty header");
      table.header = split_line(line, 0);
      have_header = true;
      continue;
    }
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_line(line, line_no);
    if (fields.size() != table.header.size()) {
      throw IngestError("row " + std::to_string(line_no) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw IngestError("empty input: header required");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path);
  return read_csv(in);
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      out << f;
    } else {
      out << '"';
      for (char c : f) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    }
  }
  out << '\n';
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::size_t row, std::size_t col) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    throw IngestError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                      ": not a finite number: '" + std::string(text) + "'");
  }
  return v;
}

Matrix to_matrix(const CsvTable& table, std::span<const std::size_t> columns) {
  Matrix x(table.rows.size(), columns.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      x(i, k) = parse_double(table.rows[i][columns[k]], i + 1, columns[k]);
    }
  }
  return x;
}

Dataset to_dataset(const CsvTable& table, const std::optional<std::string>& target) {
  if (table.header.size() < 2) throw IngestError("need at least one feature and a target column");
  if (table.rows.empty()) throw IngestError("no data rows");
  std::size_t target_col = table.header.size() - 1;
  if (target) {
    bool found = false;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (table.header[c] == *target) {
        target_col = c;
        found = true;
        break;
      }
    }
    if (!found) throw IngestError("target column '" + *target + "' not in header");
  }

  Dataset ds;
  std::vector<std::size_t> features;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == target_col) continue;
    features.push_back(c);
    ds.feature_names.push_back(table.header[c]);
  }
  ds.target_name = table.header[target_col];
  ds.x = to_matrix(table, features);
  ds.y.resize(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ds.y[i] = parse_double(table.rows[i][target_col], i + 1, target_col);
  }
  return ds;
}

Dataset load_dataset(const std::string& path, const std::optional<std::string>& target) {
  Dataset ds = to_dataset(read_csv_file(path), target);
  ds.name = std::filesystem::path(path).stem().string();
  return ds;
}

}  // namespace kmbin
