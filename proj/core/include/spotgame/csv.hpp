// Copyright 2026 The spotgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace spotgame {

/// Comma-separated table with a header row. Lines starting with '#' are kept
/// as comments; blank lines are ignored. No quoting.
struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // 1-based source line of each row
  std::vector<std::string> comments;

  /// Throws InputError naming the source if `name` is not a column.
  int column(const std::string& name) const;
  bool has_column(const std::string& name) const;
  std::string where(std::size_t row) const;  // "file:line"
};

CsvTable parse_csv(std::istream& in, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

/// Strict number parsing; an empty cell is NaN only if `allow_empty`.
double parse_number(const std::string& cell, const std::string& where, bool allow_empty = false);

/// Shortest representation that round-trips; empty for NaN.
std::string format_number(double x);

/// Hours since 1970-01-01T00:00 UTC. Accepts YYYY-MM-DDTHH[:MM[:SS]][Z] with
/// a 'T' or space separator; minutes and seconds must be zero.
std::int64_t parse_iso_hour(const std::string& text, const std::string& where);
/// Days since 1970-01-01 for YYYY-MM-DD.
std::int64_t parse_iso_date(const std::string& text, const std::string& where);
std::string format_iso_hour(std::int64_t hour);

/// "# key: value" lines heading every emitted file.
using Provenance = std::vector<std::pair<std::string, std::string>>;
void write_provenance(std::ostream& out, const Provenance& provenance);

/// Wide price table: one row per hour, one column per zone; empty = undefined.
struct PriceTable {
  std::vector<std::int64_t> hours;
  std::vector<std::string> zones;
  Eigen::MatrixXd values;  // hours x zones
};

PriceTable read_price_table(const std::filesystem::path& path);
void write_price_table(std::ostream& out, const PriceTable& table);

}  // namespace spotgame
