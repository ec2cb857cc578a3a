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


#include "spotgame/csv.hpp"

#include "spotgame/errors.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace spotgame {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string::npos ? comma : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  throw InputError(source + ": missing column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const std::string& h : header) {
    if (h == name) return true;
  }
  return false;
}

std::string CsvTable::where(std::size_t row) const {
  return source + ":" + std::to_string(line_numbers.at(row));
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  table.source = source;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      table.comments.push_back(trim(t.substr(1)));
      continue;
    }
    std::vector<std::string> cells = split(t);
    if (table.header.empty()) {
      table.header = std::move(cells);
      for (const std::string& h : table.header) {
        if (h.empty()) throw InputError(source + ":" + std::to_string(line_no) + ": empty column name");
      }
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw InputError(source + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " fields, found " +
                       std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_no);
  }
  if (table.header.empty()) throw InputError(source + ": no header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_csv(in, path.string());
}

double parse_number(const std::string& cell, const std::string& where, bool allow_empty) {
  if (cell.empty()) {
    if (allow_empty) return std::numeric_limits<double>::quiet_NaN();
    throw InputError(where + ": empty value");
  }
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+' && cell.size() > 1 && cell[1] != '-') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw InputError(where + ": not a finite number: '" + cell + "'");
  }
  return value;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

namespace {

int parse_digits(const std::string& s, std::size_t pos, std::size_t len, const std::string& where,
                 const std::string& text) {
  int value = 0;
  if (pos + len > s.size()) throw InputError(where + ": malformed timestamp '" + text + "'");
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') throw InputError(where + ": malformed timestamp '" + text + "'");
    value = value * 10 + (s[i] - '0');
  }
  return value;
}

std::chrono::sys_days parse_ymd(const std::string& s, const std::string& where) {
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') {
    throw InputError(where + ": expected YYYY-MM-DD, got '" + s + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{parse_digits(s, 0, 4, where, s)},
                                        std::chrono::month{static_cast<unsigned>(parse_digits(s, 5, 2, where, s))},
                                        std::chrono::day{static_cast<unsigned>(parse_digits(s, 8, 2, where, s))}};
  if (!ymd.ok()) throw InputError(where + ": invalid calendar date '" + s + "'");
  return std::chrono::sys_days{ymd};
}

}  // namespace

std::int64_t parse_iso_date(const std::string& text, const std::string& where) {
  if (text.size() != 10) throw InputError(where + ": expected YYYY-MM-DD, got '" + text + "'");
  return parse_ymd(text, where).time_since_epoch().count();
}

std::int64_t parse_iso_hour(const std::string& text, const std::string& where) {
  std::string s = text;
  if (!s.empty() && s.back() == 'Z') s.pop_back();
  if (s.size() < 13 || (s[10] != 'T' && s[10] != ' ')) {
    throw InputError(where + ": expected YYYY-MM-DDTHH[:MM[:SS]], got '" + text + "'");
  }
  const auto days = parse_ymd(s.substr(0, 10), where);
  const int hour = parse_digits(s, 11, 2, where, text);
  if (hour > 23) throw InputError(where + ": hour out of range in '" + text + "'");
  std::size_t pos = 13;
  while (pos < s.size()) {
    if (s[pos] != ':' || parse_digits(s, pos + 1, 2, where, text) != 0) {
      throw InputError(where + ": timestamps must fall on the hour: '" + text + "'");
    }
    pos += 3;
  }
  if (pos != s.size() || pos > 19) throw InputError(where + ": malformed timestamp '" + text + "'");
  return days.time_since_epoch().count() * 24 + hour;
}

std::string format_iso_hour(std::int64_t hour) {
  const std::int64_t day = hour >= 0 ? hour / 24 : (hour - 23) / 24;
  const int h = static_cast<int>(hour - day * 24);
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:00", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h);
  return buf;
}

void write_provenance(std::ostream& out, const Provenance& provenance) {
  for (const auto& [key, value] : provenance) out << "# " << key << ": " << value << '\n';
}

PriceTable read_price_table(const std::filesystem::path& path) {
  const CsvTable csv = read_csv(path);
  if (csv.header.size() < 2 || csv.header.front() != "hour") {
    throw InputError(csv.source + ": price table needs an 'hour' column followed by zones");
  }
  PriceTable table;
  table.zones.assign(csv.header.begin() + 1, csv.header.end());
  table.values.resize(static_cast<Eigen::Index>(csv.rows.size()),
                      static_cast<Eigen::Index>(table.zones.size()));
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    table.hours.push_back(parse_iso_hour(csv.rows[r][0], csv.where(r)));
    if (r > 0 && table.hours[r] <= table.hours[r - 1]) {
      throw InputError(csv.where(r) + ": hours must be strictly increasing");
    }
    for (std::size_t z = 0; z < table.zones.size(); ++z) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(z)) =
          parse_number(csv.rows[r][z + 1], csv.where(r), true);
    }
  }
  return table;
}

void write_price_table(std::ostream& out, const PriceTable& table) {
  out << "hour";
  for (const std::string& z : table.zones) out << ',' << z;
  out << '\n';
  for (std::size_t t = 0; t < table.hours.size(); ++t) {
    out << format_iso_hour(table.hours[t]);
    for (Eigen::Index z = 0; z < table.values.cols(); ++z) {
      out << ',' << format_number(table.values(static_cast<Eigen::Index>(t), z));
    }
    out << '\n';
  }
}

}  // namespace spotgame
