// Copyright 2026 The weakprobe Authors
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

#include "weakprobe/csv.h"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace weakprobe {

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(std::ostream& out,
                     const std::map<std::string, std::string>& params,
                     const std::vector<std::string>& columns)
    : out_(out), columns_(columns.size()) {
  out_ << '#';
  for (const auto& [k, v] : params) out_ << ' ' << k << '=' << v;
  out_ << '\n';
  for (size_t i = 0; i < columns.size(); ++i) {
    out_ << (i ? "," : "") << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) {
    throw ValidationError("csv: row width differs from header");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    out_ << (i ? "," : "") << format_double(values[i]);
  }
  out_ << '\n';
}

void write_complex_table(std::ostream& out,
                         const std::map<std::string, std::string>& params,
                         const CMatrix& m) {
  CsvWriter w(out, params, {"j", "k", "Re", "Im"});
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      w.row({static_cast<double>(j), static_cast<double>(k), m(j, k).real(),
             m(j, k).imag()});
}

size_t CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ValidationError("csv: missing column '" + name + "'");
}

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!header) {
      t.columns = cells;
      header = true;
      continue;
    }
    if (cells.size() != t.columns.size()) {
      std::ostringstream msg;
      msg << "csv line " << lineno << ": expected " << t.columns.size()
          << " fields, got " << cells.size();
      throw ValidationError(msg.str());
    }
    std::vector<double> row;
    for (const std::string& c : cells) {
      double v = 0;
      const auto r = std::from_chars(c.data(), c.data() + c.size(), v);
      if (r.ec != std::errc() || r.ptr != c.data() + c.size()) {
        std::ostringstream msg;
        msg << "csv line " << lineno << ": not a number: '" << c << "'";
        throw ValidationError(msg.str());
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (!header) throw ValidationError("csv: no header row");
  return t;
}

}  // namespace weakprobe
