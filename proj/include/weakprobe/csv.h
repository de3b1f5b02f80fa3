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

#ifndef WEAKPROBE_CSV_H_
#define WEAKPROBE_CSV_H_

#include <initializer_list>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "weakprobe/hilbert.h"

namespace weakprobe {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Comma-separated table: one "# key=value ..." comment line with the
/// resolved parameters, a header row, then numeric rows.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::map<std::string, std::string>& params,
            const std::vector<std::string>& columns);

  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
  }

 private:
  std::ostream& out_;
  size_t columns_;
};

/// Columns j, k, Re, Im; vectors use k = 0.
void write_complex_table(std::ostream& out,
                         const std::map<std::string, std::string>& params,
                         const CMatrix& m);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of `name`; throws ValidationError when absent.
  size_t column(const std::string& name) const;
};

/// Reads a numeric CSV with a header row; lines starting with '#' and blank
/// lines are skipped. Throws ValidationError with the line number on
/// malformed input.
CsvTable read_csv(std::istream& in);

}  // namespace weakprobe

#endif  // WEAKPROBE_CSV_H_
