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


#ifndef WEAKPROBE_TOOLS_CLI_SUPPORT_H_
#define WEAKPROBE_TOOLS_CLI_SUPPORT_H_

// Plumbing for the weakprobe command-line driver: config files, value
// parsing and the small SVG writer.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "weakprobe/hilbert.h"

namespace weakprobe::cli {

/// Rewrites `args` (argv without the program name) so every `--config FILE`
/// is replaced by the file's `key=value` lines as `--key=value` tokens,
/// inserted directly after the subcommand. Explicit flags come later and win
/// under last-value-wins parsing. Lines are trimmed; blank lines and lines
/// starting with '#' are skipped. Throws ValidationError on unreadable files
/// and malformed lines.
std::vector<std::string> expand_config(std::vector<std::string> args);

/// "1.5", "-2i", "0.3-0.2i", "i".
Complex parse_complex(const std::string& text);
/// Comma separated complex entries.
CVector parse_cvector(const std::string& text);
/// Rows separated by ';', entries by ','.
CMatrix parse_cmatrix(const std::string& text);
/// Comma separated reals.
std::vector<double> parse_reals(const std::string& text);
/// "first:last:step" (inclusive of last within half a step).
std::vector<double> parse_angle_steps(const std::string& text);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Polylines with a labelled frame; fixed 640x420 canvas.
void write_line_plot(const std::filesystem::path& path,
                     const std::string& title, const std::string& x_label,
                     const std::vector<Series>& series);

/// Cell (i, j) of `values` is drawn at (xs[j], ys[i]). Colours are
/// normalized by max |value| (blue negative, red positive).
void write_heatmap(const std::filesystem::path& path, const std::string& title,
                   const std::vector<double>& xs, const std::vector<double>& ys,
                   const Eigen::MatrixXd& values);

}  // namespace weakprobe::cli

#endif  // WEAKPROBE_TOOLS_CLI_SUPPORT_H_
