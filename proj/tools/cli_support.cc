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


#include "cli_support.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "weakprobe/error.h"

namespace weakprobe::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double parse_real(std::string s, const std::string& whole) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(v))
    throw ValidationError("cannot parse number '" + whole + "'");
  return v;
}

// Fixed two-decimal coordinates keep the SVG text byte-stable.
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b"};

std::ofstream open_svg(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out;
}

void frame(std::ostream& out, const std::string& title,
           const std::string& x_label, double x0, double x1, double y0,
           double y1) {
  const double w = kWidth - kLeft - kRight, h = kHeight - kTop - kBottom;
  out << "<text x=\"" << px(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\">"
      << escape(title) << "</text>\n"
      << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\""
      << px(w) << "\" height=\"" << px(h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = kLeft + w * t / 4, fy = kTop + h - h * t / 4;
    out << "<text x=\"" << px(fx) << "\" y=\"" << px(kTop + h + 16)
        << "\" text-anchor=\"middle\">" << label(x0 + (x1 - x0) * t / 4)
        << "</text>\n"
        << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(fy + 4)
        << "\" text-anchor=\"end\">" << label(y0 + (y1 - y0) * t / 4)
        << "</text>\n";
  }
  out << "<text x=\"" << px(kLeft + w / 2) << "\" y=\"" << px(kHeight - 12)
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
}

}  // namespace

std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> injected;
  std::vector<std::string> rest;
  for (size_t i = 0; i < args.size(); ++i) {
    std::string file;
    if (args[i] == "--config") {
      if (i + 1 >= args.size())
        throw ValidationError("--config requires a file argument");
      file = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot read config file " + file);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
        throw ValidationError(file + ":" + std::to_string(number) +
                              ": expected key=value");
      injected.push_back("--" + trim(line.substr(0, eq)) + "=" +
                         trim(line.substr(eq + 1)));
    }
  }
  if (rest.empty()) return injected;
  // rest[0] is the subcommand.
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

Complex parse_complex(const std::string& text) {
  std::string s = trim(text);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw ValidationError("empty complex number");
  if (s.back() != 'i') return {parse_real(s, text), 0.0};
  s.pop_back();
  size_t cut = std::string::npos;
  for (size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  const std::string re = cut == std::string::npos ? "" : s.substr(0, cut);
  std::string im = cut == std::string::npos ? s : s.substr(cut);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, text), parse_real(im, text)};
}

CVector parse_cvector(const std::string& text) {
  const auto items = split(text, ',');
  if (items.empty()) throw ValidationError("empty vector");
  CVector v(static_cast<Eigen::Index>(items.size()));
  for (size_t k = 0; k < items.size(); ++k)
    v(static_cast<Eigen::Index>(k)) = parse_complex(items[k]);
  return v;
}

CMatrix parse_cmatrix(const std::string& text) {
  const auto rows = split(text, ';');
  CMatrix m;
  for (size_t r = 0; r < rows.size(); ++r) {
    const CVector row = parse_cvector(rows[r]);
    if (r == 0) m.resize(static_cast<Eigen::Index>(rows.size()), row.size());
    if (row.size() != m.cols())
      throw ValidationError("matrix rows differ in length: '" + text + "'");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  if (m.rows() != m.cols())
    throw ValidationError("matrix is not square: '" + text + "'");
  return m;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_real(item, text));
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

std::vector<double> parse_angle_steps(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3)
    throw ValidationError("angles must be first:last:step, got '" + text + "'");
  const double first = parse_real(parts[0], text);
  const double last = parse_real(parts[1], text);
  const double step = parse_real(parts[2], text);
  if (!(step > 0) || last < first)
    throw ValidationError("angles need step > 0 and last >= first: '" + text +
                          "'");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((last - first) / step + 0.5));
  if (n > 1000000) throw ValidationError("too many angles: '" + text + "'");
  for (long k = 0; k <= n; ++k) out.push_back(first + step * static_cast<double>(k));
  return out;
}

void write_line_plot(const std::filesystem::path& path,
                     const std::string& title, const std::string& x_label,
                     const std::vector<Series>& series) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad, y1 += pad;

  std::ofstream out = open_svg(path);
  frame(out, title, x_label, x0, x1, y0, y1);
  const double w = kWidth - kLeft - kRight, h = kHeight - kTop - kBottom;
  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      out << (i ? " " : "") << px(kLeft + w * (s.x[i] - x0) / (x1 - x0)) << ","
          << px(kTop + h - h * (s.y[i] - y0) / (y1 - y0));
    }
    out << "\"/>\n"
        << "<text x=\"" << px(kLeft + 8) << "\" y=\""
        << px(kTop + 16 + 14 * static_cast<double>(k)) << "\" fill=\""
        << colour << "\">" << escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_heatmap(const std::filesystem::path& path, const std::string& title,
                   const std::vector<double>& xs, const std::vector<double>& ys,
                   const Eigen::MatrixXd& values) {
  if (xs.size() < 2 || ys.size() < 2 ||
      values.rows() != static_cast<Eigen::Index>(ys.size()) ||
      values.cols() != static_cast<Eigen::Index>(xs.size()))
    throw ValidationError("heatmap needs at least a 2x2 grid of values");
  const double peak = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  std::ofstream out = open_svg(path);
  frame(out, title, "X", xs.front(), xs.back(), ys.front(), ys.back());
  const double w = kWidth - kLeft - kRight, h = kHeight - kTop - kBottom;
  const double cw = w / static_cast<double>(xs.size());
  const double ch = h / static_cast<double>(ys.size());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j) / peak;  // in [-1, 1]
      const int fade = static_cast<int>(std::lround(255 * (1 - std::abs(v))));
      char colour[16];
      if (v >= 0)
        std::snprintf(colour, sizeof colour, "#ff%02x%02x", fade, fade);
      else
        std::snprintf(colour, sizeof colour, "#%02x%02xff", fade, fade);
      out << "<rect x=\"" << px(kLeft + cw * static_cast<double>(j))
          << "\" y=\"" << px(kTop + h - ch * static_cast<double>(i + 1))
          << "\" width=\"" << px(cw + 0.05) << "\" height=\"" << px(ch + 0.05)
          << "\" fill=\"" << colour << "\"/>\n";
    }
  }
  out << "<text x=\"16\" y=\"" << px(kTop + h / 2) << "\">K</text>\n</svg>\n";
}

}  // namespace weakprobe::cli
