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


// weakprobe: command-line front end.
//
//   weakprobe <command> [--config FILE] [--key value ...]
//
// Every command writes <out>/<command>.csv (plus companions) whose first
// line records the resolved parameters. Exit codes: 0 ok, 2 validation,
// 3 numerical domain, 4 non-convergence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_support.h"
#include "weakprobe/csv.h"
#include "weakprobe/error.h"
#include "weakprobe/experiment.h"
#include "weakprobe/fracft.h"
#include "weakprobe/parallel.h"
#include "weakprobe/probe.h"
#include "weakprobe/shaping.h"
#include "weakprobe/vnsim.h"
#include "weakprobe/weakstats.h"

namespace weakprobe::cli {
namespace {

constexpr double kPi = std::numbers::pi;

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Params = std::map<std::string, std::string>;

struct Common {
  std::string out = ".";
  std::uint64_t seed = 0;
  bool dry_run = false;
  bool svg = false;
  int grid_n = Grid::kDefaultPoints;
  double x_max = Grid::kDefaultHalfWidth;

  Grid grid() const { return Grid(grid_n, x_max); }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--seed", c.seed, "Random seed");
  app->add_flag("--dry-run", c.dry_run, "Validate parameters only");
  app->add_flag("--svg", c.svg, "Also write SVG plots");
  app->add_option("--grid-n", c.grid_n, "Probe grid points");
  app->add_option("--x-max", c.x_max, "Probe grid half-width");
}

// --- target selection --------------------------------------------------

struct SelectionArgs {
  std::string kase = "i";
  double angle = 15.0;
  std::string pre;         // explicit pre-selected amplitudes
  std::string post;        // explicit post-selected amplitudes
  std::string observable;  // explicit matrix
};

void add_selection(CLI::App* app, SelectionArgs& s) {
  app->add_option("--case", s.kase, "Wave-plate case (i: half, ii: quarter)")
      ->check(CLI::IsMember({"i", "ii"}));
  app->add_option("--angle", s.angle, "Wave-plate angle in degrees");
  app->add_option("--pre", s.pre, "Pre-selected state, e.g. 1,0.5i");
  app->add_option("--post", s.post, "Post-selected state");
  app->add_option("--observable", s.observable, "Observable rows, e.g. 0,1;1,0");
}

PreSelectionKind case_kind(const std::string& k) {
  return k == "ii" ? PreSelectionKind::kCaseII : PreSelectionKind::kCaseI;
}

struct ResolvedSelection {
  Selection sel;
  HermitianObservable a;
};

ResolvedSelection resolve(const SelectionArgs& s) {
  if (!std::isfinite(s.angle)) throw ValidationError("angle must be finite");
  const PreSelectionSpec spec{case_kind(s.kase), s.angle};
  const TargetState pre =
      s.pre.empty() ? experiment_pre_state(spec) : TargetState(parse_cvector(s.pre));
  const TargetState post = s.post.empty() ? experiment_post_state()
                                          : TargetState(parse_cvector(s.post));
  HermitianObservable a = s.observable.empty()
                              ? experiment_observable()
                              : HermitianObservable(parse_cmatrix(s.observable));
  if (pre.dim() != post.dim() || pre.dim() != a.dim())
    throw ValidationError("pre, post and observable dimensions differ");
  Selection sel = Selection::pure(pre, post);
  sel.require_usable();
  return {std::move(sel), std::move(a)};
}

// --- fit model ---------------------------------------------------------

void add_model(CLI::App* app, FitModel& m) {
  app->add_option("--theta", m.theta, "Coupling strength");
  app->add_option("--V", m.V, "Visibility");
  app->add_option("--delta", m.delta_deg, "Angle error in degrees");
  app->add_option("--N", m.N, "Noise parameter");
  app->add_option("--L", m.L, "Noise scale");
}

CurveQuantity quantity(const std::string& q) {
  if (q == "mean") return CurveQuantity::kMean;
  if (q == "variance") return CurveQuantity::kVariance;
  return CurveQuantity::kDeltaVariance;
}

std::vector<double> resolve_angles(const std::string& steps, int count,
                                   double first, double last) {
  if (count > 0) return angle_range(first, last, count);
  return parse_angle_steps(steps);
}

// --- output ------------------------------------------------------------

Params resolved_params(const CLI::App* app) {
  Params p{{"command", app->get_name()}};
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help")
      continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      value = r.empty() ? "" : r.back();
    } else {
      value = opt->get_default_str();
    }
    if (value.empty() && opt->get_expected_min() == 0) value = "false";
    p[opt->get_lnames().front()] = value;
  }
  return p;
}

class Output {
 public:
  Output(const Common& c, Params params) : dir_(c.out), params_(std::move(params)) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) const {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + (dir_ / name).string());
    f.precision(17);
    return f;
  }
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }
  const Params& params() const { return params_; }

 private:
  std::filesystem::path dir_;
  Params params_;
};

bool dry(const Common& c, const std::string& command) {
  if (c.dry_run) std::cout << "dry-run ok: " << command << "\n";
  return c.dry_run;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows,
                           size_t k) {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

// --- commands ----------------------------------------------------------

struct WeakstatsArgs {
  Common common;
  SelectionArgs sel;
  int moments = 0;
};

void run_weakstats(const CLI::App* app, const WeakstatsArgs& a) {
  if (a.moments < 0) throw ValidationError("moments must be >= 0");
  const ResolvedSelection r = resolve(a.sel);
  if (dry(a.common, "weakstats")) return;
  const WeakStats st = compute_weak_stats(r.sel, r.a, a.moments);
  const Output out(a.common, resolved_params(app));

  auto probs = out.open("weakstats.csv");
  CsvWriter pw(probs, out.params(), {"j", "eigenvalue", "re_p", "im_p"});
  for (Eigen::Index j = 0; j < st.weak_probs.size(); ++j)
    pw.row({double(j), st.eigenvalues(j), st.weak_probs(j).real(),
            st.weak_probs(j).imag()});

  auto moments = out.open("weakstats_moments.csv");
  CsvWriter mw(moments, out.params(), {"n", "re", "im"});
  for (Eigen::Index n = 0; n < st.weak_moments.size(); ++n)
    mw.row({double(n + 1), st.weak_moments(n).real(), st.weak_moments(n).imag()});

  std::cout << "weak_value " << format_double(st.weak_value.real()) << " "
            << format_double(st.weak_value.imag()) << "\n"
            << "weak_variance " << format_double(st.weak_variance.real()) << " "
            << format_double(st.weak_variance.imag()) << "\n"
            << "a_tilde " << format_double(st.a_tilde.real()) << " "
            << format_double(st.a_tilde.imag()) << "\n";
}

struct SimulateArgs {
  Common common;
  SelectionArgs sel;
  double theta = 3.62e-2;
  std::string alphas = "0,0.7853981633974483,1.5707963267948966,2.356194490192345";
};

void run_simulate(const CLI::App* app, const SimulateArgs& a) {
  const ResolvedSelection r = resolve(a.sel);
  const std::vector<double> alphas = parse_reals(a.alphas);
  if (!std::isfinite(a.theta)) throw ValidationError("theta must be finite");
  const Grid grid = a.common.grid();
  if (dry(a.common, "simulate")) return;
  const auto reports = compare(r.sel, r.a, a.theta, alphas, grid, thread_cap());
  const Output out(a.common, resolved_params(app));
  auto f = out.open("simulate.csv");
  CsvWriter w(f, out.params(),
              {"alpha", "exact_mean", "exact_var", "pert_mean", "pert_var",
               "residual_mean", "residual_var", "success_prob"});
  for (const auto& q : reports)
    w.row({q.alpha, q.exact_mean, q.exact_var, q.pert_mean, q.pert_var,
           q.residual_mean, q.residual_var, q.success_prob});
}

struct SweepArgs {
  Common common;
  std::string kase = "i";
  double alpha = 0.0;
  FitModel model;
  std::string angles = "5:45:0.5";
  bool exact = false;
};

void run_sweep(const CLI::App* app, const SweepArgs& a) {
  a.model.validate();
  if (!std::isfinite(a.alpha)) throw ValidationError("alpha must be finite");
  const std::vector<double> angles = parse_angle_steps(a.angles);
  const Grid grid = a.common.grid();
  if (dry(a.common, "sweep")) return;

  const PreSelectionKind kind = case_kind(a.kase);
  std::vector<std::vector<double>> rows(angles.size());
  parallel_for(angles.size(), a.exact ? thread_cap() : 1, [&](size_t i) {
    const PreSelectionSpec spec{kind, angles[i]};
    std::vector<double> row{angles[i], mean_curve(spec, a.model, a.alpha),
                            delta_variance(spec, a.model, a.alpha)};
    if (a.exact) {
      const Selection sel = Selection::pure(
          experiment_pre_state(spec.shifted(a.model.delta_deg)),
          experiment_post_state());
      const QuadratureMoments m = readout_moments(
          simulate_post_selection(sel, experiment_observable(), a.model.theta,
                                  grid),
          a.alpha);
      row.push_back(m.mean);
      row.push_back((m.variance - 0.5) / 0.5);
    }
    rows[i] = std::move(row);
  });

  const Output out(a.common, resolved_params(app));
  std::vector<std::string> cols{"angle_deg", "delta_mean", "delta_variance"};
  if (a.exact) {
    cols.push_back("exact_delta_mean");
    cols.push_back("exact_delta_variance");
  }
  auto f = out.open("sweep.csv");
  CsvWriter w(f, out.params(), cols);
  for (const auto& row : rows) w.row(row);

  if (a.common.svg) {
    const auto x = column(rows, 0);
    std::vector<Series> mean{{"model", x, column(rows, 1)}};
    std::vector<Series> var{{"model", x, column(rows, 2)}};
    if (a.exact) {
      mean.push_back({"grid simulation", x, column(rows, 3)});
      var.push_back({"grid simulation", x, column(rows, 4)});
    }
    write_line_plot(out.path("sweep_mean.svg"), "mean shift", "angle (deg)", mean);
    write_line_plot(out.path("sweep_variance.svg"), "relative variance change",
                    "angle (deg)", var);
  }
}

struct CurvesArgs {
  Common common;
  std::string kase = "i";
  std::string alphas = "0,1.5707963267948966";
  std::string q = "delta-variance";
  FitModel model;
  std::string angles = "1:45:0.5";
};

void run_curves(const CLI::App* app, const CurvesArgs& a) {
  a.model.validate();
  const std::vector<double> alphas = parse_reals(a.alphas);
  const std::vector<double> angles = parse_angle_steps(a.angles);
  if (dry(a.common, "curves")) return;
  const PreSelectionKind kind = case_kind(a.kase);
  const CurveQuantity q = quantity(a.q);

  const Output out(a.common, resolved_params(app));
  std::vector<std::string> cols{"angle_deg"};
  for (double al : alphas) cols.push_back(a.q + "@alpha=" + format_double(al));
  std::vector<std::vector<double>> rows;
  for (double ang : angles) {
    std::vector<double> row{ang};
    for (double al : alphas)
      row.push_back(curve_value(q, {kind, ang}, a.model, al));
    rows.push_back(std::move(row));
  }
  auto f = out.open("curves.csv");
  CsvWriter w(f, out.params(), cols);
  for (const auto& row : rows) w.row(row);

  if (a.common.svg) {
    std::vector<Series> s;
    for (size_t k = 0; k < alphas.size(); ++k)
      s.push_back({cols[k + 1], column(rows, 0), column(rows, k + 1)});
    write_line_plot(out.path("curves.svg"), a.q, "angle (deg)", s);
  }
}

struct SynthesizeArgs {
  Common common;
  std::string kase = "ii";
  double alpha = 0.0;
  std::string q = "delta-variance";
  FitModel model;
  std::string angles = "1:45:0.5";
  int count = 0;
  double first = 1.0;
  double last = 45.0;
  double noise = 1e-4;
};

void run_synthesize(const CLI::App* app, const SynthesizeArgs& a) {
  a.model.validate();
  if (!(a.noise >= 0) || !std::isfinite(a.noise))
    throw ValidationError("noise must be finite and >= 0");
  const auto angles = resolve_angles(a.angles, a.count, a.first, a.last);
  if (dry(a.common, "synthesize")) return;
  const auto data = synthesize_data(case_kind(a.kase), angles, a.model, a.alpha,
                                    quantity(a.q), a.noise, a.common.seed);
  const Output out(a.common, resolved_params(app));
  auto f = out.open("synthesize.csv");
  CsvWriter w(f, out.params(), {"angle_deg", "value"});
  for (const auto& d : data) w.row({d.angle_deg, d.value});
}

struct FitArgs {
  Common common;
  std::string data;
  std::string kase = "ii";
  double alpha = 0.0;
  std::string q = "delta-variance";
  std::string free = "theta,V,delta";
  FitModel initial;
  bool nelder_mead = false;
  int max_iters = 500;
};

FreeMask parse_free(const std::string& text) {
  FreeMask m{false, false, false, false};
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item == "theta") m[0] = true;
    else if (item == "V") m[1] = true;
    else if (item == "delta") m[2] = true;
    else if (item == "N") m[3] = true;
    else throw ValidationError("unknown fit parameter '" + item + "'");
  }
  if (std::none_of(m.begin(), m.end(), [](bool b) { return b; }))
    throw ValidationError("no free fit parameters");
  return m;
}

void run_fit(const CLI::App* app, const FitArgs& a) {
  a.initial.validate();
  const FreeMask free = parse_free(a.free);
  if (a.max_iters < 1) throw ValidationError("max-iters must be >= 1");
  std::ifstream in(a.data);
  if (!in) throw ValidationError("cannot read data file " + a.data);
  const CsvTable table = read_csv(in);
  const size_t ca = table.column("angle_deg"), cv = table.column("value");
  std::vector<DataPoint> data;
  for (const auto& row : table.rows) data.push_back({row[ca], row[cv]});
  if (dry(a.common, "fit")) return;

  FitOptions opt;
  opt.nelder_mead = a.nelder_mead;
  opt.lsq.max_iters = a.max_iters;
  const PreSelectionKind kind = case_kind(a.kase);
  const FitResult r = fit(data, kind, a.alpha, quantity(a.q), free, a.initial, opt);

  const Output out(a.common, resolved_params(app));
  auto f = out.open("fit.csv");
  CsvWriter w(f, out.params(),
              {"theta", "V", "delta_deg", "N", "ssr", "iterations", "converged"});
  w.row({r.estimates.theta, r.estimates.V, r.estimates.delta_deg, r.estimates.N,
         r.residual_norm, double(r.iterations), r.converged ? 1.0 : 0.0});

  if (a.common.svg) {
    Series pts{"data", {}, {}}, curve{"fit", {}, {}};
    for (const auto& d : data) {
      pts.x.push_back(d.angle_deg);
      pts.y.push_back(d.value);
      curve.x.push_back(d.angle_deg);
      curve.y.push_back(
          curve_value(quantity(a.q), {kind, d.angle_deg}, r.estimates, a.alpha));
    }
    write_line_plot(out.path("fit.svg"), "fit: " + a.q, "angle (deg)",
                    {pts, curve});
  }
  if (!r.converged)
    throw NonConvergence("fit did not converge after " +
                         std::to_string(r.iterations) + " iterations");
}

struct WignerArgs {
  Common common;
  double re_wv = 0.0, im_wv = 0.0;      // weak value times theta
  double re_wvar = 0.5, im_wvar = 0.0;  // weak variance times theta^2
  double span = 3.0;
  int samples = 121;
};

void run_wigner(const CLI::App* app, const WignerArgs& a) {
  if (!(a.span > 0) || !std::isfinite(a.span))
    throw ValidationError("span must be positive");
  if (a.samples < 2 || a.samples > 1001)
    throw ValidationError("samples must be in [2, 1001]");
  const Grid grid = a.common.grid();
  if (a.span >= grid.x_max()) throw ValidationError("span must be below x-max");
  if (dry(a.common, "wigner")) return;

  const ProbeWavefunction psi =
      truncated_post_selected_probe(grid, Complex(a.re_wv, a.im_wv),
                                    Complex(a.re_wvar, a.im_wvar))
          .normalize();
  std::vector<double> xs(static_cast<size_t>(a.samples));
  for (int k = 0; k < a.samples; ++k)
    xs[static_cast<size_t>(k)] = -a.span + 2 * a.span * k / (a.samples - 1);
  // W(i, j) at (X = xs[i], K = xs[j]).
  const Eigen::MatrixXd W = wigner(psi, xs, xs);

  const Output out(a.common, resolved_params(app));
  auto f = out.open("wigner.csv");
  CsvWriter w(f, out.params(), {"X", "K", "W"});
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = 0; j < xs.size(); ++j)
      w.row({xs[i], xs[j], W(Eigen::Index(i), Eigen::Index(j))});

  auto g = out.open("wigner_moments.csv");
  CsvWriter mw(g, out.params(), {"alpha", "mean", "variance"});
  for (double al : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4}) {
    const QuadratureMoments m = quadrature_moments(psi, al);
    mw.row({al, m.mean, m.variance});
  }
  if (a.common.svg)
    write_heatmap(out.path("wigner.svg"), "Wigner function (normalized)", xs,
                  xs, W.transpose());
}

struct FracftArgs {
  Common common;
  double alpha = kPi / 4;
  double center = 1.0;
  double chirp = 0.0;
  bool optical = false;
  double focal = 1.0;
};

void run_fracft(const CLI::App* app, const FracftArgs& a) {
  if (!std::isfinite(a.alpha) || !std::isfinite(a.center) || !std::isfinite(a.chirp))
    throw ValidationError("alpha, center and chirp must be finite");
  const Grid grid = a.common.grid();
  std::optional<OpticalRealization> optics;
  if (a.optical) optics = optical_params(a.alpha, a.focal);
  if (dry(a.common, "fracft-demo")) return;

  const ProbeWavefunction g0 = gaussian_probe(grid, a.center);
  const Eigen::VectorXd x = grid.points();
  CVector samples = g0.psi();
  for (Eigen::Index k = 0; k < samples.size(); ++k)
    samples(k) *= std::polar(1.0, 0.5 * a.chirp * x(k) * x(k));
  const ProbeWavefunction psi(grid, samples, true);
  const ProbeWavefunction outw = frft(psi, a.alpha);

  Eigen::VectorXd lens, ref;
  if (optics) {
    const PropagationResult p = lens_freespace_propagate(psi, optics->F, optics->D);
    if (p.aliasing_warning)
      std::cerr << "warning: optical propagation may have wrapped around\n";
    lens = p.psi.intensity() / (p.psi.intensity().sum() * grid.dx());
    ref = optical_reference_intensity(psi, *optics);
    ref /= ref.sum() * grid.dx();
    std::cout << "optical_l1 " << format_double((lens - ref).cwiseAbs().sum() * grid.dx())
              << "\n";
  }

  const Output out(a.common, resolved_params(app));
  std::vector<std::string> cols{"x", "in_intensity", "out_intensity"};
  if (optics) {
    cols.push_back("optical_intensity");
    cols.push_back("reference_intensity");
  }
  auto f = out.open("fracft.csv");
  CsvWriter w(f, out.params(), cols);
  const Eigen::VectorXd in_i = psi.intensity(), out_i = outw.intensity();
  std::vector<std::vector<double>> rows;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    std::vector<double> row{x(k), in_i(k), out_i(k)};
    if (optics) {
      row.push_back(lens(k));
      row.push_back(ref(k));
    }
    w.row(row);
    rows.push_back(std::move(row));
  }
  if (a.common.svg) {
    std::vector<Series> s{{"input", column(rows, 0), column(rows, 1)},
                          {"F_alpha", column(rows, 0), column(rows, 2)}};
    if (optics) s.push_back({"lens + free space", column(rows, 0), column(rows, 3)});
    write_line_plot(out.path("fracft.svg"), "fractional Fourier transform", "x", s);
  }
}

struct ShapeArgs {
  Common common;
  std::string target = "hermite";
  double shift = 0.5;      // target a for the pure-shift target
  double hermite = 0.1;    // c in phi(K) (1 + c K^2)
  double theta = 0.1;
  std::string eigenvalues = "-1,0,1";
  int order = 0;
  double window = kDefaultShapingWindow;
  std::string post;  // default: uniform superposition
};

void run_shape(const CLI::App* app, const ShapeArgs& a) {
  const Grid grid = a.common.grid();
  const std::vector<double> eig = parse_reals(a.eigenvalues);
  const auto d = static_cast<Eigen::Index>(eig.size());
  if (d > 16) throw ValidationError("at most 16 eigenvalues");
  const HermitianObservable obs = HermitianObservable::from_spectrum(
      Eigen::Map<const Eigen::VectorXd>(eig.data(), d), CMatrix::Identity(d, d));
  const ProbeWavefunction base = gaussian_base_k(grid);
  ProbeWavefunction target = base;
  if (a.target == "shift") {
    target = shifted_target_k(grid, a.theta, a.shift);
  } else {
    CVector t = base.psi();
    const Eigen::VectorXd k = grid.points();
    for (Eigen::Index j = 0; j < t.size(); ++j) t(j) *= 1.0 + a.hermite * k(j) * k(j);
    target = ProbeWavefunction(grid, t);
  }
  const ShapingProblem problem{target, base, obs, a.theta, a.order, a.window};
  problem.validate();
  const TargetState post =
      a.post.empty() ? TargetState(CVector::Ones(d)) : TargetState(parse_cvector(a.post));
  if (post.dim() != d) throw ValidationError("post state dimension differs");
  if (dry(a.common, "shape")) return;

  const ShapingSolution sol = solve_shaping(problem, post);
  const Output out(a.common, resolved_params(app));
  auto f = out.open("shape.csv");
  CsvWriter w(f, out.params(), {"n", "re_moment", "im_moment"});
  for (Eigen::Index n = 0; n < sol.weak_moments.size(); ++n)
    w.row({double(n + 1), sol.weak_moments(n).real(), sol.weak_moments(n).imag()});
  auto g = out.open("shape_probs.csv");
  CsvWriter pw(g, out.params(), {"j", "eigenvalue", "re_p", "im_p"});
  for (Eigen::Index j = 0; j < sol.weak_probs.size(); ++j)
    pw.row({double(j), eig[size_t(j)], sol.weak_probs(j).real(),
            sol.weak_probs(j).imag()});
  std::cout << "consistency_residual " << format_double(sol.consistency_residual)
            << "\n";
  if (!sol.realization.feasible)
    throw DomainError("shape: no realizing selection: " + sol.realization.reason);

  CMatrix states(d, 2);
  states.col(0) = sol.realization.pre->amplitudes();
  states.col(1) = sol.realization.post->amplitudes();
  auto s = out.open("shape_states.csv");
  write_complex_table(s, out.params(), states);

  const ShapeVerification v = verify_shape(sol, problem);
  std::cout << "achieved_error " << format_double(v.achieved_error) << "\n"
            << "truncation_bound " << format_double(v.truncation_bound) << "\n"
            << "success_prob " << format_double(v.success_prob) << "\n";
  auto h = out.open("shape_k.csv");
  CsvWriter kw(h, out.params(), {"k", "target_intensity", "achieved_intensity"});
  const Eigen::VectorXd k = grid.points();
  const Eigen::VectorXd ti = target.normalize().intensity();
  const Eigen::VectorXd ai = v.achieved_k.normalize().intensity();
  std::vector<std::vector<double>> rows;
  for (Eigen::Index j = 0; j < k.size(); ++j) {
    if (std::abs(k(j)) > a.window) continue;
    kw.row({k(j), ti(j), ai(j)});
    rows.push_back({k(j), ti(j), ai(j)});
  }
  if (a.common.svg)
    write_line_plot(out.path("shape.svg"), "probe shaping |phi(K)|^2", "K",
                    {{"target", column(rows, 0), column(rows, 1)},
                     {"achieved", column(rows, 0), column(rows, 2)}});
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

int fail(int code, const char* kind, const std::string& what) {
  std::cerr << "weakprobe: error: " << kind << ": " << one_line(what) << "\n";
  return code;
}

int run(int argc, char** argv) {
  CLI::App app{"Weak-measurement probe simulation and analysis", "weakprobe"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);

  WeakstatsArgs ws;
  auto* c_ws = app.add_subcommand("weakstats", "Weak value, variance and probabilities");
  add_common(c_ws, ws.common);
  add_selection(c_ws, ws.sel);
  c_ws->add_option("--moments", ws.moments, "Number of weak moments (0: auto)");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Exact grid simulation vs perturbative prediction");
  add_common(c_sim, sim.common);
  add_selection(c_sim, sim.sel);
  c_sim->add_option("--theta", sim.theta, "Coupling strength");
  c_sim->add_option("--alphas", sim.alphas, "Quadrature angles (radians)");

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "Model curves over wave-plate angles");
  add_common(c_sw, sw.common);
  c_sw->add_option("--case", sw.kase)->check(CLI::IsMember({"i", "ii"}));
  c_sw->add_option("--alpha", sw.alpha, "Quadrature angle (radians)");
  add_model(c_sw, sw.model);
  c_sw->add_option("--angles", sw.angles, "first:last:step in degrees");
  c_sw->add_flag("--exact", sw.exact, "Add exact grid-simulation columns");

  WignerArgs wg;
  auto* c_wg = app.add_subcommand("wigner", "Wigner function of the post-selected probe");
  add_common(c_wg, wg.common);
  c_wg->add_option("--re-wv", wg.re_wv, "Re weak value times theta");
  c_wg->add_option("--im-wv", wg.im_wv, "Im weak value times theta");
  c_wg->add_option("--re-wvar", wg.re_wvar, "Re weak variance times theta^2");
  c_wg->add_option("--im-wvar", wg.im_wvar, "Im weak variance times theta^2");
  c_wg->add_option("--span", wg.span, "Half-width of the sampled X and K range");
  c_wg->add_option("--samples", wg.samples, "Samples per axis");

  FracftArgs fr;
  auto* c_fr = app.add_subcommand("fracft-demo", "Fractional Fourier transform demo");
  c_fr->alias("fracft");
  add_common(c_fr, fr.common);
  c_fr->add_option("--alpha", fr.alpha, "Transform angle (radians)");
  c_fr->add_option("--center", fr.center, "Input Gaussian center");
  c_fr->add_option("--chirp", fr.chirp, "Input quadratic phase rate");
  c_fr->add_flag("--optical", fr.optical, "Compare with the lens/free-space setup");
  c_fr->add_option("--focal", fr.focal, "Lens focal length");

  CurvesArgs cv;
  auto* c_cv = app.add_subcommand("curves", "Fit-model curves for several quadratures");
  add_common(c_cv, cv.common);
  c_cv->add_option("--case", cv.kase)->check(CLI::IsMember({"i", "ii"}));
  c_cv->add_option("--alphas", cv.alphas, "Quadrature angles (radians)");
  c_cv->add_option("--quantity", cv.q)
      ->check(CLI::IsMember({"mean", "variance", "delta-variance"}));
  add_model(c_cv, cv.model);
  c_cv->add_option("--angles", cv.angles, "first:last:step in degrees");

  SynthesizeArgs sy;
  auto* c_sy = app.add_subcommand("synthesize", "Noisy synthetic data from the fit model");
  add_common(c_sy, sy.common);
  c_sy->add_option("--case", sy.kase)->check(CLI::IsMember({"i", "ii"}));
  c_sy->add_option("--alpha", sy.alpha, "Quadrature angle (radians)");
  c_sy->add_option("--quantity", sy.q)
      ->check(CLI::IsMember({"mean", "variance", "delta-variance"}));
  add_model(c_sy, sy.model);
  c_sy->add_option("--angles", sy.angles, "first:last:step in degrees");
  c_sy->add_option("--count", sy.count, "Evenly spaced angle count (overrides --angles)");
  c_sy->add_option("--first", sy.first, "First angle for --count");
  c_sy->add_option("--last", sy.last, "Last angle for --count");
  c_sy->add_option("--noise", sy.noise, "Gaussian noise sigma");

  FitArgs ft;
  auto* c_ft = app.add_subcommand("fit", "Fit the experiment model to a data CSV");
  add_common(c_ft, ft.common);
  c_ft->add_option("--data", ft.data, "CSV with angle_deg and value columns")->required();
  c_ft->add_option("--case", ft.kase)->check(CLI::IsMember({"i", "ii"}));
  c_ft->add_option("--alpha", ft.alpha, "Quadrature angle (radians)");
  c_ft->add_option("--quantity", ft.q)
      ->check(CLI::IsMember({"mean", "variance", "delta-variance"}));
  c_ft->add_option("--free", ft.free, "Free parameters among theta,V,delta,N");
  add_model(c_ft, ft.initial);
  c_ft->add_flag("--nelder-mead", ft.nelder_mead, "Use Nelder-Mead instead of LM");
  c_ft->add_option("--max-iters", ft.max_iters, "Iteration cap");

  ShapeArgs sh;
  auto* c_sh = app.add_subcommand("shape", "Design a selection that reshapes the probe");
  add_common(c_sh, sh.common);
  c_sh->add_option("--target", sh.target)->check(CLI::IsMember({"shift", "hermite"}));
  c_sh->add_option("--shift", sh.shift, "Shift a of the pure-shift target");
  c_sh->add_option("--hermite", sh.hermite, "c in phi(K)(1 + c K^2)");
  c_sh->add_option("--theta", sh.theta, "Coupling strength");
  c_sh->add_option("--eigenvalues", sh.eigenvalues, "Observable spectrum");
  c_sh->add_option("--order", sh.order, "Matched weak moments (0: dimension)");
  c_sh->add_option("--window", sh.window, "Half-width of the matching window");
  c_sh->add_option("--post", sh.post, "Post-selected state (default uniform)");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const ValidationError& e) {
    return fail(2, "validation", e.what());
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "validation", e.what());
  }

  const std::vector<std::pair<CLI::App*, std::function<void()>>> commands{
      {c_ws, [&] { run_weakstats(c_ws, ws); }},
      {c_sim, [&] { run_simulate(c_sim, sim); }},
      {c_sw, [&] { run_sweep(c_sw, sw); }},
      {c_wg, [&] { run_wigner(c_wg, wg); }},
      {c_fr, [&] { run_fracft(c_fr, fr); }},
      {c_cv, [&] { run_curves(c_cv, cv); }},
      {c_sy, [&] { run_synthesize(c_sy, sy); }},
      {c_ft, [&] { run_fit(c_ft, ft); }},
      {c_sh, [&] { run_shape(c_sh, sh); }},
  };
  try {
    for (const auto& [sub, fn] : commands)
      if (sub->parsed()) fn();
  } catch (const ValidationError& e) {
    return fail(2, "validation", e.what());
  } catch (const NonConvergence& e) {
    return fail(4, "nonconvergence", e.what());
  } catch (const std::domain_error& e) {
    return fail(3, "domain", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, "validation", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(2, "validation", e.what());
  }
  return 0;
}

}  // namespace
}  // namespace weakprobe::cli

int main(int argc, char** argv) { return weakprobe::cli::run(argc, argv); }
