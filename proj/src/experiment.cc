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

#include "weakprobe/experiment.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace weakprobe {
namespace {
constexpr double kPi = std::numbers::pi;
}  // namespace

double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

double PreSelectionSpec::theta_i() const {
  const double a = deg_to_rad(angle_deg);
  return kind == PreSelectionKind::kCaseI ? 4 * a - kPi / 2 : 2 * a - kPi / 2;
}

double PreSelectionSpec::phi_i() const {
  return kind == PreSelectionKind::kCaseI ? 0.0 : -2 * deg_to_rad(angle_deg);
}

TargetState experiment_pre_state(const PreSelectionSpec& spec) {
  const double s = 1.0 / std::sqrt(2.0);
  CVector d(2), a(2);
  d << s, s;
  a << s, -s;
  const double t = spec.theta_i();
  return TargetState(std::cos(t / 2) * d +
                     std::polar(1.0, spec.phi_i()) * std::sin(t / 2) * a);
}

TargetState experiment_post_state() { return TargetState::basis(2, 0); }

HermitianObservable experiment_observable() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianObservable(m);
}

ExactWeakStats exact_weak_stats(const PreSelectionSpec& spec) {
  const double t = spec.theta_i(), p = spec.phi_i();
  const double den = 1 + std::sin(t) * std::cos(p);
  if (std::abs(den) < 1e-12) {
    std::ostringstream msg;
    msg << "exact weak stats: pre-selection orthogonal to |H> at angle "
        << spec.angle_deg << " deg";
    throw NearOrthogonalSelection(msg.str(), std::abs(den) / 2);
  }
  ExactWeakStats s;
  s.weak_value = Complex(std::cos(t), -std::sin(t) * std::sin(p)) / den;
  s.weak_variance = Complex(2 * std::sin(t) * (std::sin(t) + std::cos(p)),
                            std::sin(2 * t) * std::sin(p)) /
                    (den * den);
  return s;
}

void FitModel::validate() const {
  std::ostringstream msg;
  if (!(theta > 0) || !std::isfinite(theta)) msg << "theta must be > 0";
  else if (!(V >= 0 && V <= 1)) msg << "V must lie in [0, 1]";
  else if (!(std::abs(delta_deg) <= 0.5)) msg << "delta must lie in [-0.5, 0.5] deg";
  else if (!(N >= 0) || !std::isfinite(N)) msg << "N must be >= 0";
  else if (!(L > 0) || !std::isfinite(L)) msg << "L must be > 0";
  else return;
  throw ValidationError(msg.str());
}

double mean_curve(const PreSelectionSpec& spec, const FitModel& m,
                  double alpha) {
  const PreSelectionSpec s = spec.shifted(m.delta_deg);
  const double t = s.theta_i(), p = s.phi_i();
  const double e = m.V * std::exp(-m.theta * m.theta);
  return m.theta *
         (std::cos(alpha) * std::cos(t) -
          e * std::sin(alpha) * std::sin(t) * std::sin(p)) /
         (1 + e * std::sin(t) * std::cos(p));
}

double variance_curve(const PreSelectionSpec& spec, const FitModel& m,
                      double alpha) {
  const PreSelectionSpec s = spec.shifted(m.delta_deg);
  const double t = s.theta_i(), p = s.phi_i();
  const double th2 = m.theta * m.theta;
  const double e1 = std::exp(-th2), e2 = std::exp(-2 * th2);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double V = m.V, LN = m.L * m.N;
  const double den = 1 + V * std::sin(t) * std::cos(p) * e1 + 4 * LN;
  const double signal =
      th2 * std::sin(t) *
      ((ca * ca - V * V * sa * sa * e2) * std::sin(t) +
       V * e1 *
           (std::cos(2 * alpha) * std::cos(p) +
            std::sin(2 * alpha) * std::cos(t) * std::sin(p))) /
      (den * den);
  const double background_cross =
      4 * LN * th2 * (ca * ca - V * e1 * sa * sa * std::sin(t) * std::cos(p)) /
      (den * den);
  const double background_box = (2.0 / 3.0) * LN * (2 * m.L * m.L - 3) / den;
  return 0.5 + signal + background_cross + background_box;
}

double delta_variance(const PreSelectionSpec& spec, const FitModel& m,
                      double alpha) {
  return (variance_curve(spec, m, alpha) - 0.5) / 0.5;
}

double curve_value(CurveQuantity q, const PreSelectionSpec& spec,
                   const FitModel& m, double alpha) {
  switch (q) {
    case CurveQuantity::kMean: return mean_curve(spec, m, alpha);
    case CurveQuantity::kVariance: return variance_curve(spec, m, alpha);
    case CurveQuantity::kDeltaVariance: return delta_variance(spec, m, alpha);
  }
  return 0.0;
}

std::vector<DataPoint> synthesize_data(PreSelectionKind kind,
                                       const std::vector<double>& angles_deg,
                                       const FitModel& model, double alpha,
                                       CurveQuantity q, double noise_sigma,
                                       std::uint64_t seed) {
  if (angles_deg.empty()) throw ValidationError("synthesize: empty angle range");
  if (!(noise_sigma >= 0)) throw ValidationError("synthesize: noise_sigma < 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<DataPoint> out;
  out.reserve(angles_deg.size());
  for (double a : angles_deg) {
    const double v = curve_value(q, {kind, a}, model, alpha);
    const double eps = noise(rng);  // always drawn: stream independent of sigma
    out.push_back({a, v + noise_sigma * eps});
  }
  return out;
}

std::vector<double> angle_range(double first_deg, double last_deg, int n) {
  if (n < 1) throw ValidationError("angle range: need at least one sample");
  std::vector<double> out(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    out[static_cast<size_t>(k)] =
        n == 1 ? first_deg : first_deg + (last_deg - first_deg) * k / (n - 1);
  }
  return out;
}

std::vector<double> angle_steps(double first_deg, double last_deg,
                                double step_deg) {
  if (!(step_deg > 0)) throw ValidationError("angle range: step must be > 0");
  if (!(last_deg >= first_deg)) {
    throw ValidationError("angle range: last must be >= first");
  }
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double a = first_deg + static_cast<double>(k) * step_deg;
    if (a > last_deg + 1e-9) break;
    out.push_back(a);
  }
  return out;
}

FitResult fit(const std::vector<DataPoint>& data, PreSelectionKind kind,
              double alpha, CurveQuantity q, const FreeMask& free,
              const FitModel& initial, const FitOptions& options) {
  initial.validate();
  std::vector<int> idx;
  for (int k = 0; k < 4; ++k)
    if (free[static_cast<size_t>(k)]) idx.push_back(k);
  if (idx.empty()) throw ValidationError("fit: no free parameters");
  if (data.size() < 2 * idx.size()) {
    std::ostringstream msg;
    msg << "fit: " << data.size() << " points for " << idx.size()
        << " free parameters (need at least twice as many)";
    throw ValidationError(msg.str());
  }

  const double lo_all[4] = {1e-12, 0.0, -0.5, 0.0};
  const double hi_all[4] = {std::numeric_limits<double>::infinity(), 1.0, 0.5,
                            std::numeric_limits<double>::infinity()};
  const double scale_all[4] = {1e-2, 1e-2, 0.1, 1e-6};
  auto get = [](const FitModel& m, int k) {
    switch (k) {
      case 0: return m.theta;
      case 1: return m.V;
      case 2: return m.delta_deg;
      default: return m.N;
    }
  };
  auto set = [](FitModel& m, int k, double v) {
    switch (k) {
      case 0: m.theta = v; break;
      case 1: m.V = v; break;
      case 2: m.delta_deg = v; break;
      default: m.N = v; break;
    }
  };

  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::VectorXd x0(n), lo(n), hi(n), scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int k = idx[static_cast<size_t>(i)];
    x0(i) = get(initial, k);
    lo(i) = lo_all[k];
    hi(i) = hi_all[k];
    scale(i) = scale_all[k];
  }
  auto model_at = [&](const Eigen::VectorXd& x) {
    FitModel m = initial;
    for (Eigen::Index i = 0; i < n; ++i) set(m, idx[static_cast<size_t>(i)], x(i));
    return m;
  };
  const ResidualFn residual = [&](const Eigen::VectorXd& x) {
    const FitModel m = model_at(x);
    Eigen::VectorXd r(static_cast<Eigen::Index>(data.size()));
    for (size_t j = 0; j < data.size(); ++j) {
      r(static_cast<Eigen::Index>(j)) =
          curve_value(q, {kind, data[j].angle_deg}, m, alpha) - data[j].value;
    }
    return r;
  };

  LsqOptions lsq = options.lsq;
  if (lsq.scale.size() == 0) lsq.scale = scale;
  const LsqResult r = options.nelder_mead
                          ? nelder_mead(residual, x0, lo, hi, lsq)
                          : levenberg_marquardt(residual, x0, lo, hi, lsq);
  FitResult out;
  out.estimates = model_at(r.x);
  out.free = free;
  out.residual_norm = r.cost;
  out.iterations = r.iterations;
  out.converged = r.converged;
  return out;
}

}  // namespace weakprobe
