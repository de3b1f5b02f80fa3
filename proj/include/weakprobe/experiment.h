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

#ifndef WEAKPROBE_EXPERIMENT_H_
#define WEAKPROBE_EXPERIMENT_H_

// Closed-form model of the polarization experiment: waveplate pre-selection
// |i> = cos(t/2)|D> + e^{i p} sin(t/2)|A>, post-selection |H>, A = |D><D| -
// |A><A|, Gaussian probe. Angles are degrees at every interface.

#include <array>
#include <cstdint>
#include <vector>

#include "weakprobe/hilbert.h"
#include "weakprobe/least_squares.h"

namespace weakprobe {

double deg_to_rad(double deg);
double rad_to_deg(double rad);

enum class PreSelectionKind {
  kCaseI,   // half-wave plate at angle_deg
  kCaseII,  // quarter-wave plate at angle_deg
};

struct PreSelectionSpec {
  PreSelectionKind kind;
  double angle_deg;

  /// Bloch polar angle (radians): 4 h - pi/2 or 2 q - pi/2.
  double theta_i() const;
  /// Relative phase (radians): 0 or -2 q.
  double phi_i() const;
  PreSelectionSpec shifted(double delta_deg) const {
    return {kind, angle_deg + delta_deg};
  }
};

/// States and observable in the H/V basis: |D> = (1,1)/sqrt2,
/// |A> = (1,-1)/sqrt2.
TargetState experiment_pre_state(const PreSelectionSpec& spec);
TargetState experiment_post_state();
HermitianObservable experiment_observable();

struct ExactWeakStats {
  Complex weak_value;
  Complex weak_variance;
};

/// <A>_w = (cos t - i sin t sin p) / (1 + sin t cos p),
/// s2_w = (2 sin t (sin t + cos p) + i sin 2t sin p) / (1 + sin t cos p)^2.
/// Throws NearOrthogonalSelection where the denominator vanishes.
ExactWeakStats exact_weak_stats(const PreSelectionSpec& spec);

/// Fit parameters. delta_deg is added to the waveplate angle; N is the
/// rectangular background intensity over [-L, L].
struct FitModel {
  double theta = 3.62e-2;
  double V = 1.0;
  double delta_deg = 0.0;
  double N = 0.0;
  double L = 5.6;

  /// Throws ValidationError unless theta > 0, V in [0,1],
  /// |delta| <= 0.5 deg, N >= 0, L > 0.
  void validate() const;
};

/// Post-selected mean of M(alpha), alpha in radians.
double mean_curve(const PreSelectionSpec& spec, const FitModel& m,
                  double alpha);
/// Post-selected variance of M(alpha) including visibility and background.
double variance_curve(const PreSelectionSpec& spec, const FitModel& m,
                      double alpha);
/// (variance - 1/2) / (1/2)
double delta_variance(const PreSelectionSpec& spec, const FitModel& m,
                      double alpha);

enum class CurveQuantity { kMean, kVariance, kDeltaVariance };

double curve_value(CurveQuantity q, const PreSelectionSpec& spec,
                   const FitModel& m, double alpha);

struct DataPoint {
  double angle_deg;
  double value;
};

/// curve(angle) + N(0, noise_sigma) from a seeded mt19937_64. Empty angle
/// list or negative noise is rejected.
std::vector<DataPoint> synthesize_data(PreSelectionKind kind,
                                       const std::vector<double>& angles_deg,
                                       const FitModel& model, double alpha,
                                       CurveQuantity q, double noise_sigma,
                                       std::uint64_t seed);

/// n evenly spaced angles over [first, last] (inclusive).
std::vector<double> angle_range(double first_deg, double last_deg, int n);
/// first, first + step, ... <= last (+1e-9 slack).
std::vector<double> angle_steps(double first_deg, double last_deg,
                                double step_deg);

enum class FitParam { kTheta = 0, kV = 1, kDelta = 2, kN = 3 };
using FreeMask = std::array<bool, 4>;  // theta, V, delta, N
inline constexpr FreeMask kFitThetaVDelta = {true, true, true, false};
inline constexpr FreeMask kFitAll = {true, true, true, true};
inline constexpr FreeMask kFitNOnly = {false, false, false, true};

struct FitOptions {
  bool nelder_mead = false;
  LsqOptions lsq;  // scale defaults to (1e-2, 1e-2, 0.1 deg, 1e-6)
};

struct FitResult {
  FitModel estimates;
  FreeMask free;
  double residual_norm = 0;  // sum of squared residuals
  int iterations = 0;
  bool converged = false;
};

/// Unweighted least squares of curve_value over the free parameters.
/// Requires at least twice as many points as free parameters.
FitResult fit(const std::vector<DataPoint>& data, PreSelectionKind kind,
              double alpha, CurveQuantity q, const FreeMask& free,
              const FitModel& initial, const FitOptions& options = {});

}  // namespace weakprobe

#endif  // WEAKPROBE_EXPERIMENT_H_
