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

#ifndef WEAKPROBE_WAVEFUNCTION_H_
#define WEAKPROBE_WAVEFUNCTION_H_

#include <complex>

#include <Eigen/Dense>

#include "weakprobe/hilbert.h"

namespace weakprobe {

/// Uniform grid x_k = -x_max + k*dx, dx = 2*x_max/n, of the dimensionless
/// probe variable. n is a power of two >= 256 and x_max >= 8.
class Grid {
 public:
  static constexpr int kDefaultPoints = 4096;
  static constexpr double kDefaultHalfWidth = 20.0;

  Grid() : Grid(kDefaultPoints, kDefaultHalfWidth) {}
  Grid(int n, double x_max);

  int n() const { return n_; }
  double x_max() const { return x_max_; }
  double dx() const { return 2.0 * x_max_ / n_; }
  double x(Eigen::Index k) const { return -x_max_ + static_cast<double>(k) * dx(); }

  Eigen::VectorXd points() const;
  /// Angular wavenumbers of the discrete Fourier transform, in FFT order.
  Eigen::VectorXd wavenumbers() const;

  /// Same point count with a different half-width (may throw).
  Grid rescaled(double factor) const { return Grid(n_, x_max_ * factor); }

  bool operator==(const Grid& o) const {
    return n_ == o.n_ && x_max_ == o.x_max_;
  }

 private:
  int n_;
  double x_max_;
};

/// Complex amplitudes on a Grid. `normalized` records whether the vector
/// was constructed as a unit-norm state (sum |psi_k|^2 dx = 1).
class ProbeWavefunction {
 public:
  ProbeWavefunction(Grid grid, CVector psi, bool normalized = false);

  const Grid& grid() const { return grid_; }
  const CVector& psi() const { return psi_; }
  bool normalized() const { return normalized_; }

  /// sum_k |psi_k|^2 dx
  double norm_squared() const;
  /// Copy scaled to unit norm. Throws OrthogonalPostSelection when the
  /// norm is below 1e-14.
  ProbeWavefunction normalize() const;

  /// |psi_k|^2 (no dx factor).
  Eigen::VectorXd intensity() const { return psi_.cwiseAbs2(); }

 private:
  Grid grid_;
  CVector psi_;
  bool normalized_;
};

/// Forward/inverse unitary-ish DFT helpers over a grid vector (no
/// normalization conventions beyond Eigen::FFT's: inverse(forward(v)) == v).
CVector fft_forward(const CVector& v);
CVector fft_inverse(const CVector& v);

/// psi(X - shift) via the K-space phase ramp exp(-i shift K); exact for
/// band-limited periodic samples, arbitrary real shifts.
ProbeWavefunction spectral_shift(const ProbeWavefunction& psi, double shift);

/// Spectral derivative d psi / dX.
CVector spectral_derivative(const ProbeWavefunction& psi);

/// Mean and variance of a sampled density rho_k on the grid points.
struct DensityMoments {
  double norm;  // sum rho_k dx
  double mean;
  double variance;
};
DensityMoments density_moments(const Grid& grid, const Eigen::VectorXd& rho);

/// L1 distance between two sampled densities, each normalized to unit
/// integral first.
double l1_density_distance(const Grid& grid, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b);

/// min over unit complex c of ||a - c b|| (grid L2 norm).
double distance_mod_phase(const ProbeWavefunction& a,
                          const ProbeWavefunction& b);

}  // namespace weakprobe

#endif  // WEAKPROBE_WAVEFUNCTION_H_
