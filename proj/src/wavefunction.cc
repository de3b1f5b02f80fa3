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

#include "weakprobe/wavefunction.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace weakprobe {

Grid::Grid(int n, double x_max) : n_(n), x_max_(x_max) {
  const bool pow2 = n > 0 && (n & (n - 1)) == 0;
  if (!pow2 || n < 256) {
    std::ostringstream msg;
    msg << "Grid: n=" << n << " must be a power of two >= 256";
    throw ValidationError(msg.str());
  }
  if (!(x_max >= 8.0) || !std::isfinite(x_max)) {
    std::ostringstream msg;
    msg << "Grid: x_max=" << x_max << " must be >= 8";
    throw ValidationError(msg.str());
  }
}

Eigen::VectorXd Grid::points() const {
  Eigen::VectorXd x(n_);
  for (int k = 0; k < n_; ++k) x(k) = this->x(k);
  return x;
}

Eigen::VectorXd Grid::wavenumbers() const {
  Eigen::VectorXd k(n_);
  const double dk = 2.0 * std::numbers::pi / (n_ * dx());
  for (int m = 0; m < n_; ++m) k(m) = dk * (m < n_ / 2 ? m : m - n_);
  return k;
}

ProbeWavefunction::ProbeWavefunction(Grid grid, CVector psi, bool normalized)
    : grid_(grid), psi_(std::move(psi)), normalized_(normalized) {
  if (psi_.size() != grid_.n()) {
    throw ValidationError("ProbeWavefunction: sample count differs from grid");
  }
}

double ProbeWavefunction::norm_squared() const {
  return psi_.squaredNorm() * grid_.dx();
}

ProbeWavefunction ProbeWavefunction::normalize() const {
  const double n2 = norm_squared();
  if (!(n2 >= 1e-28)) {
    throw OrthogonalPostSelection(
        "orthogonal post-selection: probe norm below 1e-14", n2);
  }
  return ProbeWavefunction(grid_, psi_ / std::sqrt(n2), true);
}

CVector fft_forward(const CVector& v) {
  Eigen::FFT<double> fft;
  CVector out(v.size());
  fft.fwd(out, v);
  return out;
}

CVector fft_inverse(const CVector& v) {
  Eigen::FFT<double> fft;
  CVector out(v.size());
  fft.inv(out, v);
  return out;
}

ProbeWavefunction spectral_shift(const ProbeWavefunction& psi, double shift) {
  if (shift == 0.0) return psi;
  const Eigen::VectorXd k = psi.grid().wavenumbers();
  CVector spec = fft_forward(psi.psi());
  const int n = psi.grid().n();
  for (int m = 0; m < n; ++m) spec(m) *= std::polar(1.0, -shift * k(m));
  return ProbeWavefunction(psi.grid(), fft_inverse(spec), psi.normalized());
}

CVector spectral_derivative(const ProbeWavefunction& psi) {
  const Eigen::VectorXd k = psi.grid().wavenumbers();
  CVector spec = fft_forward(psi.psi());
  const int n = psi.grid().n();
  for (int m = 0; m < n; ++m) {
    spec(m) *= (m == n / 2) ? Complex(0.0) : Complex(0.0, k(m));
  }
  return fft_inverse(spec);
}

DensityMoments density_moments(const Grid& grid, const Eigen::VectorXd& rho) {
  const Eigen::VectorXd x = grid.points();
  const double norm = rho.sum();
  if (!(norm > 0.0)) {
    throw OrthogonalPostSelection("density_moments: zero total weight", 0.0);
  }
  const double mean = x.dot(rho) / norm;
  const double var =
      (x.array() - mean).square().matrix().dot(rho) / norm;
  return {norm * grid.dx(), mean, var};
}

double l1_density_distance(const Grid& grid, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b) {
  const double na = a.sum() * grid.dx();
  const double nb = b.sum() * grid.dx();
  return (a / na - b / nb).cwiseAbs().sum() * grid.dx();
}

double distance_mod_phase(const ProbeWavefunction& a,
                          const ProbeWavefunction& b) {
  const Complex ip = b.psi().dot(a.psi());  // <b|a>
  const Complex phase =
      std::abs(ip) > 0 ? ip / std::abs(ip) : Complex(1.0);
  return std::sqrt((a.psi() - phase * b.psi()).squaredNorm() * a.grid().dx());
}

}  // namespace weakprobe
