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

#include "weakprobe/probe.h"

#include <cmath>
#include <numbers>
#include <sstream>

namespace weakprobe {
namespace {
constexpr double kPi = std::numbers::pi;
}  // namespace

ProbeWavefunction gaussian_probe(const Grid& grid, double center) {
  CVector psi(grid.n());
  const double c = std::pow(kPi, -0.25);
  for (int k = 0; k < grid.n(); ++k) {
    const double u = grid.x(k) - center;
    psi(k) = c * std::exp(-0.5 * u * u);
  }
  return ProbeWavefunction(grid, std::move(psi), true);
}

QuadratureMoments QuadratureSums::moments(double alpha) const {
  if (!(weight >= 1e-28)) {
    throw OrthogonalPostSelection(
        "orthogonal post-selection: probe norm below 1e-14", weight);
  }
  const double mean = first / weight;
  return {alpha, mean, second / weight - mean * mean};
}

QuadratureSums quadrature_sums(const FrFTPlan& plan,
                               const ProbeWavefunction& psi) {
  const Grid& g = psi.grid();
  const Eigen::VectorXd rho = plan.apply(psi.psi()).cwiseAbs2();
  const Eigen::VectorXd x = g.points();
  QuadratureSums s;
  s.weight = rho.sum() * g.dx();
  s.first = x.dot(rho) * g.dx();
  s.second = x.cwiseAbs2().dot(rho) * g.dx();
  return s;
}

QuadratureMoments quadrature_moments(const ProbeWavefunction& psi,
                                     double alpha) {
  const ProbeWavefunction unit = psi.normalize();
  const FrFTPlan plan(psi.grid(), alpha);
  const Eigen::VectorXd rho = plan.apply(unit.psi()).cwiseAbs2();
  const DensityMoments m = density_moments(psi.grid(), rho);
  return {alpha, m.mean, m.variance};
}

double wigner_k_spacing(const Grid& grid) {
  return kPi / (grid.n() * grid.dx());
}

Eigen::MatrixXd wigner(const ProbeWavefunction& psi,
                       std::span<const double> x_samples,
                       std::span<const double> k_samples) {
  const Grid& g = psi.grid();
  const int n = g.n();
  const double dx = g.dx();
  const double k_nyquist = kPi / (2.0 * dx);
  for (double x : x_samples) {
    if (!(x >= g.x(0) && x <= g.x(n - 1))) {
      std::ostringstream msg;
      msg << "wigner: X sample " << x << " outside grid support";
      throw ValidationError(msg.str());
    }
  }
  for (double k : k_samples) {
    if (!(std::abs(k) <= k_nyquist)) {
      std::ostringstream msg;
      msg << "wigner: K sample " << k << " outside |K| <= " << k_nyquist;
      throw ValidationError(msg.str());
    }
  }

  // Map each K sample to a lattice index when it sits on the FFT lattice.
  const double dk = wigner_k_spacing(g);
  std::vector<int> lattice(k_samples.size(), -1);
  for (size_t j = 0; j < k_samples.size(); ++j) {
    const double l = k_samples[j] / dk;
    const double r = std::round(l);
    if (std::abs(l - r) < 1e-9) {
      lattice[j] = (static_cast<int>(r) % n + n) % n;
    }
  }

  Eigen::MatrixXd w(x_samples.size(), k_samples.size());
  CVector f(n);
  for (size_t i = 0; i < x_samples.size(); ++i) {
    const double x = x_samples[i];
    const int k0 = std::clamp(static_cast<int>(std::lround((x - g.x(0)) / dx)),
                              0, n - 1);
    const double delta = x - g.x(k0);
    const ProbeWavefunction shifted =
        std::abs(delta) > 1e-14 ? spectral_shift(psi, -delta) : psi;
    const CVector& p = shifted.psi();

    f.setZero();
    const int mmax = std::min(k0, n - 1 - k0);
    for (int m = -mmax; m <= mmax; ++m) {
      f((m + n) % n) = std::conj(p(k0 + m)) * p(k0 - m);
    }
    // sum_m f_m e^{+2 i K_l m dx} with K_l = l * dk.
    const CVector spec = fft_inverse(f) * static_cast<double>(n);
    for (size_t j = 0; j < k_samples.size(); ++j) {
      Complex acc;
      if (lattice[j] >= 0) {
        acc = spec(lattice[j]);
      } else {
        const double kk = k_samples[j];
        for (int m = -mmax; m <= mmax; ++m) {
          acc += f((m + n) % n) * std::polar(1.0, 2.0 * kk * m * dx);
        }
      }
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          acc.real() * dx / kPi;
    }
  }
  return w;
}

CVector moment_series_k(const ProbeWavefunction& base_k,
                        std::span<const Complex> moments, double theta) {
  const Grid& g = base_k.grid();
  CVector out = CVector::Zero(g.n());
  for (int k = 0; k < g.n(); ++k) {
    const double kk = g.x(k);
    // Horner-free accumulation keeps each term explicit: t_n = (-i theta K)^n / n!
    Complex term = 1.0;
    Complex acc = 0.0;
    for (size_t m = 0; m < moments.size(); ++m) {
      if (m > 0) term *= Complex(0.0, -theta * kk) / static_cast<double>(m);
      acc += term * moments[m];
    }
    out(k) = acc * base_k.psi()(k);
  }
  return out;
}

ProbeWavefunction truncated_post_selected_probe(const Grid& grid,
                                                Complex weak_value_theta,
                                                Complex weak_variance_theta2) {
  // theta = 1 with m_1 = wv and m_2 = wvar + wv^2 gives the same series.
  const Complex m[3] = {1.0, weak_value_theta,
                        weak_variance_theta2 + weak_value_theta * weak_value_theta};
  const ProbeWavefunction base = gaussian_probe(grid);  // self-dual
  ProbeWavefunction k_rep(grid, moment_series_k(base, m, 1.0));
  return to_x_representation(k_rep);
}

ProbeWavefunction to_k_representation(const ProbeWavefunction& psi_x) {
  return frft(psi_x, kPi / 2);
}

ProbeWavefunction to_x_representation(const ProbeWavefunction& psi_k) {
  return frft(psi_k, -kPi / 2);
}

}  // namespace weakprobe
