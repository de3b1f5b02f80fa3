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

#ifndef WEAKPROBE_PROBE_H_
#define WEAKPROBE_PROBE_H_

#include <span>

#include "weakprobe/fracft.h"
#include "weakprobe/wavefunction.h"

namespace weakprobe {

/// phi(X - center) with phi(X) = pi^{-1/4} exp(-X^2 / 2); normalized.
ProbeWavefunction gaussian_probe(const Grid& grid, double center = 0.0);

/// Mean and variance of M(alpha) = X cos(alpha) + K sin(alpha).
struct QuadratureMoments {
  double alpha;
  double mean;
  double variance;
};

/// Moments of |F_alpha[psi]|^2 over the grid. Non-normalized input is
/// normalized first; a norm below 1e-14 throws OrthogonalPostSelection.
QuadratureMoments quadrature_moments(const ProbeWavefunction& psi,
                                     double alpha);

/// Unnormalized second-moment sums of |F_alpha[psi]|^2, for combining the
/// components of a probe mixture before dividing by the total weight.
struct QuadratureSums {
  double weight = 0.0;  // sum rho dx
  double first = 0.0;   // sum m rho dx
  double second = 0.0;  // sum m^2 rho dx

  QuadratureSums& operator+=(const QuadratureSums& o) {
    weight += o.weight;
    first += o.first;
    second += o.second;
    return *this;
  }
  QuadratureMoments moments(double alpha) const;
};
QuadratureSums quadrature_sums(const FrFTPlan& plan,
                               const ProbeWavefunction& psi);

/// Wigner function W(X, K) = (1/pi) integral dy psi*(X+y) psi(X-y) e^{2iKy}
/// sampled on x_samples (rows) x k_samples (columns). Samples must lie in
/// [x_0, x_{n-1}] and |K| <= pi / (2 dx). psi must be normalized.
Eigen::MatrixXd wigner(const ProbeWavefunction& psi,
                       std::span<const double> x_samples,
                       std::span<const double> k_samples);

/// Spacing of the K lattice on which wigner() is evaluated by FFT alone.
double wigner_k_spacing(const Grid& grid);

/// K-representation samples of sum_{n=0}^{N} (-i theta)^n / n! m_n K^n
/// base(K), where `moments` holds m_0..m_N (m_0 is normally 1) and the grid
/// variable of `base_k` is K.
CVector moment_series_k(const ProbeWavefunction& base_k,
                        std::span<const Complex> moments, double theta);

/// X-representation probe (1 - i wv K - (wvar + wv^2)/2 K^2) phi with the
/// products wv = theta <A>_w and wvar = theta^2 sigma_w^2 given directly;
/// the O(theta^3) tail is dropped. Not normalized.
ProbeWavefunction truncated_post_selected_probe(const Grid& grid,
                                                Complex weak_value_theta,
                                                Complex weak_variance_theta2);

/// X <-> K representation changes (F_{+-pi/2} on the same grid).
ProbeWavefunction to_k_representation(const ProbeWavefunction& psi_x);
ProbeWavefunction to_x_representation(const ProbeWavefunction& psi_k);

}  // namespace weakprobe

#endif  // WEAKPROBE_PROBE_H_
