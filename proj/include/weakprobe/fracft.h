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

#ifndef WEAKPROBE_FRACFT_H_
#define WEAKPROBE_FRACFT_H_

#include <vector>

#include "weakprobe/wavefunction.h"

namespace weakprobe {

/// Angles this close to 0 or pi (mod 2pi) use the exact identity / parity
/// branch instead of the chirp kernel.
inline constexpr double kFrftSnapTol = 1e-6;

/// Reusable fractional Fourier transform F_alpha on one grid.
///
/// F_alpha[psi](w) = sqrt((1 - i cot a) / 2pi) *
///     integral dx psi(x) exp(i (cot a w^2 - 2 csc a w x + cot a x^2) / 2),
/// principal square root. The output lives on the input grid. Each chirp
/// stage is chirp-multiply, linear chirp convolution through a 2n-point FFT,
/// chirp-multiply; angles with |a| outside [pi/4, 3pi/4] are split into a
/// +-pi/2 stage and a remainder stage so chirp rates stay bounded.
class FrFTPlan {
 public:
  FrFTPlan(Grid grid, double alpha);

  const Grid& grid() const { return grid_; }
  double alpha() const { return alpha_; }

  ProbeWavefunction apply(const ProbeWavefunction& psi) const;
  CVector apply(const CVector& samples) const;

 private:
  struct ChirpStage {
    CVector pre;         // n
    CVector kernel_fft;  // 2n
    CVector post;        // n, includes sqrt((1 - i cot)/2pi) * dx
  };
  enum class Kind { kIdentity, kParity, kChirp };

  ChirpStage make_stage(double a) const;
  CVector run_stage(const ChirpStage& stage, const CVector& v) const;

  Grid grid_;
  double alpha_;
  Kind kind_;
  std::vector<ChirpStage> stages_;
};

ProbeWavefunction frft(const ProbeWavefunction& psi, double alpha);

/// Lens (focal length F) + free space (distance D) + lens, all
/// dimensionless. Output intensity of the realization for `alpha` is the
/// fractional transform of a rescaled input read at rescaled coordinates.
struct OpticalRealization {
  double alpha;
  double F;
  double D;
  double scale;        // output coordinate is X / scale
  double input_scale;  // input is read as psi(X * input_scale)
  /// s with |out(X)|^2 ∝ |F_alpha[psi(. s)](X / s)|^2 (same s on both sides).
  double symmetric_scale;
};

/// Supported alpha: pi/4, pi/2, 3pi/4 (within 1e-9). F > 0.
OpticalRealization optical_params(double alpha, double F);

struct PropagationResult {
  ProbeWavefunction psi;
  /// Probability within the outer 1/32 of the grid on either side exceeds
  /// 1e-6; periodic FFT propagation may have wrapped around.
  bool aliasing_warning;
};

/// Lens phase exp(-i X^2 / 2F), free-space transfer exp(-i D K^2 / 2) in
/// K space, second lens phase. Requires D > 0 and F != 0.
PropagationResult lens_freespace_propagate(const ProbeWavefunction& psi,
                                           double F, double D);

/// |F_alpha[psi(. s)](X_k / s)|^2 sampled on psi's grid (unnormalized): the
/// intensity the optical realization must reproduce.
Eigen::VectorXd optical_reference_intensity(const ProbeWavefunction& psi,
                                            const OpticalRealization& r);

}  // namespace weakprobe

#endif  // WEAKPROBE_FRACFT_H_
