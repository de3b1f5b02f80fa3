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

#include "weakprobe/fracft.h"

#include <cmath>
#include <numbers>
#include <sstream>

namespace weakprobe {
namespace {

constexpr double kPi = std::numbers::pi;

double reduce_angle(double a) { return std::remainder(a, 2.0 * kPi); }

}  // namespace

FrFTPlan::FrFTPlan(Grid grid, double alpha)
    : grid_(grid), alpha_(alpha), kind_(Kind::kChirp) {
  if (!std::isfinite(alpha)) throw ValidationError("frft: alpha not finite");
  const double a = reduce_angle(alpha);
  if (std::abs(a) < kFrftSnapTol) {
    kind_ = Kind::kIdentity;
  } else if (kPi - std::abs(a) < kFrftSnapTol) {
    kind_ = Kind::kParity;
  } else if (std::abs(a) >= kPi / 4 && std::abs(a) <= 3 * kPi / 4) {
    stages_.push_back(make_stage(a));
  } else if (std::abs(a) < kPi / 4 || a > 3 * kPi / 4) {
    stages_.push_back(make_stage(kPi / 2));
    stages_.push_back(make_stage(a - kPi / 2));
  } else {
    stages_.push_back(make_stage(-kPi / 2));
    stages_.push_back(make_stage(a + kPi / 2));
  }
}

FrFTPlan::ChirpStage FrFTPlan::make_stage(double a) const {
  const int n = grid_.n();
  const double dx = grid_.dx();
  const double cot = std::cos(a) / std::sin(a);
  const double csc = 1.0 / std::sin(a);
  ChirpStage st;
  st.pre.resize(n);
  st.post.resize(n);
  const Complex norm = std::sqrt(Complex(1.0, -cot) / (2.0 * kPi)) * dx;
  for (int k = 0; k < n; ++k) {
    const double x = grid_.x(k);
    const Complex c = std::polar(1.0, 0.5 * (cot - csc) * x * x);
    st.pre(k) = c;
    st.post(k) = norm * c;
  }
  // h_m = exp(i csc (m dx)^2 / 2), m in [-(n-1), n-1], stored circularly.
  CVector h = CVector::Zero(2 * n);
  for (int m = -(n - 1); m <= n - 1; ++m) {
    const double u = m * dx;
    h((m + 2 * n) % (2 * n)) = std::polar(1.0, 0.5 * csc * u * u);
  }
  st.kernel_fft = fft_forward(h);
  return st;
}

CVector FrFTPlan::run_stage(const ChirpStage& stage, const CVector& v) const {
  const int n = grid_.n();
  CVector g = CVector::Zero(2 * n);
  g.head(n) = v.cwiseProduct(stage.pre);
  CVector conv = fft_inverse(fft_forward(g).cwiseProduct(stage.kernel_fft));
  return conv.head(n).cwiseProduct(stage.post);
}

CVector FrFTPlan::apply(const CVector& samples) const {
  if (samples.size() != grid_.n()) {
    throw ValidationError("frft: sample count differs from plan grid");
  }
  switch (kind_) {
    case Kind::kIdentity:
      return samples;
    case Kind::kParity: {
      const int n = grid_.n();
      CVector out(n);
      for (int k = 0; k < n; ++k) out(k) = samples((n - k) % n);
      return out;
    }
    case Kind::kChirp:
      break;
  }
  CVector v = samples;
  for (const auto& st : stages_) v = run_stage(st, v);
  return v;
}

ProbeWavefunction FrFTPlan::apply(const ProbeWavefunction& psi) const {
  if (!(psi.grid() == grid_)) {
    throw ValidationError("frft: wavefunction grid differs from plan grid");
  }
  return ProbeWavefunction(grid_, apply(psi.psi()), psi.normalized());
}

ProbeWavefunction frft(const ProbeWavefunction& psi, double alpha) {
  return FrFTPlan(psi.grid(), alpha).apply(psi);
}

OpticalRealization optical_params(double alpha, double F) {
  if (!(F > 0.0) || !std::isfinite(F)) {
    throw ValidationError("optical_params: focal length F must be > 0");
  }
  constexpr double kTol = 1e-9;
  const double r2 = std::numbers::sqrt2;
  OpticalRealization r{alpha, F, 0.0, 0.0, 1.0, 0.0};
  if (std::abs(alpha - kPi / 2) < kTol) {
    r.D = F;
    r.scale = F;
    r.input_scale = 1.0;
    r.symmetric_scale = std::sqrt(F);
  } else if (std::abs(alpha - kPi / 4) < kTol) {
    r.D = (1.0 - 1.0 / r2) * F;
    r.scale = std::sqrt((r2 - 1.0) * F);
    r.input_scale = r.scale;
    r.symmetric_scale = r.scale;
  } else if (std::abs(alpha - 3 * kPi / 4) < kTol) {
    r.D = (1.0 + 1.0 / r2) * F;
    r.scale = std::sqrt((r2 + 1.0) * F);
    r.input_scale = r.scale;
    r.symmetric_scale = r.scale;
  } else {
    std::ostringstream msg;
    msg << "optical_params: unsupported alpha " << alpha
        << " (supported: pi/4, pi/2, 3pi/4)";
    throw ValidationError(msg.str());
  }
  return r;
}

PropagationResult lens_freespace_propagate(const ProbeWavefunction& psi,
                                           double F, double D) {
  if (!(D > 0.0)) throw ValidationError("lens_freespace_propagate: D <= 0");
  if (F == 0.0 || !std::isfinite(F)) {
    throw ValidationError("lens_freespace_propagate: F must be nonzero");
  }
  const Grid& g = psi.grid();
  const int n = g.n();
  CVector lens(n);
  for (int k = 0; k < n; ++k) {
    const double x = g.x(k);
    lens(k) = std::polar(1.0, -x * x / (2.0 * F));
  }
  const Eigen::VectorXd kk = g.wavenumbers();
  CVector spec = fft_forward(psi.psi().cwiseProduct(lens));
  for (int m = 0; m < n; ++m) spec(m) *= std::polar(1.0, -0.5 * D * kk(m) * kk(m));
  CVector out = fft_inverse(spec).cwiseProduct(lens);

  const int edge = n / 32;
  const double total = out.squaredNorm();
  const double outer =
      out.head(edge).squaredNorm() + out.tail(edge).squaredNorm();
  return {ProbeWavefunction(g, std::move(out), psi.normalized()),
          total > 0 && outer / total > 1e-6};
}

Eigen::VectorXd optical_reference_intensity(const ProbeWavefunction& psi,
                                            const OpticalRealization& r) {
  const double s = r.symmetric_scale;
  // Sample k of psi is psi_s(X_k / s) on the grid of half-width x_max / s.
  const Grid scaled(psi.grid().n(), psi.grid().x_max() / s);
  return FrFTPlan(scaled, r.alpha).apply(psi.psi()).cwiseAbs2();
}

}  // namespace weakprobe
