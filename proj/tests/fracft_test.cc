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

#include <random>

#include <gtest/gtest.h>

#include "test_util.h"
#include "weakprobe/probe.h"

namespace weakprobe {
namespace {

using testing::kPi;

double l2_distance(const ProbeWavefunction& a, const ProbeWavefunction& b) {
  return std::sqrt((a.psi() - b.psi()).squaredNorm() * a.grid().dx());
}

TEST(FracFT, Unitary) {
  const Grid g;
  std::mt19937_64 rng(1);
  for (double alpha : {0.1, 0.3, kPi / 4, 1.0, kPi / 2, 2.0, 3 * kPi / 4, 2.9,
                       -0.7, -2.5, 4.0}) {
    const ProbeWavefunction psi = testing::random_smooth_state(g, rng);
    EXPECT_NEAR(frft(psi, alpha).norm_squared(), 1.0, 1e-10) << alpha;
  }
}

TEST(FracFT, QuarterTurnsCompose) {
  const Grid g;
  std::mt19937_64 rng(2);
  const FrFTPlan quarter(g, kPi / 4), half(g, kPi / 2);
  for (int t = 0; t < 20; ++t) {
    const ProbeWavefunction psi = testing::random_smooth_state(g, rng);
    EXPECT_LT(l2_distance(quarter.apply(quarter.apply(psi)), half.apply(psi)), 1e-8);
  }
}

TEST(FracFT, GeneralAdditivity) {
  const Grid g;
  std::mt19937_64 rng(3);
  const ProbeWavefunction psi = testing::random_smooth_state(g, rng);
  for (auto [a, b] : {std::pair{0.3, 0.5}, {1.1, 0.9}, {-0.4, 2.2}, {2.0, 2.0}}) {
    const auto two = frft(frft(psi, a), b);
    const auto one = frft(psi, a + b);
    // Principal-branch prefactors may differ by a global sign across 2pi.
    EXPECT_LT(distance_mod_phase(two, one), 1e-8) << a << "+" << b;
  }
}

TEST(FracFT, GaussianInvariant) {
  const Grid g;
  const ProbeWavefunction phi = gaussian_probe(g);
  for (double alpha : {0.2, kPi / 4, kPi / 2, 2.5, -1.0}) {
    EXPECT_LT(distance_mod_phase(frft(phi, alpha), phi), 1e-8) << alpha;
  }
}

TEST(FracFT, HalfTurnMatchesDirectFourierSum) {
  const Grid g(1024, 12.0);
  std::mt19937_64 rng(4);
  const ProbeWavefunction psi = testing::random_smooth_state(g, rng);
  const ProbeWavefunction out = frft(psi, kPi / 2);
  double err = 0;
  for (int k = 0; k < g.n(); k += 7) {
    err = std::max(err, std::abs(out.psi()(k) - testing::direct_fourier(psi, g.x(k))));
  }
  EXPECT_LT(err, 1e-9);
}

TEST(FracFT, SpecialAngles) {
  const Grid g;
  std::mt19937_64 rng(5);
  const ProbeWavefunction psi = testing::random_smooth_state(g, rng);
  EXPECT_LT(l2_distance(frft(psi, 0.0), psi), 1e-15);
  EXPECT_LT(l2_distance(frft(psi, 2 * kPi), psi), 1e-15);
  const ProbeWavefunction par = frft(psi, kPi);
  for (int k = 1; k < g.n(); k += 101) {
    EXPECT_EQ(par.psi()(k), psi.psi()(g.n() - k));
  }
  EXPECT_LT(l2_distance(frft(frft(psi, kPi / 2), -kPi / 2), psi), 1e-10);
}

TEST(FracFT, QuadratureMeanRotates) {
  // A displaced coherent state rotates rigidly in phase space.
  const Grid g;
  CVector v(g.n());
  const double x0 = 0.8, k0 = -0.5;
  for (int i = 0; i < g.n(); ++i) {
    const double u = g.x(i) - x0;
    v(i) = std::polar(std::pow(kPi, -0.25) * std::exp(-0.5 * u * u), k0 * g.x(i));
  }
  const ProbeWavefunction psi(g, v, true);
  for (double alpha : {0.4, 1.3, 2.6}) {
    const QuadratureMoments m = quadrature_moments(psi, alpha);
    EXPECT_NEAR(m.mean, x0 * std::cos(alpha) + k0 * std::sin(alpha), 1e-9);
    EXPECT_NEAR(m.variance, 0.5, 1e-9);
  }
}

class OpticalTest : public ::testing::TestWithParam<double> {};

TEST_P(OpticalTest, PipelineMatchesTransformIntensity) {
  const double alpha = GetParam();
  const Grid g;
  std::mt19937_64 rng(6);
  const ProbeWavefunction psi = testing::random_smooth_state(g, rng);
  for (double F : {1.0, 2.0}) {
    const OpticalRealization r = optical_params(alpha, F);
    const PropagationResult out = lens_freespace_propagate(psi, r.F, r.D);
    EXPECT_FALSE(out.aliasing_warning);
    const Eigen::VectorXd ref = optical_reference_intensity(psi, r);
    EXPECT_LT(l1_density_distance(g, out.psi.intensity(), ref), 1e-6)
        << "alpha=" << alpha << " F=" << F;
  }
}

INSTANTIATE_TEST_SUITE_P(Realizations, OpticalTest,
                         ::testing::Values(kPi / 4, kPi / 2, 3 * kPi / 4));

TEST(Optical, Parameters) {
  const double r2 = std::sqrt(2.0);
  EXPECT_NEAR(optical_params(kPi / 2, 3.0).D, 3.0, 1e-15);
  EXPECT_NEAR(optical_params(kPi / 4, 3.0).D, (1 - 1 / r2) * 3.0, 1e-15);
  EXPECT_NEAR(optical_params(3 * kPi / 4, 3.0).D, (1 + 1 / r2) * 3.0, 1e-15);
  EXPECT_NEAR(optical_params(kPi / 4, 3.0).scale, std::sqrt((r2 - 1) * 3.0), 1e-15);
  EXPECT_THROW(optical_params(1.0, 1.0), ValidationError);
  EXPECT_THROW(optical_params(kPi / 2, 0.0), ValidationError);
}

}  // namespace
}  // namespace weakprobe
