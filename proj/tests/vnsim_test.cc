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

#include "weakprobe/vnsim.h"

#include <gtest/gtest.h>

#include "test_util.h"
#include "weakprobe/experiment.h"

namespace weakprobe {
namespace {

using testing::kPi;

TargetState h_state() { return TargetState::basis(2, 0); }

TEST(Evolve, ZeroCouplingLeavesProbe) {
  const Grid g;
  const ProbeWavefunction phi = gaussian_probe(g);
  const JointState j = evolve(h_state(), phi, {0.0, experiment_observable()});
  EXPECT_LT((j.position_density() - phi.intensity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Evolve, StrongCouplingBimodal) {
  const Grid g;
  const CouplingConfig cfg{3.0, experiment_observable()};
  EXPECT_EQ(cfg.strength(), StrengthClass::kStrong);
  const JointState j = evolve(h_state(), gaussian_probe(g), cfg);
  const Eigen::VectorXd p = j.position_density();
  double err = 0;
  for (int k = 0; k < g.n(); ++k) {
    const double x = g.x(k);
    const double ref = 0.5 * (std::exp(-(x - 3) * (x - 3)) + std::exp(-(x + 3) * (x + 3))) /
                       std::sqrt(kPi);
    err = std::max(err, std::abs(p(k) - ref));
  }
  EXPECT_LT(err, 1e-10);
  EXPECT_NEAR(j.total_norm(), 1.0, 1e-12);
}

TEST(Evolve, MarginRejected) {
  const Grid g(1024, 10);
  EXPECT_THROW(evolve(h_state(), gaussian_probe(g), {2.5, experiment_observable()}),
               ValidationError);
}

TEST(Evolve, PreSelectionOnlyVariance) {
  const auto sel = Selection::mixed(DensityOp(h_state()), DensityOp::maximally_mixed(2));
  const auto probe = simulate_post_selection(sel, experiment_observable(), 0.2);
  EXPECT_NEAR(readout_moments(probe, 0.0).variance, 0.54, 1e-10);
}

TEST(PostSelect, PrePostEqualNoCoupling) {
  const auto ps = simulate_post_selection(Selection::pure(h_state(), h_state()),
                                          experiment_observable(), 0.0);
  EXPECT_NEAR(ps.success_prob(), 1.0, 1e-12);
}

TEST(PostSelect, TwoGaussianOverlap) {
  const Grid g;
  const double theta = 0.05;
  const PreSelectionSpec spec{PreSelectionKind::kCaseI, 15.0};
  const TargetState i = experiment_pre_state(spec);
  const auto ps = simulate_post_selection(Selection::pure(i, h_state()),
                                          experiment_observable(), theta, g);
  // psi~ = cD phi(X - theta) + cA phi(X + theta)
  const double s = 1 / std::sqrt(2.0);
  CVector d(2), a(2);
  d << s, s;
  a << s, -s;
  const Complex cd = h_state().amplitudes().dot(d) * d.dot(i.amplitudes());
  const Complex ca = h_state().amplitudes().dot(a) * a.dot(i.amplitudes());
  const double ref = std::norm(cd) + std::norm(ca) +
                     2 * (cd * std::conj(ca)).real() * testing::gaussian_overlap(theta, -theta);
  EXPECT_NEAR(ps.success_prob(), ref, 1e-10);

  for (int k = 0; k < g.n(); k += 97) {
    const double x = g.x(k);
    const Complex expect = (cd * std::exp(-0.5 * (x - theta) * (x - theta)) +
                            ca * std::exp(-0.5 * (x + theta) * (x + theta))) *
                           std::pow(kPi, -0.25);
    EXPECT_LT(std::abs(ps.psi_tilde().psi()(k) - expect), 1e-12);
  }
}

TEST(PostSelect, NearOrthogonalLimit) {
  // theta_H -> 0 makes |i> = |V>: only the O(theta^2) tail survives.
  const PreSelectionSpec spec{PreSelectionKind::kCaseI, 0.0};
  const auto sel = Selection::pure(experiment_pre_state(spec), h_state());
  EXPECT_TRUE(sel.near_orthogonal());
  const auto ps = simulate_post_selection(sel, experiment_observable(), 0.05);
  EXPECT_LT(ps.success_prob(), 0.05 * 0.05);
  EXPECT_GT(ps.success_prob(), 0.0);
  EXPECT_THROW(simulate_post_selection(sel, experiment_observable(), 0.0),
               OrthogonalPostSelection);
}

TEST(Perturbative, FormulaForms) {
  WeakStats s;
  s.weak_value = Complex(0.3, -0.2);
  s.weak_variance = Complex(-2.0, 0.7);
  s.a_tilde = std::norm(s.weak_value);
  const double t = 0.04;
  EXPECT_NEAR(perturbative_prediction(s, t, 0).variance, 0.5 + 0.5 * t * t * -2.0, 1e-15);
  EXPECT_NEAR(perturbative_prediction(s, t, kPi / 4).variance, 0.5 + 0.5 * t * t * 0.7, 1e-15);
  EXPECT_NEAR(perturbative_prediction(s, t, kPi / 2).mean, t * -0.2, 1e-15);

  const auto pre_only = Selection::mixed(DensityOp(h_state()), DensityOp::maximally_mixed(2));
  const WeakStats m = compute_weak_stats(pre_only, experiment_observable());
  EXPECT_NEAR(perturbative_prediction(m, t, 0).variance, 0.5 + t * t * 1.0, 1e-15);
}

double residual_ratio(PreSelectionKind kind, double deg, double alpha, bool variance) {
  const auto sel = Selection::pure(experiment_pre_state({kind, deg}), h_state());
  const auto r1 = compare(sel, experiment_observable(), 0.02, {alpha})[0];
  const auto r2 = compare(sel, experiment_observable(), 0.01, {alpha})[0];
  return variance ? r1.residual_var / r2.residual_var : r1.residual_mean / r2.residual_mean;
}

TEST(Compare, MeanResidualIsThirdOrder) {
  const double r = residual_ratio(PreSelectionKind::kCaseI, 20.0, 0.0, false);
  EXPECT_GE(r, 6.0);
  EXPECT_LE(r, 10.0);
}

TEST(Compare, VarianceResidualIsFourthOrder) {
  // sigma^2_f(M) is even in theta for these selections, so the first
  // neglected term is theta^4 and halving theta divides it by ~16.
  const double r = residual_ratio(PreSelectionKind::kCaseI, 20.0, 0.0, true);
  EXPECT_NEAR(r, 16.0, 0.2);
}

TEST(Compare, NarrowingSignatures) {
  const auto a = experiment_observable();
  const auto i15 = Selection::pure(experiment_pre_state({PreSelectionKind::kCaseI, 15}), h_state());
  EXPECT_LT(compare(i15, a, 0.03, {0.0})[0].exact_var, 0.5);
  const auto q30 = Selection::pure(experiment_pre_state({PreSelectionKind::kCaseII, 30}), h_state());
  EXPECT_LT(compare(q30, a, 0.03, {3 * kPi / 4})[0].exact_var, 0.5);
}

TEST(Compare, KennardRobertsonProductScaling) {
  const auto a = experiment_observable();
  const auto sel = Selection::pure(experiment_pre_state({PreSelectionKind::kCaseI, 20}), h_state());
  auto excess = [&](double t) {
    const auto r = compare(sel, a, t, {0.0, kPi / 2});
    return r[0].exact_var * r[1].exact_var - 0.25;
  };
  const double e1 = excess(0.02), e2 = excess(0.01);
  EXPECT_GT(e1, 0);
  // Real weak value and variance: the post-selected probe is a real sum of
  // displaced Gaussians and the product excess is O(theta^6), not O(theta^3).
  EXPECT_NEAR(e1 / e2, 64.0, 1.0);
  EXPECT_LT(e1, 0.02 * 0.02 * 0.02 * 1e-3);
}

TEST(Compare, OrderAndThreadsDeterministic) {
  const auto a = experiment_observable();
  const auto sel = Selection::pure(experiment_pre_state({PreSelectionKind::kCaseII, 25}), h_state());
  const std::vector<double> alphas{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  const auto one = compare(sel, a, 0.03, alphas, Grid(), 1);
  const auto many = compare(sel, a, 0.03, alphas, Grid(), 4);
  for (size_t k = 0; k < alphas.size(); ++k) {
    EXPECT_EQ(one[k].alpha, alphas[k]);
    EXPECT_EQ(one[k].exact_var, many[k].exact_var);
    EXPECT_EQ(one[k].exact_mean, many[k].exact_mean);
  }
}

TEST(Mixed, ExactPreSelectionOnlyAtLargeTheta) {
  std::mt19937_64 rng(31);
  const TargetState i = random_state(3, rng);
  const HermitianObservable a(random_hermitian(3, rng));
  const auto sel = Selection::mixed(DensityOp(i), DensityOp::maximally_mixed(3));
  const double mean = i.amplitudes().dot(a.matrix() * i.amplitudes()).real();
  const double var = i.amplitudes().dot(a.power(2) * i.amplitudes()).real() - mean * mean;
  const double theta = 0.5;
  const auto ps = simulate_post_selection(sel, a, theta);
  EXPECT_NEAR(readout_moments(ps, 0.0).variance, 0.5 + theta * theta * var, 1e-10);
}

TEST(Mixed, BranchNormsSumToOne) {
  std::mt19937_64 rng(32);
  CMatrix b = random_hermitian(3, rng);
  CMatrix rho = b * b;
  rho /= rho.trace().real();
  const JointState j = evolve(DensityOp(rho), gaussian_probe(Grid()),
                              {0.7, HermitianObservable(random_hermitian(3, rng))});
  EXPECT_NEAR(j.total_norm(), 1.0, 1e-12);
}

}  // namespace
}  // namespace weakprobe
