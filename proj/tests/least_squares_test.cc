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

#include "weakprobe/least_squares.h"

#include <cmath>

#include <gtest/gtest.h>

#include "weakprobe/error.h"

namespace weakprobe {
namespace {

Eigen::VectorXd rosenbrock(const Eigen::VectorXd& x) {
  Eigen::VectorXd r(2);
  r << 10 * (x(1) - x(0) * x(0)), 1 - x(0);
  return r;
}

const Eigen::VectorXd kInf = Eigen::VectorXd::Constant(2, 1e300);

TEST(LevenbergMarquardt, Rosenbrock) {
  const Eigen::VectorXd x0 = Eigen::Vector2d(-1.2, 1.0);
  const LsqResult r = levenberg_marquardt(rosenbrock, x0, -kInf, kInf);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x(0), 1.0, 1e-8);
  EXPECT_NEAR(r.x(1), 1.0, 1e-8);
  EXPECT_LT(r.cost, 1e-20);
}

TEST(LevenbergMarquardt, ExponentialDecayFit) {
  // y = 2.5 exp(-1.3 t) sampled exactly.
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(30, 0, 3), y(30);
  for (int k = 0; k < 30; ++k) y(k) = 2.5 * std::exp(-1.3 * t(k));
  const ResidualFn fn = [&](const Eigen::VectorXd& p) {
    return Eigen::VectorXd((p(0) * (-p(1) * t.array()).exp()).matrix() - y);
  };
  const LsqResult r = levenberg_marquardt(fn, Eigen::Vector2d(1, 0.5), -kInf, kInf);
  EXPECT_NEAR(r.x(0), 2.5, 1e-8);
  EXPECT_NEAR(r.x(1), 1.3, 1e-8);
}

TEST(LevenbergMarquardt, BoxProjection) {
  // Unconstrained minimum at x = 3; bound at 2.
  const ResidualFn fn = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(2);
    r << x(0) - 3, 0.0;
    return r;
  };
  const LsqResult r = levenberg_marquardt(fn, Eigen::VectorXd::Constant(1, 0.0),
                                          Eigen::VectorXd::Constant(1, -5),
                                          Eigen::VectorXd::Constant(1, 2));
  EXPECT_TRUE(r.converged);
  EXPECT_DOUBLE_EQ(r.x(0), 2.0);
}

TEST(LevenbergMarquardt, Validation) {
  EXPECT_THROW(levenberg_marquardt(rosenbrock, Eigen::Vector2d(0, 0), kInf, -kInf),
               ValidationError);
  LsqOptions bad;
  bad.scale = Eigen::Vector2d(1, -1);
  EXPECT_THROW(levenberg_marquardt(rosenbrock, Eigen::Vector2d(0, 0), -kInf, kInf, bad),
               ValidationError);
  const ResidualFn nan = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd::Constant(2, std::nan(""));
  };
  EXPECT_THROW(levenberg_marquardt(nan, Eigen::Vector2d(0, 0), -kInf, kInf), DomainError);
}

TEST(NelderMead, Rosenbrock) {
  LsqOptions opt;
  opt.max_iters = 5000;
  const LsqResult r = nelder_mead(rosenbrock, Eigen::Vector2d(-1.2, 1.0), -kInf, kInf, opt);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x(0), 1.0, 1e-5);
  EXPECT_NEAR(r.x(1), 1.0, 1e-5);
}

}  // namespace
}  // namespace weakprobe
