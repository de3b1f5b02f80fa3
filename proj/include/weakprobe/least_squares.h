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

#ifndef WEAKPROBE_LEAST_SQUARES_H_
#define WEAKPROBE_LEAST_SQUARES_H_

#include <functional>

#include <Eigen/Dense>

namespace weakprobe {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LsqOptions {
  int max_iters = 500;
  double jacobian_step = 1e-7;  // relative forward-difference step
  double rel_cost_tol = 1e-12;
  double step_tol = 1e-10;      // on the scaled parameter step
  int patience = 3;             // successive stalled iterations to stop
  /// Characteristic magnitude per parameter; empty means max(|x0_i|, 1).
  Eigen::VectorXd scale;
};

struct LsqResult {
  Eigen::VectorXd x;
  double cost = 0;  // sum of squared residuals
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) with forward-difference
/// Jacobian and projection onto [lower, upper].
LsqResult levenberg_marquardt(const ResidualFn& fn, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& lower,
                              const Eigen::VectorXd& upper,
                              const LsqOptions& opt = {});

/// Derivative-free simplex search on the same objective, same bounds.
LsqResult nelder_mead(const ResidualFn& fn, const Eigen::VectorXd& x0,
                      const Eigen::VectorXd& lower,
                      const Eigen::VectorXd& upper,
                      const LsqOptions& opt = {});

}  // namespace weakprobe

#endif  // WEAKPROBE_LEAST_SQUARES_H_
