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

#ifndef WEAKPROBE_SHAPING_H_
#define WEAKPROBE_SHAPING_H_

#include <optional>
#include <string>
#include <vector>

#include "weakprobe/probe.h"
#include "weakprobe/weakstats.h"

namespace weakprobe {

inline constexpr double kDefaultShapingWindow = 4.0;

/// Target psi*(K) and base phi(K) share a grid whose variable is K.
struct ShapingProblem {
  ProbeWavefunction target_k;
  ProbeWavefunction base_k;
  HermitianObservable A;
  double theta;
  int order = 0;  // number of weak moments; <= 0 means number of eigenvalues
  double window = kDefaultShapingWindow;

  int resolved_order() const;
  Eigen::VectorXd eigenvalues() const;
  /// Grid agreement, theta != 0, distinct eigenvalues (gap >= 1e-8),
  /// |phi| > 1e-6 on [-window, window].
  void validate() const;
};

/// Unit Gaussian in K on `grid` (the default base probe).
ProbeWavefunction gaussian_base_k(const Grid& grid);
/// e^{-i theta a K} phi(K): the base probe displaced by theta * a.
ProbeWavefunction shifted_target_k(const Grid& grid, double theta, double a);

/// <A^1>_w .. <A^order>_w from a weighted polynomial fit of psi*/phi on
/// the window (weight |phi|^2), normalized so c_0 = 1. Throws DomainError
/// when the weighted design matrix has condition number above 1e12.
CVector match_moments(const ShapingProblem& problem);

struct ProbSolution {
  CVector probs;
  /// max_n |sum_j a_j^n p_j - m_n| over the moments not used by the solve
  /// (n >= d). d eigenvalues and sum p = 1 leave d - 1 free moments.
  double consistency_residual;
};

/// Solves sum_j a_j^n p_j = m_n for n = 0..d-1 (m_0 = 1), d = number of
/// eigenvalues. `moments` holds m_1.. and must have at least d - 1 entries.
ProbSolution moments_to_probs(const CVector& moments,
                              const Eigen::VectorXd& eigenvalues);
/// m_n = sum_j a_j^n p_j, n = 1..count.
CVector probs_to_moments(const CVector& probs,
                         const Eigen::VectorXd& eigenvalues, int count);

struct Realization {
  bool feasible = false;
  std::string reason;                // set when infeasible
  std::optional<TargetState> pre;
  std::optional<TargetState> post;
  double success_prob = 0;           // |<f|i>|^2
};

/// |i> ∝ sum_j p_j / <f|a_j> |a_j> with |a_j> = Pi_j|f> / ||Pi_j|f>||, so
/// that <Pi_j>_w = p_j. Infeasible when Pi_j|f> = 0 while p_j != 0.
Realization realize_selection(const CVector& probs,
                              const std::vector<CMatrix>& projectors,
                              const TargetState& post);

struct ShapingSolution {
  CVector weak_moments;
  CVector weak_probs;
  double consistency_residual = 0;
  Realization realization;
};

/// match_moments -> moments_to_probs -> realize_selection over the
/// spectral projectors of problem.A.
ShapingSolution solve_shaping(const ShapingProblem& problem,
                              const TargetState& post);

struct ShapeVerification {
  double achieved_error;     // windowed L2, both sides normalized, mod phase
  double truncation_bound;   // first neglected series term, relative
  double success_prob;       // norm^2 of the post-selected probe
  ProbeWavefunction achieved_k;
};

/// Runs evolve + post_select with the realized selection and compares
/// with the target. Throws ValidationError when infeasible.
ShapeVerification verify_shape(const ShapingSolution& solution,
                               const ShapingProblem& problem);

/// Windowed L2 distance of the normalized truncated series
/// sum_{n<=d} (-i theta K)^n / n! m_n phi(K) to the normalized target.
double series_error(const ShapingProblem& problem, const CVector& moments);

/// Windowed, normalized, phase-aligned L2 distance on [-window, window].
double windowed_distance(const ProbeWavefunction& a, const ProbeWavefunction& b,
                         double window);

}  // namespace weakprobe

#endif  // WEAKPROBE_SHAPING_H_
