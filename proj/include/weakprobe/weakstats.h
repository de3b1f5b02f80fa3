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

#ifndef WEAKPROBE_WEAKSTATS_H_
#define WEAKPROBE_WEAKSTATS_H_

#include <optional>
#include <vector>

#include "weakprobe/hilbert.h"

namespace weakprobe {

/// |tr(rho_f rho_i)| at or below this is treated as orthogonal.
inline constexpr double kOverlapFloor = 1e-12;

/// Pre- and post-selection pair. For pure selections the state vectors are
/// kept so that weak quantities use <f|.|i>/<f|i> directly.
class Selection {
 public:
  static Selection pure(const TargetState& pre, const TargetState& post);
  static Selection mixed(DensityOp pre, DensityOp post);

  Eigen::Index dim() const { return pre_.dim(); }
  bool is_pure() const { return pre_state_.has_value(); }
  const DensityOp& pre() const { return pre_; }
  const DensityOp& post() const { return post_; }
  /// Present only for pure selections.
  const std::optional<TargetState>& pre_state() const { return pre_state_; }
  const std::optional<TargetState>& post_state() const { return post_state_; }

  /// tr(rho_f rho_i); |<f|i>|^2 for pure selections.
  Complex overlap() const { return overlap_; }
  /// <f|i> for pure selections, sqrt(overlap) otherwise.
  Complex amplitude() const { return amplitude_; }
  bool near_orthogonal() const { return std::abs(overlap_) <= kOverlapFloor; }
  /// Throws NearOrthogonalSelection carrying |overlap|.
  void require_usable() const;

  /// tr(rho_f M rho_i) / tr(rho_f rho_i).
  Complex conditional(const CMatrix& m) const;

 private:
  Selection(DensityOp pre, DensityOp post, std::optional<TargetState> ipure,
            std::optional<TargetState> fpure);

  DensityOp pre_;
  DensityOp post_;
  std::optional<TargetState> pre_state_;
  std::optional<TargetState> post_state_;
  Complex overlap_;
  Complex amplitude_;
};

/// <A^n>_w; n = 0 returns exactly 1.
Complex weak_moment(const Selection& sel, const HermitianObservable& a, int n);
inline Complex weak_value(const Selection& sel, const HermitianObservable& a) {
  return weak_moment(sel, a, 1);
}
/// <A^2>_w - <A>_w^2
Complex weak_variance(const Selection& sel, const HermitianObservable& a);
/// tr(rho_f A rho_i A) / tr(rho_f rho_i)
Complex a_tilde(const Selection& sel, const HermitianObservable& a);

/// p_wj = <Pi_j>_w. The projectors must sum to the identity within 1e-10.
CVector weak_prob_distribution(const Selection& sel,
                               const std::vector<CMatrix>& projectors);
/// Same, over the spectral projectors of `a`.
CVector weak_prob_distribution(const Selection& sel,
                               const HermitianObservable& a);

/// D(a_j, a'_k | i) = <a_j|a'_k><a'_k|i><i|a_j>, bases given as columns.
CMatrix kd_distribution(const TargetState& state, const CMatrix& basis_a,
                        const CMatrix& basis_b);
/// Row-conditional D(a'_k | i, a_j) = D(a_j, a'_k | i) / |<a_j|i>|^2.
CVector kd_conditional_row(const TargetState& state, const CMatrix& basis_a,
                           const CMatrix& basis_b, Eigen::Index j);

/// Both sides of the laws of total expectation and total variance for a
/// complete orthonormal post-selection basis.
struct TotalLawsReport {
  std::vector<double> weights;  // |<f_j|i>|^2
  std::vector<bool> defined;    // weight >= 1e-24
  std::vector<Complex> weak_values;
  std::vector<Complex> weak_variances;
  double expectation = 0;       // <A>
  Complex expectation_sum;      // sum_j w_j <A>_wj
  double variance = 0;          // sigma^2(A)
  Complex within_sum;           // sum_j w_j sigma^2_wj
  Complex between_sum;          // sum_j w_j (<A>_wj - <A>)^2
  Complex variance_sum() const { return within_sum + between_sum; }
  double expectation_error() const {
    return std::abs(expectation_sum - expectation);
  }
  double variance_error() const { return std::abs(variance_sum() - variance); }
};
TotalLawsReport total_laws(const TargetState& pre, const HermitianObservable& a,
                           const CMatrix& post_basis);

struct WeakStats {
  Complex weak_value;
  Complex weak_variance;
  CVector weak_moments;  // <A^1>_w ... <A^N>_w
  Complex a_tilde;
  CVector weak_probs;    // over the spectral projectors of A
  Eigen::VectorXd eigenvalues;
};

/// num_moments <= 0 selects max(4, d).
WeakStats compute_weak_stats(const Selection& sel, const HermitianObservable& a,
                             int num_moments = 0);

}  // namespace weakprobe

#endif  // WEAKPROBE_WEAKSTATS_H_
