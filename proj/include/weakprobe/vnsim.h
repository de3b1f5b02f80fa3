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

#ifndef WEAKPROBE_VNSIM_H_
#define WEAKPROBE_VNSIM_H_

#include <variant>
#include <vector>

#include "weakprobe/probe.h"
#include "weakprobe/weakstats.h"

namespace weakprobe {

enum class StrengthClass { kWeak, kIntermediate, kStrong };

/// U = exp(-i theta A (x) K).
struct CouplingConfig {
  double theta;
  HermitianObservable A;

  /// theta * ||A|| below 0.1 is weak, 2 or more strong (eigenbranches
  /// separated by several probe widths).
  StrengthClass strength() const;
};

/// Pre-selection as given by the caller.
using PreState = std::variant<TargetState, DensityOp>;
using PostState = std::variant<TargetState, DensityOp>;

/// Joint target-probe state after the coupling, as a mixture over the
/// eigen-ensemble of rho_i of pure states sum_j Pi_j|v_k> (x) phi_j.
struct JointState {
  struct Member {
    double weight;                      // lambda_k
    std::vector<CVector> target_parts;  // Pi_j |v_k>, one per eigenvalue
  };
  Grid grid;
  Eigen::VectorXd eigenvalues;            // a_j
  std::vector<ProbeWavefunction> probes;  // phi(X - theta a_j)
  std::vector<Member> members;

  /// P(X) = sum_k lambda_k sum_j ||Pi_j v_k||^2 |phi_j(X)|^2 (target traced
  /// out; branches are orthogonal in the target space).
  Eigen::VectorXd position_density() const;
  /// Total squared norm; 1 for a normalized probe.
  double total_norm() const;
};

/// Rejects shifts with max|theta a_j| + 8 >= x_max.
JointState evolve(const PreState& pre, const ProbeWavefunction& probe,
                  const CouplingConfig& cfg);

/// Non-normalized post-selected probe. Mixed selections yield several
/// components; each has its ensemble weight folded in so that the probe
/// density is sum_c |psi_c|^2.
class PostSelectedProbe {
 public:
  PostSelectedProbe(std::vector<ProbeWavefunction> components,
                    double success_prob);

  const std::vector<ProbeWavefunction>& components() const {
    return components_;
  }
  bool is_pure() const { return components_.size() == 1; }
  /// The single component of a pure selection; throws otherwise.
  const ProbeWavefunction& psi_tilde() const;
  double success_prob() const { return success_prob_; }
  const Grid& grid() const { return components_.front().grid(); }

 private:
  std::vector<ProbeWavefunction> components_;
  double success_prob_;
};

/// psi~(X) = sum_j <f|Pi_j|i> phi(X - theta a_j). Throws
/// OrthogonalPostSelection when the success probability is below 1e-20.
PostSelectedProbe post_select(const JointState& joint, const PostState& post);

/// Moments of M(alpha) for the normalized post-selected probe mixture.
QuadratureMoments readout_moments(const PostSelectedProbe& probe,
                                  double alpha);

struct Prediction {
  double mean;
  double variance;
};

/// mean = theta (cos a Re<A>_w + sin a Im<A>_w);
/// var = 1/2 + theta^2/2 [cos 2a Re s2 + sin 2a Im s2]
///       + theta^2/2 (A~ - |<A>_w|^2).
Prediction perturbative_prediction(const WeakStats& stats, double theta,
                                   double alpha);

struct QuadratureReport {
  double alpha;
  double exact_mean;
  double exact_var;
  double pert_mean;
  double pert_var;
  double residual_mean;  // exact - pert
  double residual_var;
  double success_prob;
};

/// Exact-vs-perturbative comparison for each alpha; output in input order.
/// threads <= 0 uses thread_cap().
std::vector<QuadratureReport> compare(const Selection& sel,
                                      const HermitianObservable& a,
                                      double theta,
                                      const std::vector<double>& alphas,
                                      const Grid& grid = Grid(),
                                      int threads = 0);

/// Post-selected probe for a Selection with the unit Gaussian probe.
PostSelectedProbe simulate_post_selection(const Selection& sel,
                                          const HermitianObservable& a,
                                          double theta,
                                          const Grid& grid = Grid());

}  // namespace weakprobe

#endif  // WEAKPROBE_VNSIM_H_
