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

#include <cmath>
#include <sstream>

#include "weakprobe/parallel.h"

namespace weakprobe {

StrengthClass CouplingConfig::strength() const {
  const double s = std::abs(theta) * A.norm();
  if (s < 0.1) return StrengthClass::kWeak;
  if (s >= 2.0) return StrengthClass::kStrong;
  return StrengthClass::kIntermediate;
}

Eigen::VectorXd JointState::position_density() const {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(grid.n());
  for (const Member& m : members) {
    for (size_t j = 0; j < probes.size(); ++j) {
      p += m.weight * m.target_parts[j].squaredNorm() * probes[j].intensity();
    }
  }
  return p;
}

double JointState::total_norm() const {
  return position_density().sum() * grid.dx();
}

namespace {

std::vector<std::pair<double, CVector>> ensemble_of(const PreState& s) {
  if (const auto* t = std::get_if<TargetState>(&s)) {
    return {{1.0, t->amplitudes()}};
  }
  return std::get<DensityOp>(s).ensemble();
}

Eigen::Index dim_of(const PreState& s) {
  return std::visit([](const auto& v) { return v.dim(); }, s);
}

}  // namespace

JointState evolve(const PreState& pre, const ProbeWavefunction& probe,
                  const CouplingConfig& cfg) {
  if (!std::isfinite(cfg.theta)) throw ValidationError("theta must be finite");
  if (dim_of(pre) != cfg.A.dim()) {
    throw ValidationError("evolve: pre-state and observable dimensions differ");
  }
  const Grid& g = probe.grid();
  const double shift_max = std::abs(cfg.theta) * cfg.A.norm();
  if (!(shift_max + 8.0 < g.x_max())) {
    std::ostringstream msg;
    msg << "evolve: shift " << shift_max << " + 8 exceeds grid half-width "
        << g.x_max() << "; increase x_max";
    throw ValidationError(msg.str());
  }
  JointState joint{g, {}, {}, {}};
  const auto& spec = cfg.A.spectrum();
  joint.eigenvalues.resize(static_cast<Eigen::Index>(spec.size()));
  for (size_t j = 0; j < spec.size(); ++j) {
    joint.eigenvalues(static_cast<Eigen::Index>(j)) = spec[j].eigenvalue;
    const double s = cfg.theta * spec[j].eigenvalue;
    joint.probes.push_back(s == 0.0 ? probe : spectral_shift(probe, s));
  }
  for (const auto& [w, v] : ensemble_of(pre)) {
    JointState::Member m{w, {}};
    for (const SpectralTerm& t : spec) m.target_parts.push_back(t.projector * v);
    joint.members.push_back(std::move(m));
  }
  return joint;
}

PostSelectedProbe::PostSelectedProbe(std::vector<ProbeWavefunction> components,
                                     double success_prob)
    : components_(std::move(components)), success_prob_(success_prob) {
  if (components_.empty()) {
    throw ValidationError("post-selected probe needs at least one component");
  }
}

const ProbeWavefunction& PostSelectedProbe::psi_tilde() const {
  if (!is_pure()) {
    throw ValidationError("psi_tilde: mixed selection has several components");
  }
  return components_.front();
}

PostSelectedProbe post_select(const JointState& joint, const PostState& post) {
  if (!joint.members.empty() &&
      dim_of(post) != joint.members.front().target_parts.front().size()) {
    throw ValidationError("post_select: dimension mismatch");
  }
  const auto post_ens = ensemble_of(post);
  const int n = joint.grid.n();
  std::vector<ProbeWavefunction> comps;
  double success = 0.0;
  for (const auto& m : joint.members) {
    for (const auto& [mu, f] : post_ens) {
      CVector psi = CVector::Zero(n);
      for (size_t j = 0; j < joint.probes.size(); ++j) {
        const Complex c = f.dot(m.target_parts[j]);  // <f|Pi_j|v_k>
        if (c != Complex(0.0)) psi += c * joint.probes[j].psi();
      }
      psi *= std::sqrt(m.weight * mu);
      ProbeWavefunction wf(joint.grid, std::move(psi));
      success += wf.norm_squared();
      comps.push_back(std::move(wf));
    }
  }
  if (!(success >= 1e-20)) {
    std::ostringstream msg;
    msg << "orthogonal post-selection: success probability " << success
        << " < 1e-20";
    throw OrthogonalPostSelection(msg.str(), success);
  }
  return PostSelectedProbe(std::move(comps), success);
}

QuadratureMoments readout_moments(const PostSelectedProbe& probe,
                                  double alpha) {
  const FrFTPlan plan(probe.grid(), alpha);
  QuadratureSums s;
  for (const ProbeWavefunction& c : probe.components()) {
    s += quadrature_sums(plan, c);
  }
  return s.moments(alpha);
}

Prediction perturbative_prediction(const WeakStats& stats, double theta,
                                   double alpha) {
  const Complex wv = stats.weak_value;
  const Complex s2 = stats.weak_variance;
  const double t2 = theta * theta;
  Prediction p;
  p.mean = theta * (std::cos(alpha) * wv.real() + std::sin(alpha) * wv.imag());
  p.variance = 0.5 +
               0.5 * t2 *
                   (std::cos(2 * alpha) * s2.real() +
                    std::sin(2 * alpha) * s2.imag()) +
               0.5 * t2 * (stats.a_tilde.real() - std::norm(wv));
  return p;
}

PostSelectedProbe simulate_post_selection(const Selection& sel,
                                          const HermitianObservable& a,
                                          double theta, const Grid& grid) {
  const CouplingConfig cfg{theta, a};
  const ProbeWavefunction phi = gaussian_probe(grid);
  if (sel.is_pure()) {
    return post_select(evolve(*sel.pre_state(), phi, cfg), *sel.post_state());
  }
  return post_select(evolve(sel.pre(), phi, cfg), sel.post());
}

std::vector<QuadratureReport> compare(const Selection& sel,
                                      const HermitianObservable& a,
                                      double theta,
                                      const std::vector<double>& alphas,
                                      const Grid& grid, int threads) {
  const WeakStats stats = compute_weak_stats(sel, a);
  const PostSelectedProbe probe = simulate_post_selection(sel, a, theta, grid);
  std::vector<QuadratureReport> out(alphas.size());
  parallel_for(alphas.size(), threads > 0 ? threads : thread_cap(),
               [&](std::size_t i) {
                 const double al = alphas[i];
                 const QuadratureMoments ex = readout_moments(probe, al);
                 const Prediction pr = perturbative_prediction(stats, theta, al);
                 out[i] = {al,          ex.mean,
                           ex.variance, pr.mean,
                           pr.variance, ex.mean - pr.mean,
                           ex.variance - pr.variance, probe.success_prob()};
               });
  return out;
}

}  // namespace weakprobe
