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

#include "weakprobe/shaping.h"

#include <cmath>
#include <sstream>

#include "weakprobe/vnsim.h"

namespace weakprobe {
namespace {

std::vector<Eigen::Index> window_indices(const Grid& g, double window) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index k = 0; k < g.n(); ++k)
    if (std::abs(g.x(k)) <= window) idx.push_back(k);
  return idx;
}

double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

int ShapingProblem::resolved_order() const {
  return order > 0 ? order : static_cast<int>(A.spectrum().size());
}

Eigen::VectorXd ShapingProblem::eigenvalues() const {
  Eigen::VectorXd e(static_cast<Eigen::Index>(A.spectrum().size()));
  for (size_t j = 0; j < A.spectrum().size(); ++j)
    e(static_cast<Eigen::Index>(j)) = A.spectrum()[j].eigenvalue;
  return e;
}

void ShapingProblem::validate() const {
  if (!(target_k.grid() == base_k.grid())) {
    throw ValidationError("shaping: target and base probe grids differ");
  }
  if (!(theta != 0) || !std::isfinite(theta)) {
    throw ValidationError("shaping: theta must be finite and nonzero");
  }
  if (!(window > 0) || window > base_k.grid().x_max()) {
    throw ValidationError("shaping: window must lie inside the grid");
  }
  const Eigen::VectorXd e = eigenvalues();
  if (static_cast<Eigen::Index>(A.spectrum().size()) != A.dim()) {
    throw ValidationError("shaping: A must have distinct eigenvalues");
  }
  for (Eigen::Index j = 1; j < e.size(); ++j) {
    if (e(j) - e(j - 1) < 1e-8) {
      throw ValidationError("shaping: near-degenerate eigenvalues (gap < 1e-8)");
    }
  }
  for (Eigen::Index k : window_indices(base_k.grid(), window)) {
    if (std::abs(base_k.psi()(k)) <= 1e-6) {
      std::ostringstream msg;
      msg << "shaping: |phi(K)| <= 1e-6 at K = " << base_k.grid().x(k)
          << "; shrink the window";
      throw ValidationError(msg.str());
    }
  }
}

ProbeWavefunction gaussian_base_k(const Grid& grid) {
  return gaussian_probe(grid);
}

ProbeWavefunction shifted_target_k(const Grid& grid, double theta, double a) {
  const ProbeWavefunction phi = gaussian_probe(grid);
  CVector psi = phi.psi();
  for (Eigen::Index k = 0; k < grid.n(); ++k)
    psi(k) *= std::polar(1.0, -theta * a * grid.x(k));
  return ProbeWavefunction(grid, std::move(psi), true);
}

CVector match_moments(const ShapingProblem& problem) {
  problem.validate();
  const int d = problem.resolved_order();
  const Grid& g = problem.base_k.grid();
  const auto idx = window_indices(g, problem.window);
  const auto rows = static_cast<Eigen::Index>(idx.size());
  if (rows < d + 1) throw ValidationError("shaping: window holds too few points");

  // Weighted least squares: minimize sum |phi|^2 |psi*/phi - sum c_n K^n|^2,
  // i.e. rows scaled by |phi|. Columns are scaled by window^n so the
  // conditioning reflects the problem rather than the units of K.
  CMatrix design(rows, d + 1);
  CVector rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index k = idx[static_cast<size_t>(r)];
    const Complex phi = problem.base_k.psi()(k);
    const double w = std::abs(phi);
    const double u = g.x(k) / problem.window;
    double p = 1.0;
    for (int n = 0; n <= d; ++n, p *= u) design(r, n) = w * p;
    rhs(r) = w * problem.target_k.psi()(k) / phi;
  }
  Eigen::JacobiSVD<CMatrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond <= 1e12)) {
    std::ostringstream msg;
    msg << "shaping: moment fit condition number " << cond
        << " > 1e12; use a smaller window or lower order";
    throw DomainError(msg.str());
  }
  CVector c = svd.solve(rhs);
  for (int n = 0; n <= d; ++n) c(n) /= std::pow(problem.window, n);
  if (std::abs(c(0)) < 1e-300) {
    throw DomainError("shaping: fitted constant term vanishes");
  }
  c /= c(0);
  CVector m(d);
  for (int n = 1; n <= d; ++n) {
    m(n - 1) = factorial(n) * c(n) / std::pow(Complex(0.0, -problem.theta), n);
  }
  return m;
}

ProbSolution moments_to_probs(const CVector& moments,
                              const Eigen::VectorXd& eigenvalues) {
  const Eigen::Index d = eigenvalues.size();
  if (d < 1) throw ValidationError("moments_to_probs: no eigenvalues");
  if (moments.size() < d - 1) {
    std::ostringstream msg;
    msg << "moments_to_probs: need at least " << d - 1 << " moments, got "
        << moments.size();
    throw ValidationError(msg.str());
  }
  Eigen::VectorXd sorted = eigenvalues;
  std::sort(sorted.begin(), sorted.end());
  for (Eigen::Index j = 1; j < d; ++j) {
    if (sorted(j) - sorted(j - 1) < 1e-8) {
      throw ValidationError(
          "moments_to_probs: near-degenerate eigenvalues (gap < 1e-8)");
    }
  }
  CMatrix v(d, d);
  CVector rhs(d);
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index j = 0; j < d; ++j)
      v(n, j) = std::pow(eigenvalues(j), static_cast<double>(n));
    rhs(n) = n == 0 ? Complex(1.0) : moments(n - 1);
  }
  ProbSolution out;
  out.probs = v.fullPivLu().solve(rhs);
  out.consistency_residual = 0.0;
  if (moments.size() >= d) {
    const CVector back =
        probs_to_moments(out.probs, eigenvalues, static_cast<int>(moments.size()));
    for (Eigen::Index n = d - 1; n < moments.size(); ++n) {
      out.consistency_residual =
          std::max(out.consistency_residual, std::abs(back(n) - moments(n)));
    }
  }
  return out;
}

CVector probs_to_moments(const CVector& probs,
                         const Eigen::VectorXd& eigenvalues, int count) {
  if (probs.size() != eigenvalues.size()) {
    throw ValidationError("probs_to_moments: size mismatch");
  }
  CVector m = CVector::Zero(count);
  for (int n = 1; n <= count; ++n)
    for (Eigen::Index j = 0; j < probs.size(); ++j)
      m(n - 1) += std::pow(eigenvalues(j), static_cast<double>(n)) * probs(j);
  return m;
}

Realization realize_selection(const CVector& probs,
                              const std::vector<CMatrix>& projectors,
                              const TargetState& post) {
  if (static_cast<Eigen::Index>(projectors.size()) != probs.size()) {
    throw ValidationError("realize_selection: one probability per projector");
  }
  Realization r;
  const CVector& f = post.amplitudes();
  CVector pre = CVector::Zero(f.size());
  for (size_t j = 0; j < projectors.size(); ++j) {
    const Complex pj = probs(static_cast<Eigen::Index>(j));
    const CVector pf = projectors[j] * f;
    const double overlap = pf.norm();  // |<f|a_j>| with a_j = pf / |pf|
    if (overlap < 1e-12) {
      if (std::abs(pj) > 1e-12) {
        std::ostringstream msg;
        msg << "post-selection has no overlap with eigenspace " << j
            << " but p_w" << j << " = " << pj;
        r.reason = msg.str();
        return r;
      }
      continue;
    }
    // (p_j / <f|a_j>) |a_j> = p_j Pi_j f / ||Pi_j f||^2
    pre += pj * pf / (overlap * overlap);
  }
  if (pre.norm() < 1e-300) {
    r.reason = "all weak probabilities vanish";
    return r;
  }
  r.feasible = true;
  r.pre = TargetState(pre);
  r.post = post;
  r.success_prob = std::norm(f.dot(r.pre->amplitudes()));
  return r;
}

ShapingSolution solve_shaping(const ShapingProblem& problem,
                              const TargetState& post) {
  ShapingSolution s;
  s.weak_moments = match_moments(problem);
  const ProbSolution ps = moments_to_probs(s.weak_moments, problem.eigenvalues());
  s.weak_probs = ps.probs;
  s.consistency_residual = ps.consistency_residual;
  std::vector<CMatrix> proj;
  for (const SpectralTerm& t : problem.A.spectrum()) proj.push_back(t.projector);
  s.realization = realize_selection(s.weak_probs, proj, post);
  return s;
}

double windowed_distance(const ProbeWavefunction& a, const ProbeWavefunction& b,
                         double window) {
  const Grid& g = a.grid();
  if (!(g == b.grid())) throw ValidationError("distance: grids differ");
  const auto idx = window_indices(g, window);
  CVector u(static_cast<Eigen::Index>(idx.size())), v(u.size());
  for (size_t r = 0; r < idx.size(); ++r) {
    u(static_cast<Eigen::Index>(r)) = a.psi()(idx[r]);
    v(static_cast<Eigen::Index>(r)) = b.psi()(idx[r]);
  }
  const double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw DomainError("distance: zero on window");
  u /= nu;
  v /= nv;
  const Complex ov = u.dot(v);
  const Complex ph = std::abs(ov) > 0 ? ov / std::abs(ov) : Complex(1.0);
  return (u * ph - v).norm();  // unit-norm vectors: independent of dx
}

ShapeVerification verify_shape(const ShapingSolution& solution,
                               const ShapingProblem& problem) {
  if (!solution.realization.feasible) {
    throw ValidationError("verify_shape: infeasible realization: " +
                          solution.realization.reason);
  }
  const Grid& g = problem.base_k.grid();
  const ProbeWavefunction base_x = to_x_representation(problem.base_k);
  const JointState joint =
      evolve(*solution.realization.pre, base_x, CouplingConfig{problem.theta, problem.A});
  const PostSelectedProbe ps = post_select(joint, *solution.realization.post);
  ProbeWavefunction achieved = to_k_representation(ps.psi_tilde());

  // First neglected term of the weak-moment series, relative to the target.
  const int d = problem.resolved_order();
  const CVector higher =
      probs_to_moments(solution.weak_probs, problem.eigenvalues(), d + 1);
  const auto idx = window_indices(g, problem.window);
  double term = 0, tgt = 0;
  for (Eigen::Index k : idx) {
    const double kk = g.x(k);
    term += std::norm(std::pow(problem.theta * kk, d + 1) / factorial(d + 1) *
                      higher(d) * problem.base_k.psi()(k));
    tgt += std::norm(problem.target_k.psi()(k));
  }
  ShapeVerification v{windowed_distance(achieved, problem.target_k, problem.window),
                      std::sqrt(term / tgt), ps.success_prob(),
                      std::move(achieved)};
  return v;
}

double series_error(const ShapingProblem& problem, const CVector& moments) {
  std::vector<Complex> m{Complex(1.0)};
  for (Eigen::Index n = 0; n < moments.size(); ++n) m.push_back(moments(n));
  const ProbeWavefunction series(problem.base_k.grid(),
                                 moment_series_k(problem.base_k, m, problem.theta));
  return windowed_distance(series, problem.target_k, problem.window);
}

}  // namespace weakprobe
