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

#include "weakprobe/weakstats.h"

#include <sstream>

namespace weakprobe {

Selection::Selection(DensityOp pre, DensityOp post,
                     std::optional<TargetState> ipure,
                     std::optional<TargetState> fpure)
    : pre_(std::move(pre)),
      post_(std::move(post)),
      pre_state_(std::move(ipure)),
      post_state_(std::move(fpure)) {
  if (pre_.dim() != post_.dim()) {
    std::ostringstream msg;
    msg << "selection: pre dimension " << pre_.dim()
        << " != post dimension " << post_.dim();
    throw ValidationError(msg.str());
  }
  if (pre_state_) {
    amplitude_ = post_state_->amplitudes().dot(pre_state_->amplitudes());
    overlap_ = std::norm(amplitude_);
  } else {
    overlap_ = (post_.matrix() * pre_.matrix()).trace();
    amplitude_ = std::sqrt(overlap_);
  }
}

Selection Selection::pure(const TargetState& pre, const TargetState& post) {
  return Selection(DensityOp(pre), DensityOp(post), pre, post);
}

Selection Selection::mixed(DensityOp pre, DensityOp post) {
  return Selection(std::move(pre), std::move(post), std::nullopt,
                   std::nullopt);
}

void Selection::require_usable() const {
  if (near_orthogonal()) {
    std::ostringstream msg;
    msg << "near-orthogonal selection: |tr(rho_f rho_i)| = "
        << std::abs(overlap_) << " <= " << kOverlapFloor;
    throw NearOrthogonalSelection(msg.str(), std::abs(overlap_));
  }
}

Complex Selection::conditional(const CMatrix& m) const {
  require_usable();
  if (m.rows() != dim() || m.cols() != dim()) {
    throw ValidationError("selection: operator dimension mismatch");
  }
  if (pre_state_) {
    // <f|M|i> / <f|i>
    return post_state_->amplitudes().dot(m * pre_state_->amplitudes()) /
           amplitude_;
  }
  return (post_.matrix() * m * pre_.matrix()).trace() / overlap_;
}

Complex weak_moment(const Selection& sel, const HermitianObservable& a,
                    int n) {
  if (n < 0) throw ValidationError("weak_moment: n must be >= 0");
  sel.require_usable();
  if (n == 0) return 1.0;
  return sel.conditional(a.power(n));
}

Complex weak_variance(const Selection& sel, const HermitianObservable& a) {
  const Complex m1 = weak_moment(sel, a, 1);
  return weak_moment(sel, a, 2) - m1 * m1;
}

Complex a_tilde(const Selection& sel, const HermitianObservable& a) {
  sel.require_usable();
  const CMatrix& m = a.matrix();
  return (sel.post().matrix() * m * sel.pre().matrix() * m).trace() /
         sel.overlap();
}

CVector weak_prob_distribution(const Selection& sel,
                               const std::vector<CMatrix>& projectors) {
  if (projectors.empty()) throw ValidationError("weak probs: no projectors");
  CMatrix sum = CMatrix::Zero(sel.dim(), sel.dim());
  for (const CMatrix& p : projectors) {
    if (p.rows() != sel.dim() || p.cols() != sel.dim()) {
      throw ValidationError("weak probs: projector dimension mismatch");
    }
    sum += p;
  }
  const double deficiency =
      (sum - CMatrix::Identity(sel.dim(), sel.dim())).norm();
  if (deficiency > 1e-10) {
    std::ostringstream msg;
    msg << "weak probs: projectors incomplete, ||sum Pi_j - 1|| = "
        << deficiency;
    throw ValidationError(msg.str());
  }
  CVector out(static_cast<Eigen::Index>(projectors.size()));
  for (size_t j = 0; j < projectors.size(); ++j) {
    out(static_cast<Eigen::Index>(j)) = sel.conditional(projectors[j]);
  }
  return out;
}

CVector weak_prob_distribution(const Selection& sel,
                               const HermitianObservable& a) {
  std::vector<CMatrix> proj;
  for (const SpectralTerm& t : a.spectrum()) proj.push_back(t.projector);
  return weak_prob_distribution(sel, proj);
}

namespace {
void check_basis_pair(const TargetState& state, const CMatrix& a,
                      const CMatrix& b) {
  if (a.rows() != state.dim() || b.rows() != state.dim() ||
      a.cols() != state.dim() || b.cols() != state.dim()) {
    throw ValidationError("kd: basis dimension mismatch");
  }
  require_orthonormal(a, 1e-10, "kd basis A");
  require_orthonormal(b, 1e-10, "kd basis B");
}
}  // namespace

CMatrix kd_distribution(const TargetState& state, const CMatrix& basis_a,
                        const CMatrix& basis_b) {
  check_basis_pair(state, basis_a, basis_b);
  const CVector& i = state.amplitudes();
  const CMatrix ab = basis_a.adjoint() * basis_b;  // <a_j|a'_k>
  const CVector bi = basis_b.adjoint() * i;        // <a'_k|i>
  const CVector ai = basis_a.adjoint() * i;        // <a_j|i>
  CMatrix d(ab.rows(), ab.cols());
  for (Eigen::Index j = 0; j < d.rows(); ++j)
    for (Eigen::Index k = 0; k < d.cols(); ++k)
      d(j, k) = ab(j, k) * bi(k) * std::conj(ai(j));
  return d;
}

CVector kd_conditional_row(const TargetState& state, const CMatrix& basis_a,
                           const CMatrix& basis_b, Eigen::Index j) {
  const CMatrix d = kd_distribution(state, basis_a, basis_b);
  if (j < 0 || j >= d.rows()) throw ValidationError("kd: row out of range");
  const double pj = std::norm(basis_a.col(j).dot(state.amplitudes()));
  if (pj <= kOverlapFloor) {
    std::ostringstream msg;
    msg << "kd conditional: |<a_j|i>|^2 = " << pj << " below floor";
    throw NearOrthogonalSelection(msg.str(), pj);
  }
  return d.row(j).transpose() / pj;
}

TotalLawsReport total_laws(const TargetState& pre, const HermitianObservable& a,
                           const CMatrix& post_basis) {
  if (post_basis.rows() != pre.dim() || post_basis.cols() != pre.dim()) {
    throw ValidationError("total laws: post basis must be complete");
  }
  require_orthonormal(post_basis, 1e-10, "post basis");
  const CVector& i = pre.amplitudes();
  const CMatrix& m = a.matrix();
  TotalLawsReport r;
  r.expectation = std::real(i.dot(m * i));
  r.variance = std::real(i.dot(m * (m * i))) - r.expectation * r.expectation;
  for (Eigen::Index j = 0; j < post_basis.cols(); ++j) {
    const double w = std::norm(post_basis.col(j).dot(i));
    const bool ok = w >= 1e-24;
    r.weights.push_back(ok ? w : 0.0);
    r.defined.push_back(ok);
    if (!ok) {
      r.weak_values.emplace_back(0.0);
      r.weak_variances.emplace_back(0.0);
      continue;
    }
    // The per-term selection may sit below the global overlap floor while
    // still carrying weight; evaluate the ratio directly.
    const CVector f = post_basis.col(j);
    const Complex fi = f.dot(i);
    const Complex wv = f.dot(m * i) / fi;
    const Complex wv2 = f.dot(m * (m * i)) / fi;
    const Complex wvar = wv2 - wv * wv;
    r.weak_values.push_back(wv);
    r.weak_variances.push_back(wvar);
    r.expectation_sum += w * wv;
    r.within_sum += w * wvar;
    r.between_sum += w * (wv - r.expectation) * (wv - r.expectation);
  }
  return r;
}

WeakStats compute_weak_stats(const Selection& sel, const HermitianObservable& a,
                             int num_moments) {
  sel.require_usable();
  const int n = num_moments > 0
                    ? num_moments
                    : std::max<int>(4, static_cast<int>(sel.dim()));
  WeakStats s;
  s.weak_moments.resize(n);
  for (int k = 1; k <= n; ++k) s.weak_moments(k - 1) = weak_moment(sel, a, k);
  s.weak_value = s.weak_moments(0);
  s.weak_variance = (n >= 2 ? s.weak_moments(1) : weak_moment(sel, a, 2)) -
                    s.weak_value * s.weak_value;
  s.a_tilde = a_tilde(sel, a);
  s.weak_probs = weak_prob_distribution(sel, a);
  s.eigenvalues.resize(static_cast<Eigen::Index>(a.spectrum().size()));
  for (size_t j = 0; j < a.spectrum().size(); ++j)
    s.eigenvalues(static_cast<Eigen::Index>(j)) = a.spectrum()[j].eigenvalue;
  return s;
}

}  // namespace weakprobe
