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

#ifndef WEAKPROBE_HILBERT_H_
#define WEAKPROBE_HILBERT_H_

// Dense complex linear algebra for small (d <= 16) target Hilbert spaces.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "weakprobe/error.h"

namespace weakprobe {

using Complex = std::complex<double>;

template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrixT =
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using CVector = CVectorT<double>;
using CMatrix = CMatrixT<double>;

inline constexpr double kDegeneracyTol = 1e-9;

/// Largest |m - m^dagger| entry.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real max_asymmetry(
    const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Eigenvalues (ascending) and orthonormal eigenvectors in columns.
template <typename Real>
struct EigenPairs {
  Eigen::Matrix<Real, Eigen::Dynamic, 1> values;
  CMatrixT<Real> vectors;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot m(p,q) with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation, so the
/// accumulated eigenvector matrix stays unitary to machine precision.
/// Input is assumed Hermitian; callers validate.
template <typename Real>
EigenPairs<Real> jacobi_eigh(const CMatrixT<Real>& m, int max_sweeps = 64) {
  using std::abs;
  using C = std::complex<Real>;
  const Eigen::Index d = m.rows();
  CMatrixT<Real> a = Real(0.5) * (m + m.adjoint());
  CMatrixT<Real> v = CMatrixT<Real>::Identity(d, d);
  const Real scale = std::max(a.norm(), Real(1e-300));
  const Real eps = std::numeric_limits<Real>::epsilon();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Real off = 0;
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = p + 1; q < d; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= eps * eps * scale || off == Real(0)) break;

    for (Eigen::Index p = 0; p < d - 1; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        const C apq = a(p, q);
        const Real mag = abs(apq);
        if (mag <= eps * eps * scale) continue;
        const C phase = apq / mag;  // a(p,q) = mag * phase
        const Real app = std::real(a(p, p));
        const Real aqq = std::real(a(q, q));
        const Real tau = (aqq - app) / (2 * mag);
        const Real t = (tau >= 0 ? Real(1) : Real(-1)) /
                       (abs(tau) + std::sqrt(Real(1) + tau * tau));
        const Real c = Real(1) / std::sqrt(Real(1) + t * t);
        const Real s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const C g00 = c, g01 = s;
        const C g10 = -s * std::conj(phase), g11 = c * std::conj(phase);
        for (Eigen::Index k = 0; k < d; ++k) {
          const C akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * g00 + akq * g10;
          a(k, q) = akp * g01 + akq * g11;
        }
        for (Eigen::Index k = 0; k < d; ++k) {
          const C apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
          a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
        }
        a(p, q) = a(q, p) = C(0);
        for (Eigen::Index k = 0; k < d; ++k) {
          const C vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * g00 + vkq * g10;
          v(k, q) = vkp * g01 + vkq * g11;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return std::real(a(i, i)) < std::real(a(j, j));
  });
  EigenPairs<Real> out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index src = order[static_cast<size_t>(i)];
    out.values(i) = std::real(a(src, src));
    out.vectors.col(i) = v.col(src);
  }
  return out;
}

/// One eigenvalue a_j with the projector onto its (possibly degenerate)
/// eigenspace.
struct SpectralTerm {
  double eigenvalue;
  CMatrix projector;
};

/// Spectral decomposition with eigenvalues ascending and degenerate
/// eigenvalues (consecutive gap below `degeneracy_tol`) merged into one
/// projector. Throws ValidationError naming the max asymmetry if `m` is not
/// Hermitian within 1e-10.
std::vector<SpectralTerm> eig_hermitian(const CMatrix& m,
                                        double degeneracy_tol = kDegeneracyTol);

/// Normalized pure state. Construction normalizes; a zero vector throws.
class TargetState {
 public:
  explicit TargetState(CVector amplitudes);

  /// Basis vector |index> of a dim-dimensional space.
  static TargetState basis(Eigen::Index dim, Eigen::Index index);

  Eigen::Index dim() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }
  CMatrix density() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  CVector amplitudes_;
};

/// Density operator: Hermitian, unit trace, positive semidefinite
/// (eigenvalues >= -1e-10). Validated at construction.
class DensityOp {
 public:
  explicit DensityOp(CMatrix matrix);
  explicit DensityOp(const TargetState& pure);

  static DensityOp maximally_mixed(Eigen::Index dim);

  Eigen::Index dim() const { return matrix_.rows(); }
  const CMatrix& matrix() const { return matrix_; }

  /// Eigen-ensemble {(lambda_k, |v_k>)} with lambda_k > `drop_below`.
  std::vector<std::pair<double, CVector>> ensemble(
      double drop_below = 1e-15) const;

 private:
  CMatrix matrix_;
};

/// Hermitian observable with its merged spectral decomposition.
class HermitianObservable {
 public:
  explicit HermitianObservable(CMatrix matrix,
                               double degeneracy_tol = kDegeneracyTol);

  /// Builds sum_j a_j |v_j><v_j| from eigenvalues and orthonormal columns.
  static HermitianObservable from_spectrum(const Eigen::VectorXd& eigenvalues,
                                           const CMatrix& eigenvectors);

  Eigen::Index dim() const { return matrix_.rows(); }
  const CMatrix& matrix() const { return matrix_; }
  const std::vector<SpectralTerm>& spectrum() const { return spectrum_; }

  /// max_j |a_j|
  double norm() const;

  /// A^n, formed from the spectrum so that it stays exactly Hermitian.
  CMatrix power(int n) const;

 private:
  CMatrix matrix_;
  std::vector<SpectralTerm> spectrum_;
};

/// <i|proj|i>. Throws ValidationError on dimension mismatch.
double projection_probability(const TargetState& state, const CMatrix& proj);

/// Throws ValidationError unless the columns of `basis` are orthonormal
/// within `tol`.
void require_orthonormal(const CMatrix& basis, double tol, const char* what);

/// Haar-ish random state from a seeded generator (tests and demos).
template <typename Rng>
TargetState random_state(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> g;
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return TargetState(v);
}

/// Random Hermitian matrix with Gaussian entries.
template <typename Rng>
CMatrix random_hermitian(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> g;
  CMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

}  // namespace weakprobe

#endif  // WEAKPROBE_HILBERT_H_
