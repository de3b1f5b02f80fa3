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

#include "weakprobe/hilbert.h"

#include <sstream>

namespace weakprobe {

std::vector<SpectralTerm> eig_hermitian(const CMatrix& m,
                                        double degeneracy_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError("eig_hermitian: matrix must be square and non-empty");
  }
  const double asym = max_asymmetry(m);
  if (asym > 1e-10) {
    std::ostringstream msg;
    msg << "eig_hermitian: matrix is not Hermitian (max asymmetry " << asym
        << ")";
    throw ValidationError(msg.str());
  }
  const EigenPairs<double> eig = jacobi_eigh<double>(m);
  std::vector<SpectralTerm> out;
  Eigen::Index start = 0;
  const Eigen::Index d = m.rows();
  while (start < d) {
    Eigen::Index stop = start + 1;
    while (stop < d &&
           eig.values(stop) - eig.values(stop - 1) < degeneracy_tol) {
      ++stop;
    }
    SpectralTerm term;
    term.eigenvalue = eig.values.segment(start, stop - start).mean();
    const auto block = eig.vectors.middleCols(start, stop - start);
    term.projector = block * block.adjoint();
    out.push_back(std::move(term));
    start = stop;
  }
  return out;
}

TargetState::TargetState(CVector amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  const double n = amplitudes_.norm();
  if (amplitudes_.size() == 0 || !(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("TargetState: amplitudes are not normalizable");
  }
  amplitudes_ /= n;
}

TargetState TargetState::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) {
    throw ValidationError("TargetState::basis: index out of range");
  }
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return TargetState(v);
}

DensityOp::DensityOp(CMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw ValidationError("DensityOp: matrix must be square and non-empty");
  }
  const double asym = max_asymmetry(matrix_);
  if (asym > 1e-12) {
    std::ostringstream msg;
    msg << "DensityOp: not Hermitian (max asymmetry " << asym << ")";
    throw ValidationError(msg.str());
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "DensityOp: trace " << tr.real() << " differs from 1";
    throw ValidationError(msg.str());
  }
  const EigenPairs<double> eig = jacobi_eigh<double>(matrix_);
  if (eig.values.minCoeff() < -1e-10) {
    std::ostringstream msg;
    msg << "DensityOp: negative eigenvalue " << eig.values.minCoeff();
    throw ValidationError(msg.str());
  }
}

DensityOp::DensityOp(const TargetState& pure) : matrix_(pure.density()) {}

DensityOp DensityOp::maximally_mixed(Eigen::Index dim) {
  if (dim <= 0) throw ValidationError("DensityOp: dimension must be positive");
  return DensityOp(CMatrix(CMatrix::Identity(dim, dim) /
                           static_cast<double>(dim)));
}

std::vector<std::pair<double, CVector>> DensityOp::ensemble(
    double drop_below) const {
  const EigenPairs<double> eig = jacobi_eigh<double>(matrix_);
  std::vector<std::pair<double, CVector>> out;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > drop_below) {
      out.emplace_back(eig.values(k), eig.vectors.col(k));
    }
  }
  return out;
}

HermitianObservable::HermitianObservable(CMatrix matrix,
                                         double degeneracy_tol)
    : matrix_(std::move(matrix)),
      spectrum_(eig_hermitian(matrix_, degeneracy_tol)) {}

HermitianObservable HermitianObservable::from_spectrum(
    const Eigen::VectorXd& eigenvalues, const CMatrix& eigenvectors) {
  if (eigenvectors.cols() != eigenvalues.size()) {
    throw ValidationError("from_spectrum: eigenvalue/eigenvector count differ");
  }
  require_orthonormal(eigenvectors, 1e-10, "from_spectrum");
  CMatrix m = eigenvectors * eigenvalues.cast<Complex>().asDiagonal() *
              eigenvectors.adjoint();
  m = 0.5 * (m + m.adjoint());
  return HermitianObservable(std::move(m));
}

double HermitianObservable::norm() const {
  double out = 0.0;
  for (const auto& t : spectrum_) out = std::max(out, std::abs(t.eigenvalue));
  return out;
}

CMatrix HermitianObservable::power(int n) const {
  if (n < 0) throw ValidationError("HermitianObservable::power: n < 0");
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (const auto& t : spectrum_) {
    out += std::pow(t.eigenvalue, n) * t.projector;
  }
  return out;
}

double projection_probability(const TargetState& state, const CMatrix& proj) {
  if (proj.rows() != state.dim() || proj.cols() != state.dim()) {
    throw ValidationError("projection_probability: dimension mismatch");
  }
  const auto& v = state.amplitudes();
  return std::real(v.dot(proj * v));
}

void require_orthonormal(const CMatrix& basis, double tol, const char* what) {
  const Eigen::Index k = basis.cols();
  const double err =
      (basis.adjoint() * basis - CMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (err > tol) {
    std::ostringstream msg;
    msg << what << ": basis is not orthonormal (max Gram error " << err << ")";
    throw ValidationError(msg.str());
  }
}

}  // namespace weakprobe
