// SPDX-License-Identifier: Apache-2.0
//
// vbgroup: joint node grouping and virtual beamforming via SDR
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "vbg/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vbg {

HermitianMatrix::HermitianMatrix(const CMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) {
    throw ValidationError("HermitianMatrix: matrix is not square (" +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ")");
  }
  if (!m.allFinite()) {
    throw ValidationError("HermitianMatrix: non-finite entries");
  }
  const double asym = (m - m.adjoint()).norm();
  const double scale = std::max(m.norm(), 1e-300);
  if (asym > rel_tol * scale && asym > 1e-300) {
    throw ValidationError("HermitianMatrix: input is not Hermitian (||A - A^H||/||A|| = " +
                          std::to_string(asym / scale) + ")");
  }
  m_ = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < m_.rows(); ++i) m_(i, i) = Complex(m_(i, i).real(), 0.0);
}

HermitianMatrix::HermitianMatrix(const RMatrix& m, double rel_tol)
    : HermitianMatrix(CMatrix(m.cast<Complex>()), rel_tol) {}

HermitianMatrix HermitianMatrix::zero(std::size_t n) {
  return HermitianMatrix(CMatrix(CMatrix::Zero(n, n)));
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  return HermitianMatrix(CMatrix(CMatrix::Identity(n, n)));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::outer(const CVector& v) {
  return HermitianMatrix(CMatrix(v * v.adjoint()));
}

double HermitianMatrix::trace() const { return m_.trace().real(); }

double HermitianMatrix::max_imag() const {
  return m_.size() == 0 ? 0.0 : m_.imag().cwiseAbs().maxCoeff();
}

double HermitianMatrix::off_diagonal_norm() const {
  CMatrix off = m_;
  off.diagonal().setZero();
  return off.norm();
}

double HermitianMatrix::quad_form(const CVector& w) const {
  if (static_cast<std::size_t>(w.size()) != dim()) {
    throw ValidationError("quad_form: dimension mismatch");
  }
  return (w.adjoint() * m_ * w)(0, 0).real();
}

double HermitianMatrix::trace_product(const HermitianMatrix& other) const {
  if (other.dim() != dim()) throw ValidationError("trace_product: dimension mismatch");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij)
  return (m_.array() * other.m_.conjugate().array()).sum().real();
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  if (o.dim() != dim()) throw ValidationError("operator+: dimension mismatch");
  return HermitianMatrix(CMatrix(m_ + o.m_));
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  if (o.dim() != dim()) throw ValidationError("operator-: dimension mismatch");
  return HermitianMatrix(CMatrix(m_ - o.m_));
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(CMatrix(m_ * s));
}

EigenDecomposition eig_hermitian(const HermitianMatrix& a) {
  EigenDecomposition out;
  const auto n = static_cast<Eigen::Index>(a.dim());
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.mat());
  if (es.info() != Eigen::Success) {
    throw DegenerateError("eig_hermitian: eigensolver did not converge");
  }
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

RVector eigenvalues(const HermitianMatrix& a) {
  if (a.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.mat(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

PsdFactor psd_factor(const HermitianMatrix& y, double tol) {
  PsdFactor out;
  const auto n = static_cast<Eigen::Index>(y.dim());
  if (n == 0) {
    out.delta.resize(0, 0);
    return out;
  }
  const EigenDecomposition ed = eig_hermitian(y);
  const double spectral = std::max(std::abs(ed.values(0)), std::abs(ed.values(n - 1)));
  if (ed.values(n - 1) < -tol * spectral) {
    throw NotPsdError("psd_factor: smallest eigenvalue " + std::to_string(ed.values(n - 1)) +
                      " below -tol*||Y||");
  }
  const double cut = tol * std::max(ed.values(0), 0.0);
  Eigen::Index r = 0;
  while (r < n && ed.values(r) > cut && ed.values(r) > 0.0) ++r;
  out.delta.resize(r, n);
  for (Eigen::Index k = 0; k < r; ++k) {
    out.delta.row(k) = std::sqrt(ed.values(k)) * ed.vectors.col(k).adjoint();
  }
  return out;
}

CVector generalized_principal_eigvec(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim() || a.dim() == 0) {
    throw ValidationError("generalized_principal_eigvec: dimension mismatch");
  }
  Eigen::LLT<CMatrix> llt(b.mat());
  const RVector bvals = eigenvalues(b);
  if (llt.info() != Eigen::Success || bvals(bvals.size() - 1) <= 1e-12 * std::abs(bvals(0))) {
    throw DegenerateError("generalized_principal_eigvec: B is not positive definite");
  }
  // whitened pencil: L^{-1} A L^{-H}
  const CMatrix l = llt.matrixL();
  CMatrix tmp = l.triangularView<Eigen::Lower>().solve(a.mat());
  CMatrix whitened = l.triangularView<Eigen::Lower>().solve(CMatrix(tmp.adjoint())).adjoint();
  const EigenDecomposition ed = eig_hermitian(HermitianMatrix(whitened, 1e-8));
  CVector v = l.adjoint().triangularView<Eigen::Upper>().solve(CVector(ed.vectors.col(0)));
  v /= v.norm();
  return v;
}

HermitianMatrix principal_submatrix(const HermitianMatrix& a, std::span<const std::size_t> idx) {
  if (idx.empty()) throw ValidationError("principal_submatrix: empty index set");
  const std::size_t n = idx.size();
  CMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (idx[r] >= a.dim()) {
      throw ValidationError("principal_submatrix: index " + std::to_string(idx[r]) +
                            " out of range for dim " + std::to_string(a.dim()));
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) = a(idx[r], idx[c]);
  }
  return HermitianMatrix(out);
}

HermitianMatrix block_diagonal(std::span<const HermitianMatrix> blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.dim();
  CMatrix out = CMatrix::Zero(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.dim(), b.dim()) = b.mat();
    off += b.dim();
  }
  return HermitianMatrix(out);
}

}  // namespace vbg
