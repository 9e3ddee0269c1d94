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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vbg/errors.hpp"

namespace vbg {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using IndexSet = std::vector<std::size_t>;

/// Dense complex Hermitian matrix.
///
/// Construction validates Hermitian symmetry up to a relative tolerance and
/// then stores the exactly symmetrized matrix (A + A^H)/2, so that
/// A(i,j) == conj(A(j,i)) bit-for-bit and the diagonal is real.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& m, double rel_tol = 1e-10);
  explicit HermitianMatrix(const RMatrix& m, double rel_tol = 1e-10);

  static HermitianMatrix zero(std::size_t n);
  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix outer(const CVector& v);  // v v^H

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& mat() const { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double diag(std::size_t i) const { return m_(i, i).real(); }

  double trace() const;
  double frobenius_norm() const { return m_.norm(); }
  // Largest |entry| of the imaginary part.
  double max_imag() const;
  // Off-diagonal Frobenius mass.
  double off_diagonal_norm() const;

  // w^H A w (real for Hermitian A).
  double quad_form(const CVector& w) const;
  // tr(A B) for Hermitian A, B (real).
  double trace_product(const HermitianMatrix& other) const;

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;

 private:
  CMatrix m_;
};

struct EigenDecomposition {
  RVector values;   // descending
  CMatrix vectors;  // column k pairs with values[k]
};

struct PsdFactor {
  CMatrix delta;  // r x n with delta^H delta ~= Y
  std::size_t rank() const { return static_cast<std::size_t>(delta.rows()); }
};

EigenDecomposition eig_hermitian(const HermitianMatrix& a);

// Eigenvalues only, descending.
RVector eigenvalues(const HermitianMatrix& a);

// Y = delta^H delta. Eigenvalues <= tol * lambda_1 are dropped; an eigenvalue
// below -tol * ||Y||_2 raises NotPsdError.
PsdFactor psd_factor(const HermitianMatrix& y, double tol = 1e-9);

// Unit vector maximizing v^H A v / v^H B v for positive definite B.
CVector generalized_principal_eigvec(const HermitianMatrix& a,
                                     const HermitianMatrix& b);

HermitianMatrix principal_submatrix(const HermitianMatrix& a,
                                    std::span<const std::size_t> idx);

// Block diagonal assembly.
HermitianMatrix block_diagonal(std::span<const HermitianMatrix> blocks);

}  // namespace vbg
