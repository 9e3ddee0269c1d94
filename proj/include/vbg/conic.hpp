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

// Real-symmetric standard form used by the interior-point core:
//
//   maximize <C, X>  s.t.  <A_k, X> = b_k,  X in K
//
// with K a product of dense PSD blocks and one nonnegative orthant block
// (inequality slacks). Complex Hermitian blocks enter through the embedding
// X -> [[Re X, -Im X], [Im X, Re X]] with data scaled by 1/2, so inner
// products are preserved exactly.

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "vbg/sdp.hpp"

namespace vbg::conic {

struct Entry {
  int row;
  int col;
  double value;
};

// Symmetric sparse matrix on one dense block, both triangles stored.
struct BlockSparse {
  int block;
  std::vector<Entry> entries;
};

struct Row {
  std::vector<BlockSparse> dense_parts;
  std::vector<std::pair<int, double>> lp_part;  // (orthant index, coefficient)
  std::size_t nnz() const;
};

struct BlockSpec {
  std::size_t user_offset;  // position in the user's Hermitian variable
  std::size_t user_size;
  bool complex;             // embedded as 2 * user_size
  std::size_t size() const { return complex ? 2 * user_size : user_size; }
};

struct ConicData {
  std::vector<BlockSpec> blocks;
  std::size_t lp_size = 0;
  std::vector<Row> rows;
  std::vector<Eigen::MatrixXd> c_dense;  // objective per dense block
  Eigen::VectorXd c_lp;
  Eigen::VectorXd b;

  // Barrier parameter normalization: sum of block orders.
  double order() const;
};

// Block-diagonal iterate: dense PSD blocks plus the orthant vector.
struct BlockVar {
  std::vector<Eigen::MatrixXd> dense;
  Eigen::VectorXd lp;

  static BlockVar identity(const ConicData& d, double scale);
  static BlockVar zeros(const ConicData& d);
  double dot(const BlockVar& o) const;
  double norm() const;
  void axpy(double a, const BlockVar& x);
};

ConicData to_conic(const SdpProblem& p);

// Maps a conic iterate back to the user's Hermitian variable.
HermitianMatrix from_conic(const ConicData& d, const SdpProblem& p, const BlockVar& x);

// <A_k, X> for every row.
Eigen::VectorXd apply_a(const ConicData& d, const BlockVar& x);
// sum_k y_k A_k.
BlockVar apply_at(const ConicData& d, const Eigen::VectorXd& y);
// <A_k, G> for block matrices G that may be non-symmetric.
Eigen::VectorXd apply_a_general(const ConicData& d, const std::vector<Eigen::MatrixXd>& g,
                                const Eigen::VectorXd& g_lp);

// Schur complement M_kl = <A_k, X A_l W>, with W = Z^{-1}.
// The serial variant is the reference for the OpenMP one.
Eigen::MatrixXd schur_complement_serial(const ConicData& d, const BlockVar& x,
                                        const BlockVar& w);
Eigen::MatrixXd schur_complement_omp(const ConicData& d, const BlockVar& x,
                                     const BlockVar& w);

}  // namespace vbg::conic
