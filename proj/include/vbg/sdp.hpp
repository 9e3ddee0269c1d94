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

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "vbg/hermitian.hpp"

namespace vbg {

/// Sparse Hermitian matrix stored as its upper triangle (row <= col).
/// Adding to an existing position accumulates.
class SparseHermitian {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    Complex value;
  };

  SparseHermitian() = default;
  explicit SparseHermitian(std::size_t dim) : dim_(dim) {}

  static SparseHermitian from_dense(const HermitianMatrix& a, std::size_t offset = 0,
                                    std::size_t dim = 0);

  // Adds v at (i, j) and conj(v) at (j, i). Diagonal values must be real.
  void add(std::size_t i, std::size_t j, Complex v);
  // Adds every entry of `a` shifted by `offset` along both axes.
  void add_block(const HermitianMatrix& a, std::size_t offset, double scale = 1.0);

  std::size_t dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  HermitianMatrix to_dense() const;
  // tr(A X) for Hermitian X of the same dimension.
  double trace_with(const HermitianMatrix& x) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Entry> entries_;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct SdpConstraint {
  SparseHermitian a;
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

/// maximize tr(C X) subject to tr(A_k X) (<=, =, >=) b_k, X PSD.
///
/// `blocks` optionally partitions the variable into diagonal blocks; X is
/// then restricted to be block diagonal and no data entry may couple two
/// blocks. A block of size 1 is a nonnegative scalar variable.
struct SdpProblem {
  std::size_t dim = 0;
  SparseHermitian objective;
  std::vector<SdpConstraint> constraints;
  std::vector<std::size_t> blocks;

  void validate() const;
};

enum class SdpStatus { Optimal, MaxIter, Infeasible };

std::string to_string(SdpStatus s);

struct SdpOptions {
  double eps_feas = 1e-7;
  double eps_gap = 1e-6;
  std::size_t max_iter = 200;
  bool parallel = false;  // OpenMP Schur-complement assembly
};

struct SdpSolution {
  HermitianMatrix X;
  double primal_value = 0.0;
  double dual_value = 0.0;  // b^T y, an upper bound at dual feasibility
  double feas_residual = 0.0;
  double gap = 0.0;         // |primal - dual| / (1 + |primal| + |dual|)
  SdpStatus status = SdpStatus::MaxIter;
  std::size_t iterations = 0;
  std::vector<double> multipliers;
};

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts = {});

/// max over X of min_k tr(C_k X) subject to the constraints of `base`.
/// `base.objective` is ignored.
struct MaximinProblem {
  SdpProblem base;
  std::array<SparseHermitian, 2> slot_objectives;
};

struct MaximinSolution {
  SdpSolution sdp;  // X restricted to the original dimension; primal_value = t
  double t = 0.0;
  std::array<double, 2> slot_values{};
};

MaximinSolution solve_maximin_sdp(const MaximinProblem& p, const SdpOptions& opts = {});

// Largest violation of any constraint of p at X, each normalized by (1 + |b_k|).
double constraint_residual(const SdpProblem& p, const HermitianMatrix& x);

}  // namespace vbg
