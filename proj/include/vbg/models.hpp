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

// Problem instances and the lifted matrices/SDPs built from them.
//
// Lifted variable layout (0-based): x = [a_0 .. a_{M-1}, gamma, w_0 .. w_{M-1}]
// so the homogenizer sits at index M and node i's gain at M + 1 + i.
// Two-slot scheduling appends a second beamformer block at 2M + 1.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "vbg/hermitian.hpp"
#include "vbg/sdp.hpp"

namespace vbg {

// Single group of Q out of M nodes, per-node power P, SNR w^H R w.
struct AdmissionInstance {
  HermitianMatrix R;
  double P = 1.0;
  std::size_t Q = 1;
  std::optional<std::size_t> N;  // receive antennas, informational

  std::size_t M() const { return R.dim(); }
  void validate() const;
};

// Two time slots sharing R; Q nodes in slot 1, M - Q in slot 2.
struct SchedulingInstance {
  HermitianMatrix R;
  double P = 1.0;
  std::size_t Q = 1;
  std::optional<std::size_t> N;

  std::size_t M() const { return R.dim(); }
  void validate() const;
};

// Amplify-and-forward relays: SNR = w^H S w / (sigma_n2 + w^H F w),
// |w_i|^2 caps[i] <= a_i P.
struct RelayInstance {
  HermitianMatrix S;
  HermitianMatrix F;
  double sigma_n2 = 1.0;
  std::vector<double> caps;
  double P = 1.0;
  std::size_t Q = 1;

  std::size_t M() const { return S.dim(); }
  // Per-relay bound on |w_i|^2 when selected: P / caps[i].
  std::vector<double> gain_caps() const;
  void validate() const;
};

/// Discrete part of the lifted vector: x0 = [a; gamma] in {-1, +1}^{M+1}.
struct DiscreteAssignment {
  std::vector<int> x0;
  IndexSet support;  // {i : x0[i] * x0[M] = 1}, ascending

  static DiscreteAssignment from_support(std::size_t m, const IndexSet& support);
  void validate(std::size_t q) const;
};

struct HomogenizationMatrices {
  std::vector<HermitianMatrix> C0;        // (M+1) x (M+1)
  std::vector<HermitianMatrix> C0_tilde;  // (M+1) x (M+1)
  std::vector<HermitianMatrix> C1;        // M x M
  std::vector<HermitianMatrix> D;         // blkdg(C0, C1), (2M+1)
  HermitianMatrix B0;                     // [[I, e], [e^T, M]]
  HermitianMatrix B;                      // blkdg(B0, 0)
};

HomogenizationMatrices build_homogenization_matrices(std::size_t m, double p);

// Node i's power constraint in the lifted (2M+1)-dim variable, with the
// power term scaled by `power_weight` / P (1 for D_i, c_i for D_i G_i).
SparseHermitian power_constraint(std::size_t m, std::size_t i, double p, double power_weight,
                                 std::size_t dim, std::size_t w_offset, bool tilde);
// tr(B X) over the leading (M+1) block of a `dim`-dim variable.
SparseHermitian cardinality_matrix(std::size_t m, std::size_t dim);

SdpProblem build_sdp1(const AdmissionInstance& inst);

// max tr(objective Y) s.t. Y[i,i] <= caps[i].
SdpProblem build_sdp_qcqp(const HermitianMatrix& objective, std::span<const double> caps);
SdpProblem build_sdp_qcqp(const HermitianMatrix& r_s, double p);

MaximinProblem build_sdp2(const SchedulingInstance& inst);

struct RelayMatrices {
  HermitianMatrix S_tilde;         // blkdg(0_{M+1}, S)
  HermitianMatrix F_tilde;         // blkdg(0_{M+1}, F)
  std::vector<HermitianMatrix> G;  // blkdg(I_{M+1}, e_i e_i^T c_i)
  std::vector<HermitianMatrix> DG; // D_i G_i
};

RelayMatrices build_relay_matrices(const RelayInstance& inst);

// SDP3 constraint set over X (2M+1), without objective.
SdpProblem build_sdp3_constraints(const RelayInstance& inst);

struct FractionalResult {
  double v3_sdp = 0.0;
  HermitianMatrix X;      // maximizer of the fractional relaxation
  double scale = 0.0;     // Charnes-Cooper s
  SdpSolution projective;  // solution of the transformed problem
};

// Fractional relaxation solved in one SDP via the projective change of
// variables Z = s X.
FractionalResult charnes_cooper_fractional(const RelayInstance& inst, const SdpOptions& opts = {});

struct FixedSupportFractional {
  double value = 0.0;
  HermitianMatrix Y;  // |T| x |T|
  SdpSolution projective;
};

// max tr(S Y) / (sigma2 + tr(F Y)) s.t. Y[i,i] <= caps[i], Y PSD, with the
// support fixed; same transformation as above.
FixedSupportFractional fractional_qcqp(const HermitianMatrix& s, const HermitianMatrix& f,
                                       double sigma2, std::span<const double> caps,
                                       const SdpOptions& opts = {});

// Lifted vector x = [x0; w] for a CP1-feasible (support, w).
CVector lift_admission(const DiscreteAssignment& a, const CVector& w);

}  // namespace vbg
