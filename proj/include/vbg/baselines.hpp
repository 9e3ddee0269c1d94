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

// Comparison algorithms and exactly solvable special cases.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vbg/models.hpp"
#include "vbg/rng.hpp"
#include "vbg/rounding.hpp"

namespace vbg {

struct OracleResult {
  IndexSet support;  // exactly Q entries; some may carry zero gain
  std::vector<CVector> w;           // one per slot, length M
  std::vector<double> slot_values;  // scheduling only
  double value = 0.0;
  bool exact = false;
  std::optional<double> upper_bound;  // certified bound where one is available
};

OracleResult diagonal_admission_oracle(const AdmissionInstance& inst);
OracleResult rank1_admission_oracle(const AdmissionInstance& inst);
OracleResult diagonal_relay_oracle(const RelayInstance& inst, double rel_tol = 1e-9);

struct BruteForceResult {
  OracleResult best;
  std::size_t supports = 0;
};

inline constexpr std::size_t kBruteForceBudget = 10000;
inline constexpr std::size_t kBruteForceMinL = 2000;

std::size_t binomial(std::size_t n, std::size_t k);

// Every Q-subset: SDP-QCQP plus randomization; upper_bound is the largest
// per-support relaxation value.
BruteForceResult brute_force_admission(const AdmissionInstance& inst, const RoundingConfig& cfg);

OracleResult spca_select(const AdmissionInstance& inst);

enum class PartitionMode { RPca, RSdr };

// Uniform random q-subset of {0..m-1}, ascending.
IndexSet random_subset(std::size_t m, std::size_t q, RngSeed seed);

// Principal eigenvector of R[S] scaled so that max_i |w_i|^2 = P.
CVector pca_beamformer(const HermitianMatrix& r_s, double p);

OracleResult random_admission_baseline(const AdmissionInstance& inst, PartitionMode mode,
                                       const RoundingConfig& cfg);
OracleResult random_partition_baseline(const SchedulingInstance& inst, PartitionMode mode,
                                       const RoundingConfig& cfg);

// Fractional relaxation on a fixed support followed by randomization,
// samples scored by the true SNR.
OracleResult relay_fixed_support(const RelayInstance& inst, const IndexSet& support,
                                 const RoundingConfig& cfg, std::uint64_t first_substream = 1);

OracleResult random_sdr_relay(const RelayInstance& inst, const RoundingConfig& cfg);

enum class GreedyInner { RSdr, FullPowerAligned };

// cfg.L is the inner sample count (50 by convention).
OracleResult greedy_relay(const RelayInstance& inst, const RoundingConfig& cfg,
                          GreedyInner inner = GreedyInner::RSdr);

enum class GedVariant { Pencil, LiteralInverse };

OracleResult random_ged_relay(const RelayInstance& inst, RngSeed seed,
                              GedVariant variant = GedVariant::Pencil);

// Largest power violation of an OracleResult on its instance.
double oracle_violation(const AdmissionInstance& inst, const OracleResult& r);
double oracle_violation(const SchedulingInstance& inst, const OracleResult& r);
double oracle_violation(const RelayInstance& inst, const OracleResult& r);

}  // namespace vbg
