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

// SDR plus randomized rounding for admission control, two-slot scheduling
// and relay selection.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vbg/models.hpp"
#include "vbg/rng.hpp"
#include "vbg/sampling.hpp"

namespace vbg {

struct RoundingConfig {
  std::size_t L = 200;
  RngSeed seed{};
  bool check_invariants = true;
  bool complex_phases = false;  // unit-circle phases instead of +-1
  bool parallel = false;        // OpenMP sampling kernel
  SdpOptions sdp{1e-9, 1e-9, 200, false};
  double residual_tol = 1e-5;   // tightness and column-sum residual bound
  double sample_tol = 1e-8;     // per-sample feasibility and identity bound
  double factor_tol = 1e-9;

  void validate() const;
};

// NaN marks a check that does not apply to the problem family.
struct InvariantReport {
  double sdp_residual = 0.0;
  double tightness_residual = std::numeric_limits<double>::quiet_NaN();
  double column_sum_residual = std::numeric_limits<double>::quiet_NaN();
  double feasibility_violation = 0.0;  // worst over every sample
  double closed_form_residual = 0.0;        // worst relative error over every sample
  double support_trace_slack = std::numeric_limits<double>::quiet_NaN();  // tr(R[S]Y) / ((QP/M) tr R) - 1
  double trace_upper_slack = std::numeric_limits<double>::quiet_NaN();    // 1 - tr(R X1) / (QP lambda_1)
  double rank1_residual = 0.0;         // max_i lambda_2 / lambda_1 of U^H E_i U
  double relaxation_excess = 0.0;      // value / sdp_bound - 1 (must be <= 0)
};

struct RoundingOutcome {
  DiscreteAssignment assignment;    // slot-1 group for scheduling
  std::vector<CVector> w;           // one per slot, length M
  std::vector<double> slot_values;  // per-slot w^H R w (scheduling)
  double value = 0.0;
  double sdp_bound = 0.0;
  double ratio = 0.0;               // sdp_bound / value
  std::optional<double> theoretical_bound;
  std::vector<std::vector<double>> per_sample_t;  // per slot
  std::vector<double> per_sample_value;           // selection score per sample
  std::size_t best_sample = 0;
  bool column_ranked = true;
  SdpStatus sdp_status = SdpStatus::Optimal;
  std::size_t sdp_iterations = 0;
  InvariantReport checks;
};

// Top-q indices by score, ties to the lowest index; returned ascending.
IndexSet top_q(std::span<const double> scores, std::size_t q);

IndexSet select_support(const HermitianMatrix& x0, const HermitianMatrix& r,
                        const HermitianMatrix& x1, std::size_t q, double p,
                        bool* column_ranked = nullptr);

// Randomization over a fixed support; w entries are on the support only.
struct Randomization {
  SamplingPlan plan;
  SampleBatch batch;
  std::vector<double> surrogate;  // w^H objective w per sample
  double trace_objective_y = 0.0; // tr(objective Y)
  double closed_form_residual = 0.0;
  double feasibility_violation = 0.0;
  double rank1_residual = 0.0;
};

Randomization randomize(const HermitianMatrix& y, const HermitianMatrix& objective,
                        std::span<const double> caps, const RoundingConfig& cfg,
                        std::uint64_t first_substream);

// Single-support pipeline (SDP-QCQP then randomization), best sample by
// w^H R[S] w. Returns w of length |S|.
struct RandomizeAndPick {
  CVector w;
  double value = 0.0;
  HermitianMatrix y;
  Randomization samples;
  std::size_t best = 0;
};

RandomizeAndPick randomize_and_pick(const HermitianMatrix& y, const HermitianMatrix& r_s,
                                    double p, const RoundingConfig& cfg,
                                    std::uint64_t first_substream = 1);

// Max |w_i|^2 / u_i - 1 on the support and |w_i|^2 / u_i off it;
// infinity when the support size differs from q or w has the wrong size.
double power_violation(std::span<const double> u, const IndexSet& support, std::size_t q,
                       const CVector& w);

double relay_snr(const RelayInstance& inst, const CVector& w);

// Embed a support-restricted vector into length m.
CVector scatter(const CVector& ws, const IndexSet& support, std::size_t m);

double admission_bound(std::size_t m, std::size_t q, const RVector& eig_desc);
std::optional<double> scheduling_bound(std::size_t m, std::size_t q, const RVector& eig_desc);

RoundingOutcome solve_admission(const AdmissionInstance& inst, const RoundingConfig& cfg);
RoundingOutcome solve_scheduling(const SchedulingInstance& inst, const RoundingConfig& cfg);
RoundingOutcome solve_relay(const RelayInstance& inst, const RoundingConfig& cfg);

}  // namespace vbg
