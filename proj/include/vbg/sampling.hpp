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

// Randomization kernel: Rademacher (or unit-phase) draws mapped through a
// PSD factor to feasible beamformers. Sample l always uses substream
// first_substream + l, so serial and OpenMP runs agree bit-for-bit and the
// first L samples of a longer run are the samples of a shorter one.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vbg/hermitian.hpp"
#include "vbg/rng.hpp"

namespace vbg {

struct SamplingPlan {
  CMatrix basis;        // q x r, equals delta^H U; z = basis * xi
  RVector caps;         // per-coordinate |w_i|^2 bound
  RVector sigma;        // eigenvalues of E = delta A delta^H, descending
  bool complex_phases = false;
};

// Factor Y = delta^H delta, diagonalize E = delta A delta^H = U Sigma U^H.
SamplingPlan make_sampling_plan(const HermitianMatrix& y, const HermitianMatrix& objective,
                                std::span<const double> caps, double factor_tol = 1e-9,
                                bool complex_phases = false);

struct SampleBatch {
  std::vector<CVector> w;  // each of length q, max_i |w_i|^2 / caps_i == 1
  std::vector<double> t;
};

SampleBatch draw_samples_serial(const SamplingPlan& plan, RngSeed seed,
                                std::uint64_t first_substream, std::size_t count);
SampleBatch draw_samples_omp(const SamplingPlan& plan, RngSeed seed,
                             std::uint64_t first_substream, std::size_t count);

}  // namespace vbg
