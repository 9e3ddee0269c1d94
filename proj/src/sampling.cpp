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

#include "vbg/sampling.hpp"

#include <cmath>
#include <numbers>

#include "vbg/errors.hpp"

namespace vbg {

SamplingPlan make_sampling_plan(const HermitianMatrix& y, const HermitianMatrix& objective,
                                std::span<const double> caps, double factor_tol,
                                bool complex_phases) {
  const std::size_t q = y.dim();
  if (objective.dim() != q || caps.size() != q) {
    throw ValidationError("make_sampling_plan: dimension mismatch");
  }
  const PsdFactor f = psd_factor(y, factor_tol);
  if (f.rank() == 0) throw DegenerateError("make_sampling_plan: relaxed solution is zero");
  const HermitianMatrix e(CMatrix(f.delta * objective.mat() * f.delta.adjoint()), 1e-8);
  const EigenDecomposition ed = eig_hermitian(e);
  SamplingPlan plan;
  plan.basis = f.delta.adjoint() * ed.vectors;
  plan.sigma = ed.values;
  plan.caps.resize(q);
  for (std::size_t i = 0; i < q; ++i) {
    if (!(caps[i] > 0.0)) throw ValidationError("make_sampling_plan: caps must be > 0");
    plan.caps(i) = caps[i];
  }
  plan.complex_phases = complex_phases;
  return plan;
}

namespace {

// Draws one sample; a zero image (t = 0) is redrawn from the same substream.
void draw_one(const SamplingPlan& plan, RngSeed seed, std::uint64_t substream, CVector& w,
              double& t) {
  const Eigen::Index r = plan.basis.cols();
  const Eigen::Index q = plan.basis.rows();
  CounterRng rng(seed, substream);
  CVector xi(r);
  const std::size_t max_attempts = 64;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    for (Eigen::Index k = 0; k < r; ++k) {
      xi(k) = plan.complex_phases ? std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform())
                                  : Complex(rng.rademacher(), 0.0);
    }
    const CVector z = plan.basis * xi;
    double t2 = 0.0;
    for (Eigen::Index i = 0; i < q; ++i) t2 = std::max(t2, std::norm(z(i)) / plan.caps(i));
    if (t2 > 0.0) {
      t = std::sqrt(t2);
      w = z / t;
      return;
    }
  }
  throw DegenerateError("randomization: every draw mapped to zero");
}

}  // namespace

SampleBatch draw_samples_serial(const SamplingPlan& plan, RngSeed seed,
                                std::uint64_t first_substream, std::size_t count) {
  SampleBatch b;
  b.w.resize(count);
  b.t.resize(count);
  for (std::size_t l = 0; l < count; ++l) draw_one(plan, seed, first_substream + l, b.w[l], b.t[l]);
  return b;
}

SampleBatch draw_samples_omp(const SamplingPlan& plan, RngSeed seed,
                             std::uint64_t first_substream, std::size_t count) {
  SampleBatch b;
  b.w.resize(count);
  b.t.resize(count);
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(count); ++l) {
    try {
      draw_one(plan, seed, first_substream + static_cast<std::uint64_t>(l), b.w[l], b.t[l]);
    } catch (const DegenerateError&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw DegenerateError("randomization: every draw mapped to zero");
  return b;
}

}  // namespace vbg
