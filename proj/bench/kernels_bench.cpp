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

// OpenMP kernels against their serial references: Schur-complement
// assembly inside the interior-point solver and the randomization sampler.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "vbg/channel.hpp"
#include "vbg/conic.hpp"
#include "vbg/models.hpp"
#include "vbg/sampling.hpp"

using namespace vbg;

namespace {

conic::BlockVar positive_definite(const conic::ConicData& d, std::uint64_t seed) {
  auto x = conic::BlockVar::zeros(d);
  CounterRng rng(RngSeed{seed, 0}, 0);
  for (auto& b : x.dense) {
    RMatrix g(b.rows(), b.cols());
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
    b = g * g.transpose() + RMatrix::Identity(b.rows(), b.cols());
  }
  for (Eigen::Index i = 0; i < x.lp.size(); ++i) x.lp(i) = 1.0 + rng.uniform();
  return x;
}

struct SchurCase {
  conic::ConicData data;
  conic::BlockVar x, w;

  explicit SchurCase(std::size_t m) {
    CellularConfig cc;
    cc.M = m;
    cc.Q = m / 3;
    data = conic::to_conic(build_sdp1(gen_cellular(cc, {1, 0})));
    x = positive_definite(data, 1);
    w = positive_definite(data, 2);
  }
};

template <bool Parallel>
void BM_Schur(benchmark::State& state) {
  const SchurCase c(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto m = Parallel ? conic::schur_complement_omp(c.data, c.x, c.w)
                      : conic::schur_complement_serial(c.data, c.x, c.w);
    benchmark::DoNotOptimize(m.data());
  }
  state.counters["rows"] = static_cast<double>(c.data.rows.size());
}

SamplingPlan sampling_case(std::size_t m) {
  CellularConfig cc;
  cc.M = m;
  cc.Q = m;
  const auto inst = gen_cellular(cc, {1, 0});
  // a full-rank feasible Y keeps every direction active
  const auto y = HermitianMatrix::identity(m) * cc.P;
  const std::vector<double> caps(m, cc.P);
  return make_sampling_plan(y, inst.R, caps);
}

template <bool Parallel>
void BM_Sampling(benchmark::State& state) {
  const auto plan = sampling_case(static_cast<std::size_t>(state.range(0)));
  const auto count = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto b = Parallel ? draw_samples_omp(plan, {1, 0}, 1, count)
                      : draw_samples_serial(plan, {1, 0}, 1, count);
    benchmark::DoNotOptimize(b.t.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * count));
}

}  // namespace

BENCHMARK(BM_Schur<false>)->Name("schur/serial")->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Schur<true>)->Name("schur/omp")->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sampling<false>)->Name("sampling/serial")->Args({20, 200})->Args({50, 2000})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Sampling<true>)->Name("sampling/omp")->Args({20, 200})->Args({50, 2000})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
