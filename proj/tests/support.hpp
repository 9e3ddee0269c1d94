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

// Shared generators for the unit tests.

#pragma once

#include <cstdint>
#include <vector>

#include "vbg/hermitian.hpp"
#include "vbg/rng.hpp"

namespace vbg::test {

inline CMatrix random_complex(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  CounterRng rng(RngSeed{seed, 0}, 77);
  CMatrix a(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) a(i, j) = Complex(rng.normal(), rng.normal());
  return a;
}

inline HermitianMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  const CMatrix a = random_complex(n, n, seed);
  return HermitianMatrix(CMatrix(0.5 * (a + a.adjoint())));
}

// G G^H with G of size n x k (rank min(n, k)).
inline HermitianMatrix random_psd(std::size_t n, std::size_t k, std::uint64_t seed) {
  const CMatrix g = random_complex(n, k, seed);
  return HermitianMatrix(CMatrix(g * g.adjoint()));
}

inline HermitianMatrix diag_of(std::vector<double> d) { return HermitianMatrix::diagonal(d); }

}  // namespace vbg::test
