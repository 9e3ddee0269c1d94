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

// Slow independent check for unit-diagonal SDPs: max tr(CX), X_ii = 1.

#pragma once

#include <algorithm>
#include <cmath>

#include "vbg/sdp.hpp"

namespace vbg::test {

inline SdpProblem unit_diagonal(const HermitianMatrix& c) {
  SdpProblem p;
  p.dim = c.dim();
  p.objective = SparseHermitian::from_dense(c);
  p.blocks = {c.dim()};
  for (std::size_t i = 0; i < c.dim(); ++i) {
    SparseHermitian a(c.dim());
    a.add(i, i, 1.0);
    p.constraints.push_back({a, Sense::Equal, 1.0});
  }
  return p;
}

// Upper bound n * lambda_max(C - diag v) with sum v = 0, minimized by
// gradient steps on a log-sum-exp smoothing; returns the best exact value.
inline double unit_diagonal_dual(const HermitianMatrix& c) {
  const std::size_t n = c.dim();
  const double scale = std::max(1.0, c.frobenius_norm());
  RVector v = RVector::Zero(n);
  auto exact = [&](const RVector& u) {
    CMatrix m = c.mat();
    for (std::size_t i = 0; i < n; ++i) m(i, i) -= u(i);
    return static_cast<double>(n) * eigenvalues(HermitianMatrix(m))(0);
  };
  double best = exact(v);
  for (double tau = 1e-1 * scale; tau > 1e-7 * scale; tau *= 0.5) {
    const double step = tau / static_cast<double>(n);
    for (int it = 0; it < 4000; ++it) {
      CMatrix m = c.mat();
      for (std::size_t i = 0; i < n; ++i) m(i, i) -= v(i);
      const auto e = eig_hermitian(HermitianMatrix(m));
      RVector p = ((e.values.array() - e.values(0)) / tau).exp();
      p /= p.sum();
      RVector g(n);
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += p(k) * std::norm(e.vectors(i, k));
        g(i) = -static_cast<double>(n) * s;
      }
      g.array() -= g.mean();
      v -= step * g;
      best = std::min(best, exact(v));
    }
  }
  return best;
}

}  // namespace vbg::test
