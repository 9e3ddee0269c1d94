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

#include <algorithm>
#include <cmath>
#include <vector>

#include <catch_amalgamated.hpp>

#include "support.hpp"
#include "vbg/hermitian.hpp"

using namespace vbg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Characteristic polynomial coefficients (monic, highest first) by
// Faddeev-LeVerrier.
std::vector<Complex> char_poly(const CMatrix& a) {
  const auto n = a.rows();
  std::vector<Complex> c(n + 1);
  c[0] = 1.0;
  CMatrix mk = CMatrix::Zero(n, n);
  const CMatrix id = CMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = a * mk + c[k - 1] * id;
    c[k] = -(a * mk).trace() / static_cast<double>(k);
  }
  return c;
}

// Roots by Durand-Kerner iteration.
std::vector<double> poly_real_roots(const std::vector<Complex>& c) {
  const std::size_t n = c.size() - 1;
  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = std::pow(Complex(0.4, 0.9), static_cast<double>(k));
  double scale = 1.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  for (auto& v : z) v *= scale;
  for (int it = 0; it < 5000; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      Complex num = c[0];
      for (std::size_t j = 1; j <= n; ++j) num = num * z[k] + c[j];
      Complex den = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) den *= (z[k] - z[j]);
      z[k] -= num / den;
    }
  }
  std::vector<double> out;
  for (const auto& v : z) out.push_back(v.real());
  std::sort(out.rbegin(), out.rend());
  return out;
}

Complex cofactor_det(const CMatrix& a) {
  const auto n = a.rows();
  if (n == 1) return a(0, 0);
  Complex d = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    CMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = a(r, c);
    d += ((j % 2) ? -1.0 : 1.0) * a(0, j) * cofactor_det(minor);
  }
  return d;
}

double rayleigh(const HermitianMatrix& a, const HermitianMatrix& b, const CVector& v) {
  return a.quad_form(v) / b.quad_form(v);
}

}  // namespace

TEST_CASE("eigenvalues of small fixed matrices") {
  const auto d = eigenvalues(test::diag_of({3, 1, 2}));
  CHECK(d(0) == 3.0);
  CHECK(d(1) == 2.0);
  CHECK(d(2) == 1.0);

  RMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto s = eigenvalues(HermitianMatrix(swap));
  CHECK_THAT(s(0), WithinAbs(1.0, 1e-14));
  CHECK_THAT(s(1), WithinAbs(-1.0, 1e-14));

  CMatrix pauli_y(2, 2);
  pauli_y << 0, Complex(0, -1), Complex(0, 1), 0;
  const auto y = eigenvalues(HermitianMatrix(pauli_y));
  CHECK_THAT(y(0), WithinAbs(1.0, 1e-14));
  CHECK_THAT(y(1), WithinAbs(-1.0, 1e-14));
}

TEST_CASE("eigenvalues match characteristic polynomial roots") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const auto a = test::random_hermitian(n, seed);
    const auto ev = eigenvalues(a);
    const auto roots = poly_real_roots(char_poly(a.mat()));
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(ev(k) - roots[k]) <= 1e-8 * scale);
  }
}

TEST_CASE("decomposition reconstructs, is unitary and preserves trace and determinant") {
  for (std::uint64_t seed = 11; seed <= 16; ++seed) {
    const std::size_t n = 1 + seed % 6;
    const auto a = test::random_hermitian(n, seed);
    const auto e = eig_hermitian(a);
    const CMatrix rec = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    CHECK((rec - a.mat()).norm() <= 1e-10 * (1 + a.frobenius_norm()));
    CHECK((e.vectors.adjoint() * e.vectors - CMatrix::Identity(n, n)).norm() <= 1e-12);
    for (std::size_t k = 1; k < n; ++k) CHECK(e.values(k - 1) >= e.values(k));
    CHECK_THAT(e.values.sum(), WithinAbs(a.trace(), 1e-10 * (1 + a.frobenius_norm())));
    const Complex det = cofactor_det(a.mat());
    const double prod = e.values.prod();
    CHECK(std::abs(det.imag()) <= 1e-9 * (1 + std::abs(det)));
    CHECK(std::abs(det.real() - prod) <= 1e-9 * (1 + std::abs(prod)));
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  CMatrix m(2, 2);
  m << 1, 2, 3, 4;
  CHECK_THROWS_AS(HermitianMatrix(m), ValidationError);
  CMatrix imag_diag(1, 1);
  imag_diag << Complex(1, 1);
  CHECK_THROWS_AS(HermitianMatrix(imag_diag), ValidationError);
}

TEST_CASE("psd_factor") {
  SECTION("identity") {
    const auto f = psd_factor(HermitianMatrix::identity(3));
    CHECK(f.rank() == 3);
    CHECK((f.delta.adjoint() * f.delta - CMatrix::Identity(3, 3)).norm() <= 1e-14);
  }
  SECTION("rank one") {
    CVector v(2);
    v << 1, 1;
    const auto f = psd_factor(HermitianMatrix::outer(v));
    REQUIRE(f.rank() == 1);
    CHECK(std::abs(std::abs(f.delta(0, 0)) - 1.0) <= 1e-14);
    CHECK(std::abs(std::abs(f.delta(0, 1)) - 1.0) <= 1e-14);
  }
  SECTION("tiny negative eigenvalue is clipped") {
    const auto f = psd_factor(test::diag_of({1.0, -1e-12}));
    CHECK(f.rank() == 1);
  }
  SECTION("clearly indefinite input throws") {
    CHECK_THROWS_AS(psd_factor(test::diag_of({1.0, -1e-3})), NotPsdError);
  }
  SECTION("refactoring is stable") {
    const auto y = test::random_psd(5, 3, 4);
    const auto f = psd_factor(y);
    CHECK(f.rank() == 3);
    const HermitianMatrix y2(CMatrix(f.delta.adjoint() * f.delta));
    CHECK((y2.mat() - y.mat()).norm() <= 1e-10 * y.frobenius_norm());
    const auto f2 = psd_factor(y2);
    CHECK(((f2.delta.adjoint() * f2.delta) - y.mat()).norm() <= 1e-10 * y.frobenius_norm());
  }
}

TEST_CASE("generalized principal eigenvector") {
  SECTION("B = I gives the principal eigenvector") {
    const auto v = generalized_principal_eigvec(test::diag_of({1, 4, 2}), HermitianMatrix::identity(3));
    CHECK(std::abs(v(1)) > 0.999 * v.norm());
  }
  SECTION("diagonal pencil picks the largest ratio") {
    const auto v = generalized_principal_eigvec(test::diag_of({2, 3}), test::diag_of({1, 6}));
    CHECK(std::abs(v(0)) > 0.999 * v.norm());
  }
  SECTION("singular B") {
    CHECK_THROWS_AS(
        generalized_principal_eigvec(HermitianMatrix::identity(2), test::diag_of({1, 0})),
        DegenerateError);
  }
  SECTION("matches random search with local refinement") {
    for (std::uint64_t seed = 21; seed <= 23; ++seed) {
      const auto a = test::random_hermitian(4, seed);
      HermitianMatrix b(CMatrix(test::random_psd(4, 4, seed + 100).mat() +
                                0.5 * CMatrix::Identity(4, 4)));
      const CVector v = generalized_principal_eigvec(a, b);
      const double best_method = rayleigh(a, b, v);

      CounterRng rng(RngSeed{seed, 3}, 0);
      CVector best(4);
      double best_val = -1e300;
      for (int k = 0; k < 1000000; ++k) {
        CVector x(4);
        for (int i = 0; i < 4; ++i) x(i) = Complex(rng.normal(), rng.normal());
        const double val = rayleigh(a, b, x);
        if (val > best_val) {
          best_val = val;
          best = x / x.norm();
        }
      }
      for (double step = 0.1; step > 1e-7; step *= 0.7) {
        for (int k = 0; k < 400; ++k) {
          CVector x = best;
          for (int i = 0; i < 4; ++i) x(i) += step * Complex(rng.normal(), rng.normal());
          const double val = rayleigh(a, b, x);
          if (val > best_val) {
            best_val = val;
            best = x / x.norm();
          }
        }
      }
      CHECK(best_val <= best_method + 1e-9 * std::abs(best_method));
      CHECK(std::abs(best_val - best_method) <= 1e-3 * std::max(1.0, std::abs(best_method)));
    }
  }
}

TEST_CASE("principal submatrix and block diagonal") {
  const auto a = test::random_hermitian(4, 5);
  const std::vector<std::size_t> idx{0, 2};
  const auto s = principal_submatrix(a, idx);
  REQUIRE(s.dim() == 2);
  CHECK(s(0, 1) == a(0, 2));
  CHECK(s(1, 1) == a(2, 2));
  const std::vector<std::size_t> bad{0, 4};
  CHECK_THROWS_AS(principal_submatrix(a, bad), ValidationError);

  const std::vector<HermitianMatrix> blocks{test::diag_of({1}), a};
  const auto bd = block_diagonal(blocks);
  CHECK(bd.dim() == 5);
  CHECK(bd(0, 0) == Complex(1.0));
  CHECK(bd(0, 3) == Complex(0.0));
  CHECK(bd(2, 3) == a(1, 2));
}

TEST_CASE("quadratic forms and trace products") {
  const auto a = test::random_hermitian(3, 9);
  const auto v = test::random_complex(3, 1, 10).col(0).eval();
  const Complex direct = (v.adjoint() * a.mat() * v)(0, 0);
  CHECK_THAT(a.quad_form(v), WithinAbs(direct.real(), 1e-12));
  CHECK_THAT(a.trace_product(HermitianMatrix::outer(v)), WithinAbs(direct.real(), 1e-12));
}
