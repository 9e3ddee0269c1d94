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
#include "vbg/baselines.hpp"
#include "vbg/channel.hpp"

using namespace vbg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RoundingConfig config(std::size_t l = 200, std::uint64_t stream = 0) {
  RoundingConfig c;
  c.L = l;
  c.seed = RngSeed{1, stream};
  return c;
}

// Linear-fractional objective over a box is maximized at a vertex, so every
// support's optimum is found by enumerating 0/cap per selected node.
double diagonal_relay_enumeration(const RelayInstance& inst) {
  const std::size_t m = inst.M();
  const auto u = inst.gain_caps();
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > inst.Q) continue;
    double num = 0.0, den = inst.sigma_n2;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        num += inst.S.diag(i) * u[i];
        den += inst.F.diag(i) * u[i];
      }
    }
    best = std::max(best, num / den);
  }
  return best;
}

RelayInstance random_diagonal_relay(std::uint64_t seed, std::size_t m, std::size_t q) {
  CounterRng rng(RngSeed{seed, 0}, 9);
  std::vector<double> s(m), f(m), c(m);
  for (std::size_t i = 0; i < m; ++i) {
    s[i] = rng.uniform(0.1, 3.0);
    f[i] = rng.uniform(0.05, 1.5);
    c[i] = rng.uniform(0.5, 2.0);
  }
  return RelayInstance{test::diag_of(s), test::diag_of(f), 1.0, c, 2.0, q};
}

}  // namespace

TEST_CASE("diagonal admission oracle") {
  AdmissionInstance inst{test::diag_of({3, 1, 2}), 2.0, 2, std::nullopt};
  const auto r = diagonal_admission_oracle(inst);
  CHECK(r.exact);
  CHECK(r.support == IndexSet{0, 2});
  CHECK_THAT(r.value, WithinRel(10.0, 1e-14));
  CHECK(oracle_violation(inst, r) <= 1e-12);

  inst.Q = 3;
  CHECK_THAT(diagonal_admission_oracle(inst).value, WithinRel(12.0, 1e-14));

  AdmissionInstance ties{test::diag_of({1, 2, 2, 2}), 1.0, 2, std::nullopt};
  const auto t = diagonal_admission_oracle(ties);
  CHECK(t.support == IndexSet{1, 2});
  CHECK_THAT(t.value, WithinRel(4.0, 1e-14));

  CHECK_THROWS_AS(diagonal_admission_oracle(AdmissionInstance{test::random_psd(3, 3, 1), 1.0, 1, {}}),
                  ValidationError);
}

TEST_CASE("rank-one admission oracle") {
  CVector h(3);
  h << 2, 1, 1;
  AdmissionInstance inst{HermitianMatrix::outer(h), 1.0, 2, std::nullopt};
  const auto r = rank1_admission_oracle(inst);
  CHECK(r.exact);
  CHECK_THAT(r.value, WithinRel(9.0, 1e-12));
  CHECK(r.support == IndexSet{0, 1});
  CHECK(oracle_violation(inst, r) <= 1e-12);

  CVector single = CVector::Zero(4);
  single(2) = Complex(0.0, 3.0);
  AdmissionInstance one{HermitianMatrix::outer(single), 0.5, 2, std::nullopt};
  CHECK_THAT(rank1_admission_oracle(one).value, WithinRel(4.5, 1e-12));
  CHECK(rank1_admission_oracle(one).support.size() == 2);

  const CVector g = test::random_complex(5, 1, 3).col(0);
  const CVector rotated = g * std::polar(1.0, 1.234);
  AdmissionInstance a{HermitianMatrix::outer(g), 1.0, 2, std::nullopt};
  AdmissionInstance b{HermitianMatrix::outer(rotated), 1.0, 2, std::nullopt};
  CHECK_THAT(rank1_admission_oracle(a).value, WithinRel(rank1_admission_oracle(b).value, 1e-10));

  CHECK_THROWS_AS(rank1_admission_oracle(AdmissionInstance{HermitianMatrix::identity(3), 1.0, 1, {}}),
                  ValidationError);
}

TEST_CASE("diagonal relay oracle") {
  SECTION("hand example") {
    RelayInstance inst{test::diag_of({2, 1}), test::diag_of({1, 1}), 1.0, {1.0, 1.0}, 1.0, 1};
    const auto r = diagonal_relay_oracle(inst);
    CHECK(r.support == IndexSet{0});
    CHECK_THAT(r.value, WithinRel(1.0, 1e-8));
  }
  SECTION("no forwarded noise reduces to admission") {
    RelayInstance inst{test::diag_of({2, 5, 1}), HermitianMatrix::zero(3), 2.0, {1.0, 1.0, 1.0}, 1.0, 2};
    CHECK_THAT(diagonal_relay_oracle(inst).value, WithinRel((5.0 + 2.0) / 2.0, 1e-8));
  }
  SECTION("agrees with vertex enumeration") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto inst = random_diagonal_relay(seed, 6, 3);
      const auto r = diagonal_relay_oracle(inst);
      CHECK_THAT(r.value, WithinRel(diagonal_relay_enumeration(inst), 1e-7));
      CHECK_THAT(relay_snr(inst, r.w[0]), WithinRel(r.value, 1e-7));
      CHECK(oracle_violation(inst, r) <= 1e-12);
    }
  }
}

TEST_CASE("binomial") {
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(50, 0) == 1);
  CHECK(binomial(3, 4) == 0);
}

TEST_CASE("brute force") {
  auto cfg = config(kBruteForceMinL);
  SECTION("single support equals the inner pipeline") {
    CellularConfig c;
    c.M = 3;
    c.Q = 3;
    const auto inst = gen_cellular(c, {1, 0});
    const auto bf = brute_force_admission(inst, cfg);
    CHECK(bf.supports == 1);
    const auto r = randomize_and_pick(HermitianMatrix::identity(1), HermitianMatrix::identity(1), 1.0, cfg);
    (void)r;
    CHECK(bf.best.value <= *bf.best.upper_bound * (1 + 1e-8));
  }
  SECTION("enumerates every subset and meets the diagonal optimum") {
    AdmissionInstance inst{test::diag_of({0.5, 2, 1, 4, 3, 0.1}), 1.0, 3, std::nullopt};
    const auto bf = brute_force_admission(inst, cfg);
    CHECK(bf.supports == 20);
    CHECK_THAT(bf.best.value, WithinRel(diagonal_admission_oracle(inst).value, 1e-6));
    CHECK(oracle_violation(inst, bf.best) <= 1e-8);
  }
  SECTION("limits") {
    AdmissionInstance big{HermitianMatrix::identity(30), 1.0, 15, std::nullopt};
    CHECK_THROWS_AS(brute_force_admission(big, cfg), ValidationError);
    AdmissionInstance small{HermitianMatrix::identity(4), 1.0, 2, std::nullopt};
    CHECK_THROWS_AS(brute_force_admission(small, config(100)), ValidationError);
  }
}

TEST_CASE("sparse PCA selection") {
  AdmissionInstance diag{test::diag_of({3, 1, 2, 5}), 1.0, 2, std::nullopt};
  // one eigenvector of a diagonal block powers a single node
  const auto s = spca_select(diag);
  CHECK(std::binary_search(s.support.begin(), s.support.end(), 3));
  CHECK_THAT(s.value, WithinRel(5.0, 1e-12));
  CHECK(oracle_violation(diag, s) <= 1e-12);

  CellularConfig c;
  c.M = 10;
  c.Q = 10;
  const auto all = gen_cellular(c, {2, 0});
  const auto full = spca_select(all);
  const CVector pca = pca_beamformer(all.R, all.P);
  CHECK_THAT(full.value, WithinRel(all.R.quad_form(pca), 1e-10));

  c.Q = 4;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto inst = gen_cellular(c, {2, t});
    const auto r = spca_select(inst);
    CHECK(r.support.size() == 4);
    CHECK(oracle_violation(inst, r) <= 1e-12);
  }
}

TEST_CASE("PCA beamformer scaling") {
  const auto r = test::random_psd(4, 2, 7);
  const CVector w = pca_beamformer(r, 0.4);
  CHECK_THAT(w.cwiseAbs2().maxCoeff(), WithinRel(0.4, 1e-12));
}

TEST_CASE("random subsets") {
  const auto s = random_subset(10, 4, {3, 2});
  CHECK(s.size() == 4);
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
  CHECK(random_subset(10, 4, {3, 2}) == s);
  std::size_t first = 0;
  const std::size_t n = 4000;
  for (std::uint64_t t = 0; t < n; ++t) first += random_subset(2, 1, {5, t})[0] == 0;
  CHECK_THAT(static_cast<double>(first) / n, WithinAbs(0.5, 0.03));
}

TEST_CASE("random partition baselines") {
  CellularConfig c;
  c.M = 10;
  c.Q = 3;
  for (std::uint64_t t = 0; t < 3; ++t) {
    const auto adm = gen_cellular(c, {1, t});
    const auto sch = gen_cellular_scheduling(c, {1, t});
    for (auto mode : {PartitionMode::RPca, PartitionMode::RSdr}) {
      const auto a = random_admission_baseline(adm, mode, config(200, t));
      CHECK(oracle_violation(adm, a) <= 1e-8);
      const auto b = random_partition_baseline(sch, mode, config(200, t));
      CHECK(oracle_violation(sch, b) <= 1e-8);
      CHECK_THAT(b.value, WithinRel(std::min(b.slot_values[0], b.slot_values[1]), 1e-12));
      if (mode == PartitionMode::RSdr) {
        REQUIRE(b.upper_bound.has_value());
        CHECK(b.value <= *b.upper_bound * (1 + 1e-8));
      }
    }
  }
}

TEST_CASE("relay baselines") {
  RelayConfig rc;
  rc.M = 8;
  rc.Q = 4;
  for (std::uint64_t t = 0; t < 3; ++t) {
    const auto inst = gen_relay(rc, {1, t});
    const double v3 = charnes_cooper_fractional(inst).v3_sdp;
    const auto sdr = random_sdr_relay(inst, config(200, t));
    const auto greedy = greedy_relay(inst, config(50, t));
    const auto greedy_fp = greedy_relay(inst, config(50, t), GreedyInner::FullPowerAligned);
    const auto ged = random_ged_relay(inst, {1, t});
    const auto ged_lit = random_ged_relay(inst, {1, t}, GedVariant::LiteralInverse);
    for (const auto* r : {&sdr, &greedy, &greedy_fp, &ged, &ged_lit}) {
      CHECK(oracle_violation(inst, *r) <= 1e-8);
      CHECK(r->value <= v3 * (1 + 1e-6));
      CHECK_THAT(relay_snr(inst, r->w[0]), WithinRel(r->value, 1e-10));
    }
  }
  SECTION("single relay") {
    RelayInstance one{test::diag_of({2.0}), test::diag_of({0.5}), 1.0, {3.0}, 1.5, 1};
    const double full = 2.0 * 0.5 / (1.0 + 0.25);
    CHECK_THAT(random_ged_relay(one, {1, 0}).value, WithinRel(full, 1e-12));
    CHECK_THAT(greedy_relay(one, config(50)).value, WithinRel(full, 1e-8));
  }
  SECTION("diagonal instances stay below the exact optimum") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto inst = random_diagonal_relay(seed, 6, 3);
      const double exact = diagonal_relay_oracle(inst).value;
      CHECK(greedy_relay(inst, config(50)).value <= exact * (1 + 1e-6));
      CHECK(random_sdr_relay(inst, config()).value <= exact * (1 + 1e-6));
      CHECK(solve_relay(inst, config()).value <= exact * (1 + 1e-6));
    }
  }
}

TEST_CASE("exact oracles dominate the rounding output") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    CounterRng rng(RngSeed{seed, 0}, 0);
    std::vector<double> d(7);
    for (auto& v : d) v = rng.uniform(0.1, 4.0);
    AdmissionInstance inst{test::diag_of(d), 1.0, 3, std::nullopt};
    CHECK(solve_admission(inst, config()).value <= diagonal_admission_oracle(inst).value * (1 + 1e-6));
    const CVector h = test::random_complex(7, 1, seed).col(0);
    AdmissionInstance r1{HermitianMatrix::outer(h), 1.0, 3, std::nullopt};
    CHECK(solve_admission(r1, config()).value <= rank1_admission_oracle(r1).value * (1 + 1e-6));
  }
}
