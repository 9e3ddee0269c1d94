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

#include "vbg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "vbg/errors.hpp"

namespace vbg {

namespace {

constexpr std::uint64_t kSubsetSubstream = 0x5EED'0000'0000ULL;
constexpr std::uint64_t kCandidateStride = std::uint64_t{1} << 24;

IndexSet complement(const IndexSet& s, std::size_t m) {
  IndexSet c;
  for (std::size_t i = 0, k = 0; i < m; ++i) {
    if (k < s.size() && s[k] == i) {
      ++k;
    } else {
      c.push_back(i);
    }
  }
  return c;
}

// Fill up to q entries with the lowest unused indices.
IndexSet pad_support(IndexSet s, std::size_t q, std::size_t m) {
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; s.size() < q && i < m; ++i) {
    if (!std::binary_search(s.begin(), s.end(), i)) {
      s.insert(std::upper_bound(s.begin(), s.end(), i), i);
    }
  }
  return s;
}

std::vector<double> pick(const std::vector<double>& v, const IndexSet& idx) {
  std::vector<double> out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = v[idx[k]];
  return out;
}

double principal_value(const HermitianMatrix& a) { return eigenvalues(a)(0); }

}  // namespace

OracleResult diagonal_admission_oracle(const AdmissionInstance& inst) {
  inst.validate();
  if (inst.R.off_diagonal_norm() > 1e-12 * inst.R.trace()) {
    throw ValidationError("diagonal_admission_oracle: R is not diagonal");
  }
  const std::size_t m = inst.M();
  std::vector<double> d(m);
  for (std::size_t i = 0; i < m; ++i) d[i] = inst.R.diag(i);
  OracleResult r;
  r.support = top_q(d, inst.Q);
  CVector w = CVector::Zero(m);
  for (std::size_t i : r.support) {
    w(i) = std::sqrt(inst.P);
    r.value += inst.P * d[i];
  }
  r.w = {w};
  r.exact = true;
  r.upper_bound = r.value;
  return r;
}

OracleResult rank1_admission_oracle(const AdmissionInstance& inst) {
  inst.validate();
  const EigenDecomposition ed = eig_hermitian(inst.R);
  if (ed.values.size() > 1 && ed.values(1) > 1e-9 * ed.values(0)) {
    throw ValidationError("rank1_admission_oracle: R is not rank one");
  }
  const std::size_t m = inst.M();
  const CVector h = std::sqrt(std::max(ed.values(0), 0.0)) * ed.vectors.col(0);
  // |h_i| from the diagonal so exact ties stay ties; phases from h
  std::vector<double> mag(m);
  for (std::size_t i = 0; i < m; ++i) mag[i] = std::sqrt(std::max(inst.R.diag(i), 0.0));
  OracleResult r;
  r.support = top_q(mag, inst.Q);
  CVector w = CVector::Zero(m);
  double sum = 0.0;
  for (std::size_t i : r.support) {
    if (std::abs(h(i)) > 0.0) w(i) = std::sqrt(inst.P) * h(i) / std::abs(h(i));
    sum += mag[i];
  }
  r.w = {w};
  r.value = inst.P * sum * sum;
  r.exact = true;
  r.upper_bound = r.value;
  return r;
}

OracleResult diagonal_relay_oracle(const RelayInstance& inst, double rel_tol) {
  inst.validate();
  const double scale = inst.S.trace() + inst.F.trace();
  if (inst.S.off_diagonal_norm() > 1e-12 * scale || inst.F.off_diagonal_norm() > 1e-12 * scale) {
    throw ValidationError("diagonal_relay_oracle: S and F must be diagonal");
  }
  const std::size_t m = inst.M();
  const std::vector<double> u = inst.gain_caps();
  // Best achievable sum of (s_i - t f_i) u_i over at most Q positive terms.
  auto best_set = [&](double t, double* total) {
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = (inst.S.diag(i) - t * inst.F.diag(i)) * u[i];
    IndexSet top = top_q(g, inst.Q);
    IndexSet pos;
    double s = 0.0;
    for (std::size_t i : top) {
      if (g[i] > 0.0) {
        pos.push_back(i);
        s += g[i];
      }
    }
    *total = s;
    return pos;
  };
  double hi = 0.0;
  for (std::size_t i = 0; i < m; ++i) hi += inst.S.diag(i) * u[i];
  hi /= inst.sigma_n2;
  double lo = 0.0;
  IndexSet at_lo;
  {
    double tot = 0.0;
    at_lo = best_set(0.0, &tot);
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    double tot = 0.0;
    IndexSet s = best_set(mid, &tot);
    if (tot >= mid * inst.sigma_n2) {
      lo = mid;
      at_lo = std::move(s);
    } else {
      hi = mid;
    }
  }
  OracleResult r;
  CVector w = CVector::Zero(m);
  for (std::size_t i : at_lo) w(i) = std::sqrt(u[i]);
  r.support = pad_support(at_lo, inst.Q, m);
  r.w = {w};
  r.value = relay_snr(inst, w);
  r.exact = true;
  r.upper_bound = hi;
  return r;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return static_cast<std::size_t>(std::llround(c));
}

BruteForceResult brute_force_admission(const AdmissionInstance& inst, const RoundingConfig& cfg) {
  inst.validate();
  cfg.validate();
  const std::size_t m = inst.M();
  const std::size_t q = inst.Q;
  if (binomial(m, q) > kBruteForceBudget) {
    throw ValidationError("brute_force_admission: C(M,Q) exceeds the enumeration budget");
  }
  if (cfg.L < kBruteForceMinL) {
    throw ValidationError("brute_force_admission: needs L >= 2000");
  }
  BruteForceResult out;
  out.best.value = -1.0;
  out.best.upper_bound = 0.0;
  IndexSet s(q);
  std::iota(s.begin(), s.end(), 0);
  for (;;) {
    const HermitianMatrix r_s = principal_submatrix(inst.R, s);
    const SdpSolution y = solve_sdp(build_sdp_qcqp(r_s, inst.P), cfg.sdp);
    const RandomizeAndPick rp =
        randomize_and_pick(y.X, r_s, inst.P, cfg, 1 + out.supports * kCandidateStride);
    out.best.upper_bound = std::max(*out.best.upper_bound, y.primal_value);
    if (rp.value > out.best.value) {
      out.best.value = rp.value;
      out.best.support = s;
      out.best.w = {scatter(rp.w, s, m)};
    }
    ++out.supports;
    // next combination in lexicographic order
    std::size_t k = q;
    while (k > 0 && s[k - 1] == m - q + k - 1) --k;
    if (k == 0) break;
    ++s[k - 1];
    for (std::size_t j = k; j < q; ++j) s[j] = s[j - 1] + 1;
  }
  out.best.value = inst.R.quad_form(out.best.w[0]);
  return out;
}

CVector pca_beamformer(const HermitianMatrix& r_s, double p) {
  const EigenDecomposition ed = eig_hermitian(r_s);
  CVector v = ed.vectors.col(0);
  const double peak = v.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) throw DegenerateError("pca_beamformer: zero eigenvector");
  return v * (std::sqrt(p) / peak);
}

OracleResult spca_select(const AdmissionInstance& inst) {
  inst.validate();
  const std::size_t m = inst.M();
  const std::size_t q = inst.Q;
  IndexSet s(m);
  std::iota(s.begin(), s.end(), 0);
  // backward elimination
  while (s.size() > q) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t drop = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      IndexSet t = s;
      t.erase(t.begin() + static_cast<std::ptrdiff_t>(k));
      const double v = principal_value(principal_submatrix(inst.R, t));
      if (v > best) {
        best = v;
        drop = k;
      }
    }
    s.erase(s.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  // single-swap refinement
  double current = principal_value(principal_submatrix(inst.R, s));
  for (std::size_t pass = 0; pass < m * m; ++pass) {
    const IndexSet out_set = complement(s, m);
    double best = current;
    IndexSet best_set;
    for (std::size_t k = 0; k < s.size(); ++k) {
      for (std::size_t j : out_set) {
        IndexSet t = s;
        t[k] = j;
        std::sort(t.begin(), t.end());
        const double v = principal_value(principal_submatrix(inst.R, t));
        if (v > best * (1.0 + 1e-12)) {
          best = v;
          best_set = t;
        }
      }
    }
    if (best_set.empty()) break;
    s = best_set;
    current = best;
  }
  OracleResult r;
  r.support = s;
  r.w = {scatter(pca_beamformer(principal_submatrix(inst.R, s), inst.P), s, m)};
  r.value = inst.R.quad_form(r.w[0]);
  return r;
}

IndexSet random_subset(std::size_t m, std::size_t q, RngSeed seed) {
  if (q > m) throw ValidationError("random_subset: q > m");
  CounterRng rng(seed, kSubsetSubstream);
  IndexSet idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < q; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(q);
  std::sort(idx.begin(), idx.end());
  return idx;
}

OracleResult random_admission_baseline(const AdmissionInstance& inst, PartitionMode mode,
                                       const RoundingConfig& cfg) {
  inst.validate();
  const std::size_t m = inst.M();
  OracleResult r;
  r.support = random_subset(m, inst.Q, cfg.seed);
  const HermitianMatrix r_s = principal_submatrix(inst.R, r.support);
  if (mode == PartitionMode::RPca) {
    r.w = {scatter(pca_beamformer(r_s, inst.P), r.support, m)};
  } else {
    const SdpSolution y = solve_sdp(build_sdp_qcqp(r_s, inst.P), cfg.sdp);
    const RandomizeAndPick rp = randomize_and_pick(y.X, r_s, inst.P, cfg, 1);
    r.w = {scatter(rp.w, r.support, m)};
    r.upper_bound = y.primal_value;
  }
  r.value = inst.R.quad_form(r.w[0]);
  return r;
}

OracleResult random_partition_baseline(const SchedulingInstance& inst, PartitionMode mode,
                                       const RoundingConfig& cfg) {
  inst.validate();
  cfg.validate();
  const std::size_t m = inst.M();
  OracleResult r;
  r.support = random_subset(m, inst.Q, cfg.seed);
  const std::array<IndexSet, 2> slots{r.support, complement(r.support, m)};
  if (mode == PartitionMode::RPca) {
    for (const IndexSet& s : slots) {
      r.w.push_back(s.empty() ? CVector(CVector::Zero(m))
                              : scatter(pca_beamformer(principal_submatrix(inst.R, s), inst.P),
                                        s, m));
    }
  } else {
    std::array<std::vector<double>, 2> vals;
    std::array<std::vector<CVector>, 2> ws;
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < 2; ++k) {
      if (slots[k].empty()) {
        vals[k].assign(cfg.L, 0.0);
        ws[k].assign(cfg.L, CVector::Zero(m));
        bound = 0.0;
        continue;
      }
      const HermitianMatrix r_k = principal_submatrix(inst.R, slots[k]);
      const SdpSolution y = solve_sdp(build_sdp_qcqp(r_k, inst.P), cfg.sdp);
      bound = std::min(bound, y.primal_value);
      const std::vector<double> caps(slots[k].size(), inst.P);
      const Randomization rnd = randomize(y.X, r_k, caps, cfg, 1 + k * (std::uint64_t{1} << 32));
      vals[k] = rnd.surrogate;
      for (const CVector& w : rnd.batch.w) ws[k].push_back(scatter(w, slots[k], m));
    }
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t l = 0; l < cfg.L; ++l) {
      const double v = std::min(vals[0][l], vals[1][l]);
      if (v > best_v) {
        best_v = v;
        best = l;
      }
    }
    r.w = {ws[0][best], ws[1][best]};
    r.upper_bound = bound;
  }
  r.slot_values = {inst.R.quad_form(r.w[0]), inst.R.quad_form(r.w[1])};
  r.value = std::min(r.slot_values[0], r.slot_values[1]);
  return r;
}

OracleResult relay_fixed_support(const RelayInstance& inst, const IndexSet& support,
                                 const RoundingConfig& cfg, std::uint64_t first_substream) {
  const std::size_t m = inst.M();
  const HermitianMatrix s_t = principal_submatrix(inst.S, support);
  const HermitianMatrix f_t = principal_submatrix(inst.F, support);
  const std::vector<double> u_t = pick(inst.gain_caps(), support);
  const FixedSupportFractional fq = fractional_qcqp(s_t, f_t, inst.sigma_n2, u_t, cfg.sdp);
  const Randomization rnd = randomize(fq.Y, s_t - f_t * fq.value, u_t, cfg, first_substream);
  std::size_t best = 0;
  double best_v = -1.0;
  for (std::size_t l = 0; l < cfg.L; ++l) {
    const CVector& w = rnd.batch.w[l];
    const double v = s_t.quad_form(w) / (inst.sigma_n2 + f_t.quad_form(w));
    if (v > best_v) {
      best_v = v;
      best = l;
    }
  }
  OracleResult r;
  r.support = pad_support(support, inst.Q, m);
  r.w = {scatter(rnd.batch.w[best], support, m)};
  r.value = relay_snr(inst, r.w[0]);
  r.upper_bound = fq.value;
  return r;
}

OracleResult random_sdr_relay(const RelayInstance& inst, const RoundingConfig& cfg) {
  inst.validate();
  cfg.validate();
  return relay_fixed_support(inst, random_subset(inst.M(), inst.Q, cfg.seed), cfg);
}

namespace {

OracleResult aligned_full_power(const RelayInstance& inst, const IndexSet& support) {
  const std::size_t m = inst.M();
  const HermitianMatrix s_t = principal_submatrix(inst.S, support);
  const CVector v = eig_hermitian(s_t).vectors.col(0);
  const std::vector<double> u = inst.gain_caps();
  CVector w = CVector::Zero(m);
  for (std::size_t k = 0; k < support.size(); ++k) {
    const double mag = std::abs(v(k));
    const Complex phase = mag > 0.0 ? v(k) / mag : Complex(1.0, 0.0);
    w(support[k]) = std::sqrt(u[support[k]]) * phase;
  }
  OracleResult r;
  r.support = pad_support(support, inst.Q, m);
  r.w = {w};
  r.value = relay_snr(inst, w);
  return r;
}

}  // namespace

OracleResult greedy_relay(const RelayInstance& inst, const RoundingConfig& cfg, GreedyInner inner) {
  inst.validate();
  cfg.validate();
  const std::size_t m = inst.M();
  IndexSet chosen;
  OracleResult current;
  current.w = {CVector::Zero(m)};
  current.value = 0.0;
  for (std::size_t step = 0; chosen.size() < inst.Q; ++step) {
    OracleResult best;
    best.value = current.value;
    bool improved = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (std::binary_search(chosen.begin(), chosen.end(), j)) continue;
      IndexSet t = chosen;
      t.insert(std::upper_bound(t.begin(), t.end(), j), j);
      OracleResult cand = inner == GreedyInner::RSdr
                              ? relay_fixed_support(inst, t, cfg, 1 + (step * m + j) * kCandidateStride)
                              : aligned_full_power(inst, t);
      if (cand.value > best.value * (1.0 + 1e-12) && cand.value > 0.0) {
        best = std::move(cand);
        best.support = t;
        improved = true;
      }
    }
    if (!improved) break;
    chosen = best.support;
    current = std::move(best);
  }
  current.support = pad_support(chosen, inst.Q, m);
  current.upper_bound.reset();
  current.exact = false;
  return current;
}

OracleResult random_ged_relay(const RelayInstance& inst, RngSeed seed, GedVariant variant) {
  inst.validate();
  const std::size_t m = inst.M();
  const IndexSet t = random_subset(m, inst.Q, seed);
  const HermitianMatrix s_t = principal_submatrix(inst.S, t);
  const HermitianMatrix f_t = principal_submatrix(inst.F, t);
  CVector v;
  if (variant == GedVariant::Pencil) {
    v = generalized_principal_eigvec(s_t, f_t);
  } else {
    Eigen::FullPivLU<CMatrix> lu(s_t.mat());
    if (!lu.isInvertible()) throw DegenerateError("random_ged_relay: S[T] is singular");
    Eigen::ComplexEigenSolver<CMatrix> es(lu.solve(f_t.mat()));
    Eigen::Index k = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&k);
    v = es.eigenvectors().col(k);
  }
  // SNR along a fixed direction grows with the scale, so use the largest
  // feasible one: the first per-relay cap to bind.
  const std::vector<double> u = inst.gain_caps();
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::abs(v(k)) > 0.0) c = std::min(c, std::sqrt(u[t[k]]) / std::abs(v(k)));
  }
  if (!std::isfinite(c)) throw DegenerateError("random_ged_relay: zero direction");
  OracleResult r;
  r.support = t;
  r.w = {scatter(CVector(v * c), t, m)};
  r.value = relay_snr(inst, r.w[0]);
  return r;
}

double oracle_violation(const AdmissionInstance& inst, const OracleResult& r) {
  if (r.w.size() != 1) return std::numeric_limits<double>::infinity();
  const std::vector<double> u(inst.M(), inst.P);
  return power_violation(u, r.support, inst.Q, r.w[0]);
}

double oracle_violation(const SchedulingInstance& inst, const OracleResult& r) {
  if (r.w.size() != 2) return std::numeric_limits<double>::infinity();
  const std::size_t m = inst.M();
  const std::vector<double> u(m, inst.P);
  return std::max(power_violation(u, r.support, inst.Q, r.w[0]),
                  power_violation(u, complement(r.support, m), m - inst.Q, r.w[1]));
}

double oracle_violation(const RelayInstance& inst, const OracleResult& r) {
  if (r.w.size() != 1) return std::numeric_limits<double>::infinity();
  return power_violation(inst.gain_caps(), r.support, inst.Q, r.w[0]);
}

}  // namespace vbg
