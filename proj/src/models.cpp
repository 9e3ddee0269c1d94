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

#include "vbg/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vbg {

namespace {

void check_common(const HermitianMatrix& r, double p, std::size_t q, const char* what) {
  if (r.dim() == 0) throw ValidationError(std::string(what) + ": empty channel matrix");
  if (!(p > 0.0) || !std::isfinite(p)) throw ValidationError(std::string(what) + ": P must be > 0");
  if (q < 1 || q > r.dim()) {
    throw ValidationError(std::string(what) + ": Q must satisfy 1 <= Q <= M");
  }
}

void check_psd(const HermitianMatrix& a, const char* what) {
  const RVector ev = eigenvalues(a);
  const double scale = std::max(std::abs(ev(0)), 1e-300);
  if (ev(ev.size() - 1) < -1e-9 * scale) {
    throw NotPsdError(std::string(what) + " is not positive semidefinite");
  }
}

}  // namespace

void AdmissionInstance::validate() const {
  check_common(R, P, Q, "AdmissionInstance");
  check_psd(R, "AdmissionInstance: R");
}

void SchedulingInstance::validate() const {
  check_common(R, P, Q, "SchedulingInstance");
  check_psd(R, "SchedulingInstance: R");
}

std::vector<double> RelayInstance::gain_caps() const {
  std::vector<double> u(caps.size());
  for (std::size_t i = 0; i < caps.size(); ++i) u[i] = P / caps[i];
  return u;
}

void RelayInstance::validate() const {
  check_common(S, P, Q, "RelayInstance");
  if (F.dim() != S.dim()) throw ValidationError("RelayInstance: S and F dimensions differ");
  if (caps.size() != S.dim()) throw ValidationError("RelayInstance: caps length must equal M");
  for (double c : caps) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("RelayInstance: caps must be > 0");
  }
  if (!(sigma_n2 > 0.0)) throw ValidationError("RelayInstance: sigma_n2 must be > 0");
  check_psd(S, "RelayInstance: S");
  check_psd(F, "RelayInstance: F");
}

DiscreteAssignment DiscreteAssignment::from_support(std::size_t m, const IndexSet& support) {
  DiscreteAssignment a;
  a.x0.assign(m + 1, -1);
  a.x0[m] = 1;
  for (std::size_t i : support) {
    if (i >= m) throw ValidationError("DiscreteAssignment: support index out of range");
    a.x0[i] = 1;
  }
  a.support = support;
  std::sort(a.support.begin(), a.support.end());
  a.support.erase(std::unique(a.support.begin(), a.support.end()), a.support.end());
  return a;
}

void DiscreteAssignment::validate(std::size_t q) const {
  if (x0.empty()) throw ValidationError("DiscreteAssignment: empty");
  const std::size_t m = x0.size() - 1;
  for (int v : x0) {
    if (v != 1 && v != -1) throw ValidationError("DiscreteAssignment: entries must be +-1");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const bool in = x0[i] * x0[m] == 1;
    count += in;
    if (in != std::binary_search(support.begin(), support.end(), i)) {
      throw ValidationError("DiscreteAssignment: support does not match x0");
    }
  }
  if (count != q) throw ValidationError("DiscreteAssignment: |support| != Q");
}

HomogenizationMatrices build_homogenization_matrices(std::size_t m, double p) {
  if (m < 1) throw ValidationError("build_homogenization_matrices: M must be >= 1");
  if (!(p > 0.0)) throw ValidationError("build_homogenization_matrices: P must be > 0");
  HomogenizationMatrices h;
  const std::size_t n0 = m + 1;
  for (std::size_t i = 0; i < m; ++i) {
    RMatrix c0 = RMatrix::Zero(n0, n0);
    c0(i, i) = 0.25;
    c0(m, m) = 0.25;
    RMatrix ct = c0;
    c0(i, m) = c0(m, i) = -0.25;
    ct(i, m) = ct(m, i) = 0.25;
    RMatrix c1 = RMatrix::Zero(m, m);
    c1(i, i) = 1.0 / p;
    h.C0.emplace_back(c0);
    h.C0_tilde.emplace_back(ct);
    h.C1.emplace_back(c1);
    const std::array<HermitianMatrix, 2> blocks{h.C0.back(), h.C1.back()};
    h.D.push_back(block_diagonal(blocks));
  }
  RMatrix b0 = RMatrix::Identity(n0, n0);
  for (std::size_t i = 0; i < m; ++i) b0(i, m) = b0(m, i) = 1.0;
  b0(m, m) = static_cast<double>(m);
  h.B0 = HermitianMatrix(b0);
  const std::array<HermitianMatrix, 2> bb{h.B0, HermitianMatrix::zero(m)};
  h.B = block_diagonal(bb);
  return h;
}

SparseHermitian power_constraint(std::size_t m, std::size_t i, double p, double power_weight,
                                 std::size_t dim, std::size_t w_offset, bool tilde) {
  SparseHermitian a(dim);
  a.add(i, i, 0.25);
  a.add(m, m, 0.25);
  a.add(i, m, tilde ? 0.25 : -0.25);
  a.add(w_offset + i, w_offset + i, power_weight / p);
  return a;
}

SparseHermitian cardinality_matrix(std::size_t m, std::size_t dim) {
  SparseHermitian a(dim);
  for (std::size_t i = 0; i < m; ++i) {
    a.add(i, i, 1.0);
    a.add(i, m, 1.0);
  }
  a.add(m, m, static_cast<double>(m));
  return a;
}

namespace {

SparseHermitian unit(std::size_t dim, std::size_t i, std::size_t j = 0, double other = 0.0) {
  SparseHermitian a(dim);
  a.add(i, i, 1.0);
  if (other != 0.0) a.add(j, j, other);
  return a;
}

}  // namespace

SdpProblem build_sdp1(const AdmissionInstance& inst) {
  inst.validate();
  const std::size_t m = inst.M();
  SdpProblem p;
  p.dim = 2 * m + 1;
  p.blocks = {m + 1, m};
  p.objective = SparseHermitian::from_dense(inst.R, m + 1, p.dim);
  for (std::size_t i = 0; i < m; ++i) {
    p.constraints.push_back(
        {power_constraint(m, i, inst.P, 1.0, p.dim, m + 1, false), Sense::LessEqual, 1.0});
  }
  p.constraints.push_back({cardinality_matrix(m, p.dim), Sense::Equal, 4.0 * inst.Q});
  for (std::size_t i = 0; i <= m; ++i) p.constraints.push_back({unit(p.dim, i), Sense::Equal, 1.0});
  return p;
}

SdpProblem build_sdp_qcqp(const HermitianMatrix& objective, std::span<const double> caps) {
  if (caps.size() != objective.dim() || caps.empty()) {
    throw ValidationError("build_sdp_qcqp: caps length must equal dimension");
  }
  SdpProblem p;
  p.dim = objective.dim();
  p.objective = SparseHermitian::from_dense(objective);
  for (std::size_t i = 0; i < p.dim; ++i) {
    if (!(caps[i] > 0.0)) throw ValidationError("build_sdp_qcqp: caps must be > 0");
    p.constraints.push_back({unit(p.dim, i), Sense::LessEqual, caps[i]});
  }
  return p;
}

SdpProblem build_sdp_qcqp(const HermitianMatrix& r_s, double p) {
  const std::vector<double> caps(r_s.dim(), p);
  return build_sdp_qcqp(r_s, caps);
}

MaximinProblem build_sdp2(const SchedulingInstance& inst) {
  inst.validate();
  const std::size_t m = inst.M();
  MaximinProblem mp;
  SdpProblem& p = mp.base;
  p.dim = 3 * m + 1;
  p.blocks = {m + 1, m, m};
  p.objective = SparseHermitian(p.dim);
  for (std::size_t i = 0; i < m; ++i) {
    p.constraints.push_back(
        {power_constraint(m, i, inst.P, 1.0, p.dim, m + 1, false), Sense::LessEqual, 1.0});
  }
  for (std::size_t i = 0; i < m; ++i) {
    p.constraints.push_back(
        {power_constraint(m, i, inst.P, 1.0, p.dim, 2 * m + 1, true), Sense::LessEqual, 1.0});
  }
  p.constraints.push_back({cardinality_matrix(m, p.dim), Sense::Equal, 4.0 * inst.Q});
  for (std::size_t i = 0; i <= m; ++i) p.constraints.push_back({unit(p.dim, i), Sense::Equal, 1.0});
  mp.slot_objectives[0] = SparseHermitian::from_dense(inst.R, m + 1, p.dim);
  mp.slot_objectives[1] = SparseHermitian::from_dense(inst.R, 2 * m + 1, p.dim);
  return mp;
}

RelayMatrices build_relay_matrices(const RelayInstance& inst) {
  inst.validate();
  const std::size_t m = inst.M();
  const std::size_t n = 2 * m + 1;
  RelayMatrices r;
  CMatrix st = CMatrix::Zero(n, n);
  CMatrix ft = CMatrix::Zero(n, n);
  st.bottomRightCorner(m, m) = inst.S.mat();
  ft.bottomRightCorner(m, m) = inst.F.mat();
  r.S_tilde = HermitianMatrix(st);
  r.F_tilde = HermitianMatrix(ft);
  const HomogenizationMatrices h = build_homogenization_matrices(m, inst.P);
  for (std::size_t i = 0; i < m; ++i) {
    RMatrix g = RMatrix::Zero(n, n);
    g.topLeftCorner(m + 1, m + 1).setIdentity();
    g(m + 1 + i, m + 1 + i) = inst.caps[i];
    r.G.emplace_back(g);
    // D_i G_i is symmetric here since both are block diagonal with
    // commuting diagonal-structured second blocks
    r.DG.emplace_back(CMatrix(h.D[i].mat() * r.G.back().mat()));
  }
  return r;
}

SdpProblem build_sdp3_constraints(const RelayInstance& inst) {
  inst.validate();
  const std::size_t m = inst.M();
  SdpProblem p;
  p.dim = 2 * m + 1;
  p.blocks = {m + 1, m};
  p.objective = SparseHermitian(p.dim);
  for (std::size_t i = 0; i < m; ++i) {
    p.constraints.push_back(
        {power_constraint(m, i, inst.P, inst.caps[i], p.dim, m + 1, false), Sense::LessEqual, 1.0});
  }
  p.constraints.push_back({cardinality_matrix(m, p.dim), Sense::Equal, 4.0 * inst.Q});
  for (std::size_t i = 0; i <= m; ++i) p.constraints.push_back({unit(p.dim, i), Sense::Equal, 1.0});
  return p;
}

FractionalResult charnes_cooper_fractional(const RelayInstance& inst, const SdpOptions& opts) {
  inst.validate();
  const std::size_t m = inst.M();
  const std::size_t n = 2 * m + 2;
  const std::size_t s_idx = 2 * m + 1;
  SdpProblem p;
  p.dim = n;
  p.blocks = {m + 1, m, 1};
  p.objective = SparseHermitian::from_dense(inst.S, m + 1, n);

  SparseHermitian norm = SparseHermitian::from_dense(inst.F, m + 1, n);
  norm.add(s_idx, s_idx, inst.sigma_n2);
  p.constraints.push_back({std::move(norm), Sense::Equal, 1.0});
  for (std::size_t i = 0; i < m; ++i) {
    SparseHermitian a = power_constraint(m, i, inst.P, inst.caps[i], n, m + 1, false);
    a.add(s_idx, s_idx, -1.0);
    p.constraints.push_back({std::move(a), Sense::LessEqual, 0.0});
  }
  SparseHermitian card = cardinality_matrix(m, n);
  card.add(s_idx, s_idx, -4.0 * inst.Q);
  p.constraints.push_back({std::move(card), Sense::Equal, 0.0});
  for (std::size_t i = 0; i <= m; ++i) {
    SparseHermitian a(n);
    a.add(i, i, 1.0);
    a.add(s_idx, s_idx, -1.0);
    p.constraints.push_back({std::move(a), Sense::Equal, 0.0});
  }

  FractionalResult out;
  out.projective = solve_sdp(p, opts);
  out.scale = out.projective.X.diag(s_idx);
  if (!(out.scale > 1e-12)) {
    throw DegenerateError("charnes_cooper_fractional: projective scale s <= 1e-12");
  }
  std::vector<std::size_t> idx(2 * m + 1);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  out.X = principal_submatrix(out.projective.X, idx) * (1.0 / out.scale);
  out.v3_sdp = out.projective.primal_value;
  return out;
}

FixedSupportFractional fractional_qcqp(const HermitianMatrix& s, const HermitianMatrix& f,
                                       double sigma2, std::span<const double> caps,
                                       const SdpOptions& opts) {
  const std::size_t q = s.dim();
  if (f.dim() != q || caps.size() != q || q == 0) {
    throw ValidationError("fractional_qcqp: dimension mismatch");
  }
  const std::size_t n = q + 1;
  SdpProblem p;
  p.dim = n;
  p.blocks = {q, 1};
  if (q == 1) p.blocks.clear(), p.blocks = {1, 1};
  p.objective = SparseHermitian::from_dense(s, 0, n);
  SparseHermitian norm = SparseHermitian::from_dense(f, 0, n);
  norm.add(q, q, sigma2);
  p.constraints.push_back({std::move(norm), Sense::Equal, 1.0});
  for (std::size_t i = 0; i < q; ++i) {
    SparseHermitian a(n);
    a.add(i, i, 1.0);
    a.add(q, q, -caps[i]);
    p.constraints.push_back({std::move(a), Sense::LessEqual, 0.0});
  }
  FixedSupportFractional out;
  out.projective = solve_sdp(p, opts);
  const double sc = out.projective.X.diag(q);
  if (!(sc > 1e-12)) throw DegenerateError("fractional_qcqp: projective scale s <= 1e-12");
  std::vector<std::size_t> idx(q);
  for (std::size_t i = 0; i < q; ++i) idx[i] = i;
  out.Y = principal_submatrix(out.projective.X, idx) * (1.0 / sc);
  out.value = out.projective.primal_value;
  return out;
}

CVector lift_admission(const DiscreteAssignment& a, const CVector& w) {
  const std::size_t m = a.x0.size() - 1;
  if (static_cast<std::size_t>(w.size()) != m) throw ValidationError("lift_admission: size");
  CVector x(2 * m + 1);
  for (std::size_t i = 0; i <= m; ++i) x(i) = static_cast<double>(a.x0[i]);
  x.tail(m) = w;
  return x;
}

}  // namespace vbg
