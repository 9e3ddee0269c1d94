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

#include "vbg/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "vbg/errors.hpp"

namespace vbg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSlotStride = std::uint64_t{1} << 32;

IndexSet range(std::size_t first, std::size_t count) {
  IndexSet idx(count);
  std::iota(idx.begin(), idx.end(), first);
  return idx;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double ratio_of(double bound, double value) {
  if (value > 0.0) return bound / value;
  return std::abs(bound) <= 1e-9 ? 1.0 : kInf;
}

SdpSolution solve_checked(const SdpProblem& p, const SdpOptions& opts, const char* what) {
  SdpSolution s = solve_sdp(p, opts);
  if (s.status == SdpStatus::Infeasible) {
    throw DegenerateError(std::string(what) + ": relaxation reported infeasible");
  }
  return s;
}

std::vector<double> last_column(const HermitianMatrix& x0) {
  const std::size_t m = x0.dim() - 1;
  std::vector<double> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = x0(i, m).real();
  return c;
}

}  // namespace

void RoundingConfig::validate() const {
  if (L < 1) throw ValidationError("RoundingConfig: L must be >= 1");
}

IndexSet top_q(std::span<const double> scores, std::size_t q) {
  if (q > scores.size()) throw ValidationError("top_q: q exceeds the number of scores");
  IndexSet idx = range(0, scores.size());
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  idx.resize(q);
  std::sort(idx.begin(), idx.end());
  return idx;
}

IndexSet select_support(const HermitianMatrix& x0, const HermitianMatrix& r,
                        const HermitianMatrix& x1, std::size_t q, double p, bool* column_ranked) {
  const std::size_t m = r.dim();
  if (x0.dim() != m + 1 || x1.dim() != m) throw ValidationError("select_support: dimensions");
  const std::vector<double> col = last_column(x0);
  const IndexSet t = top_q(col, q);
  const double lhs = principal_submatrix(r, t).trace_product(principal_submatrix(x1, t));
  const double rhs = static_cast<double>(q) * p / static_cast<double>(m) * r.trace();
  if (lhs >= rhs) {
    if (column_ranked) *column_ranked = true;
    return t;
  }
  if (column_ranked) *column_ranked = false;
  std::vector<double> d(m);
  for (std::size_t i = 0; i < m; ++i) d[i] = r.diag(i);
  return top_q(d, q);
}

Randomization randomize(const HermitianMatrix& y, const HermitianMatrix& objective,
                        std::span<const double> caps, const RoundingConfig& cfg,
                        std::uint64_t first_substream) {
  Randomization out;
  out.plan = make_sampling_plan(y, objective, caps, cfg.factor_tol, cfg.complex_phases);
  out.batch = cfg.parallel ? draw_samples_omp(out.plan, cfg.seed, first_substream, cfg.L)
                           : draw_samples_serial(out.plan, cfg.seed, first_substream, cfg.L);
  const double trace_e = out.plan.sigma.sum();
  const double scale_e = out.plan.sigma.cwiseAbs().sum();
  out.trace_objective_y = objective.trace_product(y);
  out.surrogate.resize(cfg.L);
  for (std::size_t l = 0; l < cfg.L; ++l) {
    const CVector& w = out.batch.w[l];
    const double t2 = out.batch.t[l] * out.batch.t[l];
    const double s = objective.quad_form(w);
    out.surrogate[l] = s;
    const double denom = std::max(scale_e / t2, std::numeric_limits<double>::min());
    out.closed_form_residual = std::max(out.closed_form_residual, std::abs(s - trace_e / t2) / denom);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      out.feasibility_violation =
          std::max(out.feasibility_violation, std::norm(w(i)) / out.plan.caps(i) - 1.0);
    }
  }
  // U^H E_i U for E_i = delta e_i e_i^T delta^H / cap_i
  for (Eigen::Index i = 0; i < out.plan.basis.rows(); ++i) {
    const CVector b = out.plan.basis.row(i).adjoint() / std::sqrt(out.plan.caps(i));
    if (b.size() < 2) break;
    const RVector ev = eigenvalues(HermitianMatrix::outer(b));
    if (ev(0) > 0.0) out.rank1_residual = std::max(out.rank1_residual, ev(1) / ev(0));
  }
  return out;
}

RandomizeAndPick randomize_and_pick(const HermitianMatrix& y, const HermitianMatrix& r_s,
                                    double p, const RoundingConfig& cfg,
                                    std::uint64_t first_substream) {
  const std::vector<double> caps(r_s.dim(), p);
  RandomizeAndPick out;
  out.y = y;
  out.samples = randomize(y, r_s, caps, cfg, first_substream);
  const auto& v = out.samples.surrogate;
  out.best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  out.w = out.samples.batch.w[out.best];
  out.value = v[out.best];
  return out;
}

double power_violation(std::span<const double> u, const IndexSet& support, std::size_t q,
                       const CVector& w) {
  if (support.size() != q || static_cast<std::size_t>(w.size()) != u.size()) return kInf;
  double worst = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const bool in = k < support.size() && support[k] == i;
    if (in) ++k;
    const double r = std::norm(w(i)) / u[i];
    worst = std::max(worst, in ? r - 1.0 : r);
  }
  if (k != support.size()) return kInf;  // unsorted or out of range
  return worst;
}

double relay_snr(const RelayInstance& inst, const CVector& w) {
  return inst.S.quad_form(w) / (inst.sigma_n2 + inst.F.quad_form(w));
}

CVector scatter(const CVector& ws, const IndexSet& support, std::size_t m) {
  CVector w = CVector::Zero(m);
  for (std::size_t k = 0; k < support.size(); ++k) w(support[k]) = ws(k);
  return w;
}

double admission_bound(std::size_t m, std::size_t q, const RVector& eig_desc) {
  const double base = 8.0 * static_cast<double>(m) * std::log(5.0 * static_cast<double>(q));
  const double sum = eig_desc.sum();
  if (!(sum > 0.0)) return base;
  return std::min(base * eig_desc(0) / sum, base);
}

std::optional<double> scheduling_bound(std::size_t m, std::size_t q, const RVector& eig_desc) {
  const double l1 = eig_desc(0);
  const double lm = eig_desc(eig_desc.size() - 1);
  const std::size_t lo = std::min(q, m - q);
  const std::size_t hi = std::max(q, m - q);
  if (lo == 0 || !(lm > 1e-12 * l1)) return std::nullopt;
  return 8.0 * static_cast<double>(m) * l1 / (static_cast<double>(lo) * lm) *
         std::log(12.0 * static_cast<double>(hi));
}

RoundingOutcome solve_admission(const AdmissionInstance& inst, const RoundingConfig& cfg) {
  inst.validate();
  cfg.validate();
  const std::size_t m = inst.M();
  const std::size_t q = inst.Q;
  const double p = inst.P;

  const SdpProblem sdp1 = build_sdp1(inst);
  const SdpSolution sol = solve_checked(sdp1, cfg.sdp, "admission");
  const HermitianMatrix x0 = principal_submatrix(sol.X, range(0, m + 1));
  const HermitianMatrix x1 = principal_submatrix(sol.X, range(m + 1, m));

  RoundingOutcome out;
  out.sdp_status = sol.status;
  out.sdp_iterations = sol.iterations;
  out.sdp_bound = sol.primal_value;
  InvariantReport& ck = out.checks;
  ck.sdp_residual = constraint_residual(sdp1, sol.X);

  // Tightness: every power constraint with R[i,i] > 0 is active at the optimum.
  ck.tightness_residual = 0.0;
  const double rscale = inst.R.trace();
  for (std::size_t i = 0; i < m; ++i) {
    if (inst.R.diag(i) <= 1e-12 * rscale) continue;
    ck.tightness_residual =
        std::max(ck.tightness_residual, std::abs(sdp1.constraints[i].a.trace_with(sol.X) - 1.0));
  }
  const std::vector<double> col = last_column(x0);
  ck.column_sum_residual = std::abs(std::accumulate(col.begin(), col.end(), 0.0) -
                                (2.0 * static_cast<double>(q) - static_cast<double>(m)));

  const IndexSet support = select_support(x0, inst.R, x1, q, p, &out.column_ranked);
  const HermitianMatrix r_s = principal_submatrix(inst.R, support);
  const SdpSolution ysol = solve_checked(build_sdp_qcqp(r_s, p), cfg.sdp, "admission");
  const RandomizeAndPick rp = randomize_and_pick(ysol.X, r_s, p, cfg, 1);

  out.assignment = DiscreteAssignment::from_support(m, support);
  out.w = {scatter(rp.w, support, m)};
  out.value = inst.R.quad_form(out.w[0]);
  out.ratio = ratio_of(out.sdp_bound, out.value);
  out.per_sample_t = {rp.samples.batch.t};
  out.per_sample_value = rp.samples.surrogate;
  out.best_sample = rp.best;

  const RVector ev = eigenvalues(inst.R);
  out.theoretical_bound = admission_bound(m, q, ev);
  const double lower = static_cast<double>(q) * p / static_cast<double>(m) * inst.R.trace();
  ck.support_trace_slack = lower > 0.0 ? rp.samples.trace_objective_y / lower - 1.0 : 0.0;
  const double upper = static_cast<double>(q) * p * ev(0);
  ck.trace_upper_slack = upper > 0.0 ? 1.0 - inst.R.trace_product(x1) / upper : 0.0;
  ck.closed_form_residual = rp.samples.closed_form_residual;
  ck.rank1_residual = rp.samples.rank1_residual;
  const std::vector<double> u(m, p);
  ck.feasibility_violation =
      std::max(rp.samples.feasibility_violation, power_violation(u, support, q, out.w[0]));
  ck.relaxation_excess = out.sdp_bound > 0.0 ? out.value / out.sdp_bound - 1.0 : 0.0;

  if (cfg.check_invariants) {
    require(ck.tightness_residual <= cfg.residual_tol,
            "admission: power constraints not tight at the relaxed optimum (residual " +
                fmt(ck.tightness_residual) + ")");
    require(ck.column_sum_residual <= cfg.residual_tol,
            "admission: homogenizer column sum differs from 2Q - M by " + fmt(ck.column_sum_residual));
    require(ck.feasibility_violation <= cfg.sample_tol,
            "admission: infeasible sample, violation " + fmt(ck.feasibility_violation));
    require(ck.closed_form_residual <= cfg.sample_tol,
            "admission: sample value differs from tr(R[S]Y)/t^2, residual " +
                fmt(ck.closed_form_residual));
    require(ck.support_trace_slack >= -1e-6,
            "admission: tr(R[S]Y) below (QP/M) tr(R), slack " + fmt(ck.support_trace_slack));
    require(ck.trace_upper_slack >= -1e-6,
            "admission: tr(R X1) above QP lambda_1(R), slack " + fmt(ck.trace_upper_slack));
    require(ck.rank1_residual <= 1e-8, "admission: rank of U^H E_i U exceeds one");
    require(ck.relaxation_excess <= 1e-6,
            "admission: achieved value exceeds the relaxation bound");
    require(out.ratio <= *out.theoretical_bound,
            "admission: ratio " + fmt(out.ratio) + " exceeds bound " +
                fmt(*out.theoretical_bound));
  }
  return out;
}

RoundingOutcome solve_scheduling(const SchedulingInstance& inst, const RoundingConfig& cfg) {
  inst.validate();
  cfg.validate();
  const std::size_t m = inst.M();
  const std::size_t q = inst.Q;
  const double p = inst.P;

  const MaximinProblem mp = build_sdp2(inst);
  const MaximinSolution ms = solve_maximin_sdp(mp, cfg.sdp);
  if (ms.sdp.status == SdpStatus::Infeasible) {
    throw DegenerateError("scheduling: relaxation reported infeasible");
  }
  RoundingOutcome out;
  out.sdp_status = ms.sdp.status;
  out.sdp_iterations = ms.sdp.iterations;
  out.sdp_bound = ms.t;
  InvariantReport& ck = out.checks;
  ck.sdp_residual = constraint_residual(mp.base, ms.sdp.X);

  // Raise the beamformer diagonals until every power constraint is active.
  CMatrix xt = ms.sdp.X.mat();
  for (std::size_t i = 0; i < m; ++i) {
    const double c = std::clamp(xt(i, m).real(), -1.0, 1.0);
    const std::size_t a = m + 1 + i;
    const std::size_t b = 2 * m + 1 + i;
    xt(a, a) = std::max(xt(a, a).real(), p * (1.0 + c) / 2.0);
    xt(b, b) = std::max(xt(b, b).real(), p * (1.0 - c) / 2.0);
  }
  const HermitianMatrix xtight(xt);
  ck.tightness_residual = 0.0;
  for (std::size_t k = 0; k < 2 * m; ++k) {
    ck.tightness_residual =
        std::max(ck.tightness_residual, std::abs(mp.base.constraints[k].a.trace_with(xtight) - 1.0));
  }
  const HermitianMatrix x0 = principal_submatrix(xtight, range(0, m + 1));
  const std::vector<double> col = last_column(x0);
  ck.column_sum_residual = std::abs(std::accumulate(col.begin(), col.end(), 0.0) -
                                (2.0 * static_cast<double>(q) - static_cast<double>(m)));

  const IndexSet s1 = top_q(col, q);
  IndexSet s2;
  for (std::size_t i = 0, k = 0; i < m; ++i) {
    if (k < s1.size() && s1[k] == i) {
      ++k;
    } else {
      s2.push_back(i);
    }
  }
  const std::array<IndexSet, 2> slots{s1, s2};

  std::array<std::vector<double>, 2> vals;
  std::array<std::vector<CVector>, 2> ws;
  out.per_sample_t.resize(2);
  ck.feasibility_violation = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    if (slots[k].empty()) {
      vals[k].assign(cfg.L, 0.0);
      ws[k].assign(cfg.L, CVector::Zero(m));
      out.per_sample_t[k].assign(cfg.L, 0.0);
      continue;
    }
    const HermitianMatrix r_k = principal_submatrix(inst.R, slots[k]);
    const SdpSolution ysol = solve_checked(build_sdp_qcqp(r_k, p), cfg.sdp, "scheduling");
    const std::vector<double> caps(slots[k].size(), p);
    const Randomization rnd = randomize(ysol.X, r_k, caps, cfg, 1 + k * kSlotStride);
    vals[k] = rnd.surrogate;
    for (const CVector& w : rnd.batch.w) ws[k].push_back(scatter(w, slots[k], m));
    out.per_sample_t[k] = rnd.batch.t;
    ck.closed_form_residual = std::max(ck.closed_form_residual, rnd.closed_form_residual);
    ck.rank1_residual = std::max(ck.rank1_residual, rnd.rank1_residual);
    ck.feasibility_violation = std::max(ck.feasibility_violation, rnd.feasibility_violation);
  }
  out.per_sample_value.resize(cfg.L);
  for (std::size_t l = 0; l < cfg.L; ++l) out.per_sample_value[l] = std::min(vals[0][l], vals[1][l]);
  const auto& sv = out.per_sample_value;
  out.best_sample = static_cast<std::size_t>(std::max_element(sv.begin(), sv.end()) - sv.begin());

  out.assignment = DiscreteAssignment::from_support(m, s1);
  out.w = {ws[0][out.best_sample], ws[1][out.best_sample]};
  out.slot_values = {inst.R.quad_form(out.w[0]), inst.R.quad_form(out.w[1])};
  out.value = std::min(out.slot_values[0], out.slot_values[1]);
  out.ratio = ratio_of(out.sdp_bound, out.value);
  out.theoretical_bound = scheduling_bound(m, q, eigenvalues(inst.R));

  const std::vector<double> u(m, p);
  ck.feasibility_violation = std::max(
      {ck.feasibility_violation, power_violation(u, s1, q, out.w[0]),
       power_violation(u, s2, m - q, out.w[1])});
  ck.relaxation_excess =
      out.sdp_bound > 0.0 ? out.value / out.sdp_bound - 1.0 : (out.value > 1e-9 ? kInf : 0.0);

  if (cfg.check_invariants) {
    require(ck.feasibility_violation <= cfg.sample_tol,
            "scheduling: infeasible sample, violation " + fmt(ck.feasibility_violation));
    require(ck.closed_form_residual <= cfg.sample_tol,
            "scheduling: sample value differs from tr(R[S]Y)/t^2, residual " +
                fmt(ck.closed_form_residual));
    require(ck.column_sum_residual <= cfg.residual_tol,
            "scheduling: homogenizer column sum differs from 2Q - M by " +
                fmt(ck.column_sum_residual));
    require(ck.rank1_residual <= 1e-8, "scheduling: rank of U^H E_i U exceeds one");
    require(ck.relaxation_excess <= 1e-6,
            "scheduling: achieved value exceeds the relaxation bound");
    if (out.theoretical_bound) {
      require(out.ratio <= *out.theoretical_bound,
              "scheduling: ratio " + fmt(out.ratio) + " exceeds bound " +
                  fmt(*out.theoretical_bound));
    }
  }
  return out;
}

RoundingOutcome solve_relay(const RelayInstance& inst, const RoundingConfig& cfg) {
  inst.validate();
  cfg.validate();
  const std::size_t m = inst.M();
  const std::size_t q = inst.Q;

  const FractionalResult fr = charnes_cooper_fractional(inst, cfg.sdp);
  RoundingOutcome out;
  out.sdp_status = fr.projective.status;
  out.sdp_iterations = fr.projective.iterations;
  out.sdp_bound = fr.v3_sdp;
  out.column_ranked = false;
  InvariantReport& ck = out.checks;
  ck.sdp_residual = constraint_residual(build_sdp3_constraints(inst), fr.X);

  const HermitianMatrix x0 = principal_submatrix(fr.X, range(0, m + 1));
  const std::vector<double> col = last_column(x0);
  ck.column_sum_residual = std::abs(std::accumulate(col.begin(), col.end(), 0.0) -
                                (2.0 * static_cast<double>(q) - static_cast<double>(m)));
  const IndexSet t = top_q(col, q);
  const HermitianMatrix s_t = principal_submatrix(inst.S, t);
  const HermitianMatrix f_t = principal_submatrix(inst.F, t);
  const std::vector<double> u_all = inst.gain_caps();
  std::vector<double> u_t(q);
  for (std::size_t k = 0; k < q; ++k) u_t[k] = u_all[t[k]];

  // Surrogate objective with the fractional optimum as the price on F.
  const HermitianMatrix surrogate = s_t - f_t * fr.v3_sdp;
  Randomization rnd;
  try {
    const SdpSolution ysol = solve_checked(build_sdp_qcqp(surrogate, u_t), cfg.sdp, "relay");
    rnd = randomize(ysol.X, surrogate, u_t, cfg, 1);
  } catch (const DegenerateError&) {
    // The surrogate has no positive direction on this support: fall back to
    // the fractional objective itself.
    const FixedSupportFractional fq = fractional_qcqp(s_t, f_t, inst.sigma_n2, u_t, cfg.sdp);
    rnd = randomize(fq.Y, s_t, u_t, cfg, 1);
  }
  out.per_sample_value.resize(cfg.L);
  for (std::size_t l = 0; l < cfg.L; ++l) {
    const CVector& w = rnd.batch.w[l];
    out.per_sample_value[l] = s_t.quad_form(w) / (inst.sigma_n2 + f_t.quad_form(w));
  }
  const auto& sv = out.per_sample_value;
  out.best_sample = static_cast<std::size_t>(std::max_element(sv.begin(), sv.end()) - sv.begin());
  out.assignment = DiscreteAssignment::from_support(m, t);
  out.w = {scatter(rnd.batch.w[out.best_sample], t, m)};
  out.value = relay_snr(inst, out.w[0]);
  out.ratio = ratio_of(out.sdp_bound, out.value);
  out.per_sample_t = {rnd.batch.t};

  ck.closed_form_residual = rnd.closed_form_residual;
  ck.rank1_residual = rnd.rank1_residual;
  ck.feasibility_violation =
      std::max(rnd.feasibility_violation, power_violation(u_all, t, q, out.w[0]));
  ck.relaxation_excess = out.sdp_bound > 0.0 ? out.value / out.sdp_bound - 1.0 : 0.0;

  if (cfg.check_invariants) {
    require(ck.feasibility_violation <= cfg.sample_tol,
            "relay: infeasible sample, violation " + fmt(ck.feasibility_violation));
    require(ck.closed_form_residual <= cfg.sample_tol,
            "relay: sample surrogate differs from its closed form, residual " +
                fmt(ck.closed_form_residual));
    require(ck.column_sum_residual <= cfg.residual_tol,
            "relay: homogenizer column sum differs from 2Q - M by " + fmt(ck.column_sum_residual));
    require(ck.rank1_residual <= 1e-8, "relay: rank of U^H E_i U exceeds one");
    require(ck.relaxation_excess <= 1e-6, "relay: achieved SNR exceeds the relaxation bound");
  }
  return out;
}

}  // namespace vbg
