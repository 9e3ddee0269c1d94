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

// Infeasible-start primal-dual interior-point method with the HKM search
// direction and Mehrotra predictor-corrector steps, run on the real conic
// form built in conic.cpp.

#include "vbg/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vbg/conic.hpp"

namespace vbg {

// ---------------------------------------------------------------------------
// SparseHermitian

SparseHermitian SparseHermitian::from_dense(const HermitianMatrix& a, std::size_t offset,
                                            std::size_t dim) {
  SparseHermitian s(dim == 0 ? a.dim() + offset : dim);
  s.add_block(a, offset);
  return s;
}

void SparseHermitian::add(std::size_t i, std::size_t j, Complex v) {
  if (i >= dim_ || j >= dim_) throw ValidationError("SparseHermitian::add: index out of range");
  if (i > j) {
    std::swap(i, j);
    v = std::conj(v);
  }
  if (i == j && v.imag() != 0.0) {
    throw ValidationError("SparseHermitian::add: diagonal entry must be real");
  }
  for (auto& e : entries_) {
    if (e.row == i && e.col == j) {
      e.value += v;
      return;
    }
  }
  entries_.push_back({i, j, v});
}

void SparseHermitian::add_block(const HermitianMatrix& a, std::size_t offset, double scale) {
  if (offset + a.dim() > dim_) throw ValidationError("SparseHermitian::add_block: out of range");
  // fast path: fresh positions are appended without the duplicate scan
  std::vector<Entry> fresh;
  const bool empty_before = entries_.empty();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = i; j < a.dim(); ++j) {
      Complex v = scale * a(i, j);
      if (i == j) v = Complex(v.real(), 0.0);
      if (v == Complex(0.0, 0.0)) continue;
      if (empty_before) {
        fresh.push_back({i + offset, j + offset, v});
      } else {
        add(i + offset, j + offset, v);
      }
    }
  }
  if (empty_before) entries_ = std::move(fresh);
}

HermitianMatrix SparseHermitian::to_dense() const {
  CMatrix m = CMatrix::Zero(dim_, dim_);
  for (const auto& e : entries_) {
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += std::conj(e.value);
  }
  return HermitianMatrix(m);
}

double SparseHermitian::trace_with(const HermitianMatrix& x) const {
  if (x.dim() != dim_) throw ValidationError("trace_with: dimension mismatch");
  double s = 0.0;
  for (const auto& e : entries_) {
    // A_pq X_qp (+ A_qp X_pq for the mirrored entry)
    const Complex t = e.value * x(e.col, e.row);
    s += (e.row == e.col) ? t.real() : 2.0 * t.real();
  }
  return s;
}

// ---------------------------------------------------------------------------

void SdpProblem::validate() const {
  if (dim == 0) throw ValidationError("SdpProblem: zero dimension");
  std::vector<std::size_t> owner(dim);
  if (blocks.empty()) {
    std::fill(owner.begin(), owner.end(), 0);
  } else {
    const std::size_t total = std::accumulate(blocks.begin(), blocks.end(), std::size_t{0});
    if (total != dim) throw ValidationError("SdpProblem: block sizes do not sum to dim");
    std::size_t off = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b] == 0) throw ValidationError("SdpProblem: empty block");
      for (std::size_t i = 0; i < blocks[b]; ++i) owner[off + i] = b;
      off += blocks[b];
    }
  }
  auto check = [&](const SparseHermitian& a, const char* what) {
    if (a.dim() != dim) {
      throw ValidationError(std::string("SdpProblem: ") + what + " has wrong dimension");
    }
    for (const auto& e : a.entries()) {
      if (owner[e.row] != owner[e.col]) {
        throw ValidationError(std::string("SdpProblem: ") + what + " couples two blocks");
      }
      if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag())) {
        throw ValidationError(std::string("SdpProblem: ") + what + " has non-finite data");
      }
    }
  };
  check(objective, "objective");
  for (const auto& c : constraints) {
    check(c.a, "constraint");
    if (!std::isfinite(c.rhs)) throw ValidationError("SdpProblem: non-finite right-hand side");
  }
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal:
      return "Optimal";
    case SdpStatus::MaxIter:
      return "MaxIter";
    case SdpStatus::Infeasible:
      return "Infeasible";
  }
  return "?";
}

double constraint_residual(const SdpProblem& p, const HermitianMatrix& x) {
  double worst = 0.0;
  for (const auto& c : p.constraints) {
    const double v = c.a.trace_with(x) - c.rhs;
    double viol = 0.0;
    switch (c.sense) {
      case Sense::Equal:
        viol = std::abs(v);
        break;
      case Sense::LessEqual:
        viol = std::max(v, 0.0);
        break;
      case Sense::GreaterEqual:
        viol = std::max(-v, 0.0);
        break;
    }
    worst = std::max(worst, viol / (1.0 + std::abs(c.rhs)));
  }
  return worst;
}

namespace {

using conic::BlockVar;
using conic::ConicData;

struct Factors {
  std::vector<Eigen::MatrixXd> chol;  // lower Cholesky factor per dense block
  bool ok = true;
};

Factors cholesky(const BlockVar& v) {
  Factors f;
  for (const auto& b : v.dense) {
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success) {
      f.ok = false;
      return f;
    }
    f.chol.push_back(llt.matrixL());
  }
  return f;
}

// Largest alpha with V + alpha * dV in the cone (infinity if unbounded).
double max_step(const BlockVar& v, const Factors& f, const BlockVar& dv) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < v.dense.size(); ++b) {
    const auto& l = f.chol[b];
    Eigen::MatrixXd t = l.triangularView<Eigen::Lower>().solve(dv.dense[b]);
    Eigen::MatrixXd s = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd(t.transpose()));
    s = 0.5 * (s + s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  for (Eigen::Index j = 0; j < v.lp.size(); ++j) {
    if (dv.lp(j) < 0.0) alpha = std::min(alpha, -v.lp(j) / dv.lp(j));
  }
  return alpha;
}

BlockVar inverse(const BlockVar& v, const Factors& f) {
  BlockVar out;
  for (std::size_t b = 0; b < v.dense.size(); ++b) {
    const auto n = v.dense[b].rows();
    const auto& l = f.chol[b];
    Eigen::MatrixXd li = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd inv = li.transpose() * li;
    out.dense.push_back(0.5 * (inv + inv.transpose()));
  }
  out.lp = v.lp.cwiseInverse();
  return out;
}

class SchurSolver {
 public:
  explicit SchurSolver(const Eigen::MatrixXd& m) {
    llt_.compute(m);
    if (llt_.info() == Eigen::Success) return;
    const double jitter = 1e-14 * std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
    Eigen::MatrixXd mj = m;
    mj.diagonal().array() += jitter;
    llt_.compute(mj);
    if (llt_.info() == Eigen::Success) return;
    use_ldlt_ = true;
    ldlt_.compute(m);
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& r) const {
    return use_ldlt_ ? Eigen::VectorXd(ldlt_.solve(r)) : Eigen::VectorXd(llt_.solve(r));
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  bool use_ldlt_ = false;
};

struct Direction {
  BlockVar dx;
  Eigen::VectorXd dy;
  BlockVar dz;
};

// Solves the HKM Newton system for target sigma*mu, with optional
// second-order correction term corr = dXa dZa W.
Direction hkm_direction(const ConicData& d, const SchurSolver& schur, const BlockVar& x,
                        const BlockVar& w, const BlockVar& rd, const Eigen::VectorXd& rp,
                        double sigma_mu, const BlockVar* corr) {
  std::vector<Eigen::MatrixXd> g;
  for (std::size_t b = 0; b < x.dense.size(); ++b) {
    Eigen::MatrixXd gb = sigma_mu * w.dense[b] - x.dense[b] + x.dense[b] * rd.dense[b] * w.dense[b];
    if (corr) gb -= corr->dense[b];
    g.push_back(std::move(gb));
  }
  Eigen::VectorXd g_lp = sigma_mu * w.lp - x.lp + x.lp.cwiseProduct(rd.lp).cwiseProduct(w.lp);
  if (corr) g_lp -= corr->lp;

  Direction dir;
  dir.dy = schur.solve(conic::apply_a_general(d, g, g_lp) - rp);
  dir.dz = conic::apply_at(d, dir.dy);
  dir.dz.axpy(-1.0, rd);
  dir.dx.dense.reserve(x.dense.size());
  for (std::size_t b = 0; b < x.dense.size(); ++b) {
    Eigen::MatrixXd dxb = sigma_mu * w.dense[b] - x.dense[b] - x.dense[b] * dir.dz.dense[b] * w.dense[b];
    if (corr) dxb -= corr->dense[b];
    dir.dx.dense.push_back(0.5 * (dxb + dxb.transpose()));
  }
  dir.dx.lp = sigma_mu * w.lp - x.lp - x.lp.cwiseProduct(dir.dz.lp).cwiseProduct(w.lp);
  if (corr) dir.dx.lp -= corr->lp;
  return dir;
}

double row_norm(const conic::Row& r) {
  double s = 0.0;
  for (const auto& p : r.dense_parts) {
    for (const auto& e : p.entries) s += e.value * e.value;
  }
  for (const auto& [i, v] : r.lp_part) s += v * v;
  return std::sqrt(s);
}

double objective_norm(const ConicData& d) {
  double s = d.c_lp.squaredNorm();
  for (const auto& c : d.c_dense) s += c.squaredNorm();
  return std::sqrt(s);
}

struct Metrics {
  double pinf;
  double dinf;
  double gap;
  double pobj;
  double dobj;
  double merit() const { return std::max({pinf, dinf, gap}); }
};

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts) {
  const ConicData d = conic::to_conic(p);
  const auto m = static_cast<Eigen::Index>(d.rows.size());
  const double nu = d.order();

  SdpSolution sol;
  if (m == 0) {
    // unconstrained: bounded only when C is negative semidefinite
    const HermitianMatrix c = p.objective.to_dense();
    const RVector ev = eigenvalues(c);
    sol.X = HermitianMatrix::zero(p.dim);
    sol.status = ev(0) <= 0.0 ? SdpStatus::Optimal : SdpStatus::Infeasible;
    return sol;
  }

  double max_row = 0.0;
  double max_rhs_ratio = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double rn = row_norm(d.rows[k]);
    max_row = std::max(max_row, rn);
    max_rhs_ratio = std::max(max_rhs_ratio, (1.0 + std::abs(d.b(k))) / (1.0 + rn));
  }
  const double c_norm = objective_norm(d);
  const double root_nu = std::sqrt(nu);
  const double xi = std::max({10.0, root_nu, root_nu * max_rhs_ratio});
  const double eta = std::max({10.0, root_nu, max_row, c_norm});

  BlockVar x = BlockVar::identity(d, xi);
  BlockVar z = BlockVar::identity(d, eta);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  BlockVar c_var;
  c_var.dense = d.c_dense;
  c_var.lp = d.c_lp;

  auto evaluate = [&](Eigen::VectorXd& rp, BlockVar& rd) {
    rp = d.b - conic::apply_a(d, x);
    rd = c_var;
    rd.axpy(1.0, z);
    rd.axpy(-1.0, conic::apply_at(d, y));
    Metrics mt{};
    mt.pinf = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      mt.pinf = std::max(mt.pinf, std::abs(rp(k)) / (1.0 + std::abs(d.b(k))));
    }
    mt.dinf = rd.norm() / (1.0 + c_norm);
    mt.pobj = c_var.dot(x);
    mt.dobj = d.b.dot(y);
    mt.gap = std::abs(mt.pobj - mt.dobj) / (1.0 + std::abs(mt.pobj) + std::abs(mt.dobj));
    return mt;
  };

  BlockVar best_x = x;
  Eigen::VectorXd best_y = y;
  Metrics best{std::numeric_limits<double>::infinity(), 0, 0, 0, 0};
  SdpStatus status = SdpStatus::MaxIter;
  std::size_t iter = 0;
  int stalls = 0;
  const double blowup = 1e12 * (1.0 + d.b.cwiseAbs().maxCoeff() + c_norm);

  for (; iter <= opts.max_iter; ++iter) {
    Eigen::VectorXd rp;
    BlockVar rd;
    const Metrics mt = evaluate(rp, rd);
    if (mt.merit() < best.merit()) {
      best = mt;
      best_x = x;
      best_y = y;
    }
    if (mt.pinf <= opts.eps_feas && mt.dinf <= opts.eps_feas && mt.gap <= opts.eps_gap) {
      status = SdpStatus::Optimal;
      best = mt;
      best_x = x;
      best_y = y;
      break;
    }
    if (y.norm() > blowup || x.norm() > blowup || std::abs(mt.dobj) > blowup) {
      status = SdpStatus::Infeasible;
      break;
    }
    if (iter == opts.max_iter) break;

    const Factors fx = cholesky(x);
    const Factors fz = cholesky(z);
    if (!fx.ok || !fz.ok) break;
    const BlockVar w = inverse(z, fz);
    const double mu = x.dot(z) / nu;

    const Eigen::MatrixXd schur_m = opts.parallel ? conic::schur_complement_omp(d, x, w)
                                                  : conic::schur_complement_serial(d, x, w);
    const SchurSolver schur(schur_m);

    // predictor
    const Direction aff = hkm_direction(d, schur, x, w, rd, rp, 0.0, nullptr);
    const double ap_aff = std::min(1.0, max_step(x, fx, aff.dx));
    const double ad_aff = std::min(1.0, max_step(z, fz, aff.dz));
    BlockVar xa = x;
    xa.axpy(ap_aff, aff.dx);
    BlockVar za = z;
    za.axpy(ad_aff, aff.dz);
    const double mu_aff = xa.dot(za) / nu;
    double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // corrector
    BlockVar corr;
    for (std::size_t b = 0; b < x.dense.size(); ++b) {
      corr.dense.push_back(aff.dx.dense[b] * aff.dz.dense[b] * w.dense[b]);
    }
    corr.lp = aff.dx.lp.cwiseProduct(aff.dz.lp).cwiseProduct(w.lp);
    const Direction dir = hkm_direction(d, schur, x, w, rd, rp, sigma * mu, &corr);

    const double gamma = 0.9 + 0.09 * std::min(ap_aff, ad_aff);
    const double ap = std::min(1.0, gamma * max_step(x, fx, dir.dx));
    const double ad = std::min(1.0, gamma * max_step(z, fz, dir.dz));
    if (!(ap > 1e-12) && !(ad > 1e-12)) {
      if (++stalls >= 3) break;
    } else {
      stalls = 0;
    }
    x.axpy(ap, dir.dx);
    z.axpy(ad, dir.dz);
    y += ad * dir.dy;
  }

  if (status == SdpStatus::Infeasible) {
    best_x = x;
    best_y = y;
  }
  sol.X = conic::from_conic(d, p, best_x);
  sol.primal_value = p.objective.trace_with(sol.X);
  sol.dual_value = d.b.dot(best_y);
  sol.gap = std::abs(sol.primal_value - sol.dual_value) /
            (1.0 + std::abs(sol.primal_value) + std::abs(sol.dual_value));
  sol.feas_residual = constraint_residual(p, sol.X);
  sol.status = status;
  sol.iterations = iter;
  sol.multipliers.assign(best_y.data(), best_y.data() + best_y.size());
  return sol;
}

MaximinSolution solve_maximin_sdp(const MaximinProblem& mp, const SdpOptions& opts) {
  const std::size_t n = mp.base.dim;
  for (const auto& o : mp.slot_objectives) {
    if (o.dim() != n) throw ValidationError("solve_maximin_sdp: slot objective dimension");
  }
  // epigraph: append scalar t >= 0 as its own block
  SdpProblem ep;
  ep.dim = n + 1;
  ep.blocks = mp.base.blocks.empty() ? std::vector<std::size_t>{n} : mp.base.blocks;
  ep.blocks.push_back(1);
  auto lift = [&](const SparseHermitian& a) {
    SparseHermitian out(n + 1);
    for (const auto& e : a.entries()) out.add(e.row, e.col, e.value);
    return out;
  };
  ep.objective = SparseHermitian(n + 1);
  ep.objective.add(n, n, 1.0);
  for (const auto& c : mp.base.constraints) ep.constraints.push_back({lift(c.a), c.sense, c.rhs});
  for (const auto& o : mp.slot_objectives) {
    SparseHermitian a = lift(o);
    a.add(n, n, -1.0);
    ep.constraints.push_back({std::move(a), Sense::GreaterEqual, 0.0});
  }

  const SdpSolution full = solve_sdp(ep, opts);

  MaximinSolution out;
  out.t = full.X.diag(n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  out.sdp = full;
  out.sdp.X = principal_submatrix(full.X, idx);
  out.sdp.primal_value = out.t;
  out.sdp.multipliers.resize(mp.base.constraints.size());
  for (std::size_t k = 0; k < 2; ++k) out.slot_values[k] = mp.slot_objectives[k].trace_with(out.sdp.X);
  return out;
}

}  // namespace vbg
