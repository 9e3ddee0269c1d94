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

#include "vbg/conic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vbg::conic {

std::size_t Row::nnz() const {
  std::size_t n = lp_part.size();
  for (const auto& p : dense_parts) n += p.entries.size();
  return n;
}

double ConicData::order() const {
  double n = static_cast<double>(lp_size);
  for (const auto& b : blocks) n += static_cast<double>(b.size());
  return n;
}

BlockVar BlockVar::identity(const ConicData& d, double scale) {
  BlockVar v;
  for (const auto& b : d.blocks) {
    const auto n = static_cast<Eigen::Index>(b.size());
    v.dense.push_back(scale * Eigen::MatrixXd::Identity(n, n));
  }
  v.lp = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d.lp_size), scale);
  return v;
}

BlockVar BlockVar::zeros(const ConicData& d) {
  BlockVar v;
  for (const auto& b : d.blocks) {
    const auto n = static_cast<Eigen::Index>(b.size());
    v.dense.push_back(Eigen::MatrixXd::Zero(n, n));
  }
  v.lp = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.lp_size));
  return v;
}

double BlockVar::dot(const BlockVar& o) const {
  double s = lp.dot(o.lp);
  for (std::size_t b = 0; b < dense.size(); ++b) s += (dense[b].array() * o.dense[b].array()).sum();
  return s;
}

double BlockVar::norm() const { return std::sqrt(dot(*this)); }

void BlockVar::axpy(double a, const BlockVar& x) {
  lp += a * x.lp;
  for (std::size_t b = 0; b < dense.size(); ++b) dense[b] += a * x.dense[b];
}

namespace {

// Where a user block lives in the conic form.
struct Placement {
  std::size_t offset;
  std::size_t size;
  int dense = -1;  // index into ConicData::blocks, or -1
  int lp = -1;     // orthant index for 1x1 blocks
};

struct Layout {
  std::vector<Placement> user_blocks;
  std::vector<int> block_of;  // user index -> user block
};

Layout make_layout(const SdpProblem& p) {
  Layout l;
  std::vector<std::size_t> sizes = p.blocks;
  if (sizes.empty()) sizes.push_back(p.dim);
  std::size_t off = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    l.user_blocks.push_back({off, sizes[b]});
    for (std::size_t i = 0; i < sizes[b]; ++i) l.block_of.push_back(static_cast<int>(b));
    off += sizes[b];
  }
  return l;
}

using Accum = std::map<std::pair<int, int>, double>;

// Emits the real (possibly embedded) image of one Hermitian entry.
void emit(Accum& acc, const BlockSpec& spec, std::size_t p, std::size_t q, Complex v) {
  const int n = static_cast<int>(spec.user_size);
  const int ip = static_cast<int>(p);
  const int iq = static_cast<int>(q);
  if (!spec.complex) {
    acc[{ip, iq}] += v.real();
    if (ip != iq) acc[{iq, ip}] += v.real();
    return;
  }
  const double a = 0.5 * v.real();
  const double b = 0.5 * v.imag();
  acc[{ip, iq}] += a;
  acc[{ip + n, iq + n}] += a;
  if (ip != iq) {
    acc[{iq, ip}] += a;
    acc[{iq + n, ip + n}] += a;
    // [[Ar, -Ai], [Ai, Ar]] / 2 with Ai(p,q) = b, Ai(q,p) = -b
    acc[{ip, iq + n}] += -b;
    acc[{iq, ip + n}] += b;
    acc[{ip + n, iq}] += b;
    acc[{iq + n, ip}] += -b;
  }
}

struct Split {
  std::vector<Accum> dense;                 // per conic dense block
  std::map<int, double> lp;
};

Split split_entries(const SparseHermitian& a, const Layout& l, const ConicData& d) {
  Split s;
  s.dense.resize(d.blocks.size());
  for (const auto& e : a.entries()) {
    const auto& pl = l.user_blocks[l.block_of[e.row]];
    const std::size_t p = e.row - pl.offset;
    const std::size_t q = e.col - pl.offset;
    if (pl.lp >= 0) {
      s.lp[pl.lp] += e.value.real();
    } else {
      emit(s.dense[pl.dense], d.blocks[pl.dense], p, q, e.value);
    }
  }
  return s;
}

}  // namespace

ConicData to_conic(const SdpProblem& p) {
  p.validate();
  ConicData d;
  Layout l = make_layout(p);

  // complex if any data entry in the block has a nonzero imaginary part
  std::vector<bool> is_complex(l.user_blocks.size(), false);
  auto scan = [&](const SparseHermitian& a) {
    for (const auto& e : a.entries()) {
      if (e.value.imag() != 0.0) is_complex[l.block_of[e.row]] = true;
    }
  };
  scan(p.objective);
  for (const auto& c : p.constraints) scan(c.a);

  int lp_count = 0;
  for (std::size_t b = 0; b < l.user_blocks.size(); ++b) {
    auto& pl = l.user_blocks[b];
    if (pl.size == 1) {
      pl.lp = lp_count++;
    } else {
      pl.dense = static_cast<int>(d.blocks.size());
      d.blocks.push_back({pl.offset, pl.size, static_cast<bool>(is_complex[b])});
    }
  }
  std::size_t n_ineq = 0;
  for (const auto& c : p.constraints) n_ineq += (c.sense != Sense::Equal);
  d.lp_size = static_cast<std::size_t>(lp_count) + n_ineq;

  // objective
  Split obj = split_entries(p.objective, l, d);
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    const auto n = static_cast<Eigen::Index>(d.blocks[b].size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [rc, v] : obj.dense[b]) c(rc.first, rc.second) = v;
    d.c_dense.push_back(c);
  }
  d.c_lp = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.lp_size));
  for (const auto& [i, v] : obj.lp) d.c_lp(i) = v;

  // constraints
  d.b.resize(static_cast<Eigen::Index>(p.constraints.size()));
  int slack = lp_count;
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    const auto& c = p.constraints[k];
    Split s = split_entries(c.a, l, d);
    Row row;
    for (std::size_t b = 0; b < d.blocks.size(); ++b) {
      if (s.dense[b].empty()) continue;
      BlockSparse bs{static_cast<int>(b), {}};
      for (const auto& [rc, v] : s.dense[b]) {
        if (v != 0.0) bs.entries.push_back({rc.first, rc.second, v});
      }
      if (!bs.entries.empty()) row.dense_parts.push_back(std::move(bs));
    }
    for (const auto& [i, v] : s.lp) {
      if (v != 0.0) row.lp_part.emplace_back(i, v);
    }
    if (c.sense == Sense::LessEqual) row.lp_part.emplace_back(slack++, 1.0);
    if (c.sense == Sense::GreaterEqual) row.lp_part.emplace_back(slack++, -1.0);
    std::sort(row.lp_part.begin(), row.lp_part.end());
    d.rows.push_back(std::move(row));
    d.b(static_cast<Eigen::Index>(k)) = c.rhs;
  }
  return d;
}

HermitianMatrix from_conic(const ConicData& d, const SdpProblem& p, const BlockVar& x) {
  Layout l = make_layout(p);
  CMatrix out = CMatrix::Zero(p.dim, p.dim);
  int lp_count = 0;
  int dense_count = 0;
  for (const auto& pl : l.user_blocks) {
    if (pl.size == 1) {
      out(pl.offset, pl.offset) = x.lp(lp_count++);
      continue;
    }
    const auto& spec = d.blocks[dense_count];
    const auto& xb = x.dense[dense_count++];
    const auto n = static_cast<Eigen::Index>(spec.user_size);
    if (!spec.complex) {
      out.block(pl.offset, pl.offset, n, n) = xb.cast<Complex>();
    } else {
      const Eigen::MatrixXd re = 0.5 * (xb.topLeftCorner(n, n) + xb.bottomRightCorner(n, n));
      const Eigen::MatrixXd im = 0.5 * (xb.bottomLeftCorner(n, n) - xb.topRightCorner(n, n));
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          out(pl.offset + i, pl.offset + j) = Complex(re(i, j), im(i, j));
        }
      }
    }
  }
  return HermitianMatrix(out, 1e-6);
}

Eigen::VectorXd apply_a(const ConicData& d, const BlockVar& x) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(d.rows.size()));
  for (std::size_t k = 0; k < d.rows.size(); ++k) {
    double s = 0.0;
    for (const auto& part : d.rows[k].dense_parts) {
      const auto& xb = x.dense[part.block];
      for (const auto& e : part.entries) s += e.value * xb(e.col, e.row);
    }
    for (const auto& [i, v] : d.rows[k].lp_part) s += v * x.lp(i);
    r(static_cast<Eigen::Index>(k)) = s;
  }
  return r;
}

Eigen::VectorXd apply_a_general(const ConicData& d, const std::vector<Eigen::MatrixXd>& g,
                                const Eigen::VectorXd& g_lp) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(d.rows.size()));
  for (std::size_t k = 0; k < d.rows.size(); ++k) {
    double s = 0.0;
    for (const auto& part : d.rows[k].dense_parts) {
      const auto& gb = g[part.block];
      for (const auto& e : part.entries) s += e.value * gb(e.col, e.row);
    }
    for (const auto& [i, v] : d.rows[k].lp_part) s += v * g_lp(i);
    r(static_cast<Eigen::Index>(k)) = s;
  }
  return r;
}

BlockVar apply_at(const ConicData& d, const Eigen::VectorXd& y) {
  BlockVar out = BlockVar::zeros(d);
  for (std::size_t k = 0; k < d.rows.size(); ++k) {
    const double yk = y(static_cast<Eigen::Index>(k));
    if (yk == 0.0) continue;
    for (const auto& part : d.rows[k].dense_parts) {
      auto& ob = out.dense[part.block];
      for (const auto& e : part.entries) ob(e.row, e.col) += yk * e.value;
    }
    for (const auto& [i, v] : d.rows[k].lp_part) out.lp(i) += yk * v;
  }
  return out;
}

namespace {

bool is_dense_row(const ConicData& d, const Row& row) {
  for (const auto& part : row.dense_parts) {
    if (part.entries.size() > 2 * d.blocks[part.block].size()) return true;
  }
  return false;
}

// H_b = W_b A_b X_b for every block the row touches.
std::vector<Eigen::MatrixXd> dense_products(const ConicData& d, const Row& row, const BlockVar& x,
                                            const BlockVar& w) {
  std::vector<Eigen::MatrixXd> h(d.blocks.size());
  for (const auto& part : row.dense_parts) {
    const auto n = static_cast<Eigen::Index>(d.blocks[part.block].size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : part.entries) a(e.row, e.col) += e.value;
    h[part.block] = w.dense[part.block] * a * x.dense[part.block];
  }
  return h;
}

double lp_pair(const Row& rk, const Row& rl, const BlockVar& x, const BlockVar& w) {
  double s = 0.0;
  auto i = rk.lp_part.begin();
  auto j = rl.lp_part.begin();
  while (i != rk.lp_part.end() && j != rl.lp_part.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      s += i->second * j->second * x.lp(i->first) * w.lp(i->first);
      ++i;
      ++j;
    }
  }
  return s;
}

// <A_l, X A_k W> using a precomputed H = W A_k X: sum_(r,s) a_rs H(s, r).
double with_product(const Row& rl, const std::vector<Eigen::MatrixXd>& h) {
  double s = 0.0;
  for (const auto& part : rl.dense_parts) {
    const auto& hb = h[part.block];
    if (hb.size() == 0) continue;
    for (const auto& e : part.entries) s += e.value * hb(e.col, e.row);
  }
  return s;
}

double sparse_pair(const Row& rk, const Row& rl, const BlockVar& x, const BlockVar& w) {
  double s = 0.0;
  for (const auto& pk : rk.dense_parts) {
    for (const auto& pl : rl.dense_parts) {
      if (pk.block != pl.block) continue;
      const auto& xb = x.dense[pk.block];
      const auto& wb = w.dense[pk.block];
      for (const auto& ek : pk.entries) {
        for (const auto& el : pl.entries) {
          s += ek.value * el.value * xb(ek.col, el.row) * wb(el.col, ek.row);
        }
      }
    }
  }
  return s;
}

struct SchurPlan {
  std::vector<char> dense;
  std::vector<std::vector<Eigen::MatrixXd>> products;
};

double schur_entry(const ConicData& d, const SchurPlan& plan, std::size_t k, std::size_t l,
                   const BlockVar& x, const BlockVar& w) {
  const Row& rk = d.rows[k];
  const Row& rl = d.rows[l];
  double v = lp_pair(rk, rl, x, w);
  if (plan.dense[k]) {
    v += with_product(rl, plan.products[k]);
  } else if (plan.dense[l]) {
    v += with_product(rk, plan.products[l]);
  } else {
    v += sparse_pair(rk, rl, x, w);
  }
  return v;
}

}  // namespace

Eigen::MatrixXd schur_complement_serial(const ConicData& d, const BlockVar& x,
                                        const BlockVar& w) {
  const std::size_t m = d.rows.size();
  SchurPlan plan;
  plan.dense.resize(m);
  plan.products.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    plan.dense[k] = is_dense_row(d, d.rows[k]);
    if (plan.dense[k]) plan.products[k] = dense_products(d, d.rows[k], x, w);
  }
  Eigen::MatrixXd out(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = k; l < m; ++l) {
      const double v = schur_entry(d, plan, k, l, x, w);
      out(k, l) = v;
      out(l, k) = v;
    }
  }
  return out;
}

Eigen::MatrixXd schur_complement_omp(const ConicData& d, const BlockVar& x, const BlockVar& w) {
  const auto m = static_cast<std::ptrdiff_t>(d.rows.size());
  SchurPlan plan;
  plan.dense.resize(m);
  plan.products.resize(m);
  for (std::ptrdiff_t k = 0; k < m; ++k) plan.dense[k] = is_dense_row(d, d.rows[k]);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    if (plan.dense[k]) plan.products[k] = dense_products(d, d.rows[k], x, w);
  }
  Eigen::MatrixXd out(m, m);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    for (std::ptrdiff_t l = k; l < m; ++l) {
      const double v = schur_entry(d, plan, k, l, x, w);
      out(k, l) = v;
      out(l, k) = v;
    }
  }
  return out;
}

}  // namespace vbg::conic
