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

#include "vbg/channel.hpp"

#include <cmath>
#include <numbers>

#include "vbg/errors.hpp"

namespace vbg {

void CellularConfig::validate() const {
  if (M < 1 || N < 1) throw ValidationError("CellularConfig: M and N must be >= 1");
  if (Q < 1 || Q > M) throw ValidationError("CellularConfig: Q must satisfy 1 <= Q <= M");
  if (!(P > 0.0)) throw ValidationError("CellularConfig: P must be > 0");
  if (!(min_dist > 0.0) || !(min_dist < radius)) {
    throw ValidationError("CellularConfig: need 0 < min_dist < radius");
  }
  if (!(ref_dist > 0.0) || !(pathloss_exp > 0.0) || shadow_var_db < 0.0) {
    throw ValidationError("CellularConfig: ref_dist, pathloss_exp must be > 0");
  }
}

void RelayConfig::validate() const {
  if (M < 1) throw ValidationError("RelayConfig: M must be >= 1");
  if (Q < 1 || Q > M) throw ValidationError("RelayConfig: Q must satisfy 1 <= Q <= M");
  if (!(P0 > 0.0) || !(sigma_nu2 > 0.0) || !(sigma_n2 > 0.0) || !(Ptot > 0.0)) {
    throw ValidationError("RelayConfig: powers must be > 0");
  }
  if (!(eta_range_db[0] <= eta_range_db[1])) throw ValidationError("RelayConfig: bad eta range");
}

double cellular_variance(const CellularConfig& cfg, double distance, double shadow_linear) {
  return std::pow(cfg.ref_dist / distance, cfg.pathloss_exp) * shadow_linear;
}

AdmissionInstance gen_cellular(const CellularConfig& cfg, RngSeed seed, CellularDraw* draw) {
  cfg.validate();
  CounterRng rng(seed);
  const std::size_t m = cfg.M;
  RVector v(m), dist(m), shadow(m);
  const double r0 = cfg.min_dist * cfg.min_dist;
  const double r1 = cfg.radius * cfg.radius;
  const double shadow_sd = std::sqrt(cfg.shadow_var_db);
  for (std::size_t i = 0; i < m; ++i) {
    // uniform in area over the annulus
    const double d = std::sqrt(r0 + (r1 - r0) * rng.uniform());
    const double l = std::pow(10.0, shadow_sd * rng.normal() / 10.0);
    v(i) = cellular_variance(cfg, d, l);
    dist(i) = d;
    shadow(i) = l;
  }
  if (draw) *draw = CellularDraw{dist, shadow, v};
  CMatrix h(m, cfg.N);
  for (std::size_t n = 0; n < cfg.N; ++n) {
    for (std::size_t i = 0; i < m; ++i) {
      const double sd = std::sqrt(v(i));
      const double re = rng.normal();
      const double im = rng.normal();
      h(i, n) = Complex(sd * re, sd * im);
    }
  }
  AdmissionInstance inst;
  inst.R = HermitianMatrix(CMatrix(h * h.adjoint()));
  inst.P = cfg.P;
  inst.Q = cfg.Q;
  inst.N = cfg.N;
  return inst;
}

SchedulingInstance gen_cellular_scheduling(const CellularConfig& cfg, RngSeed seed) {
  const AdmissionInstance a = gen_cellular(cfg, seed);
  return SchedulingInstance{a.R, a.P, a.Q, a.N};
}

RelayInstance relay_from_statistics(const RelayConfig& cfg, const RelayStatistics& st) {
  const std::size_t m = cfg.M;
  CMatrix ef = st.f_mean * st.f_mean.adjoint();
  CMatrix eg = st.g_mean * st.g_mean.adjoint();
  for (std::size_t i = 0; i < m; ++i) {
    ef(i, i) += st.f_var(i);
    eg(i, i) += st.g_var(i);
  }
  RelayInstance inst;
  inst.S = HermitianMatrix(CMatrix(cfg.P0 * ef.cwiseProduct(eg)));
  RMatrix f = RMatrix::Zero(m, m);
  inst.caps.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    f(i, i) = cfg.sigma_nu2 * eg(i, i).real();
    inst.caps[i] = cfg.P0 * ef(i, i).real() + cfg.sigma_nu2;
  }
  inst.F = HermitianMatrix(f);
  inst.sigma_n2 = cfg.sigma_n2;
  inst.Q = cfg.Q;
  inst.P = cfg.split == RelayPowerSplit::PerSelected ? cfg.Ptot / static_cast<double>(cfg.Q)
                                                      : cfg.Ptot / static_cast<double>(m);
  return inst;
}

RelayInstance gen_relay(const RelayConfig& cfg, RngSeed seed, RelayStatistics* stats) {
  cfg.validate();
  CounterRng rng(seed);
  const std::size_t m = cfg.M;
  RelayStatistics st;
  st.f_mean.resize(m);
  st.g_mean.resize(m);
  st.f_var.resize(m);
  st.g_var.resize(m);
  auto hop = [&](CVector& mean, RVector& var) {
    for (std::size_t i = 0; i < m; ++i) {
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      const double eta = std::pow(10.0, rng.uniform(cfg.eta_range_db[0], cfg.eta_range_db[1]) / 10.0);
      mean(i) = std::polar(1.0 / std::sqrt(eta), theta);
      var(i) = eta / (1.0 + eta);
    }
  };
  hop(st.f_mean, st.f_var);
  hop(st.g_mean, st.g_var);
  RelayInstance inst = relay_from_statistics(cfg, st);
  if (stats) *stats = std::move(st);
  return inst;
}

}  // namespace vbg
