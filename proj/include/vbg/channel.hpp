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

// Random instance generators: single-cell cellular covariances and two-hop
// relay second-order statistics.

#pragma once

#include <array>
#include <cstddef>

#include "vbg/models.hpp"
#include "vbg/rng.hpp"

namespace vbg {

struct CellularConfig {
  std::size_t M = 20;
  std::size_t N = 5;   // receive antennas
  std::size_t Q = 7;
  double P = 0.1;      // per-node power, W
  double radius = 500.0;
  double min_dist = 100.0;
  double ref_dist = 200.0;
  double pathloss_exp = 3.5;
  double shadow_var_db = 64.0;

  void validate() const;
};

enum class RelayPowerSplit { PerSelected, PerNode };  // Ptot/Q or Ptot/M

struct RelayConfig {
  std::size_t M = 20;
  std::size_t Q = 10;
  double P0 = 1.0;       // source power, W
  double sigma_nu2 = 1.0;
  double sigma_n2 = 1.0;
  double Ptot = 10.0;    // total relay power, W
  std::array<double, 2> eta_range_db{-10.0, 10.0};
  RelayPowerSplit split = RelayPowerSplit::PerSelected;

  void validate() const;
};

// Per-node large-scale variance per real/imaginary dimension.
double cellular_variance(const CellularConfig& cfg, double distance, double shadow_linear);

// Large-scale parameters behind one draw.
struct CellularDraw {
  RVector distance;
  RVector shadow;    // linear
  RVector variance;  // per real/imaginary dimension
};

AdmissionInstance gen_cellular(const CellularConfig& cfg, RngSeed seed, CellularDraw* draw = nullptr);
SchedulingInstance gen_cellular_scheduling(const CellularConfig& cfg, RngSeed seed);

// First/second moments of the two hops, kept so tests can resample them.
struct RelayStatistics {
  CVector f_mean, g_mean;
  RVector f_var, g_var;
};

RelayInstance gen_relay(const RelayConfig& cfg, RngSeed seed, RelayStatistics* stats = nullptr);

// Assembles S, F and the caps from hop statistics.
RelayInstance relay_from_statistics(const RelayConfig& cfg, const RelayStatistics& st);

}  // namespace vbg
