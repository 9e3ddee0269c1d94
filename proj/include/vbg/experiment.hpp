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

// Monte Carlo harness: seeded instance generation, algorithm runs on the
// identical instance per trial, records and per-cell summaries.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vbg/baselines.hpp"
#include "vbg/channel.hpp"
#include "vbg/serialize.hpp"

namespace vbg {

enum class ProblemKind { Cp1, Cp2, Cp3 };

struct SweepPoint {
  std::size_t M = 20;
  std::size_t N = 5;
  std::size_t Q = 7;
  double P_dbw = -10.0;    // per-node power (cp1, cp2)
  double Ptot_dbw = 10.0;  // total relay power (cp3)
};

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Cp1;
  std::vector<SweepPoint> points{SweepPoint{}};
  std::size_t trials = 1;
  std::size_t L = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> algorithms{"sdr"};
  double eps_feas = 1e-9;
  double eps_gap = 1e-9;
  double residual_tol = 1e-5;
  bool timing = true;
  bool complex_phases = false;
  std::size_t greedy_L = 50;
  GreedyInner greedy_inner = GreedyInner::RSdr;
  GedVariant ged_variant = GedVariant::Pencil;
  std::size_t brute_force_L = kBruteForceMinL;
  // relay statistics
  double P0_dbw = 0.0;
  double sigma_nu2 = 1.0;
  double sigma_n2 = 1.0;
  std::array<double, 2> eta_range_db{-10.0, 10.0};
  RelayPowerSplit power_split = RelayPowerSplit::PerSelected;

  void validate() const;
};

double dbw_to_watts(double dbw);

ExperimentConfig config_from_json(const nlohmann::json& j, const ExperimentConfig& base = {});
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

struct TrialRecord {
  std::size_t trial = 0;
  std::string algorithm;
  double value = 0.0;
  double sdp_bound = 0.0;
  double ratio = 0.0;
  double wall_ms = 0.0;
  std::optional<double> theoretical_bound;
  std::string diagnostic;  // non-empty for aborted trials
  bool aborted() const { return !diagnostic.empty(); }
};

struct Stat {
  double min = 0.0, mean = 0.0, max = 0.0;
};

struct CellSummary {
  std::string algorithm;
  std::size_t count = 0;
  std::size_t aborts = 0;
  Stat ratio;
  Stat value;
};

struct PointReport {
  SweepPoint point;
  std::vector<TrialRecord> records;  // ordered by trial, then algorithm order
  std::vector<CellSummary> summary;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<PointReport> points;
};

// Instance for (point, trial); identical across algorithms and reruns.
ProblemInstance make_instance(const ExperimentConfig& cfg, const SweepPoint& pt, std::size_t trial);

std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, const SweepPoint& pt,
                                   std::size_t trial);

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records,
                                   const std::vector<std::string>& algorithms);

// Trials run on up to VBG_THREADS OpenMP threads; output order is fixed.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::string records_csv(const std::vector<TrialRecord>& records);
nlohmann::json summary_json(const ExperimentReport& report);

// Writes <out> (single point) or <stem>_p<k><ext> per point, plus the
// summary JSON. Returns the CSV paths written.
std::vector<std::string> write_report(const ExperimentReport& report, const std::string& out,
                                      const std::string& summary_path);

}  // namespace vbg
