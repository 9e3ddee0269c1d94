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

// vbgroup command-line tool: gen, solve, bench, oracle, check.
// Exit codes: 0 success, 1 validation error, 2 invariant violation.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vbg/baselines.hpp"
#include "vbg/channel.hpp"
#include "vbg/errors.hpp"
#include "vbg/experiment.hpp"
#include "vbg/serialize.hpp"

using namespace vbg;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kViolation = 2;

struct GenArgs {
  std::string problem = "cp1";
  std::size_t M = 20, N = 5, Q = 7;
  double P_dbw = -10.0, Ptot_dbw = 10.0;
  std::uint64_t seed = 1, trial = 0;
  std::string out;
};

struct SolveArgs {
  std::string problem, in, alg = "sdr";
  std::size_t L = 200;
  std::uint64_t seed = 1, trial = 0;
  bool complex_phases = false;
};

struct BenchArgs {
  std::string config, preset, out = "report.csv", summary;
  std::size_t trials = 0;
  bool no_timing = false;
};

struct OracleArgs {
  std::string in;
  std::size_t L = kBruteForceMinL;
  std::uint64_t seed = 1;
};

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << j.dump() << '\n';
}

int run_gen(const GenArgs& a) {
  ExperimentConfig c;
  if (a.problem == "cp1") c.problem = ProblemKind::Cp1;
  else if (a.problem == "cp2") c.problem = ProblemKind::Cp2;
  else if (a.problem == "cp3") c.problem = ProblemKind::Cp3;
  else throw ValidationError("--problem must be cp1, cp2 or cp3");
  const SweepPoint pt{a.M, a.N, a.Q, a.P_dbw, a.Ptot_dbw};
  c.points = {pt};
  c.seed = a.seed;
  c.validate();
  emit(instance_to_json(make_instance(c, pt, a.trial)), a.out);
  return kOk;
}

int run_solve(const SolveArgs& a) {
  const ProblemInstance inst = read_instance(a.in);
  if (!a.problem.empty() && a.problem != problem_name(inst)) {
    throw ValidationError("--problem " + a.problem + " does not match instance type " + problem_name(inst));
  }
  RoundingConfig rc;
  rc.L = a.L;
  rc.seed = RngSeed{a.seed, a.trial};
  rc.complex_phases = a.complex_phases;
  rc.validate();
  json out;
  if (a.alg == "sdr") {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, AdmissionInstance>) out = outcome_to_json(solve_admission(x, rc));
          else if constexpr (std::is_same_v<T, SchedulingInstance>) out = outcome_to_json(solve_scheduling(x, rc));
          else out = outcome_to_json(solve_relay(x, rc));
        },
        inst);
  } else if (const auto* ad = std::get_if<AdmissionInstance>(&inst)) {
    OracleResult r;
    if (a.alg == "spca") r = spca_select(*ad);
    else if (a.alg == "r-pca") r = random_admission_baseline(*ad, PartitionMode::RPca, rc);
    else if (a.alg == "r-sdr") r = random_admission_baseline(*ad, PartitionMode::RSdr, rc);
    else throw ValidationError("algorithm '" + a.alg + "' is not available for cp1");
    out = oracle_to_json(r);
  } else if (const auto* sc = std::get_if<SchedulingInstance>(&inst)) {
    OracleResult r;
    if (a.alg == "r-pca") r = random_partition_baseline(*sc, PartitionMode::RPca, rc);
    else if (a.alg == "r-sdr") r = random_partition_baseline(*sc, PartitionMode::RSdr, rc);
    else throw ValidationError("algorithm '" + a.alg + "' is not available for cp2");
    out = oracle_to_json(r);
  } else {
    const auto& re = std::get<RelayInstance>(inst);
    OracleResult r;
    if (a.alg == "r-sdr") r = random_sdr_relay(re, rc);
    else if (a.alg == "greedy") r = greedy_relay(re, rc);
    else if (a.alg == "random-ged") r = random_ged_relay(re, rc.seed);
    else throw ValidationError("algorithm '" + a.alg + "' is not available for cp3");
    out = oracle_to_json(r);
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int run_bench(const BenchArgs& a) {
  ExperimentConfig cfg;
  if (!a.preset.empty()) cfg = preset(a.preset);
  if (!a.config.empty()) {
    std::ifstream f(a.config);
    if (!f) throw ValidationError("cannot open config " + a.config);
    json j;
    try {
      f >> j;
    } catch (const json::exception& e) {
      throw ValidationError("config " + a.config + ": " + e.what());
    }
    cfg = config_from_json(j, cfg);
  }
  if (a.trials > 0) cfg.trials = a.trials;
  if (a.no_timing) cfg.timing = false;
  cfg.validate();
  const ExperimentReport rep = run_experiment(cfg);
  std::string summary = a.summary;
  if (summary.empty()) {
    const auto dot = a.out.rfind('.');
    summary = (dot == std::string::npos ? a.out : a.out.substr(0, dot)) + "_summary.json";
  }
  const auto paths = write_report(rep, a.out, summary);
  std::size_t aborts = 0;
  for (const PointReport& p : rep.points) {
    for (const CellSummary& c : p.summary) {
      aborts += c.aborts;
      std::cerr << c.algorithm << " M=" << p.point.M << " Q=" << p.point.Q << " ratio mean "
                << c.ratio.mean << " max " << c.ratio.max << " aborts " << c.aborts << '\n';
    }
  }
  for (const auto& p : paths) std::cerr << "wrote " << p << '\n';
  std::cerr << "wrote " << summary << '\n';
  return aborts == 0 ? kOk : kViolation;
}

int run_oracle(const OracleArgs& a) {
  const ProblemInstance inst = read_instance(a.in);
  json out = json::object();
  if (const auto* ad = std::get_if<AdmissionInstance>(&inst)) {
    const RVector ev = eigenvalues(ad->R);
    if (ad->R.off_diagonal_norm() <= 1e-12 * ad->R.trace()) {
      out["diagonal"] = oracle_to_json(diagonal_admission_oracle(*ad));
    }
    if (ev.size() == 1 || ev(1) <= 1e-9 * ev(0)) out["rank1"] = oracle_to_json(rank1_admission_oracle(*ad));
    if (binomial(ad->M(), ad->Q) <= kBruteForceBudget) {
      RoundingConfig rc;
      rc.L = a.L;
      rc.seed = RngSeed{a.seed, 0};
      const BruteForceResult bf = brute_force_admission(*ad, rc);
      out["brute_force"] = oracle_to_json(bf.best);
      out["brute_force"]["supports"] = bf.supports;
    }
  } else if (const auto* re = std::get_if<RelayInstance>(&inst)) {
    out["diagonal_relay"] = oracle_to_json(diagonal_relay_oracle(*re));
  }
  if (out.empty()) throw ValidationError("no oracle applies to this instance");
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int run_check(const std::string& in, std::uint64_t seed) {
  const ProblemInstance inst = read_instance(in);
  RoundingConfig rc;
  rc.seed = RngSeed{seed, 0};
  json out;
  out["problem"] = problem_name(inst);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        RoundingOutcome o;
        if constexpr (std::is_same_v<T, AdmissionInstance>) o = solve_admission(x, rc);
        else if constexpr (std::is_same_v<T, SchedulingInstance>) o = solve_scheduling(x, rc);
        else o = solve_relay(x, rc);
        out["value"] = o.value;
        out["sdp_bound"] = o.sdp_bound;
        out["ratio"] = o.ratio;
        out["checks"] = outcome_to_json(o)["checks"];
        std::optional<OracleResult> orc;
        if constexpr (std::is_same_v<T, AdmissionInstance>) {
          if (x.R.off_diagonal_norm() <= 1e-12 * x.R.trace()) orc = diagonal_admission_oracle(x);
        } else if constexpr (std::is_same_v<T, RelayInstance>) {
          const double sc = x.S.trace() + x.F.trace();
          if (x.S.off_diagonal_norm() <= 1e-12 * sc && x.F.off_diagonal_norm() <= 1e-12 * sc) {
            orc = diagonal_relay_oracle(x);
          }
        }
        if (orc) {
          out["oracle_value"] = orc->value;
          out["oracle_gap"] = (orc->value - o.value) / orc->value;
          if (o.value > orc->value * (1.0 + 1e-6)) {
            throw InvariantViolation("exact oracle dominated by a feasible point");
          }
        }
      },
      inst);
  out["status"] = "ok";
  std::cout << out.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vbgroup: joint node grouping and virtual beamforming via SDR"};
  app.require_subcommand(1);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate a random instance (JSON)");
  gen->add_option("--problem", ga.problem, "cp1, cp2 or cp3");
  gen->add_option("--M", ga.M, "Number of nodes");
  gen->add_option("--N", ga.N, "Receive antennas (cp1, cp2)");
  gen->add_option("--Q", ga.Q, "Group size");
  gen->add_option("--P-dbw", ga.P_dbw, "Per-node power in dBW (cp1, cp2)");
  gen->add_option("--Ptot-dbw", ga.Ptot_dbw, "Total relay power in dBW (cp3)");
  gen->add_option("--seed", ga.seed, "Seed");
  gen->add_option("--trial", ga.trial, "Stream index");
  gen->add_option("--out", ga.out, "Output file (default standard output)");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Run one algorithm on an instance file");
  solve->add_option("--problem", sa.problem, "Expected problem type");
  solve->add_option("--in", sa.in, "Instance file")->required();
  solve->add_option("--alg", sa.alg, "sdr, spca, r-pca, r-sdr, greedy, random-ged");
  solve->add_option("--L", sa.L, "Randomization samples");
  solve->add_option("--seed", sa.seed, "Seed");
  solve->add_option("--trial", sa.trial, "Stream index");
  solve->add_flag("--complex-phases", sa.complex_phases, "Unit-circle phases instead of +-1");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run an experiment from a config file or preset");
  bench->add_option("--config", ba.config, "Experiment config (JSON)");
  bench->add_option("--preset", ba.preset, "admission-small, admission-full, scheduling-small, scheduling-full, relay-small");
  bench->add_option("--out", ba.out, "Records CSV");
  bench->add_option("--summary", ba.summary, "Summary JSON (default <out>_summary.json)");
  bench->add_option("--trials", ba.trials, "Override trial count");
  bench->add_flag("--no-timing", ba.no_timing, "Write wall_ms as 0 for byte-identical reruns");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "Run exact oracles and brute force on an instance");
  oracle->add_option("--in", oa.in, "Instance file")->required();
  oracle->add_option("--L", oa.L, "Samples per support for brute force");
  oracle->add_option("--seed", oa.seed, "Seed");

  std::string check_in;
  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("check", "Run the invariant suite on an instance");
  check->add_option("--in", check_in, "Instance file")->required();
  check->add_option("--seed", check_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*gen) return run_gen(ga);
    if (*solve) return run_solve(sa);
    if (*bench) {
      if (ba.config.empty() && ba.preset.empty()) throw ValidationError("bench needs --config or --preset");
      return run_bench(ba);
    }
    if (*oracle) return run_oracle(oa);
    if (*check) return run_check(check_in, check_seed);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kViolation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const DegenerateError& e) {
    std::cerr << "error: degenerate instance: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
