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

#include "vbg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include <omp.h>

#include "vbg/errors.hpp"
#include "vbg/serialize.hpp"

namespace vbg {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string>& allowed(ProblemKind k) {
  static const std::set<std::string> cp1{"sdr", "spca", "r-pca", "r-sdr", "brute-force", "oracle"};
  static const std::set<std::string> cp2{"sdr", "r-pca", "r-sdr"};
  static const std::set<std::string> cp3{"sdr", "r-sdr", "greedy", "random-ged", "oracle"};
  return k == ProblemKind::Cp1 ? cp1 : k == ProblemKind::Cp2 ? cp2 : cp3;
}

std::string kind_name(ProblemKind k) {
  return k == ProblemKind::Cp1 ? "cp1" : k == ProblemKind::Cp2 ? "cp2" : "cp3";
}

ProblemKind kind_from(const std::string& s) {
  if (s == "cp1") return ProblemKind::Cp1;
  if (s == "cp2") return ProblemKind::Cp2;
  if (s == "cp3") return ProblemKind::Cp3;
  throw ValidationError("config: problem must be cp1, cp2 or cp3, got '" + s + "'");
}

template <class T>
T take(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: bad field '") + key + "': " + e.what());
  }
}

SweepPoint point_from_json(const json& j, SweepPoint p) {
  static const std::set<std::string> keys{"M", "N", "Q", "P_dbw", "Ptot_dbw"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!keys.count(it.key())) throw ValidationError("config: unknown point field '" + it.key() + "'");
  }
  if (j.contains("M")) p.M = take<std::size_t>(j, "M");
  if (j.contains("N")) p.N = take<std::size_t>(j, "N");
  if (j.contains("Q")) p.Q = take<std::size_t>(j, "Q");
  if (j.contains("P_dbw")) p.P_dbw = take<double>(j, "P_dbw");
  if (j.contains("Ptot_dbw")) p.Ptot_dbw = take<double>(j, "Ptot_dbw");
  return p;
}

double ratio_of(double bound, double value) {
  if (value > 0.0) return bound / value;
  return std::abs(bound) <= 1e-9 ? 1.0 : std::numeric_limits<double>::infinity();
}

RoundingConfig rounding_config(const ExperimentConfig& cfg, std::size_t trial) {
  RoundingConfig rc;
  rc.L = cfg.L;
  rc.seed = RngSeed{cfg.seed, trial};
  rc.complex_phases = cfg.complex_phases;
  rc.sdp.eps_feas = cfg.eps_feas;
  rc.sdp.eps_gap = cfg.eps_gap;
  rc.residual_tol = cfg.residual_tol;
  return rc;
}

double relaxation_bound(const ProblemInstance& inst, const RoundingConfig& rc) {
  switch (inst.index()) {
    case 0: return solve_sdp(build_sdp1(std::get<0>(inst)), rc.sdp).primal_value;
    case 1: return solve_maximin_sdp(build_sdp2(std::get<1>(inst)), rc.sdp).t;
    default: return charnes_cooper_fractional(std::get<2>(inst), rc.sdp).v3_sdp;
  }
}

struct AlgResult {
  double value = 0.0;
  double violation = 0.0;
  std::optional<double> theoretical_bound;
  std::optional<double> own_bound;  // set by sdr
};

AlgResult from_oracle(const OracleResult& r, double violation) {
  return AlgResult{r.value, violation, std::nullopt, std::nullopt};
}

AlgResult from_outcome(const RoundingOutcome& o) {
  return AlgResult{o.value, o.checks.feasibility_violation, o.theoretical_bound, o.sdp_bound};
}

AlgResult run_algorithm(const ExperimentConfig& cfg, const ProblemInstance& inst,
                        const std::string& alg, const RoundingConfig& rc) {
  if (const auto* a = std::get_if<AdmissionInstance>(&inst)) {
    if (alg == "sdr") return from_outcome(solve_admission(*a, rc));
    if (alg == "spca") {
      const OracleResult r = spca_select(*a);
      return from_oracle(r, oracle_violation(*a, r));
    }
    if (alg == "r-pca" || alg == "r-sdr") {
      const OracleResult r = random_admission_baseline(
          *a, alg == "r-pca" ? PartitionMode::RPca : PartitionMode::RSdr, rc);
      return from_oracle(r, oracle_violation(*a, r));
    }
    if (alg == "brute-force") {
      RoundingConfig bc = rc;
      bc.L = cfg.brute_force_L;
      const BruteForceResult r = brute_force_admission(*a, bc);
      return from_oracle(r.best, oracle_violation(*a, r.best));
    }
    if (alg == "oracle") {
      if (a->R.off_diagonal_norm() <= 1e-12 * a->R.trace()) {
        const OracleResult r = diagonal_admission_oracle(*a);
        return from_oracle(r, oracle_violation(*a, r));
      }
      const RVector ev = eigenvalues(a->R);
      if (ev.size() == 1 || ev(1) <= 1e-9 * ev(0)) {
        const OracleResult r = rank1_admission_oracle(*a);
        return from_oracle(r, oracle_violation(*a, r));
      }
      throw ValidationError("oracle: not applicable, R is neither diagonal nor rank one");
    }
  } else if (const auto* s = std::get_if<SchedulingInstance>(&inst)) {
    if (alg == "sdr") return from_outcome(solve_scheduling(*s, rc));
    if (alg == "r-pca" || alg == "r-sdr") {
      const OracleResult r = random_partition_baseline(
          *s, alg == "r-pca" ? PartitionMode::RPca : PartitionMode::RSdr, rc);
      return from_oracle(r, oracle_violation(*s, r));
    }
  } else {
    const auto& r = std::get<RelayInstance>(inst);
    if (alg == "sdr") return from_outcome(solve_relay(r, rc));
    if (alg == "r-sdr") {
      const OracleResult o = random_sdr_relay(r, rc);
      return from_oracle(o, oracle_violation(r, o));
    }
    if (alg == "greedy") {
      RoundingConfig gc = rc;
      gc.L = cfg.greedy_L;
      const OracleResult o = greedy_relay(r, gc, cfg.greedy_inner);
      return from_oracle(o, oracle_violation(r, o));
    }
    if (alg == "random-ged") {
      const OracleResult o = random_ged_relay(r, rc.seed, cfg.ged_variant);
      return from_oracle(o, oracle_violation(r, o));
    }
    if (alg == "oracle") {
      const OracleResult o = diagonal_relay_oracle(r);
      return from_oracle(o, oracle_violation(r, o));
    }
  }
  throw ValidationError("algorithm '" + alg + "' is not available for this problem");
}

Stat stat_of(const std::vector<double>& v) {
  if (v.empty()) return Stat{kNaN, kNaN, kNaN};
  Stat s{v[0], 0.0, v[0]};
  for (double x : v) {
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
    s.mean += x;
  }
  s.mean /= static_cast<double>(v.size());
  return s;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json stat_json(const Stat& s) {
  auto f = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"min", f(s.min)}, {"mean", f(s.mean)}, {"max", f(s.max)}};
}

std::size_t thread_count() {
  if (const char* env = std::getenv("VBG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<std::size_t>(v);
  }
  return static_cast<std::size_t>(std::max(1, omp_get_max_threads()));
}

}  // namespace

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

void ExperimentConfig::validate() const {
  if (trials < 1) throw ValidationError("config: trials must be >= 1");
  if (L < 1) throw ValidationError("config: L must be >= 1");
  if (algorithms.empty()) throw ValidationError("config: algorithms must be non-empty");
  if (points.empty()) throw ValidationError("config: at least one sweep point is required");
  for (const std::string& a : algorithms) {
    if (!allowed(problem).count(a)) {
      throw ValidationError("config: algorithm '" + a + "' is not available for " + kind_name(problem));
    }
  }
  if (!(eps_feas > 0.0) || !(eps_gap > 0.0)) throw ValidationError("config: tolerances must be > 0");
  for (const SweepPoint& p : points) {
    if (p.M < 1 || p.Q < 1 || p.Q > p.M) throw ValidationError("config: need 1 <= Q <= M");
    if (p.N < 1) throw ValidationError("config: N must be >= 1");
  }
  if (greedy_L < 1) throw ValidationError("config: greedy_L must be >= 1");
}

ExperimentConfig config_from_json(const json& j, const ExperimentConfig& base_in) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  ExperimentConfig c = j.contains("preset") ? preset(take<std::string>(j, "preset")) : base_in;
  static const std::set<std::string> keys{
      "preset", "problem", "points", "M", "N", "Q", "P_dbw", "Ptot_dbw", "trials", "L", "seed",
      "algorithms", "eps_feas", "eps_gap", "residual_tol", "timing", "complex_phases", "greedy_L",
      "greedy_inner", "ged_variant", "brute_force_L", "P0_dbw", "sigma_nu2", "sigma_n2",
      "eta_range_db", "power_split"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!keys.count(it.key())) throw ValidationError("config: unknown field '" + it.key() + "'");
  }
  if (j.contains("problem")) c.problem = kind_from(take<std::string>(j, "problem"));
  if (j.contains("points")) {
    const json& pts = j.at("points");
    if (!pts.is_array() || pts.empty()) throw ValidationError("config: points must be a non-empty array");
    c.points.clear();
    for (const json& p : pts) c.points.push_back(point_from_json(p, SweepPoint{}));
  }
  json single = json::object();
  for (const char* k : {"M", "N", "Q", "P_dbw", "Ptot_dbw"}) {
    if (j.contains(k)) single[k] = j.at(k);
  }
  if (!single.empty()) {
    if (j.contains("points")) throw ValidationError("config: give either points or M/N/Q, not both");
    c.points = {point_from_json(single, c.points.empty() ? SweepPoint{} : c.points.front())};
  }
  if (j.contains("trials")) c.trials = take<std::size_t>(j, "trials");
  if (j.contains("L")) c.L = take<std::size_t>(j, "L");
  if (j.contains("seed")) c.seed = take<std::uint64_t>(j, "seed");
  if (j.contains("algorithms")) c.algorithms = take<std::vector<std::string>>(j, "algorithms");
  if (j.contains("eps_feas")) c.eps_feas = take<double>(j, "eps_feas");
  if (j.contains("eps_gap")) c.eps_gap = take<double>(j, "eps_gap");
  if (j.contains("residual_tol")) c.residual_tol = take<double>(j, "residual_tol");
  if (j.contains("timing")) c.timing = take<bool>(j, "timing");
  if (j.contains("complex_phases")) c.complex_phases = take<bool>(j, "complex_phases");
  if (j.contains("greedy_L")) c.greedy_L = take<std::size_t>(j, "greedy_L");
  if (j.contains("greedy_inner")) {
    const auto s = take<std::string>(j, "greedy_inner");
    if (s == "r-sdr") c.greedy_inner = GreedyInner::RSdr;
    else if (s == "full-power") c.greedy_inner = GreedyInner::FullPowerAligned;
    else throw ValidationError("config: greedy_inner must be r-sdr or full-power");
  }
  if (j.contains("ged_variant")) {
    const auto s = take<std::string>(j, "ged_variant");
    if (s == "pencil") c.ged_variant = GedVariant::Pencil;
    else if (s == "literal") c.ged_variant = GedVariant::LiteralInverse;
    else throw ValidationError("config: ged_variant must be pencil or literal");
  }
  if (j.contains("brute_force_L")) c.brute_force_L = take<std::size_t>(j, "brute_force_L");
  if (j.contains("P0_dbw")) c.P0_dbw = take<double>(j, "P0_dbw");
  if (j.contains("sigma_nu2")) c.sigma_nu2 = take<double>(j, "sigma_nu2");
  if (j.contains("sigma_n2")) c.sigma_n2 = take<double>(j, "sigma_n2");
  if (j.contains("eta_range_db")) c.eta_range_db = take<std::array<double, 2>>(j, "eta_range_db");
  if (j.contains("power_split")) {
    const auto s = take<std::string>(j, "power_split");
    if (s == "per-selected") c.power_split = RelayPowerSplit::PerSelected;
    else if (s == "per-node") c.power_split = RelayPowerSplit::PerNode;
    else throw ValidationError("config: power_split must be per-selected or per-node");
  }
  c.validate();
  return c;
}

std::vector<std::string> preset_names() {
  return {"admission-small", "admission-full", "scheduling-small", "scheduling-full", "relay-small"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "admission-small" || name == "admission-full") {
    const bool full = name == "admission-full";
    c.problem = ProblemKind::Cp1;
    c.points = {SweepPoint{full ? 50u : 20u, 5, full ? 17u : 7u, -10.0, 10.0}};
    c.trials = full ? 500 : 50;
    c.algorithms = {"sdr", "spca"};
  } else if (name == "scheduling-small" || name == "scheduling-full") {
    c.problem = ProblemKind::Cp2;
    c.points = {SweepPoint{30, 5, 8, -10.0, 10.0}};
    c.trials = name == "scheduling-full" ? 500 : 50;
    c.algorithms = {"sdr", "r-pca", "r-sdr"};
  } else if (name == "relay-small") {
    c.problem = ProblemKind::Cp3;
    c.points = {SweepPoint{20, 1, 10, -10.0, 10.0}};
    c.trials = 50;
    c.algorithms = {"sdr", "r-sdr", "random-ged", "greedy"};
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  return c;
}

ProblemInstance make_instance(const ExperimentConfig& cfg, const SweepPoint& pt, std::size_t trial) {
  const RngSeed seed{cfg.seed, trial};
  if (cfg.problem == ProblemKind::Cp3) {
    RelayConfig rc;
    rc.M = pt.M;
    rc.Q = pt.Q;
    rc.P0 = dbw_to_watts(cfg.P0_dbw);
    rc.sigma_nu2 = cfg.sigma_nu2;
    rc.sigma_n2 = cfg.sigma_n2;
    rc.Ptot = dbw_to_watts(pt.Ptot_dbw);
    rc.eta_range_db = cfg.eta_range_db;
    rc.split = cfg.power_split;
    return gen_relay(rc, seed);
  }
  CellularConfig cc;
  cc.M = pt.M;
  cc.N = pt.N;
  cc.Q = pt.Q;
  cc.P = dbw_to_watts(pt.P_dbw);
  if (cfg.problem == ProblemKind::Cp1) return gen_cellular(cc, seed);
  return gen_cellular_scheduling(cc, seed);
}

std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, const SweepPoint& pt,
                                   std::size_t trial) {
  const ProblemInstance inst = make_instance(cfg, pt, trial);
  const RoundingConfig rc = rounding_config(cfg, trial);
  std::vector<TrialRecord> out;
  std::optional<double> bound;
  std::string bound_error;
  auto ensure_bound = [&]() {
    if (bound || !bound_error.empty()) return;
    try {
      bound = relaxation_bound(inst, rc);
    } catch (const std::exception& e) {
      bound_error = std::string("relaxation: ") + e.what();
    }
  };
  // The proposed method runs first so its relaxation value serves as the
  // common bound for every algorithm on this trial.
  std::vector<std::string> order = cfg.algorithms;
  std::stable_partition(order.begin(), order.end(), [](const std::string& a) { return a == "sdr"; });
  std::vector<TrialRecord> by_alg;
  for (const std::string& alg : order) {
    TrialRecord r;
    r.trial = trial;
    r.algorithm = alg;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const AlgResult res = run_algorithm(cfg, inst, alg, rc);
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      if (res.own_bound && !bound) bound = res.own_bound;
      ensure_bound();
      if (!bound) throw DegenerateError(bound_error);
      r.value = res.value;
      r.sdp_bound = *bound;
      r.ratio = ratio_of(r.sdp_bound, r.value);
      r.theoretical_bound = res.theoretical_bound;
      if (!(res.violation <= 1e-8)) {
        throw InvariantViolation("output violates the power constraints by " + num(res.violation));
      }
      if (r.value > r.sdp_bound * (1.0 + 1e-6) + 1e-12) {
        throw InvariantViolation("value exceeds the relaxation bound");
      }
      if (cfg.problem == ProblemKind::Cp1 && alg == "sdr") {
        const auto& a = std::get<AdmissionInstance>(inst);
        const double alpha = 8.0 * static_cast<double>(a.M()) * std::log(5.0 * static_cast<double>(a.Q));
        if (!(r.ratio <= alpha)) throw InvariantViolation("ratio exceeds 8 M ln(5Q)");
      }
    } catch (const std::exception& e) {
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      r.value = r.sdp_bound = r.ratio = kNaN;
      r.theoretical_bound.reset();
      r.diagnostic = e.what();
      if (r.diagnostic.empty()) r.diagnostic = "aborted";
    }
    if (!cfg.timing) r.wall_ms = 0.0;
    by_alg.push_back(std::move(r));
  }
  for (const std::string& alg : cfg.algorithms) {
    for (const TrialRecord& r : by_alg) {
      if (r.algorithm == alg) {
        out.push_back(r);
        break;
      }
    }
  }
  return out;
}

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records,
                                   const std::vector<std::string>& algorithms) {
  std::vector<CellSummary> out;
  for (const std::string& alg : algorithms) {
    CellSummary c;
    c.algorithm = alg;
    std::vector<double> ratios, values;
    for (const TrialRecord& r : records) {
      if (r.algorithm != alg) continue;
      ++c.count;
      if (r.aborted()) {
        ++c.aborts;
        continue;
      }
      ratios.push_back(r.ratio);
      values.push_back(r.value);
    }
    c.ratio = stat_of(ratios);
    c.value = stat_of(values);
    out.push_back(c);
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.config = cfg;
  const int threads = static_cast<int>(thread_count());
  for (const SweepPoint& pt : cfg.points) {
    std::vector<std::vector<TrialRecord>> per_trial(cfg.trials);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(cfg.trials); ++t) {
      per_trial[static_cast<std::size_t>(t)] = run_trial(cfg, pt, static_cast<std::size_t>(t));
    }
    PointReport pr;
    pr.point = pt;
    for (auto& v : per_trial) {
      for (auto& r : v) pr.records.push_back(std::move(r));
    }
    pr.summary = summarize(pr.records, cfg.algorithms);
    rep.points.push_back(std::move(pr));
  }
  return rep;
}

std::string records_csv(const std::vector<TrialRecord>& records) {
  std::string s = "trial,algorithm,value,sdp_bound,ratio,wall_ms\n";
  for (const TrialRecord& r : records) {
    s += std::to_string(r.trial) + "," + r.algorithm + "," + num(r.value) + "," + num(r.sdp_bound) +
         "," + num(r.ratio) + "," + num(r.wall_ms) + "\n";
  }
  return s;
}

json summary_json(const ExperimentReport& report) {
  const ExperimentConfig& c = report.config;
  json j;
  j["problem"] = kind_name(c.problem);
  j["trials"] = c.trials;
  j["L"] = c.L;
  j["seed"] = c.seed;
  j["algorithms"] = c.algorithms;
  j["points"] = json::array();
  for (const PointReport& p : report.points) {
    json pj;
    pj["M"] = p.point.M;
    pj["Q"] = p.point.Q;
    if (c.problem == ProblemKind::Cp3) {
      pj["Ptot_dbw"] = p.point.Ptot_dbw;
    } else {
      pj["N"] = p.point.N;
      pj["P_dbw"] = p.point.P_dbw;
    }
    pj["cells"] = json::array();
    for (const CellSummary& s : p.summary) {
      pj["cells"].push_back({{"algorithm", s.algorithm},
                             {"count", s.count},
                             {"aborts", s.aborts},
                             {"ratio", stat_json(s.ratio)},
                             {"value", stat_json(s.value)}});
    }
    pj["aborts"] = json::array();
    for (const TrialRecord& r : p.records) {
      if (r.aborted()) {
        pj["aborts"].push_back(
            {{"trial", r.trial}, {"algorithm", r.algorithm}, {"diagnostic", r.diagnostic}});
      }
    }
    j["points"].push_back(std::move(pj));
  }
  return j;
}

std::vector<std::string> write_report(const ExperimentReport& report, const std::string& out,
                                      const std::string& summary_path) {
  std::vector<std::string> paths;
  const std::filesystem::path base(out);
  for (std::size_t k = 0; k < report.points.size(); ++k) {
    std::string path = out;
    if (report.points.size() > 1) {
      path = (base.parent_path() /
              (base.stem().string() + "_p" + std::to_string(k) + base.extension().string()))
                 .string();
    }
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write " + path);
    f << records_csv(report.points[k].records);
    paths.push_back(path);
  }
  if (!summary_path.empty()) {
    std::ofstream f(summary_path);
    if (!f) throw ValidationError("cannot write " + summary_path);
    json s = summary_json(report);
    for (std::size_t k = 0; k < paths.size(); ++k) s["points"][k]["csv"] = paths[k];
    f << s.dump(2) << '\n';
  }
  return paths;
}

}  // namespace vbg
