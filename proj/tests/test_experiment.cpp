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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "vbg/experiment.hpp"

using namespace vbg;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace {

ExperimentConfig small_cp1(std::size_t trials) {
  ExperimentConfig c;
  c.problem = ProblemKind::Cp1;
  c.points = {SweepPoint{6, 2, 2, -10.0, 10.0}};
  c.trials = trials;
  c.L = 50;
  c.algorithms = {"sdr", "spca", "r-pca", "r-sdr"};
  c.timing = false;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("single trial produces one record per algorithm") {
  auto cfg = small_cp1(1);
  cfg.algorithms = {"sdr"};
  const auto rep = run_experiment(cfg);
  REQUIRE(rep.points.size() == 1);
  REQUIRE(rep.points[0].records.size() == 1);
  const auto& r = rep.points[0].records[0];
  CHECK(r.algorithm == "sdr");
  CHECK_FALSE(r.aborted());
  CHECK(r.ratio >= 1.0 - 1e-9);
  CHECK(r.theoretical_bound.has_value());
}

TEST_CASE("reruns are byte identical") {
  const auto cfg = small_cp1(4);
  const auto a = records_csv(run_experiment(cfg).points[0].records);
  const auto b = records_csv(run_experiment(cfg).points[0].records);
  CHECK(a == b);
  CHECK(a.rfind("trial,algorithm,value,sdp_bound,ratio,wall_ms\n", 0) == 0);
}

TEST_CASE("thread count does not change results") {
  const auto cfg = small_cp1(4);
  setenv("VBG_THREADS", "1", 1);
  const auto serial = records_csv(run_experiment(cfg).points[0].records);
  setenv("VBG_THREADS", "3", 1);
  const auto parallel = records_csv(run_experiment(cfg).points[0].records);
  unsetenv("VBG_THREADS");
  CHECK(serial == parallel);
}

TEST_CASE("algorithms see the same instance") {
  const auto cfg = small_cp1(3);
  const auto rep = run_experiment(cfg);
  for (const auto& r : rep.points[0].records) {
    if (r.algorithm == "sdr" || r.algorithm == "r-sdr") continue;
    // baselines carry the shared relaxation bound of their trial
    for (const auto& s : rep.points[0].records)
      if (s.trial == r.trial && s.algorithm == "sdr") CHECK(r.sdp_bound == s.sdp_bound);
  }
  const auto i1 = instance_to_json(make_instance(cfg, cfg.points[0], 2));
  const auto i2 = instance_to_json(make_instance(cfg, cfg.points[0], 2));
  CHECK(i1 == i2);
  CHECK(i1 != instance_to_json(make_instance(cfg, cfg.points[0], 1)));
}

TEST_CASE("summary statistics are consistent with the records") {
  const auto cfg = small_cp1(5);
  const auto rep = run_experiment(cfg);
  const auto& pr = rep.points[0];
  REQUIRE(pr.summary.size() == cfg.algorithms.size());
  for (const auto& cell : pr.summary) {
    double sum = 0.0, lo = INFINITY, hi = -INFINITY;
    std::size_t n = 0;
    for (const auto& r : pr.records) {
      if (r.algorithm != cell.algorithm || r.aborted()) continue;
      sum += r.ratio;
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
      ++n;
    }
    CHECK(cell.count == 5);
    CHECK(cell.count - cell.aborts == n);
    CHECK(cell.ratio.min == lo);
    CHECK(cell.ratio.max == hi);
    CHECK_THAT(cell.ratio.mean, WithinRel(sum / static_cast<double>(n), 1e-12));
    CHECK(cell.ratio.min <= cell.ratio.mean);
    CHECK(cell.ratio.mean <= cell.ratio.max);
  }
  const json s = summary_json(rep);
  CHECK(s["points"][0]["cells"].size() == cfg.algorithms.size());
}

TEST_CASE("oracle on a generic instance is reported as aborted") {
  auto cfg = small_cp1(1);
  cfg.algorithms = {"sdr", "oracle"};
  const auto rep = run_experiment(cfg);
  bool found = false;
  for (const auto& r : rep.points[0].records) {
    if (r.algorithm == "oracle") {
      found = true;
      CHECK(r.aborted());
      CHECK(std::isnan(r.ratio));
    }
  }
  CHECK(found);
  CHECK(rep.points[0].summary[1].aborts == 1);
  CHECK(records_csv(rep.points[0].records).find("nan") != std::string::npos);
}

TEST_CASE("scheduling and relay sweeps") {
  ExperimentConfig c2;
  c2.problem = ProblemKind::Cp2;
  c2.points = {SweepPoint{8, 3, 2, -10.0, 10.0}};
  c2.trials = 2;
  c2.L = 50;
  c2.algorithms = {"sdr", "r-pca", "r-sdr"};
  const auto rep_c2 = run_experiment(c2);
  for (const auto& r : rep_c2.points[0].records) CHECK_FALSE(r.aborted());

  ExperimentConfig c3;
  c3.problem = ProblemKind::Cp3;
  c3.points = {SweepPoint{6, 1, 3, -10.0, 10.0}};
  c3.trials = 2;
  c3.L = 50;
  c3.algorithms = {"sdr", "r-sdr", "greedy", "random-ged"};
  const auto rep_c3 = run_experiment(c3);
  for (const auto& r : rep_c3.points[0].records) {
    CHECK_FALSE(r.aborted());
    CHECK(r.value <= r.sdp_bound * (1 + 1e-6));
  }
}

TEST_CASE("multi-point reports are written per point") {
  auto cfg = small_cp1(2);
  cfg.algorithms = {"sdr"};
  cfg.points = {SweepPoint{5, 2, 2, -10.0, 10.0}, SweepPoint{6, 2, 3, -10.0, 10.0}};
  const auto rep = run_experiment(cfg);
  const auto dir = std::filesystem::temp_directory_path() / "vbg_experiment_test";
  std::filesystem::create_directories(dir);
  const auto paths = write_report(rep, (dir / "run.csv").string(), (dir / "sum.json").string());
  REQUIRE(paths.size() == 2);
  CHECK(std::filesystem::path(paths[0]).filename() == "run_p0.csv");
  CHECK(std::filesystem::path(paths[1]).filename() == "run_p1.csv");
  CHECK(slurp(paths[1]) == records_csv(rep.points[1].records));
  const json s = json::parse(slurp((dir / "sum.json").string()));
  CHECK(s["points"].size() == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("configuration parsing") {
  const auto c = config_from_json(json::parse(R"({"problem":"cp2","M":12,"N":3,"Q":4,"trials":3})"));
  CHECK(c.problem == ProblemKind::Cp2);
  REQUIRE(c.points.size() == 1);
  CHECK(c.points[0].M == 12);
  CHECK(c.trials == 3);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"tirals":3})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"problem":"cp9"})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"problem":"cp2","algorithms":["greedy"]})")),
                  ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"M":4,"Q":5})")), ValidationError);
  for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name).validate());
  CHECK_THROWS_AS(preset("nope"), ValidationError);
  const auto p = config_from_json(json::parse(R"({"preset":"admission-small","trials":2})"));
  CHECK(p.trials == 2);
  CHECK(p.points[0].Q == 7);
  CHECK_THAT(dbw_to_watts(-10.0), WithinRel(0.1, 1e-12));
}
