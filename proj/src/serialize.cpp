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

#include "vbg/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "vbg/errors.hpp"

namespace vbg {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("instance JSON: missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance JSON: bad field '") + key + "': " + e.what());
  }
}

HermitianMatrix hermitian_field(const json& j, const char* key, std::size_t m) {
  const CMatrix a = matrix_from_json(field(j, key));
  if (static_cast<std::size_t>(a.rows()) != m) {
    throw ValidationError(std::string("instance JSON: '") + key + "' must be M x M");
  }
  return HermitianMatrix(a);
}

json checks_to_json(const InvariantReport& c) {
  return {{"sdp_residual", number_or_null(c.sdp_residual)},
          {"tightness_residual", number_or_null(c.tightness_residual)},
          {"column_sum_residual", number_or_null(c.column_sum_residual)},
          {"feasibility_violation", number_or_null(c.feasibility_violation)},
          {"closed_form_residual", number_or_null(c.closed_form_residual)},
          {"support_trace_slack", number_or_null(c.support_trace_slack)},
          {"trace_upper_slack", number_or_null(c.trace_upper_slack)},
          {"rank1_residual", number_or_null(c.rank1_residual)},
          {"relaxation_excess", number_or_null(c.relaxation_excess)}};
}

}  // namespace

std::string problem_name(const ProblemInstance& inst) {
  switch (inst.index()) {
    case 0: return "cp1";
    case 1: return "cp2";
    default: return "cp3";
  }
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix JSON: expected a non-empty array");
  const std::size_t n = j.size();
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw ValidationError("matrix JSON: must be square");
    for (std::size_t k = 0; k < n; ++k) {
      const json& e = j[i][k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ValidationError("matrix JSON: entries must be [re, im] pairs");
      }
      m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json vector_to_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

json instance_to_json(const ProblemInstance& inst) {
  json j;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RelayInstance>) {
          j["type"] = "relay";
          j["M"] = x.M();
          j["P"] = x.P;
          j["Q"] = x.Q;
          j["S"] = matrix_to_json(x.S.mat());
          j["F"] = matrix_to_json(x.F.mat());
          j["sigma_n2"] = x.sigma_n2;
          j["caps"] = x.caps;
        } else {
          j["type"] = std::is_same_v<T, AdmissionInstance> ? "admission" : "scheduling";
          j["M"] = x.M();
          if (x.N) j["N"] = *x.N;
          j["P"] = x.P;
          j["Q"] = x.Q;
          j["R"] = matrix_to_json(x.R.mat());
        }
      },
      inst);
  return j;
}

ProblemInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("instance JSON: expected an object");
  const std::string type = get_as<std::string>(j, "type");
  const std::size_t m = get_as<std::size_t>(j, "M");
  const double p = get_as<double>(j, "P");
  const std::size_t q = get_as<std::size_t>(j, "Q");
  std::optional<std::size_t> n;
  if (j.contains("N") && !j.at("N").is_null()) n = get_as<std::size_t>(j, "N");
  ProblemInstance out;
  if (type == "admission") {
    AdmissionInstance a{hermitian_field(j, "R", m), p, q, n};
    a.validate();
    out = std::move(a);
  } else if (type == "scheduling") {
    SchedulingInstance s{hermitian_field(j, "R", m), p, q, n};
    s.validate();
    out = std::move(s);
  } else if (type == "relay") {
    RelayInstance r;
    r.S = hermitian_field(j, "S", m);
    r.F = hermitian_field(j, "F", m);
    r.sigma_n2 = get_as<double>(j, "sigma_n2");
    r.caps = get_as<std::vector<double>>(j, "caps");
    r.P = p;
    r.Q = q;
    r.validate();
    out = std::move(r);
  } else {
    throw ValidationError("instance JSON: unknown type '" + type + "'");
  }
  return out;
}

ProblemInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("instance file " + path + ": " + e.what());
  }
  return instance_from_json(j);
}

void write_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << instance_to_json(inst).dump() << '\n';
}

json outcome_to_json(const RoundingOutcome& o) {
  json j;
  j["assignment"] = {{"x0", o.assignment.x0}, {"support", o.assignment.support}};
  if (o.w.size() == 1) {
    j["w"] = vector_to_json(o.w[0]);
  } else {
    j["w"] = json::array();
    for (const CVector& w : o.w) j["w"].push_back(vector_to_json(w));
    j["slot_values"] = o.slot_values;
  }
  j["value"] = o.value;
  j["sdp_bound"] = o.sdp_bound;
  j["ratio"] = number_or_null(o.ratio);
  j["theoretical_bound"] = o.theoretical_bound ? json(*o.theoretical_bound) : json(nullptr);
  j["best_sample"] = o.best_sample;
  j["column_ranked"] = o.column_ranked;
  j["sdp_status"] = to_string(o.sdp_status);
  j["sdp_iterations"] = o.sdp_iterations;
  j["checks"] = checks_to_json(o.checks);
  return j;
}

json oracle_to_json(const OracleResult& r) {
  json j;
  j["support"] = r.support;
  if (r.w.size() == 1) {
    j["w"] = vector_to_json(r.w[0]);
  } else {
    j["w"] = json::array();
    for (const CVector& w : r.w) j["w"].push_back(vector_to_json(w));
    j["slot_values"] = r.slot_values;
  }
  j["value"] = r.value;
  j["exact"] = r.exact;
  j["upper_bound"] = r.upper_bound ? json(*r.upper_bound) : json(nullptr);
  return j;
}

}  // namespace vbg
