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

// JSON encoding of instances and outcomes. Complex values are [re, im]
// pairs; doubles are written with round-trip precision.

#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "vbg/baselines.hpp"
#include "vbg/models.hpp"
#include "vbg/rounding.hpp"

namespace vbg {

using ProblemInstance = std::variant<AdmissionInstance, SchedulingInstance, RelayInstance>;

// "cp1", "cp2", "cp3" for the three instance kinds.
std::string problem_name(const ProblemInstance& inst);

nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const CVector& v);

nlohmann::json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& j);

ProblemInstance read_instance(const std::string& path);
void write_instance(const ProblemInstance& inst, const std::string& path);

nlohmann::json outcome_to_json(const RoundingOutcome& o);
nlohmann::json oracle_to_json(const OracleResult& r);

}  // namespace vbg
