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

#pragma once

#include <stdexcept>
#include <string>

namespace vbg {

// Bad input: wrong shapes, out-of-range parameters, non-Hermitian data.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Matrix expected to be PSD has an eigenvalue below the allowed tolerance.
class NotPsdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A numerical procedure hit a degenerate case it cannot recover from.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A runtime-checked mathematical identity or bound did not hold.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vbg
