// Copyright 2026 The jcpulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON encodings of pulses, programs and matrices.
//
// Pulse durations are written in units of T_g; everything else in internal
// units. Readers report problems as ConfigError with a field path.

#ifndef JCPULSE_SERIALIZATION_HPP_
#define JCPULSE_SERIALIZATION_HPP_

#include <string>

#include <json.hpp>

#include "jcpulse/law_eberly.hpp"
#include "jcpulse/pulses.hpp"
#include "jcpulse/types.hpp"

namespace jcpulse {

using Json = nlohmann::json;

Json pulse_to_json(const Pulse& p);
Pulse pulse_from_json(const Json& j, const std::string& path = "pulse");
Json sequence_to_json(const PulseSequence& seq);
PulseSequence sequence_from_json(const Json& j,
                                 const std::string& path = "pulses");

// A list of layers, each a list of {family, block, angle, axis, n_script}.
Json program_to_json(const BlockRotationProgram& program);
BlockRotationProgram program_from_json(const Json& j, int n_comp,
                                       const std::string& path = "program");

// {"rows", "cols", "re": [[...]], "im": [[...]]}
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& path = "matrix");

}  // namespace jcpulse

#endif  // JCPULSE_SERIALIZATION_HPP_
