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

// Target-independent V gates and the conjugation identities that turn them
// into arbitrary block rotations.
//
// A V gate of family a acts as the identity on the blocks up to n_script, as
// a z rotation by pi on block n, and preserves the computational space. The
// targets returned here fix the unconstrained remainder to the identity,
// chosen so that every h2 block is in SU(2) and therefore reachable by
// resonant sideband pulses.

#ifndef JCPULSE_VGATES_HPP_
#define JCPULSE_VGATES_HPP_

#include <string>

#include "jcpulse/hilbert.hpp"
#include "jcpulse/law_eberly.hpp"
#include "jcpulse/pulses.hpp"
#include "jcpulse/types.hpp"

namespace jcpulse {

struct VGateSpec {
  Family a = Family::kCarrier;
  int n = 1;
  int n_script = 0;
  int n_comp = 1;

  // Stable cache key, e.g. "a1_n3_s1_N3".
  std::string key() const;
};

// Throws DomainError unless -1 <= n_script < n <= N (n >= 1 for family 2).
void validate_spec(const VGateSpec& spec);

// Diagonal target on a truncation >= N+1.
Matrix v_gate_target(const VGateSpec& spec, int truncation);

SubspaceProjector v_gate_projector(const VGateSpec& spec, int truncation);

// True when the rotation needs the Euler-conjugated (z-torque) form.
bool has_z_torque(const BlockRotation& r);

// Pulse sequence for one block rotation given a sequence realizing the
// matching V gate. Empty for identity rotations.
PulseSequence assemble_u(const BlockRotation& rot, const PulseSequence& v_seq);

// The same identity with the V factor given as a matrix on `truncation`.
Matrix assemble_u_exact(const BlockRotation& rot, const Matrix& v,
                        int truncation);

// Single pulses realizing a rotation exactly: any axis on the carrier, xy
// axes on sideband block j >= 1.
Pulse carrier_rotation_pulse(double angle, const Vec3& axis);
Pulse sideband_rotation_pulse(double angle, const Vec3& axis, int block);

}  // namespace jcpulse

#endif  // JCPULSE_VGATES_HPP_
