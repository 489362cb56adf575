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

// Exact compiler from computational-space unitaries (or states) to programs
// of per-block SU(2) rotations.
//
// Basis states are prepared in the order |0 down>, |0 up>, |1 down>, ...
// Each preparation step clears the population above the current level by
// alternating h1 and h2 transfers, then moves it onto the current basis
// state with its phase zeroed. Rotations only ever touch blocks that lie in
// the computational space.

#ifndef JCPULSE_LAW_EBERLY_HPP_
#define JCPULSE_LAW_EBERLY_HPP_

#include <functional>
#include <vector>

#include "jcpulse/types.hpp"

namespace jcpulse {

struct BlockRotation {
  Family family = Family::kCarrier;
  int block = 0;
  double angle = 0.0;
  Vec3 axis = Vec3::UnitZ();
};

// Simultaneous rotations of one family on distinct blocks. `n_script` is the
// highest level of the identity range the layer must preserve (-1 for an
// empty range); compiled layers carry one rotation each.
struct RotationLayer {
  Family family = Family::kCarrier;
  int n_script = -1;
  std::vector<BlockRotation> rotations;
};

struct BlockRotationProgram {
  int n_comp = 1;
  std::vector<RotationLayer> layers;  // first layer applied first
};

struct Transfer {
  double angle = 0.0;
  Vec3 axis = Vec3::UnitZ();
};

// Rotation taking (amp_a, amp_b) to (0, e^{i gamma} r). With zero_phase the
// result has gamma = 0 and a torque with a z component; otherwise the torque
// lies in the xy plane. Both amplitudes zero gives the identity.
Transfer two_level_transfer(Complex amp_a, Complex amp_b, bool zero_phase);

// The 2x2 matrix of a rotation in (up-like, down-like) block ordering.
Mat2 block_matrix(const BlockRotation& r);

// Matrix of one layer / a whole program on a truncation >= n_comp, identity
// outside the rotated blocks.
Matrix layer_matrix(int truncation, const RotationLayer& layer);
Matrix evaluate(int truncation, const BlockRotationProgram& program);
BlockRotationProgram inverse_program(const BlockRotationProgram& program);

// Maps a normalized state supported on the computational space to |0 down>.
BlockRotationProgram state_prep(int n_comp, const Vector& state);

// Program whose evaluation equals `target` (a 2(N+1) square unitary) up to a
// global phase.
BlockRotationProgram compile_unitary(int n_comp, const Matrix& target);

// Returns the computational-space action (2(N+1) square) actually produced
// when a layer is realized physically.
using LayerRealizer = std::function<Matrix(const RotationLayer&)>;

// compile_unitary driven by realized layers: every step is computed from
// the state produced by the layers realized so far, so realization errors
// do not accumulate through the rotation angles.
BlockRotationProgram compile_unitary_adaptive(int n_comp, const Matrix& target,
                                              const LayerRealizer& realize);

}  // namespace jcpulse

#endif  // JCPULSE_LAW_EBERLY_HPP_
