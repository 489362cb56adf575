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

// Basis bookkeeping for the truncated oscillator x spin space.
//
// Product states |n s> are stored at flat index 2n + s with s = 0 for spin
// down and 1 for spin up. A space "at truncation L" keeps oscillator levels
// 0..L and has dimension 2(L+1). Inside a two-level block the first slot is
// the up-like state and the second the down-like state, so the block Paulis
// are the ordinary 2x2 Paulis in that ordering.

#ifndef JCPULSE_HILBERT_HPP_
#define JCPULSE_HILBERT_HPP_

#include <vector>

#include "jcpulse/types.hpp"

namespace jcpulse {

struct ModeSpace {
  int n_comp = 1;   // highest computational oscillator level (N)
  int n_pad = 4;    // highest level not penalized by the leakage term
  int n_opt = 6;    // highest simulated level during optimization
  int n_check = 24; // truncation used to re-verify optimized controls

  int comp_dim() const { return 2 * (n_comp + 1); }
};

// Throws ConfigError unless n_comp >= 1 and n_comp < n_pad < n_opt < n_check.
ModeSpace build_space(int n_comp, int n_pad, int n_opt, int n_check);
// Defaults: n_pad = N+3, n_opt = N+5, n_check = 4 n_opt.
ModeSpace build_space(int n_comp);

inline int dim_at(int truncation) { return 2 * (truncation + 1); }
inline int flat_index(int n, Spin s) { return 2 * n + static_cast<int>(s); }

struct BasisIndex {
  int n = 0;
  Spin s = Spin::kDown;

  int flat() const { return flat_index(n, s); }
  static BasisIndex from_flat(int flat) {
    return {flat / 2, (flat % 2) ? Spin::kUp : Spin::kDown};
  }
};

// Flat indices of a two-level block; -1 marks a slot outside the truncation.
// For h2 block 0 only the down-like slot |0 down> exists, and at block L+1
// only the up-like slot |L up> survives.
struct BlockSlots {
  int up = -1;
  int down = -1;
};
BlockSlots h1_slots(int truncation, int n);
BlockSlots h2_slots(int truncation, int n);
BlockSlots block_slots(int truncation, Family family, int n);
// Number of blocks of a family on a truncation: L+1 for h1, L+2 for h2.
int block_count(int truncation, Family family);

Matrix proj_h1(int truncation, int n);
Matrix proj_h2(int truncation, int n);
Matrix pauli_block(int truncation, Family family, Axis axis, int n);

// P_C: oscillator levels 0..n_comp, both spins.
Matrix comp_projector(int truncation, int n_comp);
// Projector onto oscillator levels lo..hi (inclusive) with both spins.
Matrix level_projector(int truncation, int lo, int hi);

Matrix annihilation(int truncation);       // a (x) I_spin
Matrix spin_pauli(int truncation, Axis a); // I_osc (x) sigma_a

// Optimized-subspace projector for a V gate, intersected with the
// computational space. The computational states outside it number d_perp.
struct SubspaceProjector {
  Matrix projector;
  std::vector<int> indices;  // flat indices spanned, ascending
  int rank = 0;
  int d_perp = 0;
};
SubspaceProjector opt_subspace_projector(int n_comp, Family a, int n,
                                         int n_script, int truncation);

// Embeds a matrix given at a smaller truncation into a larger one, padding
// with the identity.
Matrix embed_identity(const Matrix& m, int truncation);

}  // namespace jcpulse

#endif  // JCPULSE_HILBERT_HPP_
