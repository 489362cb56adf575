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

#include "jcpulse/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jcpulse {

namespace {

void check_level(int truncation, int n, int max_n, const char* what) {
  if (truncation < 0) throw DomainError("negative truncation");
  if (n < 0 || n > max_n) {
    throw DomainError(std::string(what) + ": block index " +
                      std::to_string(n) + " out of range [0, " +
                      std::to_string(max_n) + "]");
  }
}

Matrix projector_from_slots(int truncation, BlockSlots slots) {
  const int d = dim_at(truncation);
  Matrix p = Matrix::Zero(d, d);
  if (slots.up >= 0) p(slots.up, slots.up) = 1.0;
  if (slots.down >= 0) p(slots.down, slots.down) = 1.0;
  return p;
}

}  // namespace

ModeSpace build_space(int n_comp, int n_pad, int n_opt, int n_check) {
  if (n_comp < 1) throw ConfigError("must be >= 1", "n_comp");
  if (n_pad <= n_comp) throw ConfigError("must exceed n_comp", "n_pad");
  if (n_opt <= n_pad) throw ConfigError("must exceed n_pad", "n_opt");
  if (n_check <= n_opt) throw ConfigError("must exceed n_opt", "n_check");
  return ModeSpace{n_comp, n_pad, n_opt, n_check};
}

ModeSpace build_space(int n_comp) {
  const int n_opt = n_comp + 5;
  return build_space(n_comp, n_comp + 3, n_opt, 4 * n_opt);
}

BlockSlots h1_slots(int truncation, int n) {
  check_level(truncation, n, truncation, "h1");
  return {flat_index(n, Spin::kUp), flat_index(n, Spin::kDown)};
}

BlockSlots h2_slots(int truncation, int n) {
  check_level(truncation, n, truncation + 1, "h2");
  BlockSlots s;
  if (n >= 1) s.up = flat_index(n - 1, Spin::kUp);
  if (n <= truncation) s.down = flat_index(n, Spin::kDown);
  return s;
}

BlockSlots block_slots(int truncation, Family family, int n) {
  return family == Family::kCarrier ? h1_slots(truncation, n)
                                    : h2_slots(truncation, n);
}

int block_count(int truncation, Family family) {
  return family == Family::kCarrier ? truncation + 1 : truncation + 2;
}

Matrix proj_h1(int truncation, int n) {
  return projector_from_slots(truncation, h1_slots(truncation, n));
}

Matrix proj_h2(int truncation, int n) {
  return projector_from_slots(truncation, h2_slots(truncation, n));
}

Matrix pauli_block(int truncation, Family family, Axis axis, int n) {
  const int d = dim_at(truncation);
  Matrix m = Matrix::Zero(d, d);
  if (family == Family::kSideband && n == 0) {
    check_level(truncation, n, truncation + 1, "h2");
    return m;
  }
  const BlockSlots s = block_slots(truncation, family, n);
  if (s.up < 0 || s.down < 0) {
    // Rank-1 top block: only the diagonal z entry survives.
    if (axis == Axis::kZ && s.up >= 0) m(s.up, s.up) = 1.0;
    return m;
  }
  switch (axis) {
    case Axis::kX:
      m(s.up, s.down) = 1.0;
      m(s.down, s.up) = 1.0;
      break;
    case Axis::kY:
      m(s.up, s.down) = -kI;
      m(s.down, s.up) = kI;
      break;
    case Axis::kZ:
      m(s.up, s.up) = 1.0;
      m(s.down, s.down) = -1.0;
      break;
  }
  return m;
}

Matrix level_projector(int truncation, int lo, int hi) {
  const int d = dim_at(truncation);
  Matrix p = Matrix::Zero(d, d);
  for (int n = std::max(lo, 0); n <= std::min(hi, truncation); ++n) {
    p(2 * n, 2 * n) = 1.0;
    p(2 * n + 1, 2 * n + 1) = 1.0;
  }
  return p;
}

Matrix comp_projector(int truncation, int n_comp) {
  return level_projector(truncation, 0, n_comp);
}

Matrix annihilation(int truncation) {
  const int d = dim_at(truncation);
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n <= truncation; ++n) {
    const double amp = std::sqrt(static_cast<double>(n));
    a(flat_index(n - 1, Spin::kDown), flat_index(n, Spin::kDown)) = amp;
    a(flat_index(n - 1, Spin::kUp), flat_index(n, Spin::kUp)) = amp;
  }
  return a;
}

Matrix spin_pauli(int truncation, Axis axis) {
  const int d = dim_at(truncation);
  Matrix m = Matrix::Zero(d, d);
  for (int n = 0; n <= truncation; ++n) {
    const int up = flat_index(n, Spin::kUp);
    const int dn = flat_index(n, Spin::kDown);
    switch (axis) {
      case Axis::kX:
        m(up, dn) = 1.0;
        m(dn, up) = 1.0;
        break;
      case Axis::kY:
        m(up, dn) = -kI;
        m(dn, up) = kI;
        break;
      case Axis::kZ:
        m(up, up) = 1.0;
        m(dn, dn) = -1.0;
        break;
    }
  }
  return m;
}

SubspaceProjector opt_subspace_projector(int n_comp, Family a, int n,
                                         int n_script, int truncation) {
  const int big_n = n_comp;
  if (n_script < -1 || n < n_script + 1 || n > big_n) {
    throw DomainError("opt_subspace_projector: need -1 <= n_script < n <= N");
  }
  if (a == Family::kSideband && n < 1) {
    throw DomainError("opt_subspace_projector: family 2 needs n >= 1");
  }
  if (truncation < big_n) throw DomainError("truncation below n_comp");

  std::vector<int> blocks;
  auto add_range = [&](int lo, int hi) {
    for (int j = lo; j <= hi; ++j) blocks.push_back(j);
  };
  if (a == Family::kSideband) {
    add_range(1, n_script);
    blocks.push_back(n);
  } else if (n != n_script + 1) {
    add_range(1, n_script + 1);
    blocks.push_back(n);
    if (n != big_n) blocks.push_back(n + 1);
  } else {
    add_range(1, n_script);
    blocks.push_back(n);
    if (n != big_n) blocks.push_back(n + 1);
  }
  blocks.push_back(big_n + 1);

  const int comp_dim = 2 * (big_n + 1);
  std::vector<int> idx;
  for (int j : blocks) {
    const BlockSlots s = h2_slots(truncation, j);
    for (int f : {s.up, s.down}) {
      if (f >= 0 && f < comp_dim) idx.push_back(f);
    }
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

  SubspaceProjector out;
  const int d = dim_at(truncation);
  out.projector = Matrix::Zero(d, d);
  for (int f : idx) out.projector(f, f) = 1.0;
  out.indices = idx;
  out.rank = static_cast<int>(idx.size());
  out.d_perp = comp_dim - out.rank;
  return out;
}

Matrix embed_identity(const Matrix& m, int truncation) {
  const int d = dim_at(truncation);
  if (m.rows() > d || m.rows() != m.cols()) {
    throw DomainError("embed_identity: matrix larger than target space");
  }
  Matrix out = Matrix::Identity(d, d);
  out.topLeftCorner(m.rows(), m.cols()) = m;
  return out;
}

}  // namespace jcpulse
