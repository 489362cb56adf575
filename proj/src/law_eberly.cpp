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

#include "jcpulse/law_eberly.hpp"

#include <cmath>

#include "jcpulse/hilbert.hpp"
#include "jcpulse/su2.hpp"

namespace jcpulse {

namespace {

// Rows (slots.up, slots.down) of x <- b * rows.
void rotate_rows(Matrix& x, BlockSlots slots, const Mat2& b) {
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const Complex u = x(slots.up, c);
    const Complex d = x(slots.down, c);
    x(slots.up, c) = b(0, 0) * u + b(0, 1) * d;
    x(slots.down, c) = b(1, 0) * u + b(1, 1) * d;
  }
}

void require_unitary(const Matrix& m, int n_comp) {
  const int d = 2 * (n_comp + 1);
  if (m.rows() != d || m.cols() != d) {
    throw DomainError("target must be a " + std::to_string(d) + "x" +
                      std::to_string(d) + " matrix");
  }
  if ((m.adjoint() * m - Matrix::Identity(d, d)).norm() > 1e-8) {
    throw DomainError("target is not unitary");
  }
}

class Compiler {
 public:
  Compiler(int n_comp, Matrix x, const LayerRealizer* realize)
      : n_(n_comp), x_(std::move(x)), realize_(realize) {
    program_.n_comp = n_comp;
  }

  // Emits one rotation on `block` that clears the slot opposite to the
  // family's destination slot in column `col` of the working matrix.
  void transfer(Family family, int block, int n_script, int col,
                bool zero_phase) {
    const BlockSlots s = block_slots(n_, family, block);
    const Complex up = x_(s.up, col);
    const Complex dn = x_(s.down, col);
    BlockRotation r;
    r.family = family;
    r.block = block;
    if (family == Family::kCarrier) {
      // Destination |block down>, the second slot.
      const Transfer t = two_level_transfer(up, dn, zero_phase);
      r.angle = t.angle;
      r.axis = t.axis;
    } else {
      // Destination |block-1 up>, the first slot: solve in swapped order and
      // conjugate by sigma_x.
      const Transfer t = two_level_transfer(dn, up, zero_phase);
      r.angle = t.angle;
      r.axis = Vec3(t.axis.x(), -t.axis.y(), -t.axis.z());
    }
    RotationLayer layer{family, n_script, {r}};
    if (realize_ != nullptr) {
      const Matrix applied = (*realize_)(layer);
      x_ = applied * x_;
    } else {
      rotate_rows(x_, s, block_matrix(r));
    }
    program_.layers.push_back(std::move(layer));
  }

  // Clears everything above level n in column col and lands the population
  // on |n s>.
  void prepare(int n, Spin s, int col) {
    if (s == Spin::kDown) {
      for (int j = n_; j >= n + 1; --j) {
        transfer(Family::kCarrier, j, n - 1, col, false);
        transfer(Family::kSideband, j, n, col, false);
      }
      transfer(Family::kCarrier, n, n - 1, col, true);
    } else {
      for (int j = n_; j >= n + 1; --j) {
        transfer(Family::kCarrier, j, n, col, false);
        transfer(Family::kSideband, j, n, col, j == n + 1);
      }
    }
  }

  BlockRotationProgram take() { return std::move(program_); }

 private:
  int n_;
  Matrix x_;
  const LayerRealizer* realize_;
  BlockRotationProgram program_;
};

BlockRotationProgram compile_impl(int n_comp, const Matrix& target,
                                  const LayerRealizer* realize) {
  require_unitary(target, n_comp);
  const int d = 2 * (n_comp + 1);
  // Strip the determinant phase: with det = 1 every rotation is in SU(2),
  // so the last basis state |N up> also ends with phase 1.
  const Complex det = target.determinant();
  const Complex unit = std::exp(Complex(0.0, -std::arg(det) / d));
  Compiler c(n_comp, (unit * target).adjoint(), realize);
  for (int n = 0; n <= n_comp; ++n) {
    c.prepare(n, Spin::kDown, flat_index(n, Spin::kDown));
    if (n < n_comp) c.prepare(n, Spin::kUp, flat_index(n, Spin::kUp));
  }
  return c.take();
}

}  // namespace

Transfer two_level_transfer(Complex amp_a, Complex amp_b, bool zero_phase) {
  const double ra = std::abs(amp_a);
  const double rb = std::abs(amp_b);
  const double r = std::hypot(ra, rb);
  Transfer t;
  if (r == 0.0) return t;
  if (zero_phase) {
    Mat2 m;
    m << amp_b, -amp_a, std::conj(amp_a), std::conj(amp_b);
    m /= r;
    const AngleAxis aa = to_angle_axis(m);
    t.angle = aa.angle;
    t.axis = aa.axis;
    return t;
  }
  if (ra == 0.0) return t;
  t.angle = 2.0 * std::atan2(ra, rb);
  const double nu = 0.5 * kPi + std::arg(amp_b) - std::arg(amp_a);
  t.axis = Vec3(std::cos(nu), std::sin(nu), 0.0);
  return t;
}

Mat2 block_matrix(const BlockRotation& r) { return rotation(r.angle, r.axis); }

Matrix layer_matrix(int truncation, const RotationLayer& layer) {
  const int d = dim_at(truncation);
  Matrix m = Matrix::Identity(d, d);
  for (const BlockRotation& r : layer.rotations) {
    if (r.family != layer.family) {
      throw DomainError("layer mixes rotation families");
    }
    if (r.family == Family::kSideband && r.block == 0) continue;
    const BlockSlots s = block_slots(truncation, r.family, r.block);
    if (s.up < 0 || s.down < 0) {
      throw DomainError("rotation on a truncated block");
    }
    rotate_rows(m, s, block_matrix(r));
  }
  return m;
}

Matrix evaluate(int truncation, const BlockRotationProgram& program) {
  if (truncation < program.n_comp) {
    throw DomainError("evaluate: truncation below n_comp");
  }
  const int d = dim_at(truncation);
  Matrix u = Matrix::Identity(d, d);
  for (const RotationLayer& layer : program.layers) {
    for (const BlockRotation& r : layer.rotations) {
      if (r.family == Family::kSideband && r.block == 0) continue;
      const BlockSlots s = block_slots(truncation, r.family, r.block);
      if (s.up < 0 || s.down < 0) {
        throw DomainError("rotation on a truncated block");
      }
      rotate_rows(u, s, block_matrix(r));
    }
  }
  return u;
}

BlockRotationProgram inverse_program(const BlockRotationProgram& program) {
  BlockRotationProgram inv;
  inv.n_comp = program.n_comp;
  for (auto it = program.layers.rbegin(); it != program.layers.rend(); ++it) {
    RotationLayer layer = *it;
    for (BlockRotation& r : layer.rotations) r.angle = -r.angle;
    inv.layers.push_back(std::move(layer));
  }
  return inv;
}

BlockRotationProgram state_prep(int n_comp, const Vector& state) {
  const int d = 2 * (n_comp + 1);
  if (state.size() != d) throw DomainError("state has the wrong dimension");
  if (std::abs(state.norm() - 1.0) > 1e-10) {
    throw DomainError("state is not normalized");
  }
  Matrix x(d, 1);
  x.col(0) = state;
  Compiler c(n_comp, std::move(x), nullptr);
  c.prepare(0, Spin::kDown, 0);
  return c.take();
}

BlockRotationProgram compile_unitary(int n_comp, const Matrix& target) {
  return compile_impl(n_comp, target, nullptr);
}

BlockRotationProgram compile_unitary_adaptive(int n_comp, const Matrix& target,
                                              const LayerRealizer& realize) {
  return compile_impl(n_comp, target, &realize);
}

}  // namespace jcpulse
