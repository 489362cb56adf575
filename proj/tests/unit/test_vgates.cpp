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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "jcpulse/hilbert.hpp"
#include "jcpulse/law_eberly.hpp"
#include "jcpulse/random.hpp"
#include "jcpulse/vgates.hpp"

using namespace jcpulse;

namespace {

Vec3 random_axis(Rng& rng, bool planar) {
  std::normal_distribution<double> nd;
  Vec3 v(nd(rng), nd(rng), planar ? 0.0 : nd(rng));
  return v.normalized();
}

// Columns on which the assembled gate must agree with the block rotation:
// every level up to n_script plus the rotated block itself.
std::vector<int> defined_columns(int truncation, Family a, int n, int n_script) {
  std::vector<int> cols;
  for (int m = 0; m <= n_script; ++m) {
    cols.push_back(flat_index(m, Spin::kDown));
    cols.push_back(flat_index(m, Spin::kUp));
  }
  const BlockSlots s = block_slots(truncation, a, n);
  for (int c : {s.up, s.down}) {
    bool seen = false;
    for (int x : cols) seen = seen || x == c;
    if (c >= 0 && !seen) cols.push_back(c);
  }
  return cols;
}

}  // namespace

TEST_CASE("V gate targets") {
  const int big_n = 4;
  const int trunc = big_n + 1;
  for (int a = 1; a <= 2; ++a) {
    for (int n = a == 2 ? 1 : 0; n <= big_n; ++n) {
      for (int s = -1; s < n; ++s) {
        const VGateSpec spec{Family(a), n, s, big_n};
        const Matrix v = v_gate_target(spec, trunc);
        CAPTURE(spec.key());
        // Diagonal, unitary, fixes |0 down>, unit determinant per h2 block.
        CHECK((Matrix(v.diagonal().asDiagonal()) - v).norm() == 0.0);
        CHECK((v.adjoint() * v - Matrix::Identity(v.rows(), v.cols())).norm() <
              1e-15);
        CHECK(std::abs(v(0, 0) - 1.0) < 1e-15);
        for (int b = 1; b <= trunc; ++b) {
          const BlockSlots sl = h2_slots(trunc, b);
          CHECK(std::abs(v(sl.up, sl.up) * v(sl.down, sl.down) - 1.0) < 1e-15);
        }
        // Levels up to n_script are untouched, except |n_script up> for
        // family 2, which belongs to the rotated block when n = n_script + 1.
        for (int m = 0; m <= s; ++m) {
          CHECK(std::abs(v(2 * m, 2 * m) - 1.0) < 1e-15);
          if (a == 2 && m == s) continue;
          CHECK(std::abs(v(2 * m + 1, 2 * m + 1) - 1.0) < 1e-15);
        }
        const SubspaceProjector p = v_gate_projector(spec, trunc);
        CHECK(p.rank + p.d_perp == 2 * (big_n + 1));
      }
    }
  }
  CHECK(VGateSpec{Family::kCarrier, 3, 1, 3}.key() == "a1_n3_s1_N3");
  CHECK_THROWS_AS(v_gate_target({Family::kCarrier, 2, 2, 3}, 4), DomainError);
  CHECK_THROWS_AS(v_gate_target({Family::kSideband, 0, -1, 3}, 4), DomainError);
  CHECK_THROWS_AS(v_gate_target({Family::kCarrier, 1, 0, 3}, 3), DomainError);
}

TEST_CASE("exact-V assembly reproduces block rotations") {
  Rng rng(99);
  std::uniform_real_distribution<double> ang(-2.0 * kPi, 2.0 * kPi);
  for (int big_n : {1, 3}) {
    const int trunc = big_n + 1;
    for (int a = 1; a <= 2; ++a) {
      for (int i = 0; i < 100; ++i) {
        const int lo = a == 2 ? 1 : 0;
        const int n = lo + static_cast<int>(rng() % (big_n - lo + 1));
        const int s = -1 + static_cast<int>(rng() % (n + 1));
        // Sideband pulses only reach xy axes; z components are handled
        // by the conjugation.
        const BlockRotation rot{Family(a), n, ang(rng),
                                random_axis(rng, i % 4 == 0)};
        const Matrix u = assemble_u_exact(
            rot, v_gate_target({Family(a), n, s, big_n}, trunc), trunc);
        const Matrix r = layer_matrix(trunc, RotationLayer{Family(a), s, {rot}});
        double worst = 0.0;
        for (int c : defined_columns(trunc, Family(a), n, s)) {
          worst = std::max(worst, (u.col(c) - r.col(c)).norm());
        }
        CAPTURE(a);
        CAPTURE(n);
        CAPTURE(s);
        CHECK(worst < 1e-12);
      }
    }
  }
}

TEST_CASE("assembled sequence matches the exact assembly") {
  Rng rng(4);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  PulseSequence v;
  for (int i = 0; i < 6; ++i) {
    SidebandPulse p;
    p.g = 1.0;
    p.delta = 0.3 * u01(rng);
    p.beta = 2 * kPi * u01(rng);
    p.duration = u01(rng);
    v.append(p);
  }
  const int trunc = 4;
  const Matrix v_mat = sequence_unitary(trunc, v);
  for (int a = 1; a <= 2; ++a) {
    for (bool planar : {true, false}) {
      const BlockRotation rot{Family(a), 2, 1.1, random_axis(rng, planar)};
      const Matrix seq = sequence_unitary(trunc, assemble_u(rot, v));
      CHECK((seq - assemble_u_exact(rot, v_mat, trunc)).norm() < 1e-12);
    }
  }
  CHECK(assemble_u({Family::kCarrier, 1, 0.0, Vec3::UnitX()}, v).pulses.empty());
  CHECK(assemble_u({Family::kSideband, 0, 0.4, Vec3::UnitX()}, v).pulses.empty());
}

TEST_CASE("rotation pulses") {
  const Pulse c = carrier_rotation_pulse(-0.5, Vec3(0.0, 0.6, 0.8));
  const auto& cp = std::get<CarrierPulse>(c);
  CHECK(cp.duration == doctest::Approx(0.5));
  CHECK(cp.delta == doctest::Approx(0.8));
  CHECK(cp.chi == doctest::Approx(0.6));
  const Pulse s = sideband_rotation_pulse(1.0, Vec3::UnitY(), 4);
  CHECK(std::get<SidebandPulse>(s).duration == doctest::Approx(0.5));
  CHECK_THROWS_AS(sideband_rotation_pulse(1.0, Vec3::UnitZ(), 1), DomainError);
  CHECK_THROWS_AS(sideband_rotation_pulse(1.0, Vec3::UnitX(), 0), DomainError);
}
