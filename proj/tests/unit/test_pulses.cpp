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

#include "jcpulse/hilbert.hpp"
#include "jcpulse/pulses.hpp"
#include "jcpulse/random.hpp"
#include "jcpulse/su2.hpp"
#include "support/oracles.hpp"

using namespace jcpulse;

namespace {

double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

double commutator(const Matrix& a, const Matrix& b) {
  return (a * b - b * a).norm();
}

}  // namespace

TEST_CASE("su2 rotation round trip") {
  Rng rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    Vec3 axis(u(rng), u(rng), u(rng));
    axis.normalize();
    const double angle = kPi * (1.0 + u(rng));
    const Mat2 r = rotation(angle, axis);
    CHECK(is_su2(r));
    const AngleAxis aa = to_angle_axis(r);
    CHECK((rotation(aa.angle, aa.axis) - r).norm() < 1e-12);
  }
  CHECK(to_angle_axis(-Mat2::Identity()).angle == doctest::Approx(2 * kPi));
}

TEST_CASE("carrier propagator") {
  const int l = 3;
  CarrierPulse p{0.0, kPi / 2.0, 0.0, 2.0};  // chi T = pi
  const Matrix u = propagate_carrier(l, p);
  for (int n = 0; n <= l; ++n) {
    // -i sigma_x on every h1 block.
    const BlockSlots s = h1_slots(l, n);
    CHECK(std::abs(u(s.up, s.down) - Complex(0, -1)) < 1e-12);
    CHECK(std::abs(u(s.down, s.up) - Complex(0, -1)) < 1e-12);
    CHECK(std::abs(u(s.up, s.up)) < 1e-12);
  }
  CHECK((propagate_carrier(l, CarrierPulse{0, 0, 0.3, 5.0}) -
         Matrix::Identity(8, 8))
            .norm() == 0.0);

  Rng rng(11);
  std::uniform_real_distribution<double> r(0.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    CarrierPulse q{r(rng) - 1.0, r(rng), 3.0 * r(rng), r(rng)};
    const Matrix uq = propagate_carrier(l, q);
    const Matrix ref = oracle::expm_minus_i(
        oracle::jc_hamiltonian(l, q.delta, q.chi, q.phi, 0.0, 0.0),
        q.duration);
    CHECK((uq - ref).norm() < 1e-12);
    CHECK(unitarity_defect(uq) < 1e-12);
    for (int n = 0; n <= l; ++n) CHECK(commutator(uq, proj_h1(l, n)) < 1e-12);
  }
}

TEST_CASE("sideband propagator") {
  const int l = 5;
  SidebandPulse p{0, 1.0, 0.0, 0.0, kPi};
  const Matrix u = propagate_sideband(l, p);
  // |0 up> -> -i |1 down>
  CHECK(std::abs(u(flat_index(1, Spin::kDown), flat_index(0, Spin::kUp)) -
                 Complex(0, -1)) < 1e-12);
  // block 4 rotates by 2 pi: -I
  const BlockSlots s4 = h2_slots(l, 4);
  CHECK(std::abs(u(s4.up, s4.up) + 1.0) < 1e-12);
  CHECK(std::abs(u(s4.down, s4.down) + 1.0) < 1e-12);

  // g = 0: diagonal z phases only.
  const Matrix z = propagate_sideband(l, SidebandPulse{0, 0.0, 0.7, 0.0, 1.3});
  CHECK((z - Matrix(z.diagonal().asDiagonal())).norm() < 1e-14);

  Rng rng(5);
  std::uniform_real_distribution<double> r(0.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    SidebandPulse q{0, r(rng), r(rng) - 1.0, 3.0 * r(rng), r(rng)};
    const Matrix uq = propagate_sideband(l, q);
    const Matrix ref = oracle::expm_minus_i(
        oracle::jc_hamiltonian(l, q.delta, 0.0, 0.0, q.g, q.beta), q.duration);
    CHECK((uq - ref).norm() < 1e-12);
    CHECK(unitarity_defect(uq) < 1e-12);
    for (int n = 0; n <= l + 1; ++n) {
      CHECK(commutator(uq, proj_h2(l, n)) < 1e-12);
    }
  }
}

TEST_CASE("general propagator and regime consistency") {
  const int l = 4;
  const int d = dim_at(l);
  CHECK((propagate_general(l, GeneralPulse{0, 0, 0, 0, 0, 0, 3.0}) -
         Matrix::Identity(d, d))
            .norm() < 1e-12);

  Rng rng(3);
  std::uniform_real_distribution<double> r(0.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    GeneralPulse q{0, r(rng) - 1.0, r(rng), 3 * r(rng), r(rng), 3 * r(rng),
                   r(rng)};
    const Matrix u = propagate_general(l, q);
    const Matrix ref = oracle::expm_minus_i(
        oracle::jc_hamiltonian(l, q.delta, q.chi, q.phi, q.g, q.beta),
        q.duration);
    CHECK((u - ref).norm() < 1e-11);
    CHECK(unitarity_defect(u) < 1e-12);

    GeneralPulse sb = q;
    sb.chi = 0.0;
    CHECK((propagate_general(l, sb) -
           propagate_sideband(l, SidebandPulse{0, q.g, q.delta, q.beta,
                                               q.duration}))
              .norm() < 1e-12);
    GeneralPulse cr = q;
    cr.g = 0.0;
    CHECK((propagate_general(l, cr) -
           propagate_carrier(l, CarrierPulse{q.delta, q.chi, q.phi,
                                             q.duration}))
              .norm() < 1e-12);

    // chi = 0 conserves a^dag a + |up><up|.
    Matrix excitation = Matrix::Zero(d, d);
    for (int n = 0; n <= l; ++n) {
      excitation(2 * n, 2 * n) = n;
      excitation(2 * n + 1, 2 * n + 1) = n + 1;
    }
    CHECK(commutator(propagate_general(l, sb), excitation) < 1e-11);
  }
}

TEST_CASE("sequence ordering, sqrt and dagger") {
  const int l = 3;
  const int d = dim_at(l);
  CHECK((sequence_unitary(l, PulseSequence{}) - Matrix::Identity(d, d))
            .norm() == 0.0);

  const Pulse p1 = CarrierPulse{0.3, 0.8, 1.1, 0.9};
  const Pulse p2 = SidebandPulse{0, 0.7, -0.2, 0.4, 1.7};
  const Pulse p3 = GeneralPulse{0, 0.1, 0.5, 0.2, 0.9, 2.0, 1.2};
  PulseSequence seq;
  seq.append(p1);
  seq.append(p2);
  CHECK((sequence_unitary(l, seq) - propagate(l, p2) * propagate(l, p1))
            .norm() < 1e-12);
  seq.append(p3);
  CHECK(seq.total_duration() == doctest::Approx(0.9 + 1.7 + 1.2));

  PulseSequence round = seq;
  round.append(sequence_dagger(seq));
  CHECK((sequence_unitary(l, round) - Matrix::Identity(d, d)).norm() < 1e-10);

  for (const Pulse& p : {p1, p2, p3, Pulse{SidebandPulse{0, 1, 0, 0, 0}}}) {
    const Matrix half = propagate(l, pulse_sqrt(p));
    CHECK((half * half - propagate(l, p)).norm() < 1e-12);
    const Matrix dag = propagate(l, pulse_dagger(p));
    CHECK((dag * propagate(l, p) - Matrix::Identity(d, d)).norm() < 1e-12);
    CHECK((propagate(l, pulse_dagger(pulse_dagger(p))) - propagate(l, p))
              .norm() < 1e-12);
  }
  const auto dagger = std::get<SidebandPulse>(
      pulse_dagger(SidebandPulse{0, 1.0, 0.4, 0.0, 1.0}));
  CHECK(dagger.beta == doctest::Approx(kPi));
  CHECK(dagger.delta == doctest::Approx(-0.4));

  PulseSequence mixed;
  mixed.append(SidebandPulse{1, 1, 0, 0, 1});
  mixed.append(SidebandPulse{2, 1, 0, 0, 1});
  CHECK_THROWS_AS(sequence_unitary(l, mixed), DomainError);
}

TEST_CASE("SidebandBlocks matches dense products") {
  const int l = 4;
  Rng rng(9);
  std::uniform_real_distribution<double> r(0.0, 2.0);
  SidebandBlocks blocks(l);
  Matrix dense = Matrix::Identity(dim_at(l), dim_at(l));
  for (int k = 0; k < 12; ++k) {
    SidebandPulse q{0, r(rng), r(rng) - 1.0, 3 * r(rng), r(rng)};
    blocks.apply_left(q);
    dense = propagate_sideband(l, q) * dense;
  }
  CHECK((blocks.to_matrix() - dense).norm() < 1e-12);
  CHECK((blocks.adjoint().to_matrix() - dense.adjoint()).norm() < 1e-12);
}

TEST_CASE("pulse validation") {
  CHECK_THROWS_AS(validate_pulse(CarrierPulse{0, -1, 0, 1}), DomainError);
  CHECK_THROWS_AS(validate_pulse(SidebandPulse{0, 1, 0, 0, -1}), DomainError);
  CHECK_THROWS_AS(validate_pulse(GeneralPulse{0, NAN, 0, 0, 0, 0, 1}),
                  DomainError);
  CHECK_NOTHROW(validate_pulse(GeneralPulse{1, 0, 0, 0, 1, 0, 1}));
}
