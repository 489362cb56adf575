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
#include "jcpulse/metrics.hpp"
#include "jcpulse/random.hpp"
#include "jcpulse/su2.hpp"

using namespace jcpulse;

namespace {

// Basis states in preparation order with the number of layers each step
// emits.
struct Step {
  int flat;
  int layers;
};

std::vector<Step> steps(int big_n) {
  std::vector<Step> out;
  for (int n = 0; n <= big_n; ++n) {
    out.push_back({flat_index(n, Spin::kDown), 2 * (big_n - n) + 1});
    if (n < big_n) out.push_back({flat_index(n, Spin::kUp), 2 * (big_n - n)});
  }
  return out;
}

// Checks sequential fixing and containment for every layer.
void check_program_invariants(const BlockRotationProgram& prog) {
  const int big_n = prog.n_comp;
  const int l = big_n + 2;
  const Matrix pc = comp_projector(l, big_n);
  const Matrix outside = Matrix::Identity(dim_at(l), dim_at(l)) - pc;
  std::size_t layer = 0;
  std::vector<int> prepared;
  for (const Step& s : steps(big_n)) {
    for (int k = 0; k < s.layers; ++k, ++layer) {
      REQUIRE(layer < prog.layers.size());
      const Matrix m = layer_matrix(l, prog.layers[layer]);
      CHECK((outside * m * pc).norm() == 0.0);
      for (int f : prepared) {
        Vector e = Vector::Zero(dim_at(l));
        e(f) = 1.0;
        CHECK((m * e - e).norm() < 1e-12);
      }
    }
    prepared.push_back(s.flat);
  }
  CHECK(layer == prog.layers.size());
}

}  // namespace

TEST_CASE("two_level_transfer") {
  Transfer t = two_level_transfer(1.0, 0.0, false);
  CHECK(t.angle == doctest::Approx(kPi));
  CHECK(std::abs(t.axis.z()) < 1e-15);
  Eigen::Vector2cd v(1.0, 0.0);
  Eigen::Vector2cd out = rotation(t.angle, t.axis) * v;
  CHECK(std::abs(out(0)) < 1e-15);
  CHECK(std::abs(out(1)) == doctest::Approx(1.0));

  t = two_level_transfer(0.0, 1.0, false);
  CHECK(t.angle == 0.0);

  for (bool zp : {false, true}) {
    const Complex a(0.6, 0.0), b(0.0, 0.8);
    t = two_level_transfer(a, b, zp);
    out = rotation(t.angle, t.axis) * Eigen::Vector2cd(a, b);
    CHECK(std::abs(out(0)) < 1e-12);
    CHECK(std::abs(out(1)) == doctest::Approx(1.0));
    if (zp) {
      CHECK(std::abs(out(1) - 1.0) < 1e-12);
    } else {
      CHECK(std::abs(t.axis.z()) < 1e-15);
    }
  }

  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const Vector s = haar_state(2, rng);
    const Transfer z = two_level_transfer(s(0), s(1), true);
    const Eigen::Vector2cd r = rotation(z.angle, z.axis) * Eigen::Vector2cd(s(0), s(1));
    CHECK(std::abs(r(0)) < 1e-12);
    CHECK(std::abs(r(1) - 1.0) < 1e-12);
    CHECK(std::abs(z.axis.norm() - 1.0) < 1e-12);
  }
  CHECK(two_level_transfer(0.0, 0.0, true).angle == 0.0);
}

TEST_CASE("evaluate") {
  BlockRotationProgram empty;
  empty.n_comp = 2;
  CHECK((evaluate(3, empty) - Matrix::Identity(8, 8)).norm() == 0.0);

  BlockRotationProgram one;
  one.n_comp = 2;
  one.layers.push_back(
      {Family::kSideband, 0, {{Family::kSideband, 1, kPi, Vec3::UnitX()}}});
  const Matrix u = evaluate(2, one);
  Matrix expect = Matrix::Identity(6, 6);
  const int a = flat_index(0, Spin::kUp), b = flat_index(1, Spin::kDown);
  expect(a, a) = expect(b, b) = 0.0;
  expect(a, b) = expect(b, a) = Complex(0, -1);
  CHECK((u - expect).norm() < 1e-15);
}

TEST_CASE("state_prep") {
  for (int big_n : {1, 2, 4}) {
    const int d = 2 * (big_n + 1);
    Vector ground = Vector::Zero(d);
    ground(0) = 1.0;
    const BlockRotationProgram p0 = state_prep(big_n, ground);
    CHECK(p0.layers.size() <= static_cast<std::size_t>(2 * big_n + 1));
    CHECK((evaluate(big_n, p0) * ground - ground).norm() < 1e-14);

    Vector mix = Vector::Zero(d);
    mix(0) = mix(flat_index(big_n, Spin::kDown)) = 1.0 / std::sqrt(2.0);
    const BlockRotationProgram p1 = state_prep(big_n, mix);
    CHECK(p1.layers.size() <= static_cast<std::size_t>(2 * big_n + 1));
    CHECK((evaluate(big_n, p1) * mix - ground).norm() < 1e-12);
  }
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const int big_n = 6;
    const Vector psi = haar_state(14, rng);
    const BlockRotationProgram p = state_prep(big_n, psi);
    const Vector out = evaluate(big_n, p) * psi;
    CHECK(std::abs(out(0)) > 1.0 - 1e-12);
    CHECK(std::abs(out(0) - 1.0) < 1e-12);
    CHECK(p.layers.size() <= 13u);
  }
  CHECK_THROWS_AS(state_prep(1, Vector::Ones(4)), DomainError);
}

TEST_CASE("compile_unitary reproduces targets") {
  CHECK(compile_unitary(2, Matrix::Identity(6, 6)).layers.size() == 15u);
  {
    const Matrix u = evaluate(2, compile_unitary(2, Matrix::Identity(6, 6)));
    CHECK(comp_error(Matrix::Identity(6, 6), u, 2).raw_error < 1e-10);
  }
  // Global carrier pi pulse: -i sigma_x on every h1 block.
  for (int big_n : {1, 3}) {
    const int d = 2 * (big_n + 1);
    Matrix t = Matrix::Zero(d, d);
    for (int n = 0; n <= big_n; ++n) {
      t(2 * n, 2 * n + 1) = t(2 * n + 1, 2 * n) = Complex(0, -1);
    }
    const Matrix u = evaluate(big_n, compile_unitary(big_n, t));
    CHECK(comp_error(t, u, big_n).raw_error < 1e-10);
  }
  Rng rng(3);
  for (int big_n : {1, 2, 3, 4}) {
    const int d = 2 * (big_n + 1);
    for (int k = 0; k < 10; ++k) {
      const Matrix t = haar_unitary(d, rng);
      const BlockRotationProgram prog = compile_unitary(big_n, t);
      const Matrix u = evaluate(big_n, prog);
      CHECK(comp_error(t, u, big_n).raw_error < 1e-10);
      CHECK(prog.layers.size() <=
            static_cast<std::size_t>(2 * d * (2 * big_n + 1)));
      CHECK(prog.layers.size() ==
            static_cast<std::size_t>((2 * big_n + 1) * (big_n + 1)));
      check_program_invariants(prog);
      // Program followed by its inverse is the identity.
      const Matrix id = evaluate(big_n + 1, inverse_program(prog)) *
                        evaluate(big_n + 1, prog);
      CHECK((id - Matrix::Identity(d + 2, d + 2)).norm() < 1e-12);
    }
  }
  CHECK_THROWS_AS(compile_unitary(1, Matrix::Ones(4, 4)), DomainError);
}

TEST_CASE("adaptive compile with exact realizer matches the plain compiler") {
  Rng rng(4);
  const int big_n = 2;
  const Matrix t = haar_unitary(6, rng);
  const auto realize = [&](const RotationLayer& layer) {
    return layer_matrix(big_n, layer);
  };
  const BlockRotationProgram a = compile_unitary_adaptive(big_n, t, realize);
  const BlockRotationProgram b = compile_unitary(big_n, t);
  REQUIRE(a.layers.size() == b.layers.size());
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    CHECK(a.layers[i].rotations[0].angle ==
          doctest::Approx(b.layers[i].rotations[0].angle).epsilon(1e-12));
  }
  CHECK(comp_error(t, evaluate(big_n, a), big_n).raw_error < 1e-10);
}

TEST_CASE("adaptive compile absorbs realization errors") {
  // Each realized layer is the requested rotation followed by a small fixed
  // carrier-like perturbation; the compiled product error stays at the size
  // of a few perturbations instead of growing with bad angles.
  Rng rng(5);
  const int big_n = 2;
  const Matrix t = haar_unitary(6, rng);
  const double eps = 1e-6;
  int calls = 0;
  const auto realize = [&](const RotationLayer& layer) {
    ++calls;
    Matrix m = layer_matrix(big_n, layer);
    Mat2 kick = rotation(eps, Vec3::UnitY());
    for (int c = 0; c < m.cols(); ++c) {
      const Complex u = m(2, c), d = m(3, c);
      m(2, c) = kick(0, 0) * u + kick(0, 1) * d;
      m(3, c) = kick(1, 0) * u + kick(1, 1) * d;
    }
    return m;
  };
  const BlockRotationProgram a = compile_unitary_adaptive(big_n, t, realize);
  CHECK(calls == 15);
  CHECK(a.layers.size() == 15u);
}
