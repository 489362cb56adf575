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
#include "jcpulse/metrics.hpp"
#include "jcpulse/random.hpp"
#include "support/oracles.hpp"

using namespace jcpulse;

namespace {

Matrix random_hermitian(int d, Rng& rng) {
  const Matrix u = haar_unitary(d, rng);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd w(d);
  for (int i = 0; i < d; ++i) w(i) = n(rng);
  Matrix h = u * w.cast<Complex>().asDiagonal() * u.adjoint();
  return h / h.norm();
}

}  // namespace

TEST_CASE("phase_min_error basics") {
  Rng rng(1);
  const int big_n = 2;
  const int l = 3;
  const Matrix t = haar_unitary(dim_at(l), rng);
  const Matrix pc = comp_projector(l, big_n);
  ErrorReport r = phase_min_error(t, t, pc, big_n);
  CHECK(r.raw_error < 1e-7);
  CHECK(r.eta < 1e-14);
  r = phase_min_error(t, std::exp(Complex(0, kPi / 3)) * t, pc, big_n);
  CHECK(r.raw_error < 1e-7);
  CHECK(r.optimal_phase == doctest::Approx(kPi / 3));

  // Zero trace: phase is defined as 0.
  const Matrix z = Matrix::Zero(dim_at(l), dim_at(l));
  CHECK(phase_min_error(t, z, pc, big_n).optimal_phase == 0.0);
}

TEST_CASE("phase_min_error against a phase scan") {
  Rng rng(2);
  for (int big_n : {1, 2, 3}) {
    const int l = big_n + 1;
    const Matrix pc = comp_projector(l, big_n);
    for (int k = 0; k < 5; ++k) {
      const Matrix t = haar_unitary(dim_at(l), rng);
      Matrix c = std::exp(Complex(0, 0.7 * k)) * t;
      c.col(k % (2 * big_n + 2)).setZero();
      c += 0.05 * haar_unitary(dim_at(l), rng);
      const ErrorReport r = phase_min_error(t, c, pc, big_n);
      const double scan = oracle::phase_scan_error(t, c, pc, 10000);
      CHECK(std::abs(r.raw_error - scan) < 1e-9);
      CHECK(r.eta == doctest::Approx(r.raw_error * r.raw_error /
                                     (4.0 * (big_n + 1))));
      CHECK(std::abs(comp_error(t, c, big_n).raw_error - r.raw_error) < 1e-12);
    }
  }
}

TEST_CASE("phase invariance and symmetry") {
  Rng rng(3);
  const int big_n = 2;
  const Matrix pc = comp_projector(3, big_n);
  const Matrix t = embed_identity(haar_unitary(6, rng), 3);
  const Matrix c = haar_unitary(8, rng);
  const double base = phase_min_error(t, c, pc, big_n).raw_error;
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int k = 0; k < 16; ++k) {
    const Complex e1 = std::exp(Complex(0, u(rng)));
    const Complex e2 = std::exp(Complex(0, u(rng)));
    CHECK(std::abs(phase_min_error(e1 * t, e2 * c, pc, big_n).raw_error -
                   base) < 1e-12);
  }
  CHECK(gate_fidelity(t, c, big_n) ==
        doctest::Approx(gate_fidelity(c, t, big_n)).epsilon(1e-14));
  CHECK(gate_fidelity(t, t, big_n) == doctest::Approx(1.0));
  CHECK(gate_fidelity(t, std::exp(Complex(0, 1.2)) * t, big_n) ==
        doctest::Approx(1.0));
}

TEST_CASE("fidelity is 1 - 2 eta for small unitary perturbations") {
  Rng rng(4);
  for (int big_n : {1, 2, 3}) {
    const int d = 2 * (big_n + 1);
    for (int k = 0; k < 10; ++k) {
      const Matrix t = haar_unitary(d, rng);
      const Matrix h = random_hermitian(d, rng);
      const Matrix c = t * oracle::expm_minus_i(h, 1e-3);
      const ErrorReport r = comp_error(t, c, big_n);
      CHECK(std::abs(r.fidelity - (1.0 - 2.0 * r.eta)) < 1e-6);
    }
  }
}

TEST_CASE("subspace objective") {
  Rng rng(5);
  const int big_n = 3;
  const int l = 4;
  const SubspaceProjector p =
      opt_subspace_projector(big_n, Family::kSideband, 3, 1, l);
  // Diagonal target: unitary on every coordinate subspace.
  Vector phases(dim_at(l));
  std::uniform_real_distribution<double> ph(0.0, 2 * kPi);
  for (int i = 0; i < dim_at(l); ++i) phases(i) = std::exp(Complex(0, ph(rng)));
  const Matrix t = phases.asDiagonal();
  CHECK(std::abs(subspace_objective(t, t, p, big_n)) < 1e-14);

  for (int k = 0; k < 10; ++k) {
    const Matrix c = haar_unitary(dim_at(l), rng);
    const double obj = subspace_objective(t, c, p, big_n);
    const Complex tr =
        (p.projector * t.adjoint() * p.projector * c * p.projector).trace();
    CHECK(obj == doctest::Approx(1.0 - std::abs(double(p.d_perp) + tr) /
                                           (2.0 * (big_n + 1))));
    CHECK(obj >= 0.0);
    CHECK(obj <= 1.0);
  }
  // d_perp = 0 reduces to 1 - |Tr| / (2(N+1)).
  SubspaceProjector full;
  full.projector = comp_projector(l, big_n);
  for (int i = 0; i < 2 * (big_n + 1); ++i) full.indices.push_back(i);
  full.rank = 2 * (big_n + 1);
  const Matrix c = haar_unitary(dim_at(l), rng);
  CHECK(subspace_objective(t, c, full, big_n) ==
        doctest::Approx(1.0 - std::abs((t.topLeftCorner(8, 8).adjoint() *
                                        c.topLeftCorner(8, 8))
                                           .trace()) /
                                  8.0));
}

TEST_CASE("subspace objective bounds the phase-minimized error") {
  // eta restricted to the projector <= objective for unitary candidates that
  // agree with the target outside the optimized subspace.
  Rng rng(6);
  const int big_n = 2;
  const int l = 3;
  const SubspaceProjector p =
      opt_subspace_projector(big_n, Family::kCarrier, 2, 0, l);
  const Matrix t = haar_unitary(dim_at(l), rng);
  for (int k = 0; k < 20; ++k) {
    const Matrix c = t * oracle::expm_minus_i(random_hermitian(dim_at(l), rng),
                                              0.05 * (k + 1));
    const double eta =
        phase_min_error(t, c, p.projector, big_n).eta;
    CHECK(eta <= subspace_objective(t, c, p, big_n) + 1e-14);
  }
}

TEST_CASE("leakage") {
  const ModeSpace s = build_space(1, 2, 4, 8);
  const int d = dim_at(s.n_opt);
  const std::vector<Matrix> id(5, Matrix::Identity(d, d));
  CHECK(leakage(s, id) == 0.0);

  // Evolution confined below n_pad.
  Rng rng(7);
  Matrix confined = Matrix::Identity(d, d);
  confined.topLeftCorner(6, 6) = haar_unitary(6, rng);
  CHECK(leakage(s, {confined}) == 0.0);

  CHECK(cost_cfn(1.0, 0.0) == 0.0);
  CHECK(cost_cfn(0.999, 1e-6, 100.0) == doctest::Approx(1.1e-3));
  CHECK(cost_cfn(0.9, 0.5, 0.0) == doctest::Approx(0.1));
}

TEST_CASE("leakage padding monotonicity") {
  Rng rng(8);
  const ModeSpace narrow = build_space(1, 2, 5, 10);
  const ModeSpace wide = build_space(1, 3, 5, 10);
  const int d = dim_at(5);
  std::vector<Matrix> us;
  for (int k = 0; k < 4; ++k) us.push_back(haar_unitary(d, rng));
  CHECK(leakage(wide, us) <= leakage(narrow, us) + 1e-15);
}
