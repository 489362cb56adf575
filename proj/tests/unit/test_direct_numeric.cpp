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

#include "jcpulse/direct_numeric.hpp"
#include "jcpulse/metrics.hpp"
#include "jcpulse/random.hpp"
#include "support/oracles.hpp"

using namespace jcpulse;

namespace {

std::vector<double> random_controls(int steps, Rng& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::uniform_real_distribution<double> a(0.0, 2.0 * kPi);
  std::vector<double> x;
  for (int i = 0; i < steps; ++i) {
    x.push_back(std::abs(u(rng)));
    x.push_back(u(rng));
    x.push_back(a(rng));
  }
  return x;
}

}  // namespace

TEST_CASE("CINC' target") {
  for (int big_n : {1, 2, 3}) {
    const Matrix t = cinc_prime_target(big_n);
    const int d = 2 * (big_n + 1);
    for (int i = 0; i < d; ++i) {
      CHECK(t.row(i).cwiseAbs().sum() == 1.0);
      CHECK(t.col(i).cwiseAbs().sum() == 1.0);
    }
    CHECK(t(flat_index(1, Spin::kDown), flat_index(1, Spin::kDown)) == 1.0);
    CHECK(t(flat_index(0, Spin::kUp), flat_index(big_n, Spin::kUp)) == 1.0);
    CHECK(t(flat_index(1, Spin::kUp), flat_index(0, Spin::kUp)) == 1.0);
  }
}

TEST_CASE("evaluation against a dense oracle") {
  Rng rng(4);
  const ModeSpace space = build_space(1, 2, 4, 8);
  const Matrix target = cinc_prime_target(1);
  const double dt = 0.5 * kTg;
  const std::vector<double> x = random_controls(5, rng, 1.5);
  const DnEvaluation ev = dn_evaluate(space, target, dt, x, 100.0, false);

  Matrix u = Matrix::Identity(10, 10);
  std::vector<Matrix> cumulative;
  for (size_t i = 0; i < x.size(); i += 3) {
    const Matrix h =
        oracle::jc_hamiltonian(4, x[i + 1], x[i], x[i + 2], 1.0, 0.0);
    u = oracle::expm_minus_i(h, dt) * u;
    CHECK((u.adjoint() * u - Matrix::Identity(10, 10)).norm() < 1e-12);
    cumulative.push_back(u);
  }
  const Complex tr = (target.adjoint() * u.topLeftCorner(4, 4)).trace();
  CHECK(ev.fidelity == doctest::Approx(std::norm(tr) / 16.0).epsilon(1e-12));
  CHECK(ev.leakage == doctest::Approx(leakage(space, cumulative)).epsilon(1e-10));
  CHECK(ev.cost == doctest::Approx(1.0 - ev.fidelity + 100.0 * ev.leakage));
  CHECK(ev.cost >= 0.0);
}

TEST_CASE("exact gradient matches finite differences") {
  Rng rng(5);
  for (double w : {0.0, 100.0}) {
    const ModeSpace space = build_space(2);
    const Matrix target = cinc_prime_target(2);
    const std::vector<double> x = random_controls(6, rng, 1.2);
    const DnEvaluation ev = dn_evaluate(space, target, 0.5 * kTg, x, w, true);
    const auto fd = oracle::fd_gradient(
        [&](const std::vector<double>& p) {
          return dn_evaluate(space, target, 0.5 * kTg, p, w, false).cost;
        },
        x, 1e-6);
    for (size_t i = 0; i < x.size(); ++i) {
      CHECK(ev.gradient[i] == doctest::Approx(fd[i]).epsilon(1e-6).scale(1.0));
    }
  }
  // Degenerate spectrum: zero carrier controls.
  const ModeSpace space = build_space(1);
  std::vector<double> zero(9, 0.0);
  const DnEvaluation ev =
      dn_evaluate(space, cinc_prime_target(1), kTg, zero, 100.0, true);
  const auto fd = oracle::fd_gradient(
      [&](const std::vector<double>& p) {
        return dn_evaluate(space, cinc_prime_target(1), kTg, p, 100.0, false).cost;
      },
      zero, 1e-6);
  for (size_t i = 0; i < zero.size(); ++i) {
    CHECK(ev.gradient[i] == doctest::Approx(fd[i]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("leakage shrinks with more padding") {
  Rng rng(6);
  const std::vector<double> x = random_controls(8, rng, 1.5);
  const Matrix target = cinc_prime_target(1);
  double prev = 1e9;
  for (int pad = 2; pad <= 5; ++pad) {
    const ModeSpace space = build_space(1, pad, 7, 20);
    const double l = dn_evaluate(space, target, kPi, x, 1.0, false).leakage;
    CHECK(l <= prev + 1e-15);
    prev = l;
  }
}

TEST_CASE("larger-space verification") {
  const ModeSpace space = build_space(2);
  const Matrix target = cinc_prime_target(2);
  PiecewiseControls zero;
  zero.dt = kPi;
  zero.chi.assign(10, 0.0);
  zero.delta.assign(10, 0.0);
  zero.phi.assign(10, 0.0);
  const CheckReport r = verify_in_larger_space(space, zero, target);
  CHECK(std::abs(r.drop) < 1e-12);
  CHECK_FALSE(r.flagged);

  // Strong drives pump population into the truncation edge.
  Rng rng(7);
  const PiecewiseControls wild = PiecewiseControls::from_params(
      kPi, random_controls(40, rng, 3.0));
  const CheckReport bad = verify_in_larger_space(space, wild, target);
  CHECK(std::abs(bad.drop) > kCheckTolerance);
  CHECK(bad.flagged);
}

TEST_CASE("piecewise optimization is deterministic") {
  const ModeSpace space = build_space(1);
  const Matrix target = cinc_prime_target(1);
  DnConfig c;
  c.restarts = 2;
  c.max_iterations = 60;
  const DnResult a = optimize_piecewise(space, target, kPi, 4 * kTg, c, 3);
  c.jobs = 2;
  const DnResult b = optimize_piecewise(space, target, kPi, 4 * kTg, c, 3);
  REQUIRE(a.runs.size() == 2);
  for (int r = 0; r < 2; ++r) {
    CHECK(dn_run_to_json(a.runs[r]) == dn_run_to_json(b.runs[r]));
  }
  CHECK(a.best.controls.n_steps() == 8);
  CHECK(a.best.fidelity > 0.5);
  CHECK(a.best.iterate_log.front() >= a.best.iterate_log.back());
  CHECK_THROWS_AS(optimize_piecewise(space, target, kPi, 4.5, c, 3), ConfigError);

  const Json j = controls_to_json(a.best.controls);
  const PiecewiseControls back = controls_from_json(j);
  CHECK(back.params() == a.best.controls.params());
  CHECK(back.dt == doctest::Approx(kPi));
}
