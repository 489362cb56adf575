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

#include "jcpulse/twomode.hpp"
#include "jcpulse/random.hpp"
#include "support/oracles.hpp"

using namespace jcpulse;

namespace {

// Same-sized dense reference for the BUS objective.
double dense_bus_error(int big_n, double dt, const std::vector<double>& d) {
  const TwoModeSpace s{big_n, big_n + 1, 1};
  BusRun run;
  run.n_comp = big_n;
  run.dt = dt;
  run.delta = d;
  const Matrix u = sequence_unitary(s.truncation, run.sequence());
  const SubspaceProjector p = bus_projector(big_n, s.truncation);
  const Matrix& pp = p.projector;
  const Complex tr = (pp * bus_target(s).adjoint() * pp * u * pp).trace();
  return 1.0 - std::abs(static_cast<double>(p.d_perp) + tr) /
                   (2.0 * (big_n + 1));
}

PiecewiseControls random_controls(int steps, double dt, Rng& rng) {
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::uniform_real_distribution<double> a(0.0, 2.0 * kPi);
  PiecewiseControls c;
  c.dt = dt;
  for (int i = 0; i < steps; ++i) {
    c.chi.push_back(std::abs(u(rng)));
    c.delta.push_back(u(rng));
    c.phi.push_back(a(rng));
  }
  return c;
}

}  // namespace

TEST_CASE("space validation") {
  CHECK_THROWS_AS(build_two_mode_space(0), ConfigError);
  CHECK_THROWS_AS(build_two_mode_space(2, 2), ConfigError);
  CHECK_THROWS_AS(build_two_mode_space(2, 5, 3), ConfigError);
  const TwoModeSpace s = build_two_mode_space(2);
  CHECK(s.truncation == 7);
  CHECK(s.qudit_dim() == 9);
  CHECK(s.dim() == 128);
}

TEST_CASE("CINC target") {
  for (int big_n : {1, 2, 3}) {
    const TwoModeSpace s = build_two_mode_space(big_n);
    const Matrix t = cinc_target(s);
    const int q = big_n + 1;
    CHECK(t.rows() == q * q);
    for (int i = 0; i < q * q; ++i) {
      CHECK(t.row(i).sum() == Complex(1.0));
      CHECK(t.col(i).sum() == Complex(1.0));
    }
    CHECK(t(0, 0) == 1.0);
    // |N, N> -> |N, 0>
    CHECK(t(big_n * q, big_n * q + big_n) == 1.0);
    for (int n2 = 0; n2 < q; ++n2) {
      CHECK(t((big_n - 1) * q + n2, (big_n - 1) * q + n2) == 1.0);
    }
    const Matrix t2 = cinc_target(build_two_mode_space(big_n, -1, 2));
    // control on mode 2: |N, N> -> |0, N>
    CHECK(t2(big_n, big_n * q + big_n) == 1.0);
  }
}

TEST_CASE("BUS target structure") {
  for (int big_n : {1, 2, 4}) {
    const TwoModeSpace s = build_two_mode_space(big_n);
    const int l = s.truncation;
    const Matrix b = bus_target(s);
    const int d = dim_at(l);
    CHECK((b.adjoint() * b - Matrix::Identity(d, d)).norm() < 1e-14);
    for (int n = 0; n <= l + 1; ++n) {
      const Matrix p = proj_h2(l, n);
      CHECK((b * p - p * b).norm() < 1e-14);
      if (n != big_n) CHECK((p * b * p - p).norm() < 1e-14);
    }
    const int up = flat_index(big_n - 1, Spin::kUp);
    const int dn = flat_index(big_n, Spin::kDown);
    CHECK(std::abs(b(up, dn)) == 1.0);
    CHECK(std::abs(b(dn, up)) == 1.0);
    CHECK(b(up, up) == 0.0);
    const SubspaceProjector p = bus_projector(big_n, l);
    CHECK(p.rank == 2 * big_n + 1);
    CHECK(p.d_perp == 1);
  }
}

TEST_CASE("BUS objective against dense simulation and FD") {
  Rng rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int big_n : {1, 2, 3}) {
    for (double dt : {0.5 * kTg, kTg, 0.37}) {
      std::vector<double> d(5);
      for (double& v : d) v = u(rng);
      std::vector<double> grad;
      const double e = bus_error(big_n, dt, d, &grad);
      CHECK(e == doctest::Approx(dense_bus_error(big_n, dt, d)).epsilon(1e-12));
      const auto fd = oracle::fd_gradient(
          [&](const std::vector<double>& x) { return bus_error(big_n, dt, x); },
          d, 1e-6);
      for (size_t k = 0; k < d.size(); ++k) {
        CHECK(std::abs(grad[k] - fd[k]) < 1e-7);
      }
    }
  }
}

TEST_CASE("optimize_bus reaches the threshold") {
  SaConfig c;
  c.m_start = 1;
  for (double dt : {0.5 * kTg, kTg}) {
    const BusRun r = optimize_bus(2, dt, kBusThreshold, c, 3);
    REQUIRE(r.success);
    CHECK(r.achieved_error <= kBusThreshold);
    CHECK(r.M == static_cast<int>(r.delta.size()));
    CHECK(dense_bus_error(2, dt, r.delta) <= kBusThreshold);
    CHECK(r.duration() == doctest::Approx(r.M * dt / kTg));
    // Fewest pulses: no shorter sequence passed.
    if (r.M > 1) {
      SaConfig shorter = c;
      shorter.m_max = r.M - 1;
      CHECK_FALSE(optimize_bus(2, dt, kBusThreshold, shorter, 3).success);
    }
  }
}

TEST_CASE("optimize_bus is deterministic across jobs") {
  SaConfig a;
  a.m_start = 1;
  SaConfig b = a;
  b.jobs = 3;
  const BusRun ra = optimize_bus(2, 0.5 * kTg, kBusThreshold, a, 9);
  const BusRun rb = optimize_bus(2, 0.5 * kTg, kBusThreshold, b, 9);
  CHECK(ra.M == rb.M);
  CHECK(ra.restart == rb.restart);
  CHECK(ra.delta == rb.delta);
}

TEST_CASE("bus_dagger") {
  CHECK(bus_dagger(PulseSequence{}).size() == 0);
  const int l = 5;
  PulseSequence one;
  one.append(SidebandPulse{0, 1.0, 0.7, 0.0, 2.1});
  const PulseSequence inv = bus_dagger(one);
  const auto* p = std::get_if<SidebandPulse>(&inv.pulses[0]);
  REQUIRE(p != nullptr);
  CHECK(p->delta == -0.7);
  CHECK(p->beta == doctest::Approx(kPi));
  const Matrix prod = sequence_unitary(l, inv) * sequence_unitary(l, one);
  CHECK((prod - Matrix::Identity(dim_at(l), dim_at(l))).norm() < 1e-12);

  SaConfig c;
  c.m_start = 1;
  const BusRun r = optimize_bus(2, 0.5 * kTg, kBusThreshold, c, 5);
  REQUIRE(r.success);
  const TwoModeSpace s = build_two_mode_space(2);
  Rng rng(1);
  const CincComposition comp =
      compose_cinc(s, r, random_controls(2, 0.5 * kTg, rng));
  CHECK(comp.roundtrip_error <= 2.0 * kBusThreshold);
}

TEST_CASE("two-mode propagation against a dense oracle") {
  const TwoModeSpace s = build_two_mode_space(1, 3);
  PulseSequence seq;
  seq.append(SidebandPulse{1, 0.8, 0.3, 1.1, 1.7});
  seq.append(CarrierPulse{0.2, 0.6, 0.4, 0.9});
  seq.append(GeneralPulse{2, -0.4, 0.5, 2.2, 1.0, 0.3, 1.3});
  seq.append(SidebandPulse{2, 1.0, -0.2, 0.0, 0.8});
  seq.append(GeneralPulse{1, 0.1, 0.3, 0.7, 0.9, 2.0, 0.6});
  const int d = s.dim();
  Matrix ref = Matrix::Identity(d, d);
  for (const Pulse& p : seq.pulses) {
    Matrix h;
    double t = 0.0;
    if (const auto* c = std::get_if<CarrierPulse>(&p)) {
      h = oracle::two_mode_hamiltonian(s.truncation, 1, c->delta, c->chi,
                                       c->phi, 0.0, 0.0);
      t = c->duration;
    } else if (const auto* b = std::get_if<SidebandPulse>(&p)) {
      h = oracle::two_mode_hamiltonian(s.truncation, b->mode, b->delta, 0.0,
                                       0.0, b->g, b->beta);
      t = b->duration;
    } else {
      const auto& g = std::get<GeneralPulse>(p);
      h = oracle::two_mode_hamiltonian(s.truncation, g.mode, g.delta, g.chi,
                                       g.phi, g.g, g.beta);
      t = g.duration;
    }
    ref = oracle::expm_minus_i(h, t) * ref;
  }
  CHECK((two_mode_unitary(s, seq) - ref).norm() < 1e-11);
}

TEST_CASE("mode exclusivity") {
  const TwoModeSpace s = build_two_mode_space(1, 3);
  PulseSequence bad;
  bad.append(SidebandPulse{0, 1.0, 0.0, 0.0, 1.0});
  CHECK_THROWS_AS(two_mode_unitary(s, bad), DomainError);
  PulseSequence carriers;
  carriers.append(CarrierPulse{0.0, 1.0, 0.0, 1.0});
  carriers.append(GeneralPulse{0, 0.3, 0.2, 0.0, 0.0, 0.0, 1.0});
  CHECK_NOTHROW(check_mode_exclusivity(carriers));

  SaConfig c;
  c.m_start = 1;
  const BusRun r = optimize_bus(1, 0.5 * kTg, kBusThreshold, c, 2);
  Rng rng(3);
  for (int control : {1, 2}) {
    const TwoModeSpace sp = build_two_mode_space(1, 4, control);
    const CincComposition comp =
        compose_cinc(sp, r, random_controls(3, 0.5 * kTg, rng));
    CHECK_NOTHROW(check_mode_exclusivity(comp.sequence));
    const size_t m = r.delta.size();
    REQUIRE(comp.sequence.size() == 2 * m + 3);
    for (size_t i = 0; i < comp.sequence.size(); ++i) {
      const bool bus_part = i < m || i >= m + 3;
      CHECK(pulse_mode(comp.sequence.pulses[i]) ==
            (bus_part ? control : 3 - control));
    }
  }
}

TEST_CASE("exact-operand composition identity") {
  for (int big_n : {1, 2, 3}) {
    for (int control : {1, 2}) {
      const TwoModeSpace s = build_two_mode_space(big_n, -1, control);
      const Matrix b = bus_target(s);
      const Matrix cp = embed_identity(cinc_prime_target(big_n), s.truncation);
      const Matrix u = compose_exact(s, b, b.adjoint(), cp);
      const TwoModeReport r = cinc_error(s, u);
      CHECK(r.raw_error < 1e-12);
      CHECK(r.cross_block < 1e-12);
      CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-14));
      // Direct entrywise check, no phase freedom.
      const auto idx = spin_down_qudit_indices(s);
      const Matrix t = cinc_target(s);
      double diff = 0.0;
      for (size_t i = 0; i < idx.size(); ++i) {
        for (size_t j = 0; j < idx.size(); ++j) {
          diff += std::norm(u(idx[i], idx[j]) - t(i, j));
        }
      }
      CHECK(std::sqrt(diff) < 1e-12);
    }
  }
}

TEST_CASE("composition routes agree and errors stay bounded") {
  SaConfig c;
  c.m_start = 1;
  const BusRun r = optimize_bus(2, 0.5 * kTg, kBusThreshold, c, 4);
  REQUIRE(r.success);
  Rng rng(8);
  for (int control : {1, 2}) {
    const TwoModeSpace s = build_two_mode_space(2, 6, control);
    const PiecewiseControls pc = random_controls(4, 0.5 * kTg, rng);
    const CincComposition comp = compose_cinc(s, r, pc);
    const Matrix ub = sequence_unitary(s.truncation, r.sequence());
    const Matrix ud = sequence_unitary(s.truncation, bus_dagger(r.sequence()));
    const Matrix uc = sequence_unitary(s.truncation, pc.sequence());
    const Matrix factored = compose_exact(s, ub, ud, uc);
    const Matrix direct = two_mode_unitary(s, comp.sequence);
    CHECK((factored - direct).norm() < 1e-12);
    CHECK(comp.total_time ==
          doctest::Approx(comp.cinc_prime_time + 2.0 * comp.bus_time));
    CHECK(comp.bus_time == doctest::Approx(r.duration()));
    CHECK(comp.cinc_prime_time == doctest::Approx(pc.total_time() / kTg));
    const double sum = comp.bus_raw_error + comp.bus_dagger_raw_error +
                       comp.cinc_prime_raw_error;
    CHECK(comp.report.cross_block <= 3.0 * sum);
  }
}

TEST_CASE("BusRun JSON roundtrip") {
  SaConfig c;
  c.m_start = 1;
  c.restarts = 3;
  const BusRun r = optimize_bus(1, kTg, kBusThreshold, c, 6);
  const BusRun back = bus_run_from_json(bus_run_to_json(r));
  CHECK(back.delta == r.delta);
  CHECK(back.dt == doctest::Approx(r.dt).epsilon(1e-15));
  CHECK(back.M == r.M);
  CHECK(back.success == r.success);
  Json bad = bus_run_to_json(r);
  bad["delta"].push_back(0.0);
  CHECK_THROWS_AS(bus_run_from_json(bad), ConfigError);
}
