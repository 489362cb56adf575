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

#include "jcpulse/pulses.hpp"

#include <cmath>
#include <string>

#include "jcpulse/su2.hpp"

namespace jcpulse {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(std::string("invalid pulse: ") + what);
}

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// rows (i, j) of u <- b * rows (i, j); either index may be -1 for a lone
// slot, in which case the matching diagonal entry of b acts as a phase.
void apply_block_rows(Matrix& u, int i, int j, const Mat2& b) {
  if (i >= 0 && j >= 0) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      const Complex x = u(i, c);
      const Complex y = u(j, c);
      u(i, c) = b(0, 0) * x + b(0, 1) * y;
      u(j, c) = b(1, 0) * x + b(1, 1) * y;
    }
  } else if (i >= 0) {
    u.row(i) *= b(0, 0);
  } else if (j >= 0) {
    u.row(j) *= b(1, 1);
  }
}

Mat2 sideband_edge_block(const SidebandPulse& p, int truncation, int n) {
  Mat2 b = Mat2::Identity();
  if (n == 0) b(1, 1) = sideband_down_phase(p);
  if (n == truncation + 1) b(0, 0) = sideband_up_phase(p);
  return b;
}

Mat2 sideband_any_block(const SidebandPulse& p, int truncation, int n) {
  if (n == 0 || n == truncation + 1) return sideband_edge_block(p, truncation, n);
  return sideband_block(p, n);
}

}  // namespace

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const Pulse& p : pulses) t += pulse_duration(p);
  return t;
}

void PulseSequence::append(const PulseSequence& other) {
  pulses.insert(pulses.end(), other.pulses.begin(), other.pulses.end());
}

double pulse_duration(const Pulse& p) {
  return std::visit([](const auto& q) { return q.duration; }, p);
}

int pulse_mode(const Pulse& p) {
  return std::visit(Overloaded{[](const CarrierPulse&) { return 0; },
                               [](const SidebandPulse& q) { return q.mode; },
                               [](const GeneralPulse& q) { return q.mode; }},
                    p);
}

void validate_pulse(const Pulse& p) {
  std::visit(
      Overloaded{
          [](const CarrierPulse& q) {
            require(finite_all({q.delta, q.chi, q.phi, q.duration}),
                    "non-finite parameter");
            require(q.duration >= 0.0, "negative duration");
            require(q.chi >= 0.0, "negative chi");
          },
          [](const SidebandPulse& q) {
            require(finite_all({q.g, q.delta, q.beta, q.duration}),
                    "non-finite parameter");
            require(q.duration >= 0.0, "negative duration");
            require(q.g >= 0.0, "negative g");
            require(q.mode >= 0 && q.mode <= 2, "mode must be 0, 1 or 2");
          },
          [](const GeneralPulse& q) {
            require(finite_all({q.delta, q.chi, q.phi, q.g, q.beta,
                                q.duration}),
                    "non-finite parameter");
            require(q.duration >= 0.0, "negative duration");
            require(q.mode >= 0 && q.mode <= 2, "mode must be 0, 1 or 2");
          }},
      p);
}

Mat2 carrier_block(const CarrierPulse& p) {
  const Vec3 v(p.chi * std::cos(p.phi), p.chi * std::sin(p.phi), -p.delta);
  return rotation_from_generator(v, p.duration);
}

Mat2 sideband_block(const SidebandPulse& p, int n) {
  const double gn = p.g * std::sqrt(static_cast<double>(n));
  const Vec3 v(gn * std::cos(p.beta), gn * std::sin(p.beta), -p.delta);
  return rotation_from_generator(v, p.duration);
}

Complex sideband_down_phase(const SidebandPulse& p) {
  // -Delta sigma_z / 2 restricted to spin down is +Delta / 2.
  return std::exp(Complex(0.0, -0.5 * p.delta * p.duration));
}

Complex sideband_up_phase(const SidebandPulse& p) {
  return std::exp(Complex(0.0, 0.5 * p.delta * p.duration));
}

Matrix hamiltonian(int truncation, const GeneralPulse& p) {
  const int d = dim_at(truncation);
  Matrix h = Matrix::Zero(d, d);
  const Complex drive = 0.5 * p.chi * std::exp(Complex(0.0, p.phi));
  for (int n = 0; n <= truncation; ++n) {
    const int up = flat_index(n, Spin::kUp);
    const int dn = flat_index(n, Spin::kDown);
    h(up, up) = -0.5 * p.delta;
    h(dn, dn) = 0.5 * p.delta;
    // chi/2 (cos phi sigma_x + sin phi sigma_y): <down|.|up> = chi/2 e^{i phi}
    h(dn, up) = drive;
    h(up, dn) = std::conj(drive);
  }
  const Complex coupling = 0.5 * p.g * std::exp(Complex(0.0, p.beta));
  for (int n = 0; n < truncation; ++n) {
    const int from = flat_index(n, Spin::kUp);
    const int to = flat_index(n + 1, Spin::kDown);
    const Complex c = coupling * std::sqrt(static_cast<double>(n + 1));
    h(to, from) = c;
    h(from, to) = std::conj(c);
  }
  return h;
}

Matrix propagate_carrier(int truncation, const CarrierPulse& p) {
  Matrix u = Matrix::Identity(dim_at(truncation), dim_at(truncation));
  apply_left(u, truncation, Pulse{p});
  return u;
}

Matrix propagate_sideband(int truncation, const SidebandPulse& p) {
  Matrix u = Matrix::Identity(dim_at(truncation), dim_at(truncation));
  apply_left(u, truncation, Pulse{p});
  return u;
}

Matrix propagate_general(int truncation, const GeneralPulse& p) {
  const Matrix h = hamiltonian(truncation, p);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd& w = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  Vector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    phases(k) = std::exp(Complex(0.0, -w(k) * p.duration));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

Matrix propagate(int truncation, const Pulse& p) {
  return std::visit(
      Overloaded{
          [&](const CarrierPulse& q) { return propagate_carrier(truncation, q); },
          [&](const SidebandPulse& q) {
            return propagate_sideband(truncation, q);
          },
          [&](const GeneralPulse& q) {
            return propagate_general(truncation, q);
          }},
      p);
}

void apply_left(Matrix& u, int truncation, const Pulse& p) {
  std::visit(
      Overloaded{
          [&](const CarrierPulse& q) {
            const Mat2 b = carrier_block(q);
            for (int n = 0; n <= truncation; ++n) {
              const BlockSlots s = h1_slots(truncation, n);
              apply_block_rows(u, s.up, s.down, b);
            }
          },
          [&](const SidebandPulse& q) {
            for (int n = 0; n <= truncation + 1; ++n) {
              const BlockSlots s = h2_slots(truncation, n);
              apply_block_rows(u, s.up, s.down,
                               sideband_any_block(q, truncation, n));
            }
          },
          [&](const GeneralPulse& q) {
            u = propagate_general(truncation, q) * u;
          }},
      p);
}

Matrix sequence_unitary(int truncation, const PulseSequence& seq) {
  int mode = -1;
  for (const Pulse& p : seq.pulses) {
    if (std::holds_alternative<CarrierPulse>(p)) continue;
    const int m = pulse_mode(p);
    if (mode >= 0 && m != mode) {
      throw DomainError(
          "sequence_unitary: pulses couple different modes; use the "
          "two-mode evaluator");
    }
    mode = m;
  }
  const int d = dim_at(truncation);
  Matrix u = Matrix::Identity(d, d);
  for (const Pulse& p : seq.pulses) apply_left(u, truncation, p);
  return u;
}

Pulse pulse_sqrt(const Pulse& p) {
  return std::visit(
      [](auto q) -> Pulse {
        q.duration *= 0.5;
        return q;
      },
      p);
}

Pulse pulse_dagger(const Pulse& p) {
  // Flipping the sign of every generator term inverts the propagator; a pi
  // shift of a phase negates the corresponding transverse term.
  return std::visit(
      Overloaded{[](CarrierPulse q) -> Pulse {
                   q.delta = -q.delta;
                   q.phi += kPi;
                   return q;
                 },
                 [](SidebandPulse q) -> Pulse {
                   q.delta = -q.delta;
                   q.beta += kPi;
                   return q;
                 },
                 [](GeneralPulse q) -> Pulse {
                   q.delta = -q.delta;
                   q.phi += kPi;
                   q.beta += kPi;
                   return q;
                 }},
      p);
}

PulseSequence sequence_dagger(const PulseSequence& seq) {
  PulseSequence out;
  out.pulses.reserve(seq.size());
  for (auto it = seq.pulses.rbegin(); it != seq.pulses.rend(); ++it) {
    out.append(pulse_dagger(*it));
  }
  return out;
}

SidebandBlocks::SidebandBlocks(int truncation)
    : truncation_(truncation), blocks_(truncation + 2, Mat2::Identity()) {}

void SidebandBlocks::apply_left(const SidebandPulse& p) {
  blocks_[0](1, 1) *= sideband_down_phase(p);
  for (int n = 1; n <= truncation_; ++n) {
    blocks_[n] = sideband_block(p, n) * blocks_[n];
  }
  blocks_[truncation_ + 1](0, 0) *= sideband_up_phase(p);
}

void SidebandBlocks::apply_left(const SidebandBlocks& other) {
  if (other.truncation_ != truncation_) {
    throw DomainError("SidebandBlocks: truncation mismatch");
  }
  for (int n = 0; n <= truncation_ + 1; ++n) {
    blocks_[n] = other.blocks_[n] * blocks_[n];
  }
}

SidebandBlocks SidebandBlocks::adjoint() const {
  SidebandBlocks out(truncation_);
  for (int n = 0; n <= truncation_ + 1; ++n) {
    out.blocks_[n] = blocks_[n].adjoint();
  }
  return out;
}

Matrix SidebandBlocks::to_matrix() const {
  const int d = dim_at(truncation_);
  Matrix u = Matrix::Zero(d, d);
  for (int n = 0; n <= truncation_ + 1; ++n) {
    const BlockSlots s = h2_slots(truncation_, n);
    const Mat2& b = blocks_[n];
    if (s.up >= 0) u(s.up, s.up) = b(0, 0);
    if (s.down >= 0) u(s.down, s.down) = b(1, 1);
    if (s.up >= 0 && s.down >= 0) {
      u(s.up, s.down) = b(0, 1);
      u(s.down, s.up) = b(1, 0);
    }
  }
  return u;
}

}  // namespace jcpulse
