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

#include "jcpulse/vgates.hpp"

#include <cmath>
#include <variant>
#include <vector>

#include "jcpulse/su2.hpp"

namespace jcpulse {

namespace {

constexpr double kZTol = 1e-12;

struct VFactor {
  bool dagger = false;
};
using Factor = std::variant<Pulse, VFactor>;

// Sequence factors in application order.
std::vector<Factor> factors(const BlockRotation& rot) {
  std::vector<Factor> out;
  if (rot.angle == 0.0) return out;
  if (rot.family == Family::kSideband && rot.block == 0) return out;
  const bool carrier = rot.family == Family::kCarrier;
  auto realize = [&](double angle, const Vec3& axis) -> Pulse {
    return carrier ? carrier_rotation_pulse(angle, axis)
                   : sideband_rotation_pulse(angle, axis, rot.block);
  };
  const Vec3& m = rot.axis;
  if (!has_z_torque(rot)) {
    const Vec3 m0(m.x(), m.y(), 0.0);
    const Vec3 axis = m0 / m0.norm();
    const Pulse half = realize(0.5 * rot.angle, axis);
    out = {half, VFactor{false}, pulse_dagger(half), VFactor{true}};
    return out;
  }
  // M = G R(theta, m0) G^dag with G = R_x(xi) and m0 in the xy plane.
  const double xi = std::atan2(m.z(), m.y());
  const double sin_nu = std::hypot(m.y(), m.z());
  const Vec3 m0 = Vec3(m.x(), sin_nu, 0.0).normalized();
  const Pulse prime = realize(-xi, Vec3::UnitX());  // U' = R_x(-xi)
  const Pulse half = realize(0.5 * rot.angle, m0);
  if (carrier) {
    // sqrt(U) U' is itself a carrier rotation.
    const Mat2 combined = rotation(0.5 * rot.angle, m0) *
                          rotation(-xi, Vec3::UnitX());
    const AngleAxis aa = to_angle_axis(combined);
    out = {carrier_rotation_pulse(aa.angle, aa.axis), VFactor{false},
           pulse_dagger(half), VFactor{true}, pulse_dagger(prime)};
  } else {
    out = {prime, half, VFactor{false}, pulse_dagger(half), VFactor{true},
           pulse_dagger(prime)};
  }
  return out;
}

}  // namespace

std::string VGateSpec::key() const {
  return "a" + std::to_string(static_cast<int>(a)) + "_n" + std::to_string(n) +
         "_s" + std::to_string(n_script) + "_N" + std::to_string(n_comp);
}

void validate_spec(const VGateSpec& spec) {
  if (spec.n_comp < 1) throw DomainError("V gate: N must be >= 1");
  if (spec.n_script < -1 || spec.n <= spec.n_script || spec.n > spec.n_comp) {
    throw DomainError("V gate " + spec.key() +
                      ": need -1 <= n_script < n <= N");
  }
  if (spec.a == Family::kSideband && spec.n < 1) {
    throw DomainError("V gate " + spec.key() + ": family 2 needs n >= 1");
  }
}

Matrix v_gate_target(const VGateSpec& spec, int truncation) {
  validate_spec(spec);
  if (truncation < spec.n_comp + 1) {
    throw DomainError("v_gate_target: truncation must be >= N+1");
  }
  const int d = dim_at(truncation);
  Vector diag = Vector::Ones(d);
  const int n = spec.n;
  auto set = [&](int level, Spin s, Complex v) {
    if (level >= 0 && level <= truncation) diag(flat_index(level, s)) = v;
  };
  if (spec.a == Family::kSideband) {
    // exp(-i pi sigma_{z,n} / 2)
    set(n - 1, Spin::kUp, -kI);
    set(n, Spin::kDown, kI);
  } else if (n != spec.n_script + 1) {
    // exp(i pi sigma_z / 2) on h1_n spread over h2 blocks n and n+1.
    set(n - 1, Spin::kUp, kI);
    set(n, Spin::kDown, -kI);
    set(n, Spin::kUp, kI);
    set(n + 1, Spin::kDown, -kI);
  } else {
    // Block n = n_script+1 must stay the identity because it holds
    // |n_script up>; determinant one on block n+1 then forces the scalar
    // e^{+i pi/2} in front of exp(i pi sigma_z / 2).
    set(n, Spin::kUp, -1.0);
    set(n + 1, Spin::kDown, -1.0);
  }
  return diag.asDiagonal();
}

SubspaceProjector v_gate_projector(const VGateSpec& spec, int truncation) {
  validate_spec(spec);
  return opt_subspace_projector(spec.n_comp, spec.a, spec.n, spec.n_script,
                                truncation);
}

bool has_z_torque(const BlockRotation& r) {
  return std::abs(r.axis.z()) > kZTol;
}

Pulse carrier_rotation_pulse(double angle, const Vec3& axis) {
  Vec3 m = axis;
  if (angle < 0.0) {
    angle = -angle;
    m = -m;
  }
  CarrierPulse p;
  p.chi = std::hypot(m.x(), m.y());
  p.phi = std::atan2(m.y(), m.x());
  p.delta = -m.z();
  p.duration = angle / kGMax;
  return p;
}

Pulse sideband_rotation_pulse(double angle, const Vec3& axis, int block) {
  if (block < 1) throw DomainError("sideband rotation needs block >= 1");
  if (std::abs(axis.z()) > kZTol) {
    throw DomainError("sideband rotations need an xy-plane axis");
  }
  Vec3 m = axis;
  if (angle < 0.0) {
    angle = -angle;
    m = -m;
  }
  SidebandPulse p;
  p.g = kGMax;
  p.beta = std::atan2(m.y(), m.x());
  p.duration = angle / (kGMax * std::sqrt(static_cast<double>(block)));
  return p;
}

PulseSequence assemble_u(const BlockRotation& rot, const PulseSequence& v_seq) {
  PulseSequence out;
  PulseSequence v_dag;
  bool have_dag = false;
  for (const Factor& f : factors(rot)) {
    if (const auto* p = std::get_if<Pulse>(&f)) {
      out.append(*p);
    } else if (std::get<VFactor>(f).dagger) {
      if (!have_dag) {
        v_dag = sequence_dagger(v_seq);
        have_dag = true;
      }
      out.append(v_dag);
    } else {
      out.append(v_seq);
    }
  }
  return out;
}

Matrix assemble_u_exact(const BlockRotation& rot, const Matrix& v,
                        int truncation) {
  const int d = dim_at(truncation);
  if (v.rows() != d || v.cols() != d) {
    throw DomainError("assemble_u_exact: V has the wrong dimension");
  }
  Matrix u = Matrix::Identity(d, d);
  for (const Factor& f : factors(rot)) {
    if (const auto* p = std::get_if<Pulse>(&f)) {
      apply_left(u, truncation, *p);
    } else if (std::get<VFactor>(f).dagger) {
      u = v.adjoint() * u;
    } else {
      u = v * u;
    }
  }
  return u;
}

}  // namespace jcpulse
