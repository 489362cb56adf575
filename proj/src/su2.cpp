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

#include "jcpulse/su2.hpp"

#include <cmath>

namespace jcpulse {

Mat2 pauli2(Axis axis) {
  Mat2 m;
  switch (axis) {
    case Axis::kX:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case Axis::kY:
      m << 0.0, -kI, kI, 0.0;
      break;
    case Axis::kZ:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return m;
}

Mat2 rotation(double angle, const Vec3& axis) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Mat2 m;
  m(0, 0) = Complex(c, -s * axis.z());
  m(1, 1) = Complex(c, s * axis.z());
  m(0, 1) = Complex(-s * axis.y(), -s * axis.x());
  m(1, 0) = Complex(s * axis.y(), -s * axis.x());
  return m;
}

Mat2 rotation_from_generator(const Vec3& v, double t) {
  const double norm = v.norm();
  if (norm == 0.0) return Mat2::Identity();
  return rotation(norm * t, v / norm);
}

AngleAxis to_angle_axis(const Mat2& u) {
  // u = c I - i s (m . sigma) with c = cos(angle/2), s = sin(angle/2) >= 0.
  const double c = 0.5 * (u(0, 0).real() + u(1, 1).real());
  const double sz = -0.5 * (u(0, 0).imag() - u(1, 1).imag());
  const double sx = -0.5 * (u(0, 1).imag() + u(1, 0).imag());
  const double sy = 0.5 * (u(1, 0).real() - u(0, 1).real());
  const Vec3 sv(sx, sy, sz);
  const double s = sv.norm();
  AngleAxis out;
  out.angle = 2.0 * std::atan2(s, c);
  if (s > 0.0) out.axis = sv / s;
  return out;
}

bool is_su2(const Mat2& u, double tol) {
  if ((u.adjoint() * u - Mat2::Identity()).norm() > tol) return false;
  return std::abs(u.determinant() - 1.0) <= tol;
}

}  // namespace jcpulse
