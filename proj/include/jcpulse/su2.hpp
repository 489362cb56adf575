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

// 2x2 helpers for rotations inside a two-level block.

#ifndef JCPULSE_SU2_HPP_
#define JCPULSE_SU2_HPP_

#include "jcpulse/types.hpp"

namespace jcpulse {

Mat2 pauli2(Axis axis);

// exp(-i angle (axis . sigma) / 2). `axis` must be a unit vector.
Mat2 rotation(double angle, const Vec3& axis);

// Rotation generated by exp(-i t (v . sigma) / 2) for an arbitrary real v.
Mat2 rotation_from_generator(const Vec3& v, double t);

struct AngleAxis {
  double angle = 0.0;  // in [0, 2 pi]
  Vec3 axis = Vec3::UnitZ();
};

// Inverse of rotation() for a matrix in SU(2). The identity maps to angle 0
// with axis +z and -I to angle 2 pi with axis +z.
AngleAxis to_angle_axis(const Mat2& u);

// True when u is in SU(2) within tol (Frobenius).
bool is_su2(const Mat2& u, double tol = 1e-10);

}  // namespace jcpulse

#endif  // JCPULSE_SU2_HPP_
