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

#ifndef JCPULSE_TYPES_HPP_
#define JCPULSE_TYPES_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace jcpulse {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// g_max = 1 in internal units, so one vacuum Rabi period is 2*pi.
inline constexpr double kGMax = 1.0;
inline constexpr double kTg = 2.0 * kPi / kGMax;

enum class Spin { kDown = 0, kUp = 1 };
enum class Axis { kX, kY, kZ };
// Family 1 acts on h1 blocks {|n up>, |n down>}, family 2 on h2 blocks
// {|n-1 up>, |n down>}.
enum class Family { kCarrier = 1, kSideband = 2 };

// Invalid user-facing configuration. `field` is a path like "n_comp" or
// "pulses[3].duration" when known.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what, std::string field = {})
      : std::invalid_argument(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Arguments that violate a documented precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace jcpulse

#endif  // JCPULSE_TYPES_HPP_
