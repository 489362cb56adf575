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

// Control pulses and their exact propagators.
//
// H = -Delta sigma_z / 2 + chi/2 (cos phi sigma_x + sin phi sigma_y)
//     + g/2 (e^{i beta} a^dag sigma_- + e^{-i beta} a sigma_+)
// A pulse applies exp(-i T H). Times are in internal units with g_max = 1.

#ifndef JCPULSE_PULSES_HPP_
#define JCPULSE_PULSES_HPP_

#include <variant>
#include <vector>

#include "jcpulse/hilbert.hpp"
#include "jcpulse/types.hpp"

namespace jcpulse {

struct CarrierPulse {
  double delta = 0.0;
  double chi = 0.0;
  double phi = 0.0;
  double duration = 0.0;
};

struct SidebandPulse {
  int mode = 0;  // 0 on single-mode spaces, 1 or 2 on two-mode spaces
  double g = 0.0;
  double delta = 0.0;
  double beta = 0.0;
  double duration = 0.0;
};

struct GeneralPulse {
  int mode = 0;
  double delta = 0.0;
  double chi = 0.0;
  double phi = 0.0;
  double g = 0.0;
  double beta = 0.0;
  double duration = 0.0;
};

using Pulse = std::variant<CarrierPulse, SidebandPulse, GeneralPulse>;

// First element is applied first, i.e. it is the rightmost factor.
struct PulseSequence {
  std::vector<Pulse> pulses;

  bool empty() const { return pulses.empty(); }
  std::size_t size() const { return pulses.size(); }
  double total_duration() const;
  void append(const Pulse& p) { pulses.push_back(p); }
  void append(const PulseSequence& other);
};

double pulse_duration(const Pulse& p);
int pulse_mode(const Pulse& p);  // 0 for carriers

// Throws DomainError on negative durations/amplitudes or non-finite values.
void validate_pulse(const Pulse& p);

// 2x2 block propagators in (up-like, down-like) ordering.
Mat2 carrier_block(const CarrierPulse& p);
Mat2 sideband_block(const SidebandPulse& p, int n);  // n >= 1
// Phase picked up by a lone |n down> (block 0) or a lone |L up> (top block).
Complex sideband_down_phase(const SidebandPulse& p);
Complex sideband_up_phase(const SidebandPulse& p);

Matrix hamiltonian(int truncation, const GeneralPulse& p);

Matrix propagate_carrier(int truncation, const CarrierPulse& p);
Matrix propagate_sideband(int truncation, const SidebandPulse& p);
Matrix propagate_general(int truncation, const GeneralPulse& p);
Matrix propagate(int truncation, const Pulse& p);

// u <- U(p) u, exploiting the block structure of carrier and sideband pulses.
void apply_left(Matrix& u, int truncation, const Pulse& p);

// Ordered product of a single-mode sequence. Throws DomainError when the
// coupling pulses address more than one mode.
Matrix sequence_unitary(int truncation, const PulseSequence& seq);

Pulse pulse_sqrt(const Pulse& p);
Pulse pulse_dagger(const Pulse& p);
PulseSequence sequence_dagger(const PulseSequence& seq);

// Sideband-only unitaries kept as one 2x2 matrix per h2 block. Block 0 only
// uses its down-like entry and block L+1 only its up-like entry; the unused
// entries stay at the identity.
class SidebandBlocks {
 public:
  explicit SidebandBlocks(int truncation);

  int truncation() const { return truncation_; }
  const Mat2& block(int n) const { return blocks_[n]; }
  Mat2& block(int n) { return blocks_[n]; }

  void apply_left(const SidebandPulse& p);
  void apply_left(const SidebandBlocks& other);
  SidebandBlocks adjoint() const;
  Matrix to_matrix() const;

 private:
  int truncation_;
  std::vector<Mat2> blocks_;
};

}  // namespace jcpulse

#endif  // JCPULSE_PULSES_HPP_
