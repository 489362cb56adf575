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

// Two oscillators sharing one spin. Basis ordering is mode1 (x) mode2 (x)
// spin with flat index ((n1 (L+1) + n2) * 2 + s), each mode truncated at L.
// Only one oscillator couples to the spin at a time, so a two-mode sequence
// is a product of single-mode propagators acting on (mode k (x) spin).
//
// Orientation: the control qudit is `control_mode`. BUS acts on the control
// mode and CINC' on the other one, giving
//   CINC = sum_{n_c < N} |n_c><n_c| (x) I + |N><N| (x) sum |n_t + 1><n_t|
// on the spin-down subspace.

#ifndef JCPULSE_TWOMODE_HPP_
#define JCPULSE_TWOMODE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "jcpulse/direct_numeric.hpp"
#include "jcpulse/hilbert.hpp"
#include "jcpulse/metrics.hpp"
#include "jcpulse/pulses.hpp"
#include "jcpulse/semi_analytic.hpp"
#include "jcpulse/serialization.hpp"
#include "jcpulse/types.hpp"

namespace jcpulse {

struct TwoModeSpace {
  int n_comp = 1;
  int truncation = 6;    // per mode
  int control_mode = 1;  // 1 or 2

  int target_mode() const { return 3 - control_mode; }
  int mode_dim() const { return truncation + 1; }
  int dim() const { return 2 * mode_dim() * mode_dim(); }
  int qudit_dim() const { return (n_comp + 1) * (n_comp + 1); }
  int index(int n1, int n2, Spin s) const {
    return (n1 * mode_dim() + n2) * 2 + static_cast<int>(s);
  }
};

// Throws ConfigError unless 1 <= n_comp < truncation and control_mode is 1/2.
// truncation defaults to the single-mode n_opt (N + 5).
TwoModeSpace build_two_mode_space(int n_comp, int truncation = -1,
                                  int control_mode = 1);

// (N+1)^2 permutation on qudit (x) qudit, ordered mode1 (x) mode2.
Matrix cinc_target(const TwoModeSpace& space);

// Single-mode operator at space.truncation: identity on h2 blocks n < N,
// -i sigma_x on block N (the SU(2) representative of sigma_x; the global
// -i is a block phase that cancels against BUS^dag), identity elsewhere.
Matrix bus_target(const TwoModeSpace& space);
// Blocks 0..N intersected with the comp space: every comp state except
// |N up>, so d_perp = 1.
SubspaceProjector bus_projector(int n_comp, int truncation);

struct BusRun {
  int n_comp = 1;
  double dt = 0.5 * kTg;
  double threshold = 0.0;
  int M = 0;
  int restart = -1;
  std::uint64_t seed = 0;
  std::uint64_t run_seed = 0;
  std::vector<double> delta;
  double achieved_error = 1.0;
  bool success = false;
  std::vector<double> iterate_log;

  // Sideband pulses at g_max, beta = 0 on the given mode.
  PulseSequence sequence(int mode = 0) const;
  double duration() const;  // T_g units
};

// 1 - |d_perp + Tr(P T^dag P U P)| / (2(N+1)) for the detuning-only
// sequence, with T = bus_target.
double bus_error(int n_comp, double dt, const std::vector<double>& delta,
                 std::vector<double>* grad = nullptr);

inline constexpr double kBusThreshold = 1e-4;

// Increases M from config.m_start; the first M with a restart under
// threshold wins, lowest restart index first.
BusRun optimize_bus(int n_comp, double dt, double threshold,
                    const SaConfig& config, std::uint64_t seed);

// Reverse order, each pulse daggered (-delta, beta + pi).
PulseSequence bus_dagger(const PulseSequence& seq);

// Copies seq with every coupling pulse assigned to `mode`. Carriers stay 0.
PulseSequence assign_mode(const PulseSequence& seq, int mode);

// Throws DomainError if a pulse with nonzero coupling lacks a mode 1/2.
void check_mode_exclusivity(const PulseSequence& seq);

// I_other (x) u where u acts on (mode (x) spin) at space.truncation.
Matrix embed_mode(const TwoModeSpace& space, const Matrix& u, int mode);

Matrix two_mode_unitary(const TwoModeSpace& space, const PulseSequence& seq);

// Spin-down qudit (x) qudit states in cinc_target order.
std::vector<int> spin_down_qudit_indices(const TwoModeSpace& space);

struct TwoModeReport {
  double raw_error = 0.0;  // min_phi ||T - e^{-i phi} C|| on the subspace
  double eta = 0.0;        // raw_error^2 / (2 (N+1)^2)
  double fidelity = 1.0;   // |Tr(T^dag C)|^2 / (N+1)^4
  double cross_block = 0.0;  // norm of amplitude leaving the subspace
};
TwoModeReport cinc_error(const TwoModeSpace& space, const Matrix& composite);

// Application order BUS, CINC', BUS^dag. Arguments are single-mode
// unitaries at space.truncation.
Matrix compose_exact(const TwoModeSpace& space, const Matrix& bus,
                     const Matrix& bus_dag, const Matrix& cinc_prime);

struct CincComposition {
  PulseSequence sequence;  // every pulse tagged with its mode
  TwoModeReport report;
  double total_time = 0.0;  // T_g units
  double bus_time = 0.0;
  double cinc_prime_time = 0.0;
  double bus_raw_error = 0.0;
  double bus_dagger_raw_error = 0.0;
  double cinc_prime_raw_error = 0.0;
  double roundtrip_error = 0.0;  // 1 - |Tr(P BUS^dag BUS P)| / (2N+1)
};

CincComposition compose_cinc(const TwoModeSpace& space, const BusRun& bus,
                             const PiecewiseControls& cinc_prime);

Json bus_run_to_json(const BusRun& run);
BusRun bus_run_from_json(const Json& j, const std::string& path = "bus");

}  // namespace jcpulse

#endif  // JCPULSE_TWOMODE_HPP_
