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

#ifndef JCPULSE_DIRECT_NUMERIC_HPP_
#define JCPULSE_DIRECT_NUMERIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "jcpulse/hilbert.hpp"
#include "jcpulse/metrics.hpp"
#include "jcpulse/pulses.hpp"
#include "jcpulse/serialization.hpp"
#include "jcpulse/types.hpp"

namespace jcpulse {

// Stepwise-constant carrier controls on top of a constant resonant
// sideband coupling g = g_max, beta = 0.
struct PiecewiseControls {
  double dt = 0.5 * kTg;
  std::vector<double> chi;
  std::vector<double> delta;
  std::vector<double> phi;

  int n_steps() const { return static_cast<int>(chi.size()); }
  double total_time() const { return dt * n_steps(); }
  PulseSequence sequence() const;
  // Flat parameter vector [chi_1, delta_1, phi_1, chi_2, ...].
  std::vector<double> params() const;
  static PiecewiseControls from_params(double dt, const std::vector<double>& x);
};

struct DnConfig {
  int restarts = 20;
  double w = 100.0;  // leakage weight
  int max_iterations = 3000;
  int jobs = 1;
  double init_max = 0.9;  // initial |chi|, |delta| <= init_max g_max
  double excursion = 2.0; // controls beyond this many g_max are logged
};

void validate_config(const DnConfig& config);

// I (x) |down><down| + sum_n |n+1 mod N+1><n| (x) |up><up|
Matrix cinc_prime_target(int n_comp);

struct DnEvaluation {
  double fidelity = 0.0;
  double leakage = 0.0;
  double cost = 0.0;  // 1 - F + w L
  std::vector<double> gradient;
};

// Simulates on truncation space.n_opt; leakage counts levels above n_pad
// after every step. Exact gradients when `with_gradient` is set.
DnEvaluation dn_evaluate(const ModeSpace& space, const Matrix& target,
                         double dt, const std::vector<double>& params,
                         double w, bool with_gradient);

// Tolerated fidelity change between the optimization and check truncations.
inline constexpr double kCheckTolerance = 1e-5;

struct DnRun {
  int restart = -1;
  std::uint64_t seed = 0;
  std::uint64_t run_seed = 0;
  int reseeds = 0;  // attempts discarded for non-finite cost
  PiecewiseControls controls;
  double fidelity = 0.0;  // on n_opt
  double leakage = 0.0;
  double cost = 0.0;
  double fidelity_check = 0.0;  // on n_check
  bool verified = false;        // |F - F_check| < kCheckTolerance
  int excursions = 0;           // steps with |chi| or |delta| above the limit
  double max_control = 0.0;
  std::vector<double> iterate_log;
};

DnRun optimize_single(const ModeSpace& space, const Matrix& target, double dt,
                      int n_steps, std::uint64_t run_seed,
                      const DnConfig& config);

struct DnResult {
  DnRun best;             // highest fidelity on n_opt among verified runs
  bool accepted = false;  // false when no run passed the check
  std::vector<DnRun> runs;
};

DnResult optimize_piecewise(const ModeSpace& space, const Matrix& target,
                            double dt, double t_f, const DnConfig& config,
                            std::uint64_t seed);

struct CheckReport {
  double fidelity_opt = 0.0;
  double fidelity_check = 0.0;
  double drop = 0.0;  // fidelity_opt - fidelity_check
  ErrorReport check;  // measured on n_check
  bool flagged = false;
};

CheckReport verify_in_larger_space(const ModeSpace& space,
                                   const PiecewiseControls& controls,
                                   const Matrix& target);

Json controls_to_json(const PiecewiseControls& c);
PiecewiseControls controls_from_json(const Json& j,
                                     const std::string& path = "controls");
Json dn_run_to_json(const DnRun& run);

}  // namespace jcpulse

#endif  // JCPULSE_DIRECT_NUMERIC_HPP_
