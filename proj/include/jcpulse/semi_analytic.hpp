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

#ifndef JCPULSE_SEMI_ANALYTIC_HPP_
#define JCPULSE_SEMI_ANALYTIC_HPP_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "jcpulse/hilbert.hpp"
#include "jcpulse/law_eberly.hpp"
#include "jcpulse/metrics.hpp"
#include "jcpulse/pulses.hpp"
#include "jcpulse/serialization.hpp"
#include "jcpulse/types.hpp"
#include "jcpulse/vgates.hpp"

namespace jcpulse {

// Every optimized pulse is a resonant sideband pulse of length T_g / 2.
inline constexpr double kSaPulseDuration = 0.5 * kTg;

struct SaConfig {
  int m_start = 3;
  int m_max = 40;
  int restarts = 40;        // local optimizations per pulse count
  int max_iterations = 3000;
  int jobs = 1;
};

void validate_config(const SaConfig& config);

struct OptimizationRun {
  VGateSpec spec;
  double threshold = 0.0;
  int M = 0;
  int restart = -1;
  std::uint64_t seed = 0;      // master seed
  std::uint64_t run_seed = 0;  // seed of this restart
  std::vector<double> g;       // in [0, g_max]
  std::vector<double> beta;
  double achieved_error = 1.0;
  bool success = false;
  std::vector<double> iterate_log;  // objective after each iteration
  std::string constraint = "g = g_max sin^2(x)";

  PulseSequence sequence() const;
  double duration() const;  // T_g units
};

// Block-diagonal target restricted to an optimized subspace. Only entries
// (i, j) inside the projector and inside one h2 block contribute to the
// trace, since both the target and every sideband sequence are
// block-diagonal.
struct SaTarget {
  struct Entry {
    int block;
    int row;  // 0 = up slot, 1 = down slot
    int col;
    Complex conj_target;
  };
  int n_comp = 1;
  int d_perp = 0;
  std::vector<Entry> entries;
};

SaTarget make_sa_target(int n_comp, const Matrix& target,
                        const SubspaceProjector& projector);
SaTarget v_gate_sa_target(const VGateSpec& spec);

// 1 - |d_perp + Tr(P T^dag P V P)| / (2(N+1))
double sa_error(const SaTarget& t, const std::vector<double>& g,
                const std::vector<double>& beta);
// Same objective in the optimizer parameters x = [x_1..x_M, beta_1..beta_M]
// with g_m = g_max sin^2(x_m). Fills the analytic gradient when grad != null.
double sa_error_params(const SaTarget& t, const std::vector<double>& x,
                       std::vector<double>* grad);

// One local optimization from a random start drawn from run_seed.
OptimizationRun optimize_restart(const SaTarget& t, int m, std::uint64_t run_seed,
                                 const SaConfig& config);

// Pulse-count loop with restarts. `stream` separates the random streams of
// different targets sharing a master seed.
OptimizationRun optimize_target(const SaTarget& t, double eps_threshold,
                                const SaConfig& config, std::uint64_t seed,
                                std::uint64_t stream);

OptimizationRun optimize_v(const VGateSpec& spec, double eps_threshold,
                           const SaConfig& config, std::uint64_t seed);

double epsilon_threshold(double eta, int n_comp);

Json run_to_json(const OptimizationRun& run);
OptimizationRun run_from_json(const Json& j, const std::string& path = "run");

// Optimized V sequences keyed by spec, threshold, seed and search settings.
// With a file path the cache is shared between processes: every write is a
// locked read-merge-rename.
class VCache {
 public:
  explicit VCache(std::string path = {});

  static std::string key(const VGateSpec& spec, double threshold,
                         std::uint64_t seed, const SaConfig& config);

  std::optional<OptimizationRun> get(const std::string& key);
  void put(const std::string& key, const OptimizationRun& run);
  const std::string& path() const { return path_; }

 private:
  std::map<std::string, OptimizationRun> load_file() const;

  std::string path_;
  std::mutex mu_;
  std::map<std::string, OptimizationRun> memory_;
};

// V specs in first-use order for every layer of the exact compiler with a
// nonzero rotation; each such layer applies its V twice.
std::vector<VGateSpec> required_v_specs(const BlockRotationProgram& program);
std::vector<VGateSpec> all_v_specs(int n_comp);

// Optimizes the specs concurrently (config.jobs workers, restarts run
// serially within each spec).
std::vector<OptimizationRun> optimize_specs(const std::vector<VGateSpec>& specs,
                                            double eps_threshold,
                                            const SaConfig& config,
                                            std::uint64_t seed, VCache* cache);

struct SaGateResult {
  bool success = false;
  std::string failure;
  double eta_requested = 0.0;
  double threshold = 0.0;
  BlockRotationProgram program;  // realized rotations
  PulseSequence sequence;
  ErrorReport report;     // measured on space.n_check
  double total_time = 0;  // T_g units
  int v_applications = 0;
  std::vector<OptimizationRun> v_runs;
};

SaGateResult compile_gate_sa(const ModeSpace& space, const Matrix& target,
                             double eta, const SaConfig& config,
                             std::uint64_t seed, VCache* cache = nullptr);

}  // namespace jcpulse

#endif  // JCPULSE_SEMI_ANALYTIC_HPP_
