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

// Resonant-sideband realization of h2-block-diagonal unitaries and the
// accompanying error/time bound calculators.
//
// A target U2 with SU(2) blocks is split per block into x-y-x Euler angles,
//   B_n = exp(i a1 sx/2) exp(i a2 sy/2) exp(i a3 sx/2),
// and each angle profile a_k(n)/sqrt(n) over n = 1..N+1 is expanded in the
// cosine basis cos(pi (n - 1/2) l / (N+1)), l = 0..N. Every cosine term is
// a commutator-style product of sideband pulses conjugated by approximate
// z rotations T_a built from four-pulse cycles t_a.

#ifndef JCPULSE_FOURIER_SYNTH_HPP_
#define JCPULSE_FOURIER_SYNTH_HPP_

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "jcpulse/law_eberly.hpp"
#include "jcpulse/metrics.hpp"
#include "jcpulse/pulses.hpp"
#include "jcpulse/types.hpp"

namespace jcpulse {

struct EulerAngleTable {
  int n_comp = 1;
  std::vector<std::array<double, 3>> alpha;  // rows n = 0..N+1; row 0 zero
};

struct DctCoefficients {
  int n_comp = 1;
  std::array<std::vector<double>, 3> a;  // a[k][l], l = 0..N
};

struct SynthesisPlan {
  long long P = 1;  // repetitions of w1 w2
  long long Q = 1;  // t_a cycles per T_a
};

// x-y-x angles of one SU(2) block and the inverse map.
std::array<double, 3> euler_xyx(const Mat2& block);
Mat2 euler_compose(const std::array<double, 3>& alpha);

// Target given on truncation >= N+1, block diagonal in the h2 family with
// SU(2) blocks and |0 down> fixed.
EulerAngleTable euler_decompose(int n_comp, const Matrix& target_u2);
// Product of the Euler rotations on a truncation >= N+1 (identity above N+1).
Matrix compose_u2(const EulerAngleTable& table, int truncation);

double dct_basis(int n, int l, int n_comp);
DctCoefficients dct_angles(const EulerAngleTable& table);
EulerAngleTable idct_angles(const DctCoefficients& coeffs);

// Receives pulses in application order.
using SidebandSink = std::function<void(const SidebandPulse&)>;

void emit_t_a(double dphi, const SidebandSink& sink);
void emit_T_a(double phi_total, long long q, bool dagger,
              const SidebandSink& sink);
void emit_W_kl(int n_comp, int k, int l, double a_kl, const SynthesisPlan& plan,
               const SidebandSink& sink);
void emit_u2(const DctCoefficients& coeffs, const SynthesisPlan& plan,
             const SidebandSink& sink);

PulseSequence build_t_a(double dphi);
PulseSequence build_T_a(double phi_total, long long q);
PulseSequence build_W_kl(int n_comp, int k, int l, double a_kl,
                         const SynthesisPlan& plan);
PulseSequence synthesize_u2(int n_comp, const Matrix& target_u2,
                            const SynthesisPlan& plan);

// Exact unitaries of the constructions above, evaluated block by block with
// T_a computed once per cosine mode. They equal the products of the built
// sequences up to rounding.
SidebandBlocks T_a_blocks(int truncation, double phi_total, long long q);
SidebandBlocks W_kl_blocks(int truncation, int n_comp, int k, int l,
                           double a_kl, const SynthesisPlan& plan);
SidebandBlocks u2_blocks(int truncation, const DctCoefficients& coeffs,
                         const SynthesisPlan& plan);

// The ideal operators the constructions approximate.
Matrix ideal_T(int truncation, double phi_total);
Matrix ideal_W_kl(int truncation, int n_comp, int k, int l, double a_kl);

// Phase of T_a used for cosine mode l.
double mode_phase(int n_comp, int l);

// u^(1) rotation: V^(1) synthesized by synthesize_u2, carrier pulses for the
// remaining factors.
PulseSequence synthesize_u1(int n_comp, const BlockRotation& rot, int n_script,
                            const SynthesisPlan& plan);
// u^(2) rotation: the block rotation itself is a U2-form target.
PulseSequence synthesize_u2_rotation(int n_comp, const BlockRotation& rot,
                                     const SynthesisPlan& plan);

// Whole gate: compile_unitary_adaptive against exactly realized layers, then
// every layer synthesized at (P, Q).
// Family-1 layers go rotation by rotation through synthesize_u1, family-2
// layers are synthesized as one U2-form matrix.
struct AnalyticGateResult {
  BlockRotationProgram program;
  PulseSequence sequence;
  ErrorReport exact_report;     // exactly realized layers (exact V)
  ErrorReport measured_report;  // sequence simulated at truncation N + 2
  double total_time = 0.0;      // T_g units
};
AnalyticGateResult compile_gate_analytic(int n_comp, const Matrix& target,
                                         const SynthesisPlan& plan);

// Leading-order bounds. Errors are Frobenius norms on the computational
// space; times are in units of T_g.
double t_a_error_bound(int n_comp, double q);
double w_kl_error_bound(int n_comp, double p, double q);
double u2_error_bound(int n_comp, double p, double q);
double T_a_time_bound(double q);
double u2_time_bound(int n_comp, double p, double q);

double k2_constant();  // 8957952 pi^5
double k1_constant();  // 16 k2
double k_constant();   // k2 / 8

struct PlanReport {
  bool feasible = false;
  std::string reason;
  double p_continuous = 0.0;  // 3A / (2 E')
  long long P = 0;
  double Q = 0.0;               // may exceed any integer type
  double error_bound = 0.0;     // u2_error_bound at (P, Q)
  double time_bound = 0.0;      // u2_time_bound at (P, Q), T_g units
  double predicted_time = 0.0;  // k2 (N+1)^10.5 / E'^3, T_g units
};
PlanReport plan_pq(int n_comp, double target_error);

struct GateCounts {
  long long g_a = 0;   // 3N^2 + 5N + 2
  long long g_sa = 0;  // 4N^2 + 6N + 2
};
GateCounts gate_counts(int n_comp);

// k g_a^4 (N+1)^9 / eta^{3/2}, in units of T_g.
double analytic_total_time(int n_comp, double eta);

}  // namespace jcpulse

#endif  // JCPULSE_FOURIER_SYNTH_HPP_
