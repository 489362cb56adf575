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

// Error, fidelity and leakage functionals.
//
// All norms are Frobenius norms. Matrices passed to one call must share a
// dimension; the computational space is always the leading 2(N+1) block.

#ifndef JCPULSE_METRICS_HPP_
#define JCPULSE_METRICS_HPP_

#include <vector>

#include "jcpulse/hilbert.hpp"
#include "jcpulse/types.hpp"

namespace jcpulse {

struct ErrorReport {
  double raw_error = 0.0;      // min_phi ||P (T - e^{i phi} C) P||
  double eta = 0.0;            // raw_error^2 / (4 (N+1))
  double fidelity = 1.0;       // |Tr(P T^dag P C P)|^2 / (2(N+1))^2
  double optimal_phase = 0.0;  // arg Tr(P T^dag P C P), 0 when the trace is 0
};

ErrorReport phase_min_error(const Matrix& target, const Matrix& candidate,
                            const Matrix& projector, int n_comp);
// Same with P = P_C.
ErrorReport comp_error(const Matrix& target, const Matrix& candidate,
                       int n_comp);

// |Tr(P_C T^dag P_C C P_C)|^2 / (2(N+1))^2.
double gate_fidelity(const Matrix& target, const Matrix& candidate,
                     int n_comp);

// 1 - |d_perp + Tr(P T^dag P C P)| / (2(N+1)).
double subspace_objective(const Matrix& target, const Matrix& candidate,
                          const SubspaceProjector& proj, int n_comp);

// Prefactor 1 / (2(N+1)(2N+3)) of the leakage trace formula.
double leakage_prefactor(int n_comp);

// M = P_C U^dag P_L U P_C for one cumulative unitary on truncation n_opt,
// returned as the computational block.
Matrix leakage_operator(const ModeSpace& space, const Matrix& u);

// Sum over steps of c (Tr(M M^dag) + |Tr M|^2).
double leakage(const ModeSpace& space, const std::vector<Matrix>& cumulative);

double cost_cfn(double fidelity, double leak, double w = 100.0);

}  // namespace jcpulse

#endif  // JCPULSE_METRICS_HPP_
