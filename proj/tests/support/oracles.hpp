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

// Independent reference computations used only by tests.

#ifndef JCPULSE_TESTS_SUPPORT_ORACLES_HPP_
#define JCPULSE_TESTS_SUPPORT_ORACLES_HPP_

#include <functional>
#include <vector>

#include "jcpulse/types.hpp"

namespace jcpulse::oracle {

// a (x) I and I (x) sigma built from Kronecker products with the oscillator
// as the outer factor and spin ordered (down, up).
Matrix kron(const Matrix& a, const Matrix& b);
Matrix osc_annihilation(int truncation);
Matrix spin_op(char which);  // 'x', 'y', 'z', '+', '-' in (down, up) order

// H built from the textbook operator expression.
Matrix jc_hamiltonian(int truncation, double delta, double chi, double phi,
                      double g, double beta);

// Same expression on mode1 (x) mode2 (x) spin with only `mode` (1 or 2)
// coupled.
Matrix two_mode_hamiltonian(int truncation, int mode, double delta,
                            double chi, double phi, double g, double beta);

// exp(-i t H) via the matrix exponential (scaling and squaring).
Matrix expm_minus_i(const Matrix& h, double t);

// min over phi of ||P (T - e^{i phi} C) P|| by a uniform grid scan followed
// by golden-section refinement around the best grid point.
double phase_scan_error(const Matrix& target, const Matrix& candidate,
                        const Matrix& projector, int grid_points);

// Central finite-difference gradient.
std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h);

}  // namespace jcpulse::oracle

#endif  // JCPULSE_TESTS_SUPPORT_ORACLES_HPP_
