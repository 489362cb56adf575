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

#include "jcpulse/metrics.hpp"

#include <cmath>

namespace jcpulse {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DomainError("metrics: matrices must be square and share dimension");
  }
}

double comp_norm(int n_comp) { return 2.0 * (n_comp + 1); }

}  // namespace

ErrorReport phase_min_error(const Matrix& target, const Matrix& candidate,
                            const Matrix& projector, int n_comp) {
  require_same_shape(target, candidate);
  require_same_shape(target, projector);
  const Matrix a = projector * target * projector;
  const Matrix b = projector * candidate * projector;
  const Complex tr = (a.adjoint() * b).trace();
  const double mag = std::abs(tr);
  ErrorReport r;
  r.optimal_phase = mag > 0.0 ? std::arg(tr) : 0.0;
  // Equal to sqrt(|A|^2 + |B|^2 - 2|Tr A^dag B|) but without the
  // cancellation that formula suffers near zero error.
  r.raw_error = (std::exp(Complex(0.0, r.optimal_phase)) * a - b).norm();
  r.eta = r.raw_error * r.raw_error / (4.0 * (n_comp + 1));
  const double d = comp_norm(n_comp);
  r.fidelity = mag * mag / (d * d);
  return r;
}

ErrorReport comp_error(const Matrix& target, const Matrix& candidate,
                       int n_comp) {
  require_same_shape(target, candidate);
  const int d = 2 * (n_comp + 1);
  if (target.rows() < d) throw DomainError("comp_error: space too small");
  const auto a = target.topLeftCorner(d, d);
  const auto b = candidate.topLeftCorner(d, d);
  const Complex tr = (a.adjoint() * b).trace();
  const double mag = std::abs(tr);
  ErrorReport r;
  r.optimal_phase = mag > 0.0 ? std::arg(tr) : 0.0;
  r.raw_error = (std::exp(Complex(0.0, r.optimal_phase)) * a - b).norm();
  r.eta = r.raw_error * r.raw_error / (4.0 * (n_comp + 1));
  r.fidelity = mag * mag / (static_cast<double>(d) * d);
  return r;
}

double gate_fidelity(const Matrix& target, const Matrix& candidate,
                     int n_comp) {
  return comp_error(target, candidate, n_comp).fidelity;
}

double subspace_objective(const Matrix& target, const Matrix& candidate,
                          const SubspaceProjector& proj, int n_comp) {
  require_same_shape(target, candidate);
  Complex tr = 0.0;
  for (int i : proj.indices) {
    for (int j : proj.indices) {
      tr += std::conj(target(j, i)) * candidate(j, i);
    }
  }
  return 1.0 - std::abs(static_cast<double>(proj.d_perp) + tr) /
                   comp_norm(n_comp);
}

double leakage_prefactor(int n_comp) {
  return 1.0 / (2.0 * (n_comp + 1) * (2.0 * n_comp + 3.0));
}

Matrix leakage_operator(const ModeSpace& space, const Matrix& u) {
  const int d = space.comp_dim();
  const int lo = 2 * (space.n_pad + 1);
  const int rows = static_cast<int>(u.rows()) - lo;
  if (rows <= 0) return Matrix::Zero(d, d);
  const auto k = u.block(lo, 0, rows, d);
  return k.adjoint() * k;
}

double leakage(const ModeSpace& space, const std::vector<Matrix>& cumulative) {
  const double c = leakage_prefactor(space.n_comp);
  double total = 0.0;
  for (const Matrix& u : cumulative) {
    const Matrix m = leakage_operator(space, u);
    total += c * (m.squaredNorm() + std::norm(m.trace()));
  }
  return total;
}

double cost_cfn(double fidelity, double leak, double w) {
  return 1.0 - fidelity + w * leak;
}

}  // namespace jcpulse
