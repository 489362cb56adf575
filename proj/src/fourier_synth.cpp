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

#include "jcpulse/fourier_synth.hpp"

#include <cmath>
#include <limits>

#include "jcpulse/hilbert.hpp"
#include "jcpulse/su2.hpp"
#include "jcpulse/vgates.hpp"

namespace jcpulse {

namespace {

constexpr double kStructureTol = 1e-9;
// Cosine coefficients below this magnitude are dropped from the sequence.
constexpr double kCoeffCutoff = 1e-14;

SidebandPulse resonant(double area, double beta) {
  SidebandPulse p;
  p.g = kGMax;
  p.delta = 0.0;
  if (area < 0.0) {
    area = -area;
    beta += kPi;
  }
  p.beta = beta;
  p.duration = area / kGMax;
  return p;
}

double mode_offset(int k) { return k == 2 ? 0.5 * kPi : 0.0; }

void check_mode(int n_comp, int k, int l) {
  if (k < 1 || k > 3) throw DomainError("Euler index k must be 1, 2 or 3");
  if (l < 0 || l > n_comp) throw DomainError("cosine mode l out of range");
}

void check_plan(const SynthesisPlan& plan) {
  if (plan.P < 1 || plan.Q < 1) throw DomainError("P and Q must be >= 1");
}

Mat2 axis_rotation(int k, double angle) {
  return rotation(angle, k == 2 ? Vec3::UnitY() : Vec3::UnitX());
}

}  // namespace

std::array<double, 3> euler_xyx(const Mat2& block) {
  // Conjugating by the Hadamard maps x-y-x onto z-y-z with the y angle
  // negated: B = R_x(a) R_y(-b) R_x(c) when H B H = R_z(a) R_y(b) R_z(c).
  Mat2 h;
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  const Mat2 m = h * block * h;
  const double c_half = std::abs(m(0, 0));
  const double s_half = std::abs(m(1, 0));
  const double b = 2.0 * std::atan2(s_half, c_half);
  const double sum = c_half > 1e-300 ? 2.0 * std::arg(m(1, 1)) : 0.0;
  const double diff = s_half > 1e-300 ? 2.0 * std::arg(m(1, 0)) : 0.0;
  double a = 0.5 * (sum + diff);
  const double c = 0.5 * (sum - diff);
  std::array<double, 3> alpha{-a, b, -c};
  const Mat2 trial = euler_compose(alpha);
  if ((trial - block).norm() > (trial + block).norm()) {
    a += 2.0 * kPi;
    alpha[0] = -a;
  }
  return alpha;
}

Mat2 euler_compose(const std::array<double, 3>& alpha) {
  // exp(i a sigma / 2) is a rotation by -a.
  return axis_rotation(1, -alpha[0]) * axis_rotation(2, -alpha[1]) *
         axis_rotation(3, -alpha[2]);
}

EulerAngleTable euler_decompose(int n_comp, const Matrix& target_u2) {
  if (n_comp < 1) throw DomainError("n_comp must be >= 1");
  const int d = static_cast<int>(target_u2.rows());
  if (target_u2.cols() != d || d % 2 != 0 || d / 2 - 1 < n_comp + 1) {
    throw DomainError("euler_decompose: target must live on truncation >= N+1");
  }
  const int l = d / 2 - 1;
  // Block-diagonal check: zero everything inside h2 blocks and look at what
  // is left.
  Matrix rest = target_u2;
  for (int n = 0; n <= l + 1; ++n) {
    const BlockSlots s = h2_slots(l, n);
    for (int i : {s.up, s.down}) {
      for (int j : {s.up, s.down}) {
        if (i >= 0 && j >= 0) rest(i, j) = 0.0;
      }
    }
  }
  if (rest.norm() > kStructureTol) {
    throw DomainError("euler_decompose: target is not h2 block diagonal");
  }
  if (std::abs(target_u2(0, 0) - 1.0) > kStructureTol) {
    throw DomainError("euler_decompose: target must fix |0 down>");
  }
  EulerAngleTable table;
  table.n_comp = n_comp;
  table.alpha.assign(n_comp + 2, {0.0, 0.0, 0.0});
  for (int n = 1; n <= n_comp + 1; ++n) {
    const BlockSlots s = h2_slots(l, n);
    Mat2 b;
    b << target_u2(s.up, s.up), target_u2(s.up, s.down),
        target_u2(s.down, s.up), target_u2(s.down, s.down);
    if (!is_su2(b, kStructureTol)) {
      throw DomainError("euler_decompose: block " + std::to_string(n) +
                        " is not in SU(2)");
    }
    table.alpha[n] = euler_xyx(b);
  }
  return table;
}

Matrix compose_u2(const EulerAngleTable& table, int truncation) {
  const int n_comp = table.n_comp;
  if (truncation < n_comp + 1) {
    throw DomainError("compose_u2: truncation must be >= N+1");
  }
  SidebandBlocks blocks(truncation);
  for (int n = 1; n <= n_comp + 1; ++n) {
    blocks.block(n) = euler_compose(table.alpha[n]);
  }
  return blocks.to_matrix();
}

double dct_basis(int n, int l, int n_comp) {
  return std::cos(kPi * (n - 0.5) * l / (n_comp + 1));
}

DctCoefficients dct_angles(const EulerAngleTable& table) {
  const int big_n = table.n_comp;
  const int m = big_n + 1;
  DctCoefficients out;
  out.n_comp = big_n;
  for (int k = 0; k < 3; ++k) {
    out.a[k].assign(m, 0.0);
    for (int l = 0; l < m; ++l) {
      double s = 0.0;
      for (int n = 1; n <= m; ++n) {
        s += table.alpha[n][k] / std::sqrt(double(n)) * dct_basis(n, l, big_n);
      }
      out.a[k][l] = (l == 0 ? 1.0 : 2.0) * s / m;
    }
  }
  return out;
}

EulerAngleTable idct_angles(const DctCoefficients& coeffs) {
  const int big_n = coeffs.n_comp;
  EulerAngleTable t;
  t.n_comp = big_n;
  t.alpha.assign(big_n + 2, {0.0, 0.0, 0.0});
  for (int k = 0; k < 3; ++k) {
    for (int n = 1; n <= big_n + 1; ++n) {
      double s = 0.0;
      for (int l = 0; l <= big_n; ++l) s += coeffs.a[k][l] * dct_basis(n, l, big_n);
      t.alpha[n][k] = std::sqrt(double(n)) * s;
    }
  }
  return t;
}

void emit_t_a(double dphi, const SidebandSink& sink) {
  if (dphi < 0.0) throw DomainError("t_a needs dphi >= 0");
  const double area = std::sqrt(dphi);
  // Application order -y, -x, +y, +x; the group commutator generates
  // exp(-i n dphi sigma_{z,n} / 2) to leading order.
  sink(resonant(area, 1.5 * kPi));
  sink(resonant(area, kPi));
  sink(resonant(area, 0.5 * kPi));
  sink(resonant(area, 0.0));
}

void emit_T_a(double phi_total, long long q, bool dagger,
              const SidebandSink& sink) {
  if (q < 1) throw DomainError("Q must be >= 1");
  if (phi_total < 0.0) throw DomainError("T_a needs phi >= 0");
  const double area = std::sqrt(phi_total / static_cast<double>(q));
  // t_a^dag reverses the cycle and flips every axis.
  const double order[4] = {1.5 * kPi, kPi, 0.5 * kPi, 0.0};
  for (long long r = 0; r < q; ++r) {
    for (int i = 0; i < 4; ++i) {
      const double beta = dagger ? order[3 - i] + kPi : order[i];
      sink(resonant(area, beta));
    }
  }
}

double mode_phase(int n_comp, int l) {
  return kPi * static_cast<double>(l) / (n_comp + 1);
}

void emit_W_kl(int n_comp, int k, int l, double a_kl, const SynthesisPlan& plan,
               const SidebandSink& sink) {
  check_mode(n_comp, k, l);
  check_plan(plan);
  const double dtheta = -a_kl / (2.0 * static_cast<double>(plan.P));
  const double beta0 = 0.5 * mode_phase(n_comp, l);
  const double beta1 = mode_offset(k) + beta0;
  const double beta2 = mode_offset(k) - beta0;
  const double phi = mode_phase(n_comp, l);
  const bool conj = l != 0;
  for (long long r = 0; r < plan.P; ++r) {
    // w2 = T_a U(beta2) T_a^dag, then w1 = T_a^dag U(beta1) T_a.
    if (conj) emit_T_a(phi, plan.Q, true, sink);
    sink(resonant(dtheta, beta2));
    if (conj) emit_T_a(phi, plan.Q, false, sink);
    if (conj) emit_T_a(phi, plan.Q, false, sink);
    sink(resonant(dtheta, beta1));
    if (conj) emit_T_a(phi, plan.Q, true, sink);
  }
}

void emit_u2(const DctCoefficients& coeffs, const SynthesisPlan& plan,
             const SidebandSink& sink) {
  // U2 = V1 V2 V3, so the k = 3 factor is applied first.
  for (int k = 3; k >= 1; --k) {
    for (int l = 0; l <= coeffs.n_comp; ++l) {
      const double a = coeffs.a[k - 1][l];
      if (std::abs(a) < kCoeffCutoff) continue;
      emit_W_kl(coeffs.n_comp, k, l, a, plan, sink);
    }
  }
}

namespace {

PulseSequence collect(const std::function<void(const SidebandSink&)>& emit) {
  PulseSequence seq;
  emit([&](const SidebandPulse& p) { seq.append(p); });
  return seq;
}

}  // namespace

PulseSequence build_t_a(double dphi) {
  return collect([&](const SidebandSink& s) { emit_t_a(dphi, s); });
}

PulseSequence build_T_a(double phi_total, long long q) {
  return collect(
      [&](const SidebandSink& s) { emit_T_a(phi_total, q, false, s); });
}

PulseSequence build_W_kl(int n_comp, int k, int l, double a_kl,
                         const SynthesisPlan& plan) {
  return collect(
      [&](const SidebandSink& s) { emit_W_kl(n_comp, k, l, a_kl, plan, s); });
}

PulseSequence synthesize_u2(int n_comp, const Matrix& target_u2,
                            const SynthesisPlan& plan) {
  check_plan(plan);
  const DctCoefficients coeffs = dct_angles(euler_decompose(n_comp, target_u2));
  return collect([&](const SidebandSink& s) { emit_u2(coeffs, plan, s); });
}

SidebandBlocks T_a_blocks(int truncation, double phi_total, long long q) {
  SidebandBlocks t(truncation);
  emit_t_a(phi_total / static_cast<double>(q),
           [&](const SidebandPulse& p) { t.apply_left(p); });
  SidebandBlocks total(truncation);
  for (long long r = 0; r < q; ++r) total.apply_left(t);
  return total;
}

SidebandBlocks W_kl_blocks(int truncation, int n_comp, int k, int l,
                           double a_kl, const SynthesisPlan& plan) {
  check_mode(n_comp, k, l);
  check_plan(plan);
  const double dtheta = -a_kl / (2.0 * static_cast<double>(plan.P));
  const double beta0 = 0.5 * mode_phase(n_comp, l);
  SidebandBlocks u1(truncation), u2(truncation);
  u1.apply_left(resonant(dtheta, mode_offset(k) + beta0));
  u2.apply_left(resonant(dtheta, mode_offset(k) - beta0));
  SidebandBlocks rep(truncation);
  if (l != 0) {
    const SidebandBlocks t = T_a_blocks(truncation, mode_phase(n_comp, l),
                                        plan.Q);
    const SidebandBlocks td = t.adjoint();
    const SidebandBlocks* order[] = {&td, &u2, &t, &t, &u1, &td};
    for (const SidebandBlocks* f : order) rep.apply_left(*f);
  } else {
    rep.apply_left(u2);
    rep.apply_left(u1);
  }
  SidebandBlocks total(truncation);
  for (long long r = 0; r < plan.P; ++r) total.apply_left(rep);
  return total;
}

SidebandBlocks u2_blocks(int truncation, const DctCoefficients& coeffs,
                         const SynthesisPlan& plan) {
  SidebandBlocks total(truncation);
  for (int k = 3; k >= 1; --k) {
    for (int l = 0; l <= coeffs.n_comp; ++l) {
      const double a = coeffs.a[k - 1][l];
      if (std::abs(a) < kCoeffCutoff) continue;
      total.apply_left(W_kl_blocks(truncation, coeffs.n_comp, k, l, a, plan));
    }
  }
  return total;
}

Matrix ideal_T(int truncation, double phi_total) {
  SidebandBlocks b(truncation);
  for (int n = 1; n <= truncation; ++n) {
    b.block(n) = rotation(n * phi_total, Vec3::UnitZ());
  }
  return b.to_matrix();
}

Matrix ideal_W_kl(int truncation, int n_comp, int k, int l, double a_kl) {
  check_mode(n_comp, k, l);
  SidebandBlocks b(truncation);
  for (int n = 1; n <= truncation; ++n) {
    const double angle = a_kl * std::sqrt(double(n)) * dct_basis(n, l, n_comp);
    b.block(n) = axis_rotation(k, -angle);
  }
  return b.to_matrix();
}

PulseSequence synthesize_u1(int n_comp, const BlockRotation& rot, int n_script,
                            const SynthesisPlan& plan) {
  if (rot.family != Family::kCarrier) {
    throw DomainError("synthesize_u1 needs a family-1 rotation");
  }
  if (rot.angle == 0.0) return {};
  const VGateSpec spec{Family::kCarrier, rot.block, n_script, n_comp};
  const Matrix v = v_gate_target(spec, n_comp + 1);
  return assemble_u(rot, synthesize_u2(n_comp, v, plan));
}

PulseSequence synthesize_u2_rotation(int n_comp, const BlockRotation& rot,
                                     const SynthesisPlan& plan) {
  if (rot.family != Family::kSideband) {
    throw DomainError("synthesize_u2_rotation needs a family-2 rotation");
  }
  if (rot.angle == 0.0 || rot.block == 0) return {};
  RotationLayer layer{Family::kSideband, -1, {rot}};
  return synthesize_u2(n_comp, layer_matrix(n_comp + 1, layer), plan);
}

AnalyticGateResult compile_gate_analytic(int n_comp, const Matrix& target,
                                         const SynthesisPlan& plan) {
  AnalyticGateResult out;
  const int d = 2 * (n_comp + 1);
  const int trunc = n_comp + 2;
  // A family-1 rotation assembled from V also turns blocks outside h_id
  // (all of them when n_script = -1), so the program is compiled against
  // the exactly realized layers and synthesized layer by layer.
  Matrix ideal = Matrix::Identity(dim_at(trunc), dim_at(trunc));
  auto realize = [&](const RotationLayer& layer) -> Matrix {
    Matrix u = Matrix::Identity(dim_at(trunc), dim_at(trunc));
    if (layer.family == Family::kCarrier) {
      for (const BlockRotation& rot : layer.rotations) {
        if (rot.angle == 0.0) continue;
        const VGateSpec spec{Family::kCarrier, rot.block, layer.n_script,
                             n_comp};
        u = assemble_u_exact(rot, v_gate_target(spec, trunc), trunc) * u;
        out.sequence.append(synthesize_u1(n_comp, rot, layer.n_script, plan));
      }
    } else {
      bool trivial = true;
      for (const BlockRotation& rot : layer.rotations) {
        if (rot.angle != 0.0 && rot.block != 0) trivial = false;
      }
      if (!trivial) {
        u = layer_matrix(trunc, layer);
        out.sequence.append(
            synthesize_u2(n_comp, layer_matrix(n_comp + 1, layer), plan));
      }
    }
    ideal = u * ideal;
    return u.topLeftCorner(d, d);
  };
  out.program = compile_unitary_adaptive(n_comp, target, realize);
  const Matrix t = embed_identity(target, trunc);
  out.exact_report = comp_error(t, ideal, n_comp);
  out.measured_report =
      comp_error(t, sequence_unitary(trunc, out.sequence), n_comp);
  out.total_time = out.sequence.total_duration() / kTg;
  return out;
}

double t_a_error_bound(int n_comp, double q) {
  return 4.0 * std::pow(2.0 * kPi, 1.5) * std::pow(n_comp + 1.0, 2.5) /
         std::sqrt(q);
}

double w_kl_error_bound(int n_comp, double p, double q) {
  const double x = 2.0 * kPi / p * (n_comp + 1.0);
  return p * (std::sqrt(2.0) * x * x +
              16.0 * std::pow(2.0 * kPi, 1.5) * std::pow(n_comp + 1.0, 2.5) /
                  std::sqrt(q));
}

double u2_error_bound(int n_comp, double p, double q) {
  const double x = 2.0 * kPi / p;
  return 3.0 * p *
         (std::sqrt(2.0) * std::pow(n_comp + 1.0, 3.0) * x * x +
          16.0 * std::pow(2.0 * kPi, 1.5) * std::pow(n_comp + 1.0, 3.5) /
              std::sqrt(q));
}

double T_a_time_bound(double q) { return 4.0 * std::sqrt(q / (2.0 * kPi)); }

double u2_time_bound(int n_comp, double p, double q) {
  return 48.0 / std::sqrt(2.0 * kPi) * p * std::sqrt(q) * (n_comp + 1.0);
}

double k2_constant() { return 8957952.0 * std::pow(kPi, 5.0); }
double k1_constant() { return 16.0 * k2_constant(); }
double k_constant() { return k2_constant() / 8.0; }

PlanReport plan_pq(int n_comp, double target_error) {
  PlanReport r;
  if (n_comp < 1) throw DomainError("plan_pq: N must be >= 1");
  if (!(target_error > 0.0) || !std::isfinite(target_error)) {
    r.reason = "target error must be positive and finite";
    return r;
  }
  const double m = n_comp + 1.0;
  // E' = A / P + B P / sqrt(Q)
  const double a = 12.0 * std::sqrt(2.0) * kPi * kPi * std::pow(m, 3.0);
  const double b = 48.0 * std::pow(2.0 * kPi, 1.5) * std::pow(m, 3.5);
  r.p_continuous = 1.5 * a / target_error;
  r.predicted_time = k2_constant() * std::pow(m, 10.5) /
                     std::pow(target_error, 3.0);
  if (r.p_continuous > 1e15) {
    r.reason = "required P exceeds the representable range";
    return r;
  }
  long long p = std::max(1LL, std::llround(r.p_continuous));
  if (target_error * static_cast<double>(p) <= a) {
    p = static_cast<long long>(std::floor(a / target_error)) + 1;
  }
  const double denom = target_error * static_cast<double>(p) - a;
  const double pd = static_cast<double>(p);
  r.P = p;
  r.Q = std::ceil(b * b * pd * pd * pd * pd / (denom * denom));
  r.error_bound = u2_error_bound(n_comp, pd, r.Q);
  r.time_bound = u2_time_bound(n_comp, pd, r.Q);
  r.feasible = std::isfinite(r.Q);
  if (!r.feasible) r.reason = "Q overflows";
  return r;
}

GateCounts gate_counts(int n_comp) {
  const long long n = n_comp;
  return {3 * n * n + 5 * n + 2, 4 * n * n + 6 * n + 2};
}

double analytic_total_time(int n_comp, double eta) {
  const double ga = static_cast<double>(gate_counts(n_comp).g_a);
  return k_constant() * std::pow(ga, 4.0) * std::pow(n_comp + 1.0, 9.0) /
         std::pow(eta, 1.5);
}

}  // namespace jcpulse
