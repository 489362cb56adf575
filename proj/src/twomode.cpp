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

#include "jcpulse/twomode.hpp"

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <glog/logging.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "jcpulse/parallel.hpp"
#include "jcpulse/random.hpp"
#include "jcpulse/su2.hpp"

namespace jcpulse {

TwoModeSpace build_two_mode_space(int n_comp, int truncation,
                                  int control_mode) {
  if (n_comp < 1) throw ConfigError("must be >= 1", "n_comp");
  if (truncation < 0) truncation = n_comp + 5;
  if (truncation <= n_comp) {
    throw ConfigError("must exceed n_comp", "truncation");
  }
  if (control_mode != 1 && control_mode != 2) {
    throw ConfigError("must be 1 or 2", "control_mode");
  }
  return {n_comp, truncation, control_mode};
}

Matrix cinc_target(const TwoModeSpace& space) {
  const int q = space.n_comp + 1;
  Matrix u = Matrix::Zero(q * q, q * q);
  for (int n1 = 0; n1 < q; ++n1) {
    for (int n2 = 0; n2 < q; ++n2) {
      int m1 = n1, m2 = n2;
      if (space.control_mode == 1 && n1 == space.n_comp) m2 = (n2 + 1) % q;
      if (space.control_mode == 2 && n2 == space.n_comp) m1 = (n1 + 1) % q;
      u(m1 * q + m2, n1 * q + n2) = 1.0;
    }
  }
  return u;
}

Matrix bus_target(const TwoModeSpace& space) {
  const int l = space.truncation;
  const int d = dim_at(l);
  Matrix u = Matrix::Identity(d, d);
  const BlockSlots s = h2_slots(l, space.n_comp);
  u(s.up, s.up) = 0.0;
  u(s.down, s.down) = 0.0;
  u(s.up, s.down) = -kI;
  u(s.down, s.up) = -kI;
  return u;
}

SubspaceProjector bus_projector(int n_comp, int truncation) {
  if (truncation <= n_comp) throw DomainError("bus_projector: truncation");
  SubspaceProjector p;
  const int comp = 2 * (n_comp + 1);
  const int d = dim_at(truncation);
  p.projector = Matrix::Zero(d, d);
  for (int f = 0; f < comp; ++f) {
    if (f == flat_index(n_comp, Spin::kUp)) continue;
    p.indices.push_back(f);
    p.projector(f, f) = 1.0;
  }
  p.rank = static_cast<int>(p.indices.size());
  p.d_perp = comp - p.rank;
  return p;
}

PulseSequence BusRun::sequence(int mode) const {
  PulseSequence seq;
  for (double d : delta) seq.append(SidebandPulse{mode, kGMax, d, 0.0, dt});
  return seq;
}

double BusRun::duration() const {
  return static_cast<double>(delta.size()) * dt / kTg;
}

namespace {

struct DetunedBlock {
  Mat2 u;
  Mat2 du;  // d/d delta
};

// Sideband block n >= 1 at g_max, beta = 0: generator v = (sqrt n, 0, -delta).
DetunedBlock detuned_block(int n, double delta, double dt, bool derivative) {
  const Vec3 v(std::sqrt(static_cast<double>(n)), 0.0, -delta);
  const double r = v.norm();
  const Vec3 nh = v / r;
  const double a = 0.5 * r * dt;
  const double ca = std::cos(a), sa = std::sin(a);
  auto sig = [](const Vec3& w) {
    return Mat2(w.x() * pauli2(Axis::kX) + w.y() * pauli2(Axis::kY) +
                w.z() * pauli2(Axis::kZ));
  };
  DetunedBlock b;
  b.u = ca * Mat2::Identity() - kI * sa * sig(nh);
  if (derivative) {
    const double da = 0.5 * dt * delta / r;
    const Vec3 dv(0.0, 0.0, -1.0);
    const Vec3 dn = (dv - nh * nh.dot(dv)) / r;
    b.du = -sa * da * Mat2::Identity() - kI * ca * da * sig(nh) -
           kI * sa * sig(dn);
  }
  return b;
}

const SaTarget& cached_bus_target(int n_comp) {
  static std::mutex mu;
  static std::map<int, SaTarget> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n_comp);
  if (it == cache.end()) {
    const TwoModeSpace s{n_comp, n_comp + 1, 1};
    it = cache
             .emplace(n_comp, make_sa_target(n_comp, bus_target(s),
                                             bus_projector(n_comp, n_comp + 1)))
             .first;
  }
  return it->second;
}

class BusCost : public ceres::FirstOrderFunction {
 public:
  BusCost(int n_comp, double dt, int m) : n_(n_comp), dt_(dt), m_(m) {}
  bool Evaluate(const double* params, double* cost,
                double* gradient) const override {
    std::vector<double> x(params, params + m_);
    std::vector<double> grad;
    *cost = bus_error(n_, dt_, x, gradient != nullptr ? &grad : nullptr);
    if (gradient != nullptr) std::copy(grad.begin(), grad.end(), gradient);
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return m_; }

 private:
  int n_;
  double dt_;
  int m_;
};

class LogCallback : public ceres::IterationCallback {
 public:
  explicit LogCallback(std::vector<double>* log) : log_(log) {}
  ceres::CallbackReturnType operator()(
      const ceres::IterationSummary& s) override {
    log_->push_back(s.cost);
    return ceres::SOLVER_CONTINUE;
  }

 private:
  std::vector<double>* log_;
};

// Initial detunings are drawn from [-2, 2] g_max.
constexpr double kBusDeltaInit = 2.0;

BusRun optimize_bus_restart(int n_comp, double dt, int m,
                            std::uint64_t run_seed, const SaConfig& config) {
  static std::once_flag quiet;
  std::call_once(quiet, [] { FLAGS_minloglevel = google::GLOG_ERROR; });
  Rng rng(run_seed);
  std::uniform_real_distribution<double> ud(-kBusDeltaInit, kBusDeltaInit);
  std::vector<double> x(m);
  for (double& v : x) v = ud(rng);

  BusRun run;
  run.n_comp = n_comp;
  run.dt = dt;
  run.M = m;
  run.run_seed = run_seed;
  ceres::GradientProblem problem(new BusCost(n_comp, dt, m));
  ceres::GradientProblemSolver::Options opt;
  opt.line_search_direction_type = ceres::LBFGS;
  opt.max_num_iterations = config.max_iterations;
  opt.function_tolerance = 1e-16;
  opt.gradient_tolerance = 1e-14;
  opt.parameter_tolerance = 1e-16;
  opt.logging_type = ceres::SILENT;
  LogCallback cb(&run.iterate_log);
  opt.callbacks.push_back(&cb);
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opt, problem, x.data(), &summary);
  run.delta = x;
  run.achieved_error = bus_error(n_comp, dt, run.delta);
  return run;
}

}  // namespace

double bus_error(int n_comp, double dt, const std::vector<double>& delta,
                 std::vector<double>* grad) {
  if (n_comp < 1) throw DomainError("bus_error: N must be >= 1");
  if (!(dt > 0.0)) throw DomainError("bus_error: dt must be positive");
  const SaTarget& t = cached_bus_target(n_comp);
  const int m = static_cast<int>(delta.size());
  const double d = 2.0 * (n_comp + 1);
  Complex c = static_cast<double>(t.d_perp);
  std::vector<Complex> dc(m, 0.0);

  std::map<int, Mat2> weights;
  Complex w0 = 0.0;
  for (const auto& e : t.entries) {
    if (e.block == 0) {
      w0 += e.conj_target;
      continue;
    }
    auto it = weights.find(e.block);
    if (it == weights.end()) it = weights.emplace(e.block, Mat2::Zero()).first;
    it->second(e.row, e.col) += e.conj_target;
  }

  // |0 down> only collects the detuning phase.
  double total = 0.0;
  for (double v : delta) total += v;
  const Complex ph0 = std::exp(Complex(0.0, -0.5 * total * dt));
  c += w0 * ph0;
  if (grad != nullptr) {
    for (int k = 0; k < m; ++k) dc[k] += w0 * Complex(0.0, -0.5 * dt) * ph0;
  }

  std::vector<DetunedBlock> pb(m);
  std::vector<Mat2> fwd(m + 1);
  for (const auto& [block, w] : weights) {
    for (int k = 0; k < m; ++k) {
      pb[k] = detuned_block(block, delta[k], dt, grad != nullptr);
    }
    fwd[0] = Mat2::Identity();
    for (int k = 0; k < m; ++k) fwd[k + 1] = pb[k].u * fwd[k];
    c += (w.array() * fwd[m].array()).sum();
    if (grad == nullptr) continue;
    Mat2 back = Mat2::Identity();
    const Mat2 wt = w.transpose();
    for (int k = m - 1; k >= 0; --k) {
      const Mat2 kmat = fwd[k] * wt * back;
      dc[k] += (kmat.transpose().array() * pb[k].du.array()).sum();
      back = back * pb[k].u;
    }
  }
  const double mag = std::abs(c);
  if (grad != nullptr) {
    grad->assign(m, 0.0);
    if (mag > 0.0) {
      for (int k = 0; k < m; ++k) {
        (*grad)[k] = -(std::conj(c) * dc[k]).real() / (mag * d);
      }
    }
  }
  return 1.0 - mag / d;
}

BusRun optimize_bus(int n_comp, double dt, double threshold,
                    const SaConfig& config, std::uint64_t seed) {
  validate_config(config);
  if (n_comp < 1) throw ConfigError("must be >= 1", "n_comp");
  if (!(dt > 0.0)) throw ConfigError("must be positive", "dt");
  if (!(threshold > 0.0)) throw ConfigError("must be positive", "threshold");
  // Stream tag keeps BUS seeds apart from V-gate streams.
  const std::uint64_t stream = 0xB05ULL << 32 | static_cast<std::uint64_t>(n_comp);
  BusRun best;
  bool have_best = false;
  for (int m = config.m_start; m <= config.m_max; ++m) {
    for (int r0 = 0; r0 < config.restarts; r0 += config.jobs) {
      const int batch = std::min(config.jobs, config.restarts - r0);
      std::vector<BusRun> runs(batch);
      parallel_for(batch, config.jobs, [&](int i) {
        const std::uint64_t rs = derive_seed(
            seed, {stream, static_cast<std::uint64_t>(m),
                   static_cast<std::uint64_t>(r0 + i)});
        runs[i] = optimize_bus_restart(n_comp, dt, m, rs, config);
        runs[i].restart = r0 + i;
      });
      for (BusRun& run : runs) {
        run.seed = seed;
        run.threshold = threshold;
        if (run.achieved_error <= threshold) {
          run.success = true;
          return run;
        }
        if (!have_best || run.achieved_error < best.achieved_error) {
          best = run;
          have_best = true;
        }
      }
    }
  }
  best.success = false;
  return best;
}

PulseSequence bus_dagger(const PulseSequence& seq) {
  return sequence_dagger(seq);
}

PulseSequence assign_mode(const PulseSequence& seq, int mode) {
  if (mode < 0 || mode > 2) throw DomainError("assign_mode: mode must be 0..2");
  PulseSequence out = seq;
  for (Pulse& p : out.pulses) {
    if (auto* s = std::get_if<SidebandPulse>(&p)) s->mode = mode;
    if (auto* g = std::get_if<GeneralPulse>(&p)) g->mode = mode;
  }
  return out;
}

void check_mode_exclusivity(const PulseSequence& seq) {
  for (size_t i = 0; i < seq.size(); ++i) {
    const Pulse& p = seq.pulses[i];
    double g = 0.0;
    if (const auto* s = std::get_if<SidebandPulse>(&p)) g = s->g;
    if (const auto* q = std::get_if<GeneralPulse>(&p)) g = q->g;
    const int mode = pulse_mode(p);
    if (g != 0.0 && mode != 1 && mode != 2) {
      throw DomainError("pulse " + std::to_string(i) +
                        " couples an oscillator without a mode 1/2 tag");
    }
  }
}

Matrix embed_mode(const TwoModeSpace& space, const Matrix& u, int mode) {
  const int l = space.truncation;
  if (u.rows() != dim_at(l) || u.cols() != dim_at(l)) {
    throw DomainError("embed_mode: operator is not at the space truncation");
  }
  if (mode != 1 && mode != 2) throw DomainError("embed_mode: mode must be 1/2");
  const int q = space.mode_dim();
  Matrix full = Matrix::Zero(space.dim(), space.dim());
  for (int other = 0; other < q; ++other) {
    for (int n = 0; n < q; ++n) {
      for (int m = 0; m < q; ++m) {
        for (int s = 0; s < 2; ++s) {
          for (int t = 0; t < 2; ++t) {
            const Complex v = u(2 * n + s, 2 * m + t);
            if (v == 0.0) continue;
            const Spin ss = static_cast<Spin>(s), st = static_cast<Spin>(t);
            const int row = mode == 1 ? space.index(n, other, ss)
                                      : space.index(other, n, ss);
            const int col = mode == 1 ? space.index(m, other, st)
                                      : space.index(other, m, st);
            full(row, col) = v;
          }
        }
      }
    }
  }
  return full;
}

Matrix two_mode_unitary(const TwoModeSpace& space, const PulseSequence& seq) {
  check_mode_exclusivity(seq);
  Matrix u = Matrix::Identity(space.dim(), space.dim());
  PulseSequence run;
  int run_mode = 0;
  auto flush = [&] {
    if (run.pulses.empty()) return;
    const Matrix single = sequence_unitary(space.truncation, assign_mode(run, 0));
    // A run of carriers alone is the same on either mode.
    u = embed_mode(space, single, run_mode == 0 ? 1 : run_mode) * u;
    run.pulses.clear();
    run_mode = 0;
  };
  for (const Pulse& p : seq.pulses) {
    const int m = pulse_mode(p);
    if (m != 0 && run_mode != 0 && m != run_mode) flush();
    if (m != 0) run_mode = m;
    run.append(p);
  }
  flush();
  return u;
}

std::vector<int> spin_down_qudit_indices(const TwoModeSpace& space) {
  std::vector<int> idx;
  for (int n1 = 0; n1 <= space.n_comp; ++n1) {
    for (int n2 = 0; n2 <= space.n_comp; ++n2) {
      idx.push_back(space.index(n1, n2, Spin::kDown));
    }
  }
  return idx;
}

TwoModeReport cinc_error(const TwoModeSpace& space, const Matrix& composite) {
  if (composite.rows() != space.dim() || composite.cols() != space.dim()) {
    throw DomainError("cinc_error: composite has the wrong dimension");
  }
  const std::vector<int> idx = spin_down_qudit_indices(space);
  const int dq = static_cast<int>(idx.size());
  Matrix c(dq, dq);
  for (int i = 0; i < dq; ++i) {
    for (int j = 0; j < dq; ++j) c(i, j) = composite(idx[i], idx[j]);
  }
  const Matrix t = cinc_target(space);
  const Complex tr = (t.adjoint() * c).trace();
  const double mag = std::abs(tr);
  const double phase = mag > 0.0 ? std::arg(tr) : 0.0;
  TwoModeReport r;
  r.raw_error = (std::exp(Complex(0.0, phase)) * t - c).norm();
  r.eta = r.raw_error * r.raw_error / (2.0 * dq);
  r.fidelity = mag * mag / (static_cast<double>(dq) * dq);
  std::vector<char> in(space.dim(), 0);
  for (int i : idx) in[i] = 1;
  double cross = 0.0;
  for (int j : idx) {
    for (int i = 0; i < space.dim(); ++i) {
      if (!in[i]) cross += std::norm(composite(i, j));
    }
  }
  r.cross_block = std::sqrt(cross);
  return r;
}

Matrix compose_exact(const TwoModeSpace& space, const Matrix& bus,
                     const Matrix& bus_dag, const Matrix& cinc_prime) {
  const int c = space.control_mode, t = space.target_mode();
  return embed_mode(space, bus_dag, c) * embed_mode(space, cinc_prime, t) *
         embed_mode(space, bus, c);
}

CincComposition compose_cinc(const TwoModeSpace& space, const BusRun& bus,
                             const PiecewiseControls& cinc_prime) {
  if (bus.n_comp != space.n_comp) {
    throw DomainError("compose_cinc: BUS run was optimized for another N");
  }
  const int l = space.truncation;
  const int c = space.control_mode, t = space.target_mode();
  const PulseSequence bus_seq = assign_mode(bus.sequence(), c);
  const PulseSequence dag_seq = bus_dagger(bus_seq);
  const PulseSequence cp_seq = assign_mode(cinc_prime.sequence(), t);

  CincComposition out;
  out.sequence.append(bus_seq);
  out.sequence.append(cp_seq);
  out.sequence.append(dag_seq);
  out.report = cinc_error(space, two_mode_unitary(space, out.sequence));
  out.bus_time = bus_seq.total_duration() / kTg;
  out.cinc_prime_time = cp_seq.total_duration() / kTg;
  out.total_time = out.sequence.total_duration() / kTg;

  const Matrix u_bus = sequence_unitary(l, assign_mode(bus_seq, 0));
  const Matrix u_dag = sequence_unitary(l, assign_mode(dag_seq, 0));
  const Matrix u_cp = sequence_unitary(l, assign_mode(cp_seq, 0));
  const SubspaceProjector p = bus_projector(space.n_comp, l);
  const Matrix tb = bus_target(space);
  out.bus_raw_error =
      phase_min_error(tb, u_bus, p.projector, space.n_comp).raw_error;
  out.bus_dagger_raw_error =
      phase_min_error(tb.adjoint(), u_dag, p.projector, space.n_comp)
          .raw_error;
  out.cinc_prime_raw_error =
      comp_error(embed_identity(cinc_prime_target(space.n_comp), l), u_cp,
                 space.n_comp)
          .raw_error;
  const Complex rt = (p.projector * u_dag * u_bus * p.projector).trace();
  out.roundtrip_error = 1.0 - std::abs(rt) / p.rank;
  return out;
}

Json bus_run_to_json(const BusRun& run) {
  return {{"n_comp", run.n_comp},
          {"dt", run.dt / kTg},
          {"threshold", run.threshold},
          {"M", run.M},
          {"restart", run.restart},
          {"seed", run.seed},
          {"run_seed", run.run_seed},
          {"delta", run.delta},
          {"duration", run.duration()},
          {"achieved_error", run.achieved_error},
          {"success", run.success},
          {"iterate_log", run.iterate_log}};
}

BusRun bus_run_from_json(const Json& j, const std::string& path) {
  BusRun r;
  try {
    r.n_comp = j.at("n_comp").get<int>();
    r.dt = j.at("dt").get<double>() * kTg;
    r.threshold = j.at("threshold").get<double>();
    r.M = j.at("M").get<int>();
    r.restart = j.at("restart").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.run_seed = j.at("run_seed").get<std::uint64_t>();
    r.delta = j.at("delta").get<std::vector<double>>();
    r.achieved_error = j.at("achieved_error").get<double>();
    r.success = j.at("success").get<bool>();
    r.iterate_log = j.at("iterate_log").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what(), path);
  }
  if (r.n_comp < 1) throw ConfigError("must be >= 1", path + ".n_comp");
  if (!(r.dt > 0.0)) throw ConfigError("must be positive", path + ".dt");
  if (static_cast<int>(r.delta.size()) != r.M) {
    throw ConfigError("delta length disagrees with M", path + ".delta");
  }
  return r;
}

}  // namespace jcpulse
