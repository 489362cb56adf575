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

#include "jcpulse/semi_analytic.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <glog/logging.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "jcpulse/fourier_synth.hpp"
#include "jcpulse/parallel.hpp"
#include "jcpulse/random.hpp"
#include "jcpulse/su2.hpp"

namespace jcpulse {

void validate_config(const SaConfig& c) {
  if (c.m_start < 1) throw ConfigError("must be >= 1", "m_start");
  if (c.m_max < c.m_start) throw ConfigError("must be >= m_start", "m_max");
  if (c.restarts < 1) throw ConfigError("must be >= 1", "restarts");
  if (c.max_iterations < 1) throw ConfigError("must be >= 1", "max_iterations");
  if (c.jobs < 1) throw ConfigError("must be >= 1", "jobs");
}

PulseSequence OptimizationRun::sequence() const {
  PulseSequence seq;
  for (size_t m = 0; m < g.size(); ++m) {
    SidebandPulse p;
    p.g = g[m];
    p.beta = beta[m];
    p.duration = kSaPulseDuration;
    seq.append(p);
  }
  return seq;
}

double OptimizationRun::duration() const {
  return static_cast<double>(g.size()) * kSaPulseDuration / kTg;
}

SaTarget make_sa_target(int n_comp, const Matrix& target,
                        const SubspaceProjector& projector) {
  const int d = 2 * (n_comp + 1);
  if (target.rows() < d || target.cols() != target.rows()) {
    throw DomainError("make_sa_target: target smaller than the comp space");
  }
  const int trunc = static_cast<int>(target.rows()) / 2 - 1;
  SaTarget t;
  t.n_comp = n_comp;
  t.d_perp = projector.d_perp;
  std::vector<int> in(d, 0);
  for (int i : projector.indices) {
    if (i >= d) throw DomainError("make_sa_target: projector leaves comp space");
    in[i] = 1;
  }
  for (int n = 0; n <= n_comp + 1; ++n) {
    const BlockSlots s = h2_slots(trunc, n);
    const int slots[2] = {s.up, s.down};
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const int i = slots[r], j = slots[c];
        if (i < 0 || j < 0 || i >= d || j >= d || !in[i] || !in[j]) continue;
        if (target(i, j) == 0.0) continue;
        t.entries.push_back({n, r, c, std::conj(target(i, j))});
      }
    }
  }
  return t;
}

SaTarget v_gate_sa_target(const VGateSpec& spec) {
  const int trunc = spec.n_comp + 1;
  return make_sa_target(spec.n_comp, v_gate_target(spec, trunc),
                        v_gate_projector(spec, spec.n_comp));
}

namespace {

struct PulseBlock {
  Mat2 u;
  Mat2 du_dx;
  Mat2 du_dbeta;
};

// Resonant pulse of length T_g/2 on block n with g = g_max sin^2(x).
PulseBlock pulse_block(double x, double beta, int n, bool derivatives) {
  const double sx = std::sin(x);
  const double g = kGMax * sx * sx;
  const double rate = kSaPulseDuration * std::sqrt(static_cast<double>(n));
  const double theta = rate * g;
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  const Complex em = std::exp(Complex(0.0, -beta));
  const Complex ep = std::conj(em);
  PulseBlock b;
  b.u << c, -kI * s * em, -kI * s * ep, c;
  if (derivatives) {
    Mat2 du_dtheta;
    du_dtheta << -0.5 * s, -0.5 * kI * c * em, -0.5 * kI * c * ep, -0.5 * s;
    b.du_dx = du_dtheta * (rate * kGMax * std::sin(2.0 * x));
    b.du_dbeta << 0.0, -s * em, s * ep, 0.0;
  }
  return b;
}

double to_x(double g) {
  return std::asin(std::sqrt(std::clamp(g / kGMax, 0.0, 1.0)));
}

class SaCost : public ceres::FirstOrderFunction {
 public:
  explicit SaCost(const SaTarget& t, int m) : t_(t), m_(m) {}
  bool Evaluate(const double* params, double* cost,
                double* gradient) const override {
    std::vector<double> x(params, params + 2 * m_);
    std::vector<double> grad;
    *cost = sa_error_params(t_, x, gradient != nullptr ? &grad : nullptr);
    if (gradient != nullptr) {
      for (int i = 0; i < 2 * m_; ++i) gradient[i] = grad[i];
    }
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return 2 * m_; }

 private:
  const SaTarget& t_;
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

// Blocks touched by the target, and the weight matrix C with
// c_b = sum_rc C(r, c) V_b(r, c).
struct BlockWeights {
  int block;
  Mat2 weights;
};

std::vector<BlockWeights> block_weights(const SaTarget& t, Complex* constant) {
  std::map<int, Mat2> w;
  *constant = static_cast<double>(t.d_perp);
  for (const auto& e : t.entries) {
    if (e.block == 0) {
      // |0 down> only picks up a detuning phase, absent at resonance.
      *constant += e.conj_target;
      continue;
    }
    auto it = w.find(e.block);
    if (it == w.end()) it = w.emplace(e.block, Mat2::Zero()).first;
    it->second(e.row, e.col) += e.conj_target;
  }
  std::vector<BlockWeights> out;
  for (const auto& [b, m] : w) out.push_back({b, m});
  return out;
}

}  // namespace

double sa_error_params(const SaTarget& t, const std::vector<double>& x,
                       std::vector<double>* grad) {
  const int m = static_cast<int>(x.size() / 2);
  Complex c;
  const std::vector<BlockWeights> blocks = block_weights(t, &c);
  const double d = 2.0 * (t.n_comp + 1);
  std::vector<Complex> dc;
  if (grad != nullptr) dc.assign(2 * m, 0.0);
  std::vector<PulseBlock> pb(m);
  std::vector<Mat2> fwd(m + 1);
  for (const BlockWeights& bw : blocks) {
    for (int k = 0; k < m; ++k) {
      pb[k] = pulse_block(x[k], x[m + k], bw.block, grad != nullptr);
    }
    fwd[0] = Mat2::Identity();
    for (int k = 0; k < m; ++k) fwd[k + 1] = pb[k].u * fwd[k];
    c += (bw.weights.array() * fwd[m].array()).sum();
    if (grad == nullptr) continue;
    // d c_b = sum_rc C(r,c) [B dU S](r,c) = Tr(S C^T B dU)
    Mat2 back = Mat2::Identity();
    const Mat2 wt = bw.weights.transpose();
    for (int k = m - 1; k >= 0; --k) {
      const Mat2 kmat = fwd[k] * wt * back;
      dc[k] += (kmat.transpose().array() * pb[k].du_dx.array()).sum();
      dc[m + k] += (kmat.transpose().array() * pb[k].du_dbeta.array()).sum();
      back = back * pb[k].u;
    }
  }
  const double mag = std::abs(c);
  if (grad != nullptr) {
    grad->assign(2 * m, 0.0);
    if (mag > 0.0) {
      for (int i = 0; i < 2 * m; ++i) {
        (*grad)[i] = -(std::conj(c) * dc[i]).real() / (mag * d);
      }
    }
  }
  return 1.0 - mag / d;
}

double sa_error(const SaTarget& t, const std::vector<double>& g,
                const std::vector<double>& beta) {
  if (g.size() != beta.size()) throw DomainError("sa_error: size mismatch");
  std::vector<double> x(2 * g.size());
  for (size_t k = 0; k < g.size(); ++k) {
    if (g[k] < 0.0 || g[k] > kGMax) throw DomainError("g outside [0, g_max]");
    x[k] = to_x(g[k]);
    x[g.size() + k] = beta[k];
  }
  return sa_error_params(t, x, nullptr);
}

OptimizationRun optimize_restart(const SaTarget& t, int m,
                                 std::uint64_t run_seed,
                                 const SaConfig& config) {
  // The line search occasionally warns about degenerate interpolation
  // polynomials; those are expected on flat stretches.
  static std::once_flag quiet;
  std::call_once(quiet, [] { FLAGS_minloglevel = google::GLOG_ERROR; });
  Rng rng(run_seed);
  std::uniform_real_distribution<double> ug(0.0, kGMax);
  std::uniform_real_distribution<double> ub(0.0, 2.0 * kPi);
  std::vector<double> params(2 * m);
  for (int k = 0; k < m; ++k) params[k] = to_x(ug(rng));
  for (int k = 0; k < m; ++k) params[m + k] = ub(rng);

  OptimizationRun run;
  run.M = m;
  run.run_seed = run_seed;
  ceres::GradientProblem problem(new SaCost(t, m));
  ceres::GradientProblemSolver::Options opt;
  opt.line_search_direction_type = ceres::LBFGS;
  opt.max_num_iterations = config.max_iterations;
  opt.function_tolerance = 1e-16;
  opt.gradient_tolerance = 1e-14;
  opt.parameter_tolerance = 1e-16;
  opt.logging_type = ceres::SILENT;
  opt.minimizer_progress_to_stdout = false;
  LogCallback cb(&run.iterate_log);
  opt.callbacks.push_back(&cb);
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opt, problem, params.data(), &summary);

  run.g.resize(m);
  run.beta.resize(m);
  for (int k = 0; k < m; ++k) {
    const double s = std::sin(params[k]);
    run.g[k] = kGMax * s * s;
    run.beta[k] = std::remainder(params[m + k], 2.0 * kPi);
    if (run.beta[k] < 0.0) run.beta[k] += 2.0 * kPi;
  }
  // Re-evaluate from the stored controls so the reported error is exactly
  // what the sequence achieves.
  run.achieved_error = sa_error(t, run.g, run.beta);
  return run;
}

OptimizationRun optimize_target(const SaTarget& t, double eps_threshold,
                                const SaConfig& config, std::uint64_t seed,
                                std::uint64_t stream) {
  validate_config(config);
  if (!(eps_threshold > 0.0)) throw DomainError("threshold must be positive");
  OptimizationRun best;
  bool have_best = false;
  for (int m = config.m_start; m <= config.m_max; ++m) {
    for (int r0 = 0; r0 < config.restarts; r0 += config.jobs) {
      const int batch = std::min(config.jobs, config.restarts - r0);
      std::vector<OptimizationRun> runs(batch);
      parallel_for(batch, config.jobs, [&](int i) {
        const std::uint64_t rs = derive_seed(
            seed, {stream, static_cast<std::uint64_t>(m),
                   static_cast<std::uint64_t>(r0 + i)});
        runs[i] = optimize_restart(t, m, rs, config);
        runs[i].restart = r0 + i;
      });
      // Lowest restart index wins, so the outcome does not depend on jobs.
      for (OptimizationRun& run : runs) {
        run.seed = seed;
        run.threshold = eps_threshold;
        if (run.achieved_error <= eps_threshold) {
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

namespace {

std::uint64_t spec_stream(const VGateSpec& s) {
  return (static_cast<std::uint64_t>(s.a) << 48) ^
         (static_cast<std::uint64_t>(s.n) << 32) ^
         (static_cast<std::uint64_t>(s.n_script + 1) << 16) ^
         static_cast<std::uint64_t>(s.n_comp);
}

}  // namespace

OptimizationRun optimize_v(const VGateSpec& spec, double eps_threshold,
                           const SaConfig& config, std::uint64_t seed) {
  validate_spec(spec);
  OptimizationRun run = optimize_target(v_gate_sa_target(spec), eps_threshold,
                                        config, seed, spec_stream(spec));
  run.spec = spec;
  return run;
}

double epsilon_threshold(double eta, int n_comp) {
  const double g = static_cast<double>(gate_counts(n_comp).g_sa);
  return eta / (g * g);
}

Json run_to_json(const OptimizationRun& run) {
  return {{"spec",
           {{"a", static_cast<int>(run.spec.a)},
            {"n", run.spec.n},
            {"n_script", run.spec.n_script},
            {"n_comp", run.spec.n_comp}}},
          {"key", run.spec.key()},
          {"threshold", run.threshold},
          {"M", run.M},
          {"restart", run.restart},
          {"seed", run.seed},
          {"run_seed", run.run_seed},
          {"g", run.g},
          {"beta", run.beta},
          {"duration", run.duration()},
          {"achieved_error", run.achieved_error},
          {"success", run.success},
          {"constraint", run.constraint},
          {"iterate_log", run.iterate_log}};
}

OptimizationRun run_from_json(const Json& j, const std::string& path) {
  OptimizationRun r;
  try {
    const Json& s = j.at("spec");
    r.spec.a = static_cast<Family>(s.at("a").get<int>());
    r.spec.n = s.at("n").get<int>();
    r.spec.n_script = s.at("n_script").get<int>();
    r.spec.n_comp = s.at("n_comp").get<int>();
    r.threshold = j.at("threshold").get<double>();
    r.M = j.at("M").get<int>();
    r.restart = j.at("restart").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.run_seed = j.at("run_seed").get<std::uint64_t>();
    r.g = j.at("g").get<std::vector<double>>();
    r.beta = j.at("beta").get<std::vector<double>>();
    r.achieved_error = j.at("achieved_error").get<double>();
    r.success = j.at("success").get<bool>();
    r.constraint = j.at("constraint").get<std::string>();
    r.iterate_log = j.at("iterate_log").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what(), path);
  }
  if (r.g.size() != r.beta.size() || static_cast<int>(r.g.size()) != r.M) {
    throw ConfigError("control arrays disagree with M", path);
  }
  return r;
}

VCache::VCache(std::string path) : path_(std::move(path)) {}

std::string VCache::key(const VGateSpec& spec, double threshold,
                        std::uint64_t seed, const SaConfig& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s|t=%.17g|seed=%llu|m=%d-%d|r=%d|it=%d",
                spec.key().c_str(), threshold,
                static_cast<unsigned long long>(seed), c.m_start, c.m_max,
                c.restarts, c.max_iterations);
  return buf;
}

namespace {

class FileLock {
 public:
  FileLock(const std::string& path, bool exclusive) {
    fd_ = ::open((path + ".lock").c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) throw std::runtime_error("cannot open lock for " + path);
    if (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      ::close(fd_);
      throw std::runtime_error("cannot lock " + path);
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_;
};

}  // namespace

std::map<std::string, OptimizationRun> VCache::load_file() const {
  std::map<std::string, OptimizationRun> out;
  std::ifstream in(path_);
  if (!in) return out;
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("V cache is not valid JSON", path_);
  }
  if (!j.contains("runs") || !j.at("runs").is_object()) {
    throw ConfigError("V cache lacks a runs object", path_);
  }
  for (const auto& item : j.at("runs").items()) {
    out.emplace(item.key(), run_from_json(item.value(), path_ + ":" + item.key()));
  }
  return out;
}

std::optional<OptimizationRun> VCache::get(const std::string& key) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memory_.find(key);
  if (it != memory_.end()) return it->second;
  if (path_.empty()) return std::nullopt;
  std::map<std::string, OptimizationRun> disk;
  {
    FileLock fl(path_, false);
    disk = load_file();
  }
  auto d = disk.find(key);
  if (d == disk.end()) return std::nullopt;
  memory_.emplace(key, d->second);
  return d->second;
}

void VCache::put(const std::string& key, const OptimizationRun& run) {
  std::lock_guard<std::mutex> lock(mu_);
  memory_[key] = run;
  if (path_.empty()) return;
  FileLock fl(path_, true);
  std::map<std::string, OptimizationRun> disk = load_file();
  disk[key] = run;
  Json runs = Json::object();
  for (const auto& [k, r] : disk) runs[k] = run_to_json(r);
  const Json doc = {{"format", "jcpulse-vcache"}, {"version", 1}, {"runs", runs}};
  const std::string tmp = path_ + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << doc.dump(1) << "\n";
  }
  std::filesystem::rename(tmp, path_);
}

std::vector<VGateSpec> required_v_specs(const BlockRotationProgram& program) {
  std::vector<VGateSpec> out;
  std::set<std::string> seen;
  for (const RotationLayer& layer : program.layers) {
    for (const BlockRotation& r : layer.rotations) {
      if (r.angle == 0.0) continue;
      if (r.family == Family::kSideband && r.block == 0) continue;
      VGateSpec s{r.family, r.block, layer.n_script, program.n_comp};
      if (seen.insert(s.key()).second) out.push_back(s);
    }
  }
  return out;
}

std::vector<VGateSpec> all_v_specs(int n_comp) {
  BlockRotationProgram layout =
      compile_unitary(n_comp, Matrix::Identity(2 * (n_comp + 1), 2 * (n_comp + 1)));
  for (RotationLayer& layer : layout.layers) {
    for (BlockRotation& r : layer.rotations) r.angle = 1.0;
  }
  return required_v_specs(layout);
}

std::vector<OptimizationRun> optimize_specs(const std::vector<VGateSpec>& specs,
                                            double eps_threshold,
                                            const SaConfig& config,
                                            std::uint64_t seed,
                                            VCache* cache) {
  validate_config(config);
  std::vector<OptimizationRun> runs(specs.size());
  SaConfig serial = config;
  serial.jobs = 1;
  parallel_for(static_cast<int>(specs.size()), config.jobs, [&](int i) {
    const std::string key = VCache::key(specs[i], eps_threshold, seed, config);
    if (cache != nullptr) {
      if (auto hit = cache->get(key)) {
        runs[i] = *hit;
        return;
      }
    }
    runs[i] = optimize_v(specs[i], eps_threshold, serial, seed);
    if (cache != nullptr) cache->put(key, runs[i]);
  });
  return runs;
}

SaGateResult compile_gate_sa(const ModeSpace& space, const Matrix& target,
                             double eta, const SaConfig& config,
                             std::uint64_t seed, VCache* cache) {
  if (!(eta > 0.0)) throw ConfigError("must be positive", "eta");
  validate_config(config);
  const int big_n = space.n_comp;
  const int d = space.comp_dim();
  SaGateResult res;
  res.eta_requested = eta;
  res.threshold = epsilon_threshold(eta, big_n);

  const BlockRotationProgram plain = compile_unitary(big_n, target);
  res.v_runs = optimize_specs(required_v_specs(plain), res.threshold, config,
                              seed, cache);
  std::map<std::string, const OptimizationRun*> by_key;
  for (const OptimizationRun& r : res.v_runs) {
    if (!r.success) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " (best error %.3e > %.3e)",
                    r.achieved_error, res.threshold);
      res.failure = "V optimization failed for " + r.spec.key() + buf;
      return res;
    }
    by_key[r.spec.key()] = &r;
  }
  std::vector<OptimizationRun> extra;
  extra.reserve(4 * (2 * big_n + 1) * (big_n + 1));

  // Layers are simulated a few levels above N so that leakage through
  // |N up> is seen by the compiler.
  const int sim = big_n + 3;
  PulseSequence total;
  auto realize = [&](const RotationLayer& layer) -> Matrix {
    Matrix u = Matrix::Identity(dim_at(sim), dim_at(sim));
    for (const BlockRotation& r : layer.rotations) {
      if (r.angle == 0.0) continue;
      if (r.family == Family::kSideband && r.block == 0) continue;
      const VGateSpec spec{r.family, r.block, layer.n_script, big_n};
      auto it = by_key.find(spec.key());
      if (it == by_key.end()) {
        SaConfig serial = config;
        extra.push_back(optimize_v(spec, res.threshold, serial, seed));
        if (!extra.back().success) {
          throw DomainError("V optimization failed for " + spec.key());
        }
        it = by_key.emplace(spec.key(), &extra.back()).first;
      }
      const PulseSequence seq = assemble_u(r, it->second->sequence());
      for (const Pulse& p : seq.pulses) apply_left(u, sim, p);
      total.append(seq);
      res.v_applications += 2;
    }
    return u.topLeftCorner(d, d);
  };
  try {
    res.program = compile_unitary_adaptive(big_n, target, realize);
  } catch (const DomainError& e) {
    res.failure = e.what();
    return res;
  }
  for (const OptimizationRun& r : extra) res.v_runs.push_back(r);
  res.sequence = std::move(total);
  res.total_time = res.sequence.total_duration() / kTg;
  const Matrix full = sequence_unitary(space.n_check, res.sequence);
  res.report = comp_error(target, full.topLeftCorner(d, d), big_n);
  res.success = res.report.eta <= eta;
  if (!res.success) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "measured eta %.3e exceeds %.3e",
                  res.report.eta, eta);
    res.failure = buf;
  }
  return res;
}

}  // namespace jcpulse
