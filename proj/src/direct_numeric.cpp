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

#include "jcpulse/direct_numeric.hpp"

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <glog/logging.h>

#include <cmath>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "jcpulse/parallel.hpp"
#include "jcpulse/random.hpp"

namespace jcpulse {

PulseSequence PiecewiseControls::sequence() const {
  PulseSequence seq;
  for (int i = 0; i < n_steps(); ++i) {
    GeneralPulse p;
    p.chi = chi[i];
    p.delta = delta[i];
    p.phi = phi[i];
    p.g = kGMax;
    p.beta = 0.0;
    p.duration = dt;
    seq.append(p);
  }
  return seq;
}

std::vector<double> PiecewiseControls::params() const {
  std::vector<double> x;
  x.reserve(3 * chi.size());
  for (size_t i = 0; i < chi.size(); ++i) {
    x.push_back(chi[i]);
    x.push_back(delta[i]);
    x.push_back(phi[i]);
  }
  return x;
}

PiecewiseControls PiecewiseControls::from_params(double dt,
                                                 const std::vector<double>& x) {
  if (x.size() % 3 != 0) throw DomainError("control vector length not 3k");
  PiecewiseControls c;
  c.dt = dt;
  for (size_t i = 0; i < x.size(); i += 3) {
    c.chi.push_back(x[i]);
    c.delta.push_back(x[i + 1]);
    c.phi.push_back(x[i + 2]);
  }
  return c;
}

void validate_config(const DnConfig& c) {
  if (c.restarts < 1) throw ConfigError("must be >= 1", "restarts");
  if (!(c.w >= 0.0) || !std::isfinite(c.w)) throw ConfigError("must be >= 0", "w");
  if (c.max_iterations < 1) throw ConfigError("must be >= 1", "max_iterations");
  if (c.jobs < 1) throw ConfigError("must be >= 1", "jobs");
  if (!(c.init_max > 0.0)) throw ConfigError("must be positive", "init_max");
}

Matrix cinc_prime_target(int n_comp) {
  if (n_comp < 1) throw DomainError("cinc_prime_target: N must be >= 1");
  const int d = 2 * (n_comp + 1);
  Matrix u = Matrix::Zero(d, d);
  for (int n = 0; n <= n_comp; ++n) {
    u(flat_index(n, Spin::kDown), flat_index(n, Spin::kDown)) = 1.0;
    u(flat_index((n + 1) % (n_comp + 1), Spin::kUp), flat_index(n, Spin::kUp)) =
        1.0;
  }
  return u;
}

namespace {

// -i dt e^{-i m dt} sinc(x) with x = (a - b) dt / 2, the divided difference
// of e^{-i lambda dt} written without cancellation.
Complex divided_difference(double a, double b, double dt) {
  const double x = 0.5 * (a - b) * dt;
  const double sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  const double mean = 0.5 * (a + b);
  return Complex(0.0, -dt) * std::exp(Complex(0.0, -mean * dt)) * sinc;
}

struct Step {
  Matrix v;                  // eigenvectors
  Eigen::VectorXd lambda;    // eigenvalues
  Matrix u;                  // propagator
};

Step step_propagator(int truncation, double chi, double delta, double phi,
                     double dt) {
  GeneralPulse p;
  p.chi = chi;
  p.delta = delta;
  p.phi = phi;
  p.g = kGMax;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian(truncation, p));
  Step s;
  s.v = es.eigenvectors();
  s.lambda = es.eigenvalues();
  Vector phase(s.lambda.size());
  for (Eigen::Index k = 0; k < s.lambda.size(); ++k) {
    phase(k) = std::exp(Complex(0.0, -s.lambda(k) * dt));
  }
  s.u = s.v * phase.asDiagonal() * s.v.adjoint();
  return s;
}

}  // namespace

DnEvaluation dn_evaluate(const ModeSpace& space, const Matrix& target,
                         double dt, const std::vector<double>& params, double w,
                         bool with_gradient) {
  const int d = space.comp_dim();
  if (target.rows() != d || target.cols() != d) {
    throw DomainError("dn_evaluate: target must be comp-space sized");
  }
  if (params.size() % 3 != 0 || params.empty()) {
    throw DomainError("dn_evaluate: need 3 parameters per step");
  }
  const int trunc = space.n_opt;
  const int big_d = dim_at(trunc);
  const int lo = 2 * (space.n_pad + 1);
  const int n_leak = big_d - lo;
  const int n = static_cast<int>(params.size() / 3);
  const double c = leakage_prefactor(space.n_comp);

  std::vector<Step> steps(n);
  std::vector<Matrix> cols(n + 1);  // S_i restricted to comp columns
  cols[0] = Matrix::Identity(big_d, d);
  for (int i = 0; i < n; ++i) {
    steps[i] = step_propagator(trunc, params[3 * i], params[3 * i + 1],
                               params[3 * i + 2], dt);
    cols[i + 1] = steps[i].u * cols[i];
  }
  DnEvaluation ev;
  const Complex tr = (target.adjoint() * cols[n].topRows(d)).trace();
  ev.fidelity = std::norm(tr) / (double(d) * d);
  std::vector<Matrix> ms(n + 1);
  for (int i = 1; i <= n; ++i) {
    if (n_leak <= 0) break;
    const auto k = cols[i].bottomRows(n_leak);
    ms[i] = k.adjoint() * k;
    ev.leakage += c * (ms[i].squaredNorm() + std::norm(ms[i].trace()));
  }
  ev.cost = 1.0 - ev.fidelity + w * ev.leakage;
  if (!with_gradient) return ev;

  ev.gradient.assign(params.size(), 0.0);
  Matrix r = Matrix::Zero(d, big_d);
  r.leftCols(d) = target.adjoint();
  Matrix lam = Matrix::Zero(d, big_d);
  GeneralPulse unit_delta;
  unit_delta.delta = 1.0;
  const Matrix h_delta = hamiltonian(trunc, unit_delta);
  Matrix phi_mat(big_d, big_d);
  for (int i = n; i >= 1; --i) {
    const Step& s = steps[i - 1];
    if (n_leak > 0) {
      const Matrix& m = ms[i];
      const Matrix weight = 4.0 * c *
          (m + m.trace() * Matrix::Identity(d, d));
      lam.rightCols(n_leak) +=
          weight * cols[i].bottomRows(n_leak).adjoint();
    }
    const Matrix& nmat = cols[i - 1];
    const Matrix y = s.v.adjoint() * (nmat * r) * s.v;
    const Matrix z = s.v.adjoint() * (nmat * lam) * s.v;
    for (int a = 0; a < big_d; ++a) {
      for (int b = 0; b < big_d; ++b) {
        phi_mat(a, b) = divided_difference(s.lambda(a), s.lambda(b), dt);
      }
    }
    // Tr(Y dU) with dU = V (Phi o H'_p) V^dag
    const Matrix qy = y.transpose().cwiseProduct(phi_mat);
    const Matrix qz = z.transpose().cwiseProduct(phi_mat);
    const double chi = params[3 * (i - 1)];
    const double phi = params[3 * (i - 1) + 2];
    GeneralPulse dchi;
    dchi.chi = 1.0;
    dchi.phi = phi;
    GeneralPulse dphi;
    dphi.chi = chi;
    dphi.phi = phi + 0.5 * kPi;
    const Matrix* gens[3] = {nullptr, &h_delta, nullptr};
    const Matrix h_chi = hamiltonian(trunc, dchi);
    const Matrix h_phi = hamiltonian(trunc, dphi);
    gens[0] = &h_chi;
    gens[2] = &h_phi;
    for (int p = 0; p < 3; ++p) {
      const Matrix hp = s.v.adjoint() * (*gens[p]) * s.v;
      const Complex dtr = qy.cwiseProduct(hp).sum();
      const double dl = qz.cwiseProduct(hp).sum().real();
      const double df = 2.0 * (std::conj(tr) * dtr).real() / (double(d) * d);
      ev.gradient[3 * (i - 1) + p] = -df + w * dl;
    }
    r = r * s.u;
    lam = lam * s.u;
  }
  return ev;
}

namespace {

class DnCost : public ceres::FirstOrderFunction {
 public:
  DnCost(const ModeSpace& space, const Matrix& target, double dt, int n,
         double w)
      : space_(space), target_(target), dt_(dt), n_(n), w_(w) {}
  bool Evaluate(const double* x, double* cost, double* grad) const override {
    const std::vector<double> p(x, x + 3 * n_);
    const DnEvaluation ev = dn_evaluate(space_, target_, dt_, p, w_,
                                        grad != nullptr);
    *cost = ev.cost;
    if (grad != nullptr) {
      for (int i = 0; i < 3 * n_; ++i) grad[i] = ev.gradient[i];
    }
    return std::isfinite(ev.cost);
  }
  int NumParameters() const override { return 3 * n_; }

 private:
  const ModeSpace& space_;
  const Matrix& target_;
  double dt_;
  int n_;
  double w_;
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

}  // namespace

DnRun optimize_single(const ModeSpace& space, const Matrix& target, double dt,
                      int n_steps, std::uint64_t run_seed,
                      const DnConfig& config) {
  static std::once_flag quiet;
  std::call_once(quiet, [] { FLAGS_minloglevel = google::GLOG_ERROR; });
  if (n_steps < 1) throw DomainError("need at least one step");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  constexpr int kMaxReseeds = 5;
  for (int attempt = 0; attempt <= kMaxReseeds; ++attempt) {
    const std::uint64_t seed =
        attempt == 0 ? run_seed : derive_seed(run_seed, {std::uint64_t(attempt)});
    Rng rng(seed);
    std::uniform_real_distribution<double> amp(0.0, config.init_max * kGMax);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    std::bernoulli_distribution sign(0.5);
    std::vector<double> x(3 * n_steps);
    for (int i = 0; i < n_steps; ++i) {
      x[3 * i] = amp(rng);
      x[3 * i + 1] = sign(rng) ? amp(rng) : -amp(rng);
      x[3 * i + 2] = ang(rng);
    }
    DnRun run;
    run.run_seed = run_seed;
    run.reseeds = attempt;
    ceres::GradientProblem problem(
        new DnCost(space, target, dt, n_steps, config.w));
    ceres::GradientProblemSolver::Options opt;
    opt.line_search_direction_type = ceres::LBFGS;
    opt.max_num_iterations = config.max_iterations;
    opt.function_tolerance = 1e-14;
    opt.gradient_tolerance = 1e-12;
    opt.parameter_tolerance = 1e-14;
    opt.logging_type = ceres::SILENT;
    LogCallback cb(&run.iterate_log);
    opt.callbacks.push_back(&cb);
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opt, problem, x.data(), &summary);

    const DnEvaluation ev = dn_evaluate(space, target, dt, x, config.w, false);
    if (!std::isfinite(ev.cost)) continue;
    run.controls = PiecewiseControls::from_params(dt, x);
    run.fidelity = ev.fidelity;
    run.leakage = ev.leakage;
    run.cost = ev.cost;
    const double lim = config.excursion * kGMax;
    for (int i = 0; i < n_steps; ++i) {
      const double big = std::max(std::abs(x[3 * i]), std::abs(x[3 * i + 1]));
      run.max_control = std::max(run.max_control, big);
      if (big > lim) ++run.excursions;
    }
    if (run.excursions > 0) {
      LOG(WARNING) << run.excursions << " steps exceed " << config.excursion
                   << " g_max";
    }
    const CheckReport chk = verify_in_larger_space(space, run.controls, target);
    run.fidelity_check = chk.fidelity_check;
    run.verified = !chk.flagged;
    return run;
  }
  throw DomainError("cost stayed non-finite after reseeding");
}

DnResult optimize_piecewise(const ModeSpace& space, const Matrix& target,
                            double dt, double t_f, const DnConfig& config,
                            std::uint64_t seed) {
  validate_config(config);
  if (!(dt > 0.0)) throw ConfigError("must be positive", "dt");
  const double ratio = t_f / dt;
  const long steps = std::lround(ratio);
  if (steps < 1 || std::abs(ratio - steps) > 1e-9) {
    throw ConfigError("must be a positive multiple of dt", "t_f");
  }
  DnResult res;
  res.runs.resize(config.restarts);
  parallel_for(config.restarts, config.jobs, [&](int r) {
    const std::uint64_t rs = derive_seed(seed, {std::uint64_t(r)});
    res.runs[r] = optimize_single(space, target, dt, static_cast<int>(steps),
                                  rs, config);
    res.runs[r].restart = r;
    res.runs[r].seed = seed;
  });
  // Highest fidelity among runs that survive the larger-space check; if none
  // does, the highest fidelity overall, marked as not accepted.
  int best = -1;
  for (int r = 0; r < config.restarts; ++r) {
    if (!res.runs[r].verified) continue;
    if (best < 0 || res.runs[r].fidelity > res.runs[best].fidelity) best = r;
  }
  res.accepted = best >= 0;
  if (best < 0) {
    best = 0;
    for (int r = 1; r < config.restarts; ++r) {
      if (res.runs[r].fidelity > res.runs[best].fidelity) best = r;
    }
  }
  res.best = res.runs[best];
  return res;
}

CheckReport verify_in_larger_space(const ModeSpace& space,
                                   const PiecewiseControls& controls,
                                   const Matrix& target) {
  const int d = space.comp_dim();
  const PulseSequence seq = controls.sequence();
  CheckReport rep;
  const Matrix u_opt = sequence_unitary(space.n_opt, seq);
  const Matrix u_chk = sequence_unitary(space.n_check, seq);
  rep.fidelity_opt = gate_fidelity(target, u_opt.topLeftCorner(d, d), space.n_comp);
  rep.check = comp_error(target, u_chk.topLeftCorner(d, d), space.n_comp);
  rep.fidelity_check = rep.check.fidelity;
  rep.drop = rep.fidelity_opt - rep.fidelity_check;
  rep.flagged = std::abs(rep.drop) >= kCheckTolerance;
  return rep;
}

Json controls_to_json(const PiecewiseControls& c) {
  return {{"dt", c.dt / kTg}, {"chi", c.chi}, {"delta", c.delta}, {"phi", c.phi}};
}

PiecewiseControls controls_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected an object", path);
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    if (k != "dt" && k != "chi" && k != "delta" && k != "phi") {
      throw ConfigError("unknown field", path + "." + k);
    }
  }
  PiecewiseControls c;
  try {
    c.dt = j.at("dt").get<double>() * kTg;
    c.chi = j.at("chi").get<std::vector<double>>();
    c.delta = j.at("delta").get<std::vector<double>>();
    c.phi = j.at("phi").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what(), path);
  }
  if (!(c.dt > 0.0)) throw ConfigError("must be positive", path + ".dt");
  if (c.delta.size() != c.chi.size() || c.phi.size() != c.chi.size() ||
      c.chi.empty()) {
    throw ConfigError("chi, delta and phi need equal nonzero lengths", path);
  }
  return c;
}

Json dn_run_to_json(const DnRun& run) {
  return {{"restart", run.restart},
          {"seed", run.seed},
          {"run_seed", run.run_seed},
          {"reseeds", run.reseeds},
          {"controls", controls_to_json(run.controls)},
          {"t_f", run.controls.total_time() / kTg},
          {"F", run.fidelity},
          {"L", run.leakage},
          {"C_FN", run.cost},
          {"F_check", run.fidelity_check},
          {"verified", run.verified},
          {"excursions", run.excursions},
          {"max_control", run.max_control},
          {"iterations", run.iterate_log.size()}};
}

}  // namespace jcpulse
