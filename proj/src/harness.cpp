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

#include "jcpulse/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "jcpulse/direct_numeric.hpp"
#include "jcpulse/fourier_synth.hpp"
#include "jcpulse/law_eberly.hpp"
#include "jcpulse/metrics.hpp"
#include "jcpulse/random.hpp"
#include "jcpulse/semi_analytic.hpp"
#include "jcpulse/serialization.hpp"
#include "jcpulse/twomode.hpp"

namespace jcpulse {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

// Object reader that records which keys were consumed so leftovers can be
// rejected with their full path.
class Cfg {
 public:
  Cfg(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ConfigError("expected an object", path_.empty() ? "config" : path_);
    }
  }

  std::string field(const std::string& k) const {
    return path_.empty() ? k : path_ + "." + k;
  }
  bool has(const std::string& k) {
    used_.insert(k);
    return j_.contains(k);
  }
  const Json& raw(const std::string& k) {
    used_.insert(k);
    if (!j_.contains(k)) throw ConfigError("missing required field", field(k));
    return j_.at(k);
  }
  int integer(const std::string& k) {
    const Json& v = raw(k);
    if (!v.is_number_integer()) throw ConfigError("expected an integer", field(k));
    const auto x = v.get<long long>();
    if (x < -1000000000LL || x > 1000000000LL) {
      throw ConfigError("out of range", field(k));
    }
    return static_cast<int>(x);
  }
  int integer(const std::string& k, int def) { return has(k) ? integer(k) : def; }
  double number(const std::string& k) {
    const Json& v = raw(k);
    if (!v.is_number()) throw ConfigError("expected a number", field(k));
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("must be finite", field(k));
    return x;
  }
  double number(const std::string& k, double def) {
    return has(k) ? number(k) : def;
  }
  bool boolean(const std::string& k, bool def) {
    if (!has(k)) return def;
    const Json& v = j_.at(k);
    if (!v.is_boolean()) throw ConfigError("expected a boolean", field(k));
    return v.get<bool>();
  }
  std::string string(const std::string& k) {
    const Json& v = raw(k);
    if (!v.is_string()) throw ConfigError("expected a string", field(k));
    return v.get<std::string>();
  }
  std::uint64_t seed(const std::string& k, std::uint64_t def) {
    if (!has(k)) return def;
    const Json& v = j_.at(k);
    if (!v.is_number_unsigned() &&
        !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError("expected a non-negative integer", field(k));
    }
    return v.get<std::uint64_t>();
  }
  // A number or a non-empty array of numbers.
  std::vector<double> numbers(const std::string& k) {
    const Json& v = raw(k);
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(v.get<double>());
    } else if (v.is_array() && !v.empty()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
          throw ConfigError("expected a number",
                            field(k) + "[" + std::to_string(i) + "]");
        }
        out.push_back(v[i].get<double>());
      }
    } else {
      throw ConfigError("expected a number or a non-empty array", field(k));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!std::isfinite(out[i])) {
        throw ConfigError("must be finite",
                          field(k) + "[" + std::to_string(i) + "]");
      }
    }
    return out;
  }
  std::vector<double> numbers(const std::string& k, std::vector<double> def) {
    return has(k) ? numbers(k) : def;
  }
  Cfg object(const std::string& k) { return Cfg(raw(k), field(k)); }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError("unknown field", field(it.key()));
    }
  }
  const std::string& path() const { return path_; }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& what, const std::string& field) {
  if (!ok) throw ConfigError(what, field);
}

int positive_int(Cfg& c, const std::string& k, int def) {
  const int v = c.integer(k, def);
  require(v >= 1, "must be >= 1", c.field(k));
  return v;
}

double positive(Cfg& c, const std::string& k, double def) {
  const double v = c.number(k, def);
  require(v > 0.0, "must be positive", c.field(k));
  return v;
}

struct CsvRow {
  double x;
  double y;
  std::string series;
  std::uint64_t seed;
};

struct Context {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string cache_dir;
};

struct Outcome {
  Json result;
  std::map<std::string, std::vector<CsvRow>> csv;
  int exit_code = kExitOk;
  std::string message;
  Json manifest_extra = Json::object();
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json report_json(const ErrorReport& r) {
  return {{"raw_error", r.raw_error},
          {"eta", r.eta},
          {"fidelity", r.fidelity},
          {"optimal_phase", r.optimal_phase}};
}

int n_comp_field(Cfg& c) {
  const int n = c.integer("n_comp");
  require(n >= 1 && n <= 32, "must be in [1, 32]", c.field("n_comp"));
  return n;
}

// {"kind": "haar" | "identity" | "cinc_prime" | "matrix", ...}
Matrix parse_target(Cfg c, int n_comp, std::uint64_t seed, Json* desc) {
  const std::string kind = c.string("kind");
  const int d = 2 * (n_comp + 1);
  Matrix t;
  *desc = {{"kind", kind}};
  if (kind == "haar") {
    const std::uint64_t s = c.seed("seed", derive_seed(seed, {0x7467ULL}));
    Rng rng(s);
    t = haar_unitary(d, rng);
    (*desc)["seed"] = s;
  } else if (kind == "identity") {
    t = Matrix::Identity(d, d);
  } else if (kind == "cinc_prime") {
    t = cinc_prime_target(n_comp);
  } else if (kind == "matrix") {
    t = matrix_from_json(c.raw("matrix"), c.field("matrix"));
    require(t.rows() == d && t.cols() == d,
            "must be 2(n_comp+1) square", c.field("matrix"));
    require((t.adjoint() * t - Matrix::Identity(d, d)).norm() < 1e-9,
            "must be unitary", c.field("matrix"));
  } else {
    throw ConfigError("unknown kind '" + kind + "'", c.field("kind"));
  }
  c.finish();
  return t;
}

SaConfig parse_sa(Cfg& parent, const std::string& key, const Context& ctx,
                  SaConfig def = {}) {
  SaConfig s = def;
  s.jobs = ctx.jobs;
  if (!parent.has(key)) return s;
  Cfg c = parent.object(key);
  s.m_start = positive_int(c, "m_start", s.m_start);
  s.m_max = positive_int(c, "m_max", s.m_max);
  s.restarts = positive_int(c, "restarts", s.restarts);
  s.max_iterations = positive_int(c, "max_iterations", s.max_iterations);
  require(s.m_max >= s.m_start, "must be >= m_start", c.field("m_max"));
  c.finish();
  return s;
}

DnConfig parse_dn(Cfg& c, const Context& ctx) {
  DnConfig d;
  d.jobs = ctx.jobs;
  d.restarts = positive_int(c, "restarts", d.restarts);
  d.w = c.number("w", d.w);
  require(d.w >= 0.0, "must be >= 0", c.field("w"));
  d.max_iterations = positive_int(c, "max_iterations", d.max_iterations);
  d.init_max = positive(c, "init_max", d.init_max);
  d.excursion = positive(c, "excursion", d.excursion);
  return d;
}

ModeSpace parse_space(Cfg& c, int n_comp) {
  ModeSpace def = build_space(n_comp);
  if (!c.has("space")) return def;
  Cfg s = c.object("space");
  const int pad = s.integer("n_pad", def.n_pad);
  const int opt = s.integer("n_opt", def.n_opt);
  const int check = s.integer("n_check", def.n_check);
  s.finish();
  try {
    return build_space(n_comp, pad, opt, check);
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), c.field("space"));
  }
}

std::unique_ptr<VCache> open_cache(const Context& ctx) {
  if (ctx.cache_dir.empty()) return nullptr;
  fs::create_directories(ctx.cache_dir);
  return std::make_unique<VCache>((fs::path(ctx.cache_dir) / "vcache.json").string());
}

// -------------------------------------------------------------- simulate

Outcome cmd_simulate(Cfg& c, const Context& ctx) {
  const int n = n_comp_field(c);
  const bool two_mode = c.boolean("two_mode", false);
  const int trunc = c.integer("truncation", two_mode ? n + 5 : build_space(n).n_check);
  require(trunc > n, "must exceed n_comp", c.field("truncation"));
  require(!two_mode || trunc <= 12, "two-mode truncation is limited to 12",
          c.field("truncation"));
  const int control = c.integer("control_mode", 1);
  PulseSequence seq;
  const bool inline_seq = c.has("sequence");
  const bool file_seq = c.has("sequence_file");
  require(inline_seq != file_seq, "give exactly one of sequence, sequence_file",
          c.field("sequence"));
  if (inline_seq) {
    seq = sequence_from_json(c.raw("sequence"), c.field("sequence"));
  } else {
    const std::string path = c.string("sequence_file");
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot read '" + path + "'",
            c.field("sequence_file"));
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError(e.what(), c.field("sequence_file"));
    }
    if (j.is_object() && j.contains("sequence")) j = j.at("sequence");
    seq = sequence_from_json(j, c.field("sequence_file"));
  }
  Json tdesc;
  Matrix target;
  const bool have_target = c.has("target");
  if (have_target && !two_mode) {
    target = parse_target(c.object("target"), n, ctx.seed, &tdesc);
  } else if (have_target) {
    Cfg t = c.object("target");
    const std::string kind = t.string("kind");
    require(kind == "cinc", "two-mode targets: only 'cinc'", t.field("kind"));
    t.finish();
    tdesc = {{"kind", kind}};
  }
  c.finish();

  Outcome o;
  o.result = {{"command", "simulate"},
              {"n_comp", n},
              {"truncation", trunc},
              {"two_mode", two_mode},
              {"pulses", seq.size()},
              {"total_time", seq.total_duration() / kTg}};
  if (two_mode) {
    TwoModeSpace s;
    try {
      s = build_two_mode_space(n, trunc, control);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), c.field(e.field()));
    }
    const Matrix u = two_mode_unitary(s, seq);
    const auto idx = spin_down_qudit_indices(s);
    Matrix block(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < idx.size(); ++j) block(i, j) = u(idx[i], idx[j]);
    }
    o.result["unitarity_error"] =
        (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
    o.result["spin_down_block"] = matrix_to_json(block);
    if (have_target) {
      const TwoModeReport r = cinc_error(s, u);
      o.result["target"] = tdesc;
      o.result["report"] = {{"raw_error", r.raw_error},
                            {"eta", r.eta},
                            {"fidelity", r.fidelity},
                            {"cross_block", r.cross_block}};
    }
  } else {
    const Matrix u = sequence_unitary(trunc, seq);
    const int d = 2 * (n + 1);
    o.result["unitarity_error"] =
        (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
    o.result["comp_block"] = matrix_to_json(u.topLeftCorner(d, d));
    if (have_target) {
      o.result["target"] = tdesc;
      o.result["report"] =
          report_json(comp_error(embed_identity(target, trunc), u, n));
      o.result["leakage_norm"] =
          u.bottomRows(u.rows() - d).leftCols(d).norm();
    }
  }
  o.message = "simulated " + std::to_string(seq.size()) + " pulses";
  return o;
}

// ------------------------------------------------------ compile-analytic

// Largest P * Q accepted; beyond this the sequence no longer fits in memory.
constexpr double kDeskPlanLimit = 2e5;

double t_a_measured(int n_comp, double q, double phi) {
  const int trunc = n_comp + 1;
  const Matrix built =
      T_a_blocks(trunc, phi, static_cast<long long>(q)).to_matrix();
  return comp_error(ideal_T(trunc, phi), built, n_comp).raw_error;
}

// Generic T_a phase; multiples of pi are degenerate.
constexpr double kGenericPhi = 1.3;

Outcome cmd_compile_analytic(Cfg& c, const Context& ctx) {
  const int n = n_comp_field(c);
  Json tdesc;
  const Matrix target = parse_target(c.object("target"), n, ctx.seed, &tdesc);
  const long long p = c.integer("P", 4);
  const long long q = c.integer("Q", 100);
  require(p >= 1, "must be >= 1", c.field("P"));
  require(q >= 1, "must be >= 1", c.field("Q"));
  require(static_cast<double>(p) * static_cast<double>(q) <= kDeskPlanLimit,
          "P*Q above the desk-scale limit 2e5", c.field("Q"));
  const bool have_eta = c.has("eta");
  const double eta = have_eta ? positive(c, "eta", 1e-4) : 0.0;
  const std::vector<double> qs = c.numbers("q_scan", {1e2, 1e3, 1e4, 1e5});
  for (std::size_t i = 0; i < qs.size(); ++i) {
    require(qs[i] >= 1.0 && qs[i] <= 1e7, "must be in [1, 1e7]",
            c.field("q_scan") + "[" + std::to_string(i) + "]");
  }
  const bool emit = c.boolean("emit_sequence", false);
  c.finish();

  const AnalyticGateResult g = compile_gate_analytic(n, target, {p, q});
  Outcome o;
  o.result = {{"command", "compile-analytic"},
              {"n_comp", n},
              {"target", tdesc},
              {"plan", {{"P", p}, {"Q", q}}},
              {"program", program_to_json(g.program)},
              {"exact_report", report_json(g.exact_report)},
              {"measured_report", report_json(g.measured_report)},
              {"pulses", g.sequence.size()},
              {"total_time", g.total_time},
              {"bounds",
               {{"t_a", t_a_error_bound(n, static_cast<double>(q))},
                {"w_kl", w_kl_error_bound(n, static_cast<double>(p),
                                          static_cast<double>(q))},
                {"u2", u2_error_bound(n, static_cast<double>(p),
                                      static_cast<double>(q))},
                {"u2_time", u2_time_bound(n, static_cast<double>(p),
                                          static_cast<double>(q))}}}};
  if (emit) o.result["sequence"] = sequence_to_json(g.sequence);
  if (have_eta) {
    const PlanReport pr = plan_pq(n, eta);
    o.result["eta_plan"] = {{"eta", eta},
                            {"feasible", pr.feasible},
                            {"reason", pr.reason},
                            {"P", pr.P},
                            {"Q", pr.Q},
                            {"error_bound", pr.error_bound},
                            {"time_bound", pr.time_bound},
                            {"predicted_time", pr.predicted_time},
                            {"analytic_total_time", analytic_total_time(n, eta)}};
  }
  Json scan = Json::array();
  auto& rows = o.csv["t_a_scan.csv"];
  for (double qq : qs) {
    const double m = t_a_measured(n, qq, kGenericPhi);
    const double b = t_a_error_bound(n, qq);
    scan.push_back({{"Q", qq}, {"measured", m}, {"bound", b}});
    rows.push_back({qq, m, "t_a_measured", ctx.seed});
    rows.push_back({qq, b, "t_a_bound", ctx.seed});
  }
  o.result["t_a_scan"] = {{"phi", kGenericPhi}, {"points", scan}};
  o.csv["gate.csv"].push_back(
      {static_cast<double>(n), g.measured_report.eta, "measured_eta", ctx.seed});
  o.csv["gate.csv"].push_back(
      {static_cast<double>(n), g.total_time, "total_time", ctx.seed});
  if (have_eta && g.measured_report.eta > eta) {
    o.exit_code = kExitNotMet;
    o.message = "measured eta " + fmt(g.measured_report.eta) + " above " + fmt(eta);
  } else {
    o.message = "measured eta " + fmt(g.measured_report.eta);
  }
  return o;
}

// ----------------------------------------------------------------- bounds

Outcome cmd_bounds(Cfg& c, const Context& ctx) {
  std::vector<int> ns;
  for (double v : c.numbers("n_comp_values", {1, 2, 3})) {
    require(v >= 1 && v <= 32 && v == std::floor(v), "must be integers in [1, 32]",
            c.field("n_comp_values"));
    ns.push_back(static_cast<int>(v));
  }
  const std::vector<double> etas = c.numbers("eta_values", {1e-2, 1e-3, 1e-4});
  for (double e : etas) require(e > 0.0, "must be positive", c.field("eta_values"));
  const std::vector<double> qs = c.numbers("q_values", {1e2, 1e3, 1e4, 1e5});
  for (double q : qs) require(q >= 1.0, "must be >= 1", c.field("q_values"));
  const double p = positive(c, "P", 16.0);
  c.finish();

  Outcome o;
  Json per_n = Json::array();
  for (int n : ns) {
    const GateCounts gc = gate_counts(n);
    Json per_eta = Json::array();
    for (double e : etas) {
      const PlanReport pr = plan_pq(n, e);
      const double t = analytic_total_time(n, e);
      per_eta.push_back({{"eta", e},
                         {"epsilon_threshold", epsilon_threshold(e, n)},
                         {"analytic_total_time", t},
                         {"plan",
                          {{"feasible", pr.feasible},
                           {"P", pr.P},
                           {"Q", pr.Q},
                           {"error_bound", pr.error_bound},
                           {"time_bound", pr.time_bound},
                           {"predicted_time", pr.predicted_time}}}});
      o.csv["analytic_time.csv"].push_back(
          {e, t, "N=" + std::to_string(n), ctx.seed});
    }
    Json per_q = Json::array();
    for (double q : qs) {
      per_q.push_back({{"Q", q},
                       {"t_a", t_a_error_bound(n, q)},
                       {"w_kl", w_kl_error_bound(n, p, q)},
                       {"u2", u2_error_bound(n, p, q)}});
      o.csv["t_a_bound.csv"].push_back(
          {q, t_a_error_bound(n, q), "N=" + std::to_string(n), ctx.seed});
    }
    per_n.push_back({{"n_comp", n},
                     {"g_a", gc.g_a},
                     {"g_sa", gc.g_sa},
                     {"eta", per_eta},
                     {"q", per_q}});
  }
  o.result = {{"command", "bounds"},
              {"P", p},
              {"constants",
               {{"k", k_constant()}, {"k1", k1_constant()}, {"k2", k2_constant()}}},
              {"per_n", per_n}};
  o.message = "bounds for " + std::to_string(ns.size()) + " values of N";
  return o;
}

// ------------------------------------------------------------- optimize-v

std::string rel(int x, int big_n) {
  if (x == big_n) return "N";
  return x < big_n ? "N-" + std::to_string(big_n - x)
                   : "N+" + std::to_string(x - big_n);
}

std::string series_label(const VGateSpec& s) {
  return "V" + std::to_string(static_cast<int>(s.a)) + "_" + rel(s.n, s.n_comp) +
         ";" + rel(s.n_script, s.n_comp);
}

Outcome cmd_optimize_v(Cfg& c, const Context& ctx) {
  const double eta = positive(c, "eta", 1e-4);
  std::vector<VGateSpec> specs;
  if (c.has("cells")) {
    const Json& cells = c.raw("cells");
    require(cells.is_array() && !cells.empty(), "expected a non-empty array",
            c.field("cells"));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      Cfg cell(cells[i], c.field("cells") + "[" + std::to_string(i) + "]");
      VGateSpec s;
      const int a = cell.integer("family");
      require(a == 1 || a == 2, "must be 1 or 2", cell.field("family"));
      s.a = static_cast<Family>(a);
      s.n = cell.integer("n");
      s.n_script = cell.integer("n_script");
      s.n_comp = n_comp_field(cell);
      cell.finish();
      try {
        validate_spec(s);
      } catch (const DomainError& e) {
        throw ConfigError(e.what(), cell.path());
      }
      specs.push_back(s);
    }
  }
  if (c.has("figure")) {
    Cfg f = c.object("figure");
    const int lo = f.integer("n_min", 3);
    const int hi = f.integer("n_max", 8);
    require(lo >= 2, "must be >= 2", f.field("n_min"));
    require(hi >= lo && hi <= 32, "must be in [n_min, 32]", f.field("n_max"));
    f.finish();
    for (int big_n = lo; big_n <= hi; ++big_n) {
      specs.push_back({Family::kCarrier, big_n, big_n - 1, big_n});
      specs.push_back({Family::kCarrier, big_n, big_n - 2, big_n});
    }
  }
  require(!specs.empty(), "give cells or figure", c.field("cells"));
  const SaConfig sa = parse_sa(c, "sa", ctx);
  c.finish();

  auto cache = open_cache(ctx);
  std::map<int, std::vector<VGateSpec>> by_n;
  for (const VGateSpec& s : specs) by_n[s.n_comp].push_back(s);
  Outcome o;
  Json runs = Json::array();
  int ok = 0;
  for (const auto& [big_n, group] : by_n) {
    const double thr = epsilon_threshold(eta, big_n);
    const std::vector<OptimizationRun> rs =
        optimize_specs(group, thr, sa, ctx.seed, cache.get());
    for (const OptimizationRun& r : rs) {
      runs.push_back(run_to_json(r));
      if (r.success) ++ok;
      o.csv["v_durations.csv"].push_back(
          {static_cast<double>(big_n), r.duration(), series_label(r.spec), ctx.seed});
      o.csv["v_errors.csv"].push_back({static_cast<double>(big_n),
                                       r.achieved_error, series_label(r.spec),
                                       ctx.seed});
    }
  }
  const int total = static_cast<int>(specs.size());
  o.result = {{"command", "optimize-v"},
              {"eta", eta},
              {"sa",
               {{"m_start", sa.m_start},
                {"m_max", sa.m_max},
                {"restarts", sa.restarts},
                {"max_iterations", sa.max_iterations}}},
              {"runs", runs},
              {"succeeded", ok},
              {"cells", total}};
  o.message = std::to_string(ok) + "/" + std::to_string(total) + " V gates reached threshold";
  if (ok < total) o.exit_code = kExitNotMet;
  return o;
}

// ------------------------------------------------------------- compile-sa

Outcome cmd_compile_sa(Cfg& c, const Context& ctx) {
  const int n = n_comp_field(c);
  Json tdesc;
  const Matrix target = parse_target(c.object("target"), n, ctx.seed, &tdesc);
  const double eta = positive(c, "eta", 1e-4);
  const SaConfig sa = parse_sa(c, "sa", ctx);
  const ModeSpace space = parse_space(c, n);
  const bool emit = c.boolean("emit_sequence", true);
  c.finish();

  auto cache = open_cache(ctx);
  const SaGateResult g = compile_gate_sa(space, target, eta, sa, ctx.seed, cache.get());
  Outcome o;
  Json vruns = Json::array();
  Json ids = Json::array();
  for (const OptimizationRun& r : g.v_runs) {
    vruns.push_back(run_to_json(r));
    ids.push_back({{"key", r.spec.key()}, {"restart", r.restart}, {"run_seed", r.run_seed}});
  }
  o.result = {{"command", "compile-sa"},
              {"n_comp", n},
              {"target", tdesc},
              {"eta_requested", eta},
              {"threshold", g.threshold},
              {"success", g.success},
              {"failure", g.failure},
              {"program", program_to_json(g.program)},
              {"report", report_json(g.report)},
              {"total_time", g.total_time},
              {"pulses", g.sequence.size()},
              {"v_applications", g.v_applications},
              {"v_runs", vruns}};
  if (emit) o.result["sequence"] = sequence_to_json(g.sequence);
  o.manifest_extra["components"] = ids;
  o.csv["sa_gate.csv"].push_back({static_cast<double>(n), g.total_time, "total_time", ctx.seed});
  o.csv["sa_gate.csv"].push_back({static_cast<double>(n), g.report.eta, "measured_eta", ctx.seed});
  if (!g.success || g.report.eta > eta) {
    o.exit_code = kExitNotMet;
    o.message = g.success ? "measured eta " + fmt(g.report.eta) + " above " + fmt(eta)
                          : "compile failed: " + g.failure;
  } else {
    o.message = "measured eta " + fmt(g.report.eta) + ", " + fmt(g.total_time) + " T_g";
  }
  return o;
}

// ---------------------------------------------------------- optimize-cinc

struct CincPrimeJob {
  double dt = 0.5 * kTg;
  std::vector<double> t_f;  // internal units
  DnConfig dn;
};

CincPrimeJob parse_cinc_prime(Cfg& c, const Context& ctx) {
  CincPrimeJob j;
  j.dt = positive(c, "dt", 0.5) * kTg;
  const std::vector<double> tf = c.numbers("t_f");
  for (std::size_t i = 0; i < tf.size(); ++i) {
    const std::string f = c.field("t_f") + "[" + std::to_string(i) + "]";
    require(tf[i] > 0.0, "must be positive", f);
    const double steps = tf[i] * kTg / j.dt;
    require(std::abs(steps - std::round(steps)) < 1e-9 && steps >= 1.0 &&
                steps <= 4096.0,
            "must be a positive multiple of dt (at most 4096 steps)", f);
    j.t_f.push_back(tf[i] * kTg);
  }
  j.dn = parse_dn(c, ctx);
  return j;
}

struct CincPrimePoint {
  double t_f;
  DnResult result;
  CheckReport check;
};

std::vector<CincPrimePoint> run_cinc_prime(const ModeSpace& space,
                                           const CincPrimeJob& job,
                                           std::uint64_t seed) {
  const Matrix target = cinc_prime_target(space.n_comp);
  std::vector<CincPrimePoint> out;
  for (std::size_t i = 0; i < job.t_f.size(); ++i) {
    CincPrimePoint p;
    p.t_f = job.t_f[i];
    p.result = optimize_piecewise(space, target, job.dt, job.t_f[i], job.dn,
                                  derive_seed(seed, {0x6369ULL, i}));
    p.check = verify_in_larger_space(space, p.result.best.controls, target);
    out.push_back(std::move(p));
  }
  return out;
}

Json point_json(const CincPrimePoint& p) {
  Json runs = Json::array();
  for (const DnRun& r : p.result.runs) {
    runs.push_back({{"restart", r.restart},
                    {"run_seed", r.run_seed},
                    {"F", r.fidelity},
                    {"L", r.leakage},
                    {"F_check", r.fidelity_check},
                    {"verified", r.verified}});
  }
  return {{"t_f", p.t_f / kTg},
          {"accepted", p.result.accepted},
          {"best", dn_run_to_json(p.result.best)},
          {"check",
           {{"fidelity_opt", p.check.fidelity_opt},
            {"fidelity_check", p.check.fidelity_check},
            {"drop", p.check.drop},
            {"flagged", p.check.flagged},
            {"report", report_json(p.check.check)}}},
          {"runs", runs}};
}

std::string dt_label(int n, double dt) {
  return "N=" + std::to_string(n) + " dt=" + fmt(dt / kTg);
}

Outcome cmd_optimize_cinc(Cfg& c, const Context& ctx) {
  const int n = n_comp_field(c);
  const ModeSpace space = parse_space(c, n);
  const CincPrimeJob job = parse_cinc_prime(c, ctx);
  const bool have_max = c.has("max_infidelity");
  const double max_inf = have_max ? positive(c, "max_infidelity", 1.0) : 1.0;
  c.finish();

  const std::vector<CincPrimePoint> pts = run_cinc_prime(space, job, ctx.seed);
  Outcome o;
  Json points = Json::array();
  Json ids = Json::array();
  bool met = false;
  double best_inf = 1.0;
  for (const CincPrimePoint& p : pts) {
    points.push_back(point_json(p));
    ids.push_back({{"t_f", p.t_f / kTg},
                   {"restart", p.result.best.restart},
                   {"run_seed", p.result.best.run_seed}});
    o.csv["cinc_prime.csv"].push_back(
        {p.t_f / kTg, p.result.best.fidelity, dt_label(n, job.dt), ctx.seed});
    const double inf = 1.0 - p.result.best.fidelity;
    if (p.result.accepted) {
      best_inf = std::min(best_inf, inf);
      if (inf <= max_inf) met = true;
    }
  }
  o.result = {{"command", "optimize-cinc"},
              {"n_comp", n},
              {"space",
               {{"n_pad", space.n_pad}, {"n_opt", space.n_opt}, {"n_check", space.n_check}}},
              {"dt", job.dt / kTg},
              {"w", job.dn.w},
              {"restarts", job.dn.restarts},
              {"points", points}};
  o.manifest_extra["components"] = ids;
  o.message = "best accepted 1-F " + fmt(best_inf);
  if (!met) o.exit_code = kExitNotMet;
  return o;
}

// ----------------------------------------------------------- compose-cinc

Outcome cmd_compose_cinc(Cfg& c, const Context& ctx) {
  const int n = n_comp_field(c);
  const int control = c.integer("control_mode", 1);
  require(control == 1 || control == 2, "must be 1 or 2", c.field("control_mode"));
  const ModeSpace space = parse_space(c, n);
  const int trunc = c.integer("truncation", space.n_opt);
  require(trunc > n && trunc <= 12, "must be in (n_comp, 12]", c.field("truncation"));
  Cfg b = c.object("bus");
  const double bus_dt = positive(b, "dt", 0.5) * kTg;
  const double bus_thr = positive(b, "threshold", kBusThreshold);
  SaConfig bus_def;
  bus_def.m_start = 1;
  bus_def.jobs = ctx.jobs;
  bus_def.m_start = positive_int(b, "m_start", bus_def.m_start);
  bus_def.m_max = positive_int(b, "m_max", bus_def.m_max);
  bus_def.restarts = positive_int(b, "restarts", bus_def.restarts);
  bus_def.max_iterations = positive_int(b, "max_iterations", bus_def.max_iterations);
  require(bus_def.m_max >= bus_def.m_start, "must be >= m_start", b.field("m_max"));
  b.finish();
  Cfg cp = c.object("cinc_prime");
  const CincPrimeJob job = parse_cinc_prime(cp, ctx);
  cp.finish();
  const bool have_max = c.has("max_error");
  const double max_err = have_max ? positive(c, "max_error", 1.0) : 1.0;
  const bool emit = c.boolean("emit_sequence", false);
  c.finish();

  const TwoModeSpace tm = build_two_mode_space(n, trunc, control);
  const BusRun bus = optimize_bus(n, bus_dt, bus_thr, bus_def, derive_seed(ctx.seed, {0x627573ULL}));
  const std::vector<CincPrimePoint> pts = run_cinc_prime(space, job, ctx.seed);

  Outcome o;
  Json comps = Json::array();
  Json ids = {{"bus", {{"M", bus.M}, {"restart", bus.restart}, {"run_seed", bus.run_seed}}},
              {"cinc_prime", Json::array()}};
  bool met = bus.success;
  double best = 1.0;
  bool any = false;
  for (const CincPrimePoint& p : pts) {
    const CincComposition comp = compose_cinc(tm, bus, p.result.best.controls);
    const double inf = 1.0 - comp.report.fidelity;
    Json cj = {{"t_f_cinc_prime", p.t_f / kTg},
               {"cinc_prime", point_json(p)},
               {"report",
                {{"raw_error", comp.report.raw_error},
                 {"eta", comp.report.eta},
                 {"fidelity", comp.report.fidelity},
                 {"infidelity", inf},
                 {"cross_block", comp.report.cross_block}}},
               {"total_time", comp.total_time},
               {"bus_time", comp.bus_time},
               {"cinc_prime_time", comp.cinc_prime_time},
               {"bus_raw_error", comp.bus_raw_error},
               {"bus_dagger_raw_error", comp.bus_dagger_raw_error},
               {"cinc_prime_raw_error", comp.cinc_prime_raw_error},
               {"roundtrip_error", comp.roundtrip_error}};
    if (emit) cj["sequence"] = sequence_to_json(comp.sequence);
    comps.push_back(cj);
    ids["cinc_prime"].push_back({{"t_f", p.t_f / kTg},
                                 {"restart", p.result.best.restart},
                                 {"run_seed", p.result.best.run_seed}});
    o.csv["cinc.csv"].push_back({comp.total_time, comp.report.fidelity,
                                 "CINC N=" + std::to_string(n), ctx.seed});
    o.csv["cinc.csv"].push_back({p.t_f / kTg, p.result.best.fidelity,
                                 "CINC' N=" + std::to_string(n), ctx.seed});
    if (p.result.accepted) {
      any = true;
      best = std::min(best, inf);
    }
  }
  if (!any || best > max_err) met = false;
  o.result = {{"command", "compose-cinc"},
              {"n_comp", n},
              {"control_mode", control},
              {"truncation", trunc},
              {"bus", bus_run_to_json(bus)},
              {"compositions", comps}};
  o.manifest_extra["components"] = ids;
  o.message = "BUS error " + fmt(bus.achieved_error) + " (M=" + std::to_string(bus.M) +
              "), best composed 1-F " + fmt(best);
  if (!met) o.exit_code = kExitNotMet;
  return o;
}

using CommandFn = std::function<Outcome(Cfg&, const Context&)>;

const std::map<std::string, CommandFn>& commands() {
  static const std::map<std::string, CommandFn> m = {
      {"simulate", cmd_simulate},
      {"compile-analytic", cmd_compile_analytic},
      {"optimize-v", cmd_optimize_v},
      {"compile-sa", cmd_compile_sa},
      {"optimize-cinc", cmd_optimize_cinc},
      {"compose-cinc", cmd_compose_cinc},
      {"bounds", cmd_bounds}};
  return m;
}

void write_text(const fs::path& p, const std::string& text) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, p);
}

std::string csv_text(const std::vector<CsvRow>& rows) {
  std::string s = "x,y,series,seed\n";
  for (const CsvRow& r : rows) {
    s += fmt(r.x) + "," + fmt(r.y) + "," + r.series + "," + std::to_string(r.seed) + "\n";
  }
  return s;
}

}  // namespace

const char* version_string() { return JCPULSE_VERSION_STRING; }

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, fn] : commands()) v.push_back(k);
    return v;
  }();
  return names;
}

CommandResult run_command(const std::string& command,
                          const std::string& config_text,
                          const std::string& out_dir,
                          const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  CommandResult res;
  try {
    auto it = commands().find(command);
    if (it == commands().end()) {
      throw ConfigError("unknown command '" + command + "'", "command");
    }
    if (options.jobs < 1) throw ConfigError("must be >= 1", "jobs");
    Json config;
    try {
      config = Json::parse(config_text);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what(), "config");
    }
    Cfg root(config, "");
    const int version = root.integer("version");
    require(version == 1, "unsupported version (expected 1)", "version");
    Context ctx;
    ctx.seed = root.seed("seed", 0);
    if (options.seed) ctx.seed = *options.seed;
    ctx.jobs = options.jobs;
    ctx.cache_dir = options.cache_dir;
    if (out_dir.empty()) throw ConfigError("output directory is empty", "out");

    Outcome o = it->second(root, ctx);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    std::vector<std::string> files = {"result.json", "config.json"};
    write_text(dir / "result.json", o.result.dump(2) + "\n");
    Json resolved = config;
    resolved["seed"] = ctx.seed;
    write_text(dir / "config.json", resolved.dump(2) + "\n");
    for (const auto& [name, rows] : o.csv) {
      write_text(dir / name, csv_text(rows));
      files.push_back(name);
    }
    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    char hash[32];
    std::snprintf(hash, sizeof hash, "fnv1a64:%016" PRIx64,
                  fnv1a64(config.dump()));
    Json manifest = {{"tool", "jcpulse"},
                     {"version", version_string()},
                     {"command", command},
                     {"config_hash", hash},
                     {"seed", ctx.seed},
                     {"jobs", ctx.jobs},
                     {"cache", ctx.cache_dir.empty() ? Json(nullptr) : Json(ctx.cache_dir)},
                     {"files", files},
                     {"exit_code", o.exit_code},
                     {"message", o.message},
                     {"wall_time_s", wall}};
    for (auto e = o.manifest_extra.begin(); e != o.manifest_extra.end(); ++e) {
      manifest[e.key()] = e.value();
    }
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    res.exit_code = o.exit_code;
    res.message = o.message;
  } catch (const ConfigError& e) {
    res.exit_code = kExitConfig;
    res.message = e.what();
    res.error_field = e.field();
  } catch (const std::exception& e) {
    res.exit_code = kExitRuntime;
    res.message = e.what();
  }
  return res;
}

}  // namespace jcpulse
