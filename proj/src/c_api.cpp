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

#include "jcpulse/jcpulse.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "jcpulse/direct_numeric.hpp"
#include "jcpulse/harness.hpp"
#include "jcpulse/hilbert.hpp"
#include "jcpulse/metrics.hpp"
#include "jcpulse/pulses.hpp"
#include "jcpulse/serialization.hpp"

struct jcp_space {
  jcpulse::ModeSpace space;
};
struct jcp_sequence {
  jcpulse::PulseSequence seq;
};
struct jcp_matrix {
  jcpulse::Matrix m;
};

namespace {

thread_local std::string t_error;
thread_local std::string t_field;
thread_local std::string t_message;

jcp_status fail(jcp_status s, std::string what, std::string field = {}) {
  t_error = std::move(what);
  t_field = std::move(field);
  return s;
}

// Clears the thread's error state, runs fn and maps exceptions to codes.
template <class F>
jcp_status guarded(F&& fn) {
  t_error.clear();
  t_field.clear();
  try {
    return fn();
  } catch (const jcpulse::ConfigError& e) {
    return fail(JCP_ERR_CONFIG, e.what(), e.field());
  } catch (const jcpulse::DomainError& e) {
    return fail(JCP_ERR_DOMAIN, e.what());
  } catch (const std::bad_alloc&) {
    return fail(JCP_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(JCP_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(JCP_ERR_RUNTIME, "unknown exception");
  }
}

#define JCP_REQUIRE(cond, what) \
  if (!(cond)) return fail(JCP_ERR_INVALID_ARGUMENT, what)

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* jcp_version(void) { return jcpulse::version_string(); }
const char* jcp_last_error(void) { return t_error.c_str(); }
const char* jcp_last_error_field(void) { return t_field.c_str(); }
const char* jcp_last_message(void) { return t_message.c_str(); }
void jcp_string_free(char* s) { std::free(s); }

jcp_status jcp_space_create(int n_comp, jcp_space** out) {
  return guarded([&] {
    JCP_REQUIRE(out != nullptr, "out is null");
    *out = new jcp_space{jcpulse::build_space(n_comp)};
    return JCP_OK;
  });
}

jcp_status jcp_space_create_custom(int n_comp, int n_pad, int n_opt,
                                   int n_check, jcp_space** out) {
  return guarded([&] {
    JCP_REQUIRE(out != nullptr, "out is null");
    *out = new jcp_space{jcpulse::build_space(n_comp, n_pad, n_opt, n_check)};
    return JCP_OK;
  });
}

jcp_status jcp_space_get(const jcp_space* space, int* n_comp, int* n_pad,
                         int* n_opt, int* n_check) {
  return guarded([&] {
    JCP_REQUIRE(space != nullptr, "space is null");
    if (n_comp) *n_comp = space->space.n_comp;
    if (n_pad) *n_pad = space->space.n_pad;
    if (n_opt) *n_opt = space->space.n_opt;
    if (n_check) *n_check = space->space.n_check;
    return JCP_OK;
  });
}

void jcp_space_destroy(jcp_space* space) { delete space; }

jcp_status jcp_sequence_from_json(const char* json, jcp_sequence** out) {
  return guarded([&] {
    JCP_REQUIRE(json != nullptr && out != nullptr, "null argument");
    jcpulse::Json j;
    try {
      j = jcpulse::Json::parse(json);
    } catch (const jcpulse::Json::parse_error& e) {
      return fail(JCP_ERR_CONFIG, e.what(), "pulses");
    }
    *out = new jcp_sequence{jcpulse::sequence_from_json(j)};
    return JCP_OK;
  });
}

jcp_status jcp_sequence_to_json(const jcp_sequence* seq, char** out) {
  return guarded([&] {
    JCP_REQUIRE(seq != nullptr && out != nullptr, "null argument");
    *out = dup_string(jcpulse::sequence_to_json(seq->seq).dump());
    return JCP_OK;
  });
}

jcp_status jcp_sequence_length(const jcp_sequence* seq, size_t* out) {
  return guarded([&] {
    JCP_REQUIRE(seq != nullptr && out != nullptr, "null argument");
    *out = seq->seq.size();
    return JCP_OK;
  });
}

jcp_status jcp_sequence_duration(const jcp_sequence* seq, double* out) {
  return guarded([&] {
    JCP_REQUIRE(seq != nullptr && out != nullptr, "null argument");
    *out = seq->seq.total_duration() / jcpulse::kTg;
    return JCP_OK;
  });
}

jcp_status jcp_sequence_unitary(const jcp_sequence* seq, int truncation,
                                jcp_matrix** out) {
  return guarded([&] {
    JCP_REQUIRE(seq != nullptr && out != nullptr, "null argument");
    JCP_REQUIRE(truncation >= 0 && truncation <= 512, "truncation out of range");
    *out = new jcp_matrix{jcpulse::sequence_unitary(truncation, seq->seq)};
    return JCP_OK;
  });
}

void jcp_sequence_destroy(jcp_sequence* seq) { delete seq; }

jcp_status jcp_matrix_create(int rows, int cols, const double* data,
                             jcp_matrix** out) {
  return guarded([&] {
    JCP_REQUIRE(out != nullptr && data != nullptr, "null argument");
    JCP_REQUIRE(rows > 0 && cols > 0, "shape must be positive");
    auto* m = new jcp_matrix{jcpulse::Matrix(rows, cols)};
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double* p = data + 2 * (static_cast<size_t>(r) * cols + c);
        m->m(r, c) = jcpulse::Complex(p[0], p[1]);
      }
    }
    *out = m;
    return JCP_OK;
  });
}

jcp_status jcp_matrix_shape(const jcp_matrix* m, int* rows, int* cols) {
  return guarded([&] {
    JCP_REQUIRE(m != nullptr, "matrix is null");
    if (rows) *rows = static_cast<int>(m->m.rows());
    if (cols) *cols = static_cast<int>(m->m.cols());
    return JCP_OK;
  });
}

jcp_status jcp_matrix_get(const jcp_matrix* m, int row, int col, double* re,
                          double* im) {
  return guarded([&] {
    JCP_REQUIRE(m != nullptr, "matrix is null");
    JCP_REQUIRE(row >= 0 && row < m->m.rows() && col >= 0 && col < m->m.cols(),
                "index out of range");
    if (re) *re = m->m(row, col).real();
    if (im) *im = m->m(row, col).imag();
    return JCP_OK;
  });
}

jcp_status jcp_matrix_copy(const jcp_matrix* m, double* data, size_t count) {
  return guarded([&] {
    JCP_REQUIRE(m != nullptr && data != nullptr, "null argument");
    const size_t need = 2 * static_cast<size_t>(m->m.rows() * m->m.cols());
    JCP_REQUIRE(count >= need, "buffer too small");
    size_t k = 0;
    for (Eigen::Index r = 0; r < m->m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m->m.cols(); ++c) {
        data[k++] = m->m(r, c).real();
        data[k++] = m->m(r, c).imag();
      }
    }
    return JCP_OK;
  });
}

void jcp_matrix_destroy(jcp_matrix* m) { delete m; }

jcp_status jcp_cinc_prime_target(const jcp_space* space, jcp_matrix** out) {
  return guarded([&] {
    JCP_REQUIRE(space != nullptr && out != nullptr, "null argument");
    *out = new jcp_matrix{jcpulse::cinc_prime_target(space->space.n_comp)};
    return JCP_OK;
  });
}

jcp_status jcp_comp_error(const jcp_space* space, const jcp_matrix* target,
                          const jcp_matrix* candidate, jcp_error_report* out) {
  return guarded([&] {
    JCP_REQUIRE(space && target && candidate && out, "null argument");
    const jcpulse::ErrorReport r =
        jcpulse::comp_error(target->m, candidate->m, space->space.n_comp);
    *out = {r.raw_error, r.eta, r.fidelity, r.optimal_phase};
    return JCP_OK;
  });
}

void jcp_run_options_init(jcp_run_options* options) {
  if (options == nullptr) return;
  options->seed = 0;
  options->has_seed = 0;
  options->jobs = 1;
  options->cache_dir = nullptr;
}

size_t jcp_command_count(void) { return jcpulse::command_names().size(); }

const char* jcp_command_name(size_t index) {
  const auto& names = jcpulse::command_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

jcp_status jcp_run_command(const char* command, const char* config_json,
                           const char* out_dir, const jcp_run_options* options,
                           int* exit_code) {
  return guarded([&] {
    JCP_REQUIRE(command && config_json && out_dir && exit_code, "null argument");
    jcpulse::RunOptions opt;
    if (options != nullptr) {
      if (options->has_seed) opt.seed = options->seed;
      opt.jobs = options->jobs;
      if (options->cache_dir != nullptr) opt.cache_dir = options->cache_dir;
    }
    const jcpulse::CommandResult r =
        jcpulse::run_command(command, config_json, out_dir, opt);
    *exit_code = r.exit_code;
    t_message = r.message;
    switch (r.exit_code) {
      case jcpulse::kExitOk:
      case jcpulse::kExitNotMet:
        return JCP_OK;
      case jcpulse::kExitConfig:
        return fail(JCP_ERR_CONFIG, r.message, r.error_field);
      default:
        return fail(JCP_ERR_RUNTIME, r.message);
    }
  });
}

}  // extern "C"
