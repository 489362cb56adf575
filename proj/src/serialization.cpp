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

#include "jcpulse/serialization.hpp"

#include <cmath>
#include <variant>

namespace jcpulse {

namespace {

double number_field(const Json& j, const char* key, const std::string& path,
                    double fallback = 0.0) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) {
    throw ConfigError("expected a number", path + "." + key);
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("must be finite", path + "." + key);
  return x;
}

int int_field(const Json& j, const char* key, const std::string& path,
              int fallback = 0) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError("expected an integer", path + "." + key);
  }
  return v.get<int>();
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known,
                    const std::string& path) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError("unknown field", path + "." + item.key());
  }
}

}  // namespace

Json pulse_to_json(const Pulse& p) {
  Json j;
  if (const auto* c = std::get_if<CarrierPulse>(&p)) {
    j = {{"kind", "carrier"}, {"mode", 0},        {"delta", c->delta},
         {"chi", c->chi},     {"phi", c->phi},    {"g", 0.0},
         {"beta", 0.0},       {"duration", c->duration / kTg}};
  } else if (const auto* s = std::get_if<SidebandPulse>(&p)) {
    j = {{"kind", "sideband"}, {"mode", s->mode}, {"delta", s->delta},
         {"chi", 0.0},         {"phi", 0.0},      {"g", s->g},
         {"beta", s->beta},    {"duration", s->duration / kTg}};
  } else {
    const auto& g = std::get<GeneralPulse>(p);
    j = {{"kind", "general"}, {"mode", g.mode}, {"delta", g.delta},
         {"chi", g.chi},      {"phi", g.phi},   {"g", g.g},
         {"beta", g.beta},    {"duration", g.duration / kTg}};
  }
  return j;
}

Pulse pulse_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected an object", path);
  reject_unknown(j, {"kind", "mode", "delta", "chi", "phi", "g", "beta",
                     "duration"},
                 path);
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("missing or non-string kind", path + ".kind");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const int mode = int_field(j, "mode", path);
  const double delta = number_field(j, "delta", path);
  const double chi = number_field(j, "chi", path);
  const double phi = number_field(j, "phi", path);
  const double g = number_field(j, "g", path);
  const double beta = number_field(j, "beta", path);
  const double duration = number_field(j, "duration", path) * kTg;
  Pulse p;
  if (kind == "carrier") {
    p = CarrierPulse{delta, chi, phi, duration};
  } else if (kind == "sideband") {
    p = SidebandPulse{mode, g, delta, beta, duration};
  } else if (kind == "general") {
    p = GeneralPulse{mode, delta, chi, phi, g, beta, duration};
  } else {
    throw ConfigError("kind must be carrier, sideband or general",
                      path + ".kind");
  }
  try {
    validate_pulse(p);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), path);
  }
  return p;
}

Json sequence_to_json(const PulseSequence& seq) {
  Json arr = Json::array();
  for (const Pulse& p : seq.pulses) arr.push_back(pulse_to_json(p));
  return arr;
}

PulseSequence sequence_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError("expected an array", path);
  PulseSequence seq;
  seq.pulses.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    seq.append(pulse_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return seq;
}

Json program_to_json(const BlockRotationProgram& program) {
  Json layers = Json::array();
  for (const RotationLayer& layer : program.layers) {
    Json rots = Json::array();
    for (const BlockRotation& r : layer.rotations) {
      rots.push_back({{"family", static_cast<int>(r.family)},
                      {"block", r.block},
                      {"angle", r.angle},
                      {"axis", {r.axis.x(), r.axis.y(), r.axis.z()}},
                      {"n_script", layer.n_script}});
    }
    layers.push_back(std::move(rots));
  }
  return layers;
}

BlockRotationProgram program_from_json(const Json& j, int n_comp,
                                       const std::string& path) {
  if (!j.is_array()) throw ConfigError("expected an array of layers", path);
  BlockRotationProgram prog;
  prog.n_comp = n_comp;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string lp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) throw ConfigError("expected an array", lp);
    RotationLayer layer;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      const std::string rp = lp + "[" + std::to_string(k) + "]";
      const Json& r = j[i][k];
      if (!r.is_object()) throw ConfigError("expected an object", rp);
      reject_unknown(r, {"family", "block", "angle", "axis", "n_script"}, rp);
      const int fam = int_field(r, "family", rp, 1);
      if (fam != 1 && fam != 2) throw ConfigError("must be 1 or 2", rp + ".family");
      BlockRotation rot;
      rot.family = static_cast<Family>(fam);
      rot.block = int_field(r, "block", rp);
      rot.angle = number_field(r, "angle", rp);
      const int max_block = n_comp;
      if (rot.block < 0 || rot.block > max_block) {
        throw ConfigError("outside the computational space", rp + ".block");
      }
      if (!r.contains("axis") || !r.at("axis").is_array() ||
          r.at("axis").size() != 3) {
        throw ConfigError("expected [x, y, z]", rp + ".axis");
      }
      for (int c = 0; c < 3; ++c) {
        if (!r.at("axis")[c].is_number()) {
          throw ConfigError("expected a number", rp + ".axis");
        }
        rot.axis(c) = r.at("axis")[c].get<double>();
      }
      if (std::abs(rot.axis.norm() - 1.0) > 1e-9) {
        throw ConfigError("axis must be a unit vector", rp + ".axis");
      }
      if (k == 0) {
        layer.family = rot.family;
        layer.n_script = int_field(r, "n_script", rp, -1);
      } else if (rot.family != layer.family) {
        throw ConfigError("layer mixes families", rp + ".family");
      }
      for (const BlockRotation& other : layer.rotations) {
        if (other.block == rot.block) {
          throw ConfigError("block repeated within a layer", rp + ".block");
        }
      }
      layer.rotations.push_back(rot);
    }
    prog.layers.push_back(std::move(layer));
  }
  return prog;
}

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected an object", path);
  const int rows = int_field(j, "rows", path, -1);
  const int cols = int_field(j, "cols", path, -1);
  if (rows <= 0 || cols <= 0) throw ConfigError("rows/cols must be positive", path);
  Matrix m = Matrix::Zero(rows, cols);
  for (const char* part : {"re", "im"}) {
    const std::string pp = path + "." + part;
    if (!j.contains(part)) {
      if (std::string(part) == "im") continue;
      throw ConfigError("missing", pp);
    }
    const Json& a = j.at(part);
    if (!a.is_array() || static_cast<int>(a.size()) != rows) {
      throw ConfigError("expected " + std::to_string(rows) + " rows", pp);
    }
    for (int r = 0; r < rows; ++r) {
      if (!a[r].is_array() || static_cast<int>(a[r].size()) != cols) {
        throw ConfigError("expected " + std::to_string(cols) + " columns",
                          pp + "[" + std::to_string(r) + "]");
      }
      for (int c = 0; c < cols; ++c) {
        if (!a[r][c].is_number()) {
          throw ConfigError("expected a number",
                            pp + "[" + std::to_string(r) + "][" +
                                std::to_string(c) + "]");
        }
        const double x = a[r][c].get<double>();
        if (std::string(part) == "re") {
          m(r, c).real(x);
        } else {
          m(r, c).imag(x);
        }
      }
    }
  }
  return m;
}

}  // namespace jcpulse
