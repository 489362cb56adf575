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

// jcpulse <command> --config <path> --out <dir> [--seed k] [--jobs n]
// Thin front end over the C API. JCPULSE_CACHE names the V-gate cache
// directory.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jcpulse/jcpulse.h"

namespace {

constexpr int kExitConfig = 2;

bool read_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  *out = ss.str();
  return static_cast<bool>(in) || in.eof();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qudit gate synthesis in the Jaynes-Cummings model", "jcpulse"};
  app.set_version_flag("--version", jcp_version());
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<CLI::App*> subs;
  for (size_t i = 0; i < jcp_command_count(); ++i) {
    CLI::App* sub = app.add_subcommand(jcp_command_name(i));
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--jobs", jobs, "worker threads")
        ->check(CLI::Range(1, 1024));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  std::string config;
  if (!read_file(config_path, &config)) {
    std::cerr << "jcpulse: config error: config: cannot read '" << config_path
              << "'\n";
    return kExitConfig;
  }

  jcp_run_options opt;
  jcp_run_options_init(&opt);
  opt.jobs = jobs;
  if (chosen->count("--seed") > 0) {
    opt.seed = seed;
    opt.has_seed = 1;
  }
  const char* cache = std::getenv("JCPULSE_CACHE");
  if (cache != nullptr && *cache != '\0') opt.cache_dir = cache;

  int code = 0;
  const jcp_status st = jcp_run_command(chosen->get_name().c_str(),
                                        config.c_str(), out_dir.c_str(), &opt,
                                        &code);
  if (st == JCP_OK) {
    std::cout << chosen->get_name() << ": " << jcp_last_message() << "\n";
    if (code != 0) std::cout << "threshold not met; results written to " << out_dir << "\n";
    return code;
  }
  if (st == JCP_ERR_CONFIG) {
    // The message already starts with the field path.
    std::cerr << "jcpulse: config error: " << jcp_last_error() << "\n";
    return kExitConfig;
  }
  std::cerr << "jcpulse: " << jcp_last_error() << "\n";
  return code != 0 ? code : 3;
}
