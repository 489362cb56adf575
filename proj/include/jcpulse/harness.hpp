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

// Command runner shared by the C API and the CLI. Each command reads a JSON
// config, writes result.json, CSV series, config.json and manifest.json into
// an output directory, and returns a process exit code:
//   0 success, 1 threshold not met (results still written),
//   2 config error (message carries the field path), 3 runtime failure.

#ifndef JCPULSE_HARNESS_HPP_
#define JCPULSE_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jcpulse {

// Project version from the build system.
const char* version_string();

enum ExitCode { kExitOk = 0, kExitNotMet = 1, kExitConfig = 2, kExitRuntime = 3 };

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config's "seed"
  int jobs = 1;
  std::string cache_dir;  // V-gate cache directory, empty for none
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string message;     // human-readable summary or error
  std::string error_field; // config path on exit code 2
};

const std::vector<std::string>& command_names();

CommandResult run_command(const std::string& command,
                          const std::string& config_text,
                          const std::string& out_dir,
                          const RunOptions& options);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace jcpulse

#endif  // JCPULSE_HARNESS_HPP_
