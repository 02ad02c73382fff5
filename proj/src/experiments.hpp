// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "config.hpp"

namespace streamsim {

struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<bool> heuristics;
  std::optional<long long> seed;
};

struct CommandOutput {
  std::string filename;  // basename under the output path
  std::string csv;
};

// Builds the command's CSV without touching the filesystem.
CommandOutput run_command(const ExperimentConfig& config);

// Applies overrides, runs the command, writes <output path>/<filename>.
// Exit codes: 0 success, 1 parse, 2 I/O, 3 invalid experiment.
int run_experiment(ExperimentConfig config, const RunOverrides& overrides = {},
                   std::string* error_out = nullptr, std::string* written_path = nullptr);

}  // namespace streamsim
