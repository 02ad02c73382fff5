// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "device.hpp"
#include "workloads.hpp"

namespace streamsim {

enum class Command { Calibrate, Simulate, Sweep, Tune, Report };
enum class SweepAxis { Partitions, Tiles, Blocks, Iterations };

const char* to_string(Command c);
const char* to_string(SweepAxis a);
const char* to_string(LinkMode m);

struct CommandBlock {
  Command run = Command::Simulate;
  SweepAxis axis = SweepAxis::Partitions;
  // "lo:hi[:step]", "v1,v2,...", "aligned", or "heuristic".
  std::string range_spec = "aligned";
  int partitions = 4;
  bool heuristics = true;
  int m_max = 16;
  long long seed = 0;  // reserved; the engine is deterministic

  bool operator==(const CommandBlock&) const = default;
};

struct CalibrateBlock {
  CalibrationOptions fit;
  CalibrationData samples;
  bool operator==(const CalibrateBlock&) const = default;
};

struct ExperimentConfig {
  DeviceSpec device = reference_device();
  LinkSpec link = reference_link();
  double cross_device_sync = 0.0;
  WorkloadParams workload;
  CommandBlock command;
  CalibrateBlock calibrate;
  std::string output_path = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

// Flat key-value text with [section] headers; '#' starts a comment.
// Unknown sections, keys, malformed numbers, and invalid field values are
// parse errors naming the line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

// Materializes the sweep range; keywords expand against the device block.
std::vector<long long> resolve_range(const ExperimentConfig& config);

}  // namespace streamsim
