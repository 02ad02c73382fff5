// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "device.hpp"
#include "flow_graph.hpp"

namespace streamsim {

// Absolute tolerance for time comparisons in checks and reports.
inline constexpr double kTimeEps = 1e-9;

struct SimConfig {
  DeviceSpec device;
  LinkSpec link;
  Partitioning partitioning;                 // identical layout on every device
  std::vector<int> stream_to_partition;
  std::vector<int> stream_to_device;
  double cross_device_sync_overhead = 0.0;   // added to any dependency crossing devices

  // Streams interleave across devices, then round-robin over partitions:
  // device = s % device_count, partition = (s / device_count) % partitions.
  static SimConfig standard(const DeviceSpec& dev, const LinkSpec& link,
                            int partition_count, int stream_count,
                            double cross_device_sync_overhead = 0.0);

  void validate(int stream_count_needed) const;
};

struct TimelineEntry {
  int action_id = -1;
  ActionKind kind = ActionKind::Sync;
  int stream = 0;
  int resource = -1;  // index into resource_names; -1 when nothing is held
  double start = 0.0;
  double end = 0.0;
};

struct Timeline {
  std::vector<TimelineEntry> entries;  // indexed by action id
  double makespan = 0.0;
  std::vector<double> busy;            // seconds, per resource
  std::vector<std::string> resource_names;
};

// Greedy non-preemptive list scheduling: an action starts at the earliest
// instant when its dependencies have ended, its stream predecessor has
// ended, and its resource is free. Ties break on (ready time, stream
// index, action id). Deterministic: identical inputs give identical
// timelines.
Timeline simulate(const FlowGraph& graph, const SimConfig& config);

double makespan(const Timeline& timeline);

// max(critical path, per-engine busy demand, per-partition busy demand);
// never exceeds the simulated makespan.
double lower_bound(const FlowGraph& graph, const SimConfig& config);

// Busy fraction per resource, in [0, 1]; zero for unused resources.
std::vector<double> utilization(const Timeline& timeline);

// Header: action_id,kind,stream,resource,start_s,end_s
std::string timeline_csv(const Timeline& timeline);

}  // namespace streamsim
