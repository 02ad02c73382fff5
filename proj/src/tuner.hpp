// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "device.hpp"
#include "workloads.hpp"

namespace streamsim {

struct Candidate {
  int partitions = 0;
  long long tiles = 0;
};

struct TuningRow {
  int partitions = 0;
  long long tiles = 0;
  double makespan_s = 0.0;
};

struct TuningResult {
  std::vector<TuningRow> evaluated;  // ascending (P, T)
  int best_partitions = 0;
  long long best_tiles = 0;
  double best_makespan = 0.0;
  long long pruned_space_size = 0;  // size of the space that was evaluated
  long long full_space_size = 0;    // exhaustive grid size for the same workload
};

// With heuristics: P restricted to aligned partition counts above one, and
// T to multiples of P (up to m_max per P). Without: every P up to the
// usable cores and every realizable T up to the workload's tile cap.
std::vector<Candidate> candidate_space(const DeviceSpec& dev, const WorkloadParams& workload,
                                       bool heuristics, int m_max);

// Simulates every candidate; picks the smallest makespan, ties resolved
// toward fewer partitions, then fewer tiles. One stream per partition.
TuningResult tune(const WorkloadParams& workload, const DeviceSpec& dev, const LinkSpec& link,
                  bool heuristics, int m_max, double cross_device_sync_overhead = 0.0);

// Smallest iteration count at which a whole-device kernel pass over
// `elements` costs at least the round trip of `bytes_each_way` in both
// directions.
long long crossover_iterations(const DeviceSpec& dev, const LinkSpec& link,
                               double bytes_each_way, double elements);

// Columns P,T,makespan_s; one row per candidate plus a summary row
// repeating the winner.
std::string tuning_csv(const TuningResult& result);

}  // namespace streamsim
