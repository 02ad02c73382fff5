// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "flow_graph.hpp"

namespace streamsim {

enum class Benchmark { HBench, MM, CF, Kmeans, Hotspot, NN, SRAD };

const char* to_string(Benchmark b);
Benchmark benchmark_from_string(const std::string& name);

struct WorkloadParams {
  Benchmark name = Benchmark::MM;
  long long d = 1200;       // matrix order / grid edge / point or record count
  long long tile = 100;     // tile edge or block length, in elements
  int iterations = 1;
  int element_size = 8;     // bytes
  double flops_per_element = 1.0;
  long long max_tiles = 64; // cap on the tuner's granularity axis
  int streams = 4;
  // hbench only
  long long hd_blocks = 16;
  long long dh_blocks = 16;
  double block_bytes = 1048576.0;
  long long hbench_tiles = 16;

  bool operator==(const WorkloadParams&) const = default;
};

// Microbenchmark: hd H2D blocks, dh D2H blocks, and (when iterations > 0)
// a kernel over the moved data split into `tiles` chunks. One element per
// byte.
FlowGraph hbench_flow(long long hd_blocks, long long dh_blocks, double block_bytes,
                      int iterations, long long tiles, int streams);

// Dense matrix multiply, tiled over the output: independent 3-stage tasks.
FlowGraph mm_flow(long long d, long long tile, int streams, int element_size = 8);

// Right-looking tiled Cholesky; tile must divide d.
FlowGraph cf_flow(long long d, long long tile, int streams, int element_size = 8);

// Clustering: points move once, then per-iteration ALLOC + tile kernels +
// a global SYNC for the centroid update.
FlowGraph kmeans_flow(long long points, long long tile, int iterations, int streams,
                      int element_size = 8, double flops_per_element = 1.0);

// Stencil: per-iteration tile kernels joined by a SYNC (neighbor exchange).
FlowGraph hotspot_flow(long long grid, long long tile, int iterations, int streams,
                       int element_size = 8, double flops_per_element = 1.0);

// Nearest-neighbor scan: independent tasks whose bytes dwarf their work.
FlowGraph nn_flow(long long records, long long tile, int streams, int element_size = 8,
                  double flops_per_element = 1.0);

// Diffusion: extraction kernel, then per iteration four tile-phases with a
// SYNC between consecutive phases, then compression.
FlowGraph srad_flow(long long grid, long long tile, int iterations, int streams,
                    int element_size = 8, double flops_per_element = 1.0);

FlowGraph build_flow(const WorkloadParams& params, int streams);

// Number of tasks the current tile size induces (per iteration / phase for
// the iterative benchmarks).
long long task_count(const WorkloadParams& params);

// Granularity axis for tuning: tiles per matrix/grid axis for the 2-D
// benchmarks, block count for the 1-D ones.
long long natural_max_tiles(const WorkloadParams& params);
bool task_grid_feasible(const WorkloadParams& params, long long t);
WorkloadParams with_task_grid(const WorkloadParams& params, long long t);

}  // namespace streamsim
