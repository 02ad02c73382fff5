// SPDX-License-Identifier: Apache-2.0
#include "workloads.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace streamsim {

const char* to_string(Benchmark b) {
  switch (b) {
    case Benchmark::HBench: return "hbench";
    case Benchmark::MM: return "mm";
    case Benchmark::CF: return "cf";
    case Benchmark::Kmeans: return "kmeans";
    case Benchmark::Hotspot: return "hotspot";
    case Benchmark::NN: return "nn";
    case Benchmark::SRAD: return "srad";
  }
  return "?";
}

Benchmark benchmark_from_string(const std::string& name) {
  if (name == "hbench") return Benchmark::HBench;
  if (name == "mm") return Benchmark::MM;
  if (name == "cf") return Benchmark::CF;
  if (name == "kmeans") return Benchmark::Kmeans;
  if (name == "hotspot") return Benchmark::Hotspot;
  if (name == "nn") return Benchmark::NN;
  if (name == "srad") return Benchmark::SRAD;
  fail(ErrorCode::Parse, "unknown benchmark '" + name +
                             "' (expected hbench, mm, cf, kmeans, hotspot, nn, srad)");
}

namespace {

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

void check_common(long long d, long long tile, int iterations, int streams, int element_size) {
  if (d < 1) fail(ErrorCode::InvalidArgument, "problem size must be positive");
  if (tile < 1) fail(ErrorCode::InvalidArgument, "tile must be positive");
  if (tile > d) fail(ErrorCode::InvalidArgument, "tile must not exceed the problem size");
  if (iterations < 0) fail(ErrorCode::InvalidArgument, "iterations must be non-negative");
  if (streams < 1) fail(ErrorCode::InvalidArgument, "stream count must be positive");
  if (element_size < 1) fail(ErrorCode::InvalidArgument, "element size must be positive");
}

}  // namespace

FlowGraph hbench_flow(long long hd_blocks, long long dh_blocks, double block_bytes,
                      int iterations, long long tiles, int streams) {
  if (hd_blocks < 0 || dh_blocks < 0) fail(ErrorCode::InvalidArgument, "block counts must be non-negative");
  if (block_bytes < 0.0) fail(ErrorCode::InvalidArgument, "block size must be non-negative");
  if (iterations < 0) fail(ErrorCode::InvalidArgument, "iterations must be non-negative");
  if (tiles < 0) fail(ErrorCode::InvalidArgument, "tile count must be non-negative");
  if (streams < 1) fail(ErrorCode::InvalidArgument, "stream count must be positive");

  FlowGraph g(streams);

  std::vector<int> h2d_ids;
  for (long long b = 0; b < hd_blocks; ++b)
    h2d_ids.push_back(g.add_action(ActionKind::H2D, block_bytes, static_cast<int>(b % streams)));

  std::vector<int> exe_ids;
  if (iterations > 0) {
    const long long t_count = std::max<long long>(tiles, 1);
    // One element per byte; the kernel sweeps whichever array is larger.
    const double elements = static_cast<double>(std::max(hd_blocks, dh_blocks)) * block_bytes;
    const double total_work = elements * iterations;
    for (long long t = 0; t < t_count; ++t) {
      std::vector<int> deps;
      if (hd_blocks > 0) {
        const long long lo = t * hd_blocks / t_count;
        const long long hi = ceil_div((t + 1) * hd_blocks, t_count) - 1;
        for (long long b = lo; b <= hi; ++b) deps.push_back(h2d_ids[b]);
      }
      exe_ids.push_back(g.add_action(ActionKind::EXE, total_work / t_count,
                                     static_cast<int>(t % streams), deps, EdgeKind::Async));
    }
  }

  for (long long b = 0; b < dh_blocks; ++b) {
    std::vector<int> deps;
    if (!exe_ids.empty()) {
      const long long t_count = static_cast<long long>(exe_ids.size());
      const long long lo = b * t_count / dh_blocks;
      const long long hi = ceil_div((b + 1) * t_count, dh_blocks) - 1;
      for (long long t = lo; t <= hi; ++t) deps.push_back(exe_ids[t]);
    }
    g.add_action(ActionKind::D2H, block_bytes, static_cast<int>(b % streams), deps,
                 EdgeKind::Async);
  }

  g.validate();
  return g;
}

FlowGraph mm_flow(long long d, long long tile, int streams, int element_size) {
  check_common(d, tile, 1, streams, element_size);
  const long long nt = ceil_div(d, tile);
  FlowGraph g(streams);
  for (long long i = 0; i < nt; ++i) {
    const double ti = static_cast<double>(std::min(tile, d - i * tile));
    for (long long j = 0; j < nt; ++j) {
      const double tj = static_cast<double>(std::min(tile, d - j * tile));
      const int stream = static_cast<int>((i * nt + j) % streams);
      // Each task moves its own share of the inputs, so total traffic is
      // tiling-independent.
      const int h2d = g.add_action(ActionKind::H2D, 2.0 * ti * tj * element_size, stream);
      const int exe = g.add_action(ActionKind::EXE, 2.0 * ti * tj * d, stream, {h2d},
                                   EdgeKind::Async);
      g.add_action(ActionKind::D2H, ti * tj * element_size, stream, {exe}, EdgeKind::Async);
    }
  }
  g.validate();
  return g;
}

FlowGraph cf_flow(long long d, long long tile, int streams, int element_size) {
  check_common(d, tile, 1, streams, element_size);
  if (d % tile != 0) {
    std::ostringstream os;
    os << "cf tile " << tile << " must divide the matrix order " << d;
    fail(ErrorCode::InvalidArgument, os.str());
  }
  const long long n = d / tile;
  const double t3 = static_cast<double>(tile) * tile * tile;
  const double tile_bytes = static_cast<double>(tile) * tile * element_size;

  FlowGraph g(streams);
  // Last writer of each lower-triangle tile; the initial write is its H2D.
  std::vector<std::vector<int>> writer(n, std::vector<int>(n, -1));
  long long tasks = 0;
  auto next_stream = [&]() { return static_cast<int>(tasks++ % streams); };
  auto ensure_input = [&](long long i, long long j, int stream) {
    if (writer[i][j] < 0)
      writer[i][j] = g.add_action(ActionKind::H2D, tile_bytes, stream);
  };

  for (long long k = 0; k < n; ++k) {
    {
      const int s = next_stream();
      ensure_input(k, k, s);
      const int factor = g.add_action(ActionKind::EXE, t3 / 3.0, s, {writer[k][k]},
                                      {g.action(writer[k][k]).kind == ActionKind::H2D
                                           ? EdgeKind::Async
                                           : EdgeKind::Sync});
      writer[k][k] = factor;
      g.add_action(ActionKind::D2H, tile_bytes, s, {factor}, EdgeKind::Async);
    }
    for (long long i = k + 1; i < n; ++i) {
      const int s = next_stream();
      ensure_input(i, k, s);
      const int solve = g.add_action(ActionKind::EXE, t3, s, {writer[k][k], writer[i][k]});
      writer[i][k] = solve;
      g.add_action(ActionKind::D2H, tile_bytes, s, {solve}, EdgeKind::Async);
    }
    // Trailing update, column-major.
    for (long long j = k + 1; j < n; ++j) {
      for (long long i = j; i < n; ++i) {
        const int s = next_stream();
        ensure_input(i, j, s);
        std::vector<int> deps{writer[i][k]};
        if (i != j) deps.push_back(writer[j][k]);
        deps.push_back(writer[i][j]);
        const double work = (i == j) ? t3 : 2.0 * t3;
        writer[i][j] = g.add_action(ActionKind::EXE, work, s, deps);
      }
    }
  }
  g.validate();
  return g;
}

FlowGraph kmeans_flow(long long points, long long tile, int iterations, int streams,
                      int element_size, double flops_per_element) {
  check_common(points, tile, iterations, streams, element_size);
  if (iterations < 1) fail(ErrorCode::InvalidArgument, "kmeans needs at least one iteration");
  const long long nt = ceil_div(points, tile);
  const double point_bytes = static_cast<double>(points) * element_size;

  FlowGraph g(streams);
  const int h2d = g.add_action(ActionKind::H2D, point_bytes, 0);
  int prev_sync = -1;
  const int active = static_cast<int>(std::min<long long>(streams, nt));
  for (int it = 0; it < iterations; ++it) {
    std::vector<int> allocs(active);
    for (int s = 0; s < active; ++s) {
      std::vector<int> deps;
      if (prev_sync >= 0) deps.push_back(prev_sync);
      allocs[s] = g.add_action(ActionKind::Alloc, 1.0, s, deps);
    }
    std::vector<int> exes;
    for (long long t = 0; t < nt; ++t) {
      const double sz = static_cast<double>(std::min(tile, points - t * tile));
      const int s = static_cast<int>(t % streams);
      std::vector<int> deps{allocs[s]};
      deps.push_back(it == 0 ? h2d : prev_sync);
      exes.push_back(g.add_action(ActionKind::EXE, sz * flops_per_element, s, deps));
    }
    prev_sync = g.add_action(ActionKind::Sync, 0.0, 0, exes);
  }
  g.add_action(ActionKind::D2H, point_bytes, 0, {prev_sync});
  g.validate();
  return g;
}

FlowGraph hotspot_flow(long long grid, long long tile, int iterations, int streams,
                       int element_size, double flops_per_element) {
  check_common(grid, tile, iterations, streams, element_size);
  if (iterations < 1) fail(ErrorCode::InvalidArgument, "hotspot needs at least one iteration");
  const long long nt = ceil_div(grid, tile);
  const double grid_bytes = static_cast<double>(grid) * grid * element_size;

  FlowGraph g(streams);
  const int h2d = g.add_action(ActionKind::H2D, grid_bytes, 0);
  int prev_sync = -1;
  for (int it = 0; it < iterations; ++it) {
    std::vector<int> exes;
    long long t = 0;
    for (long long i = 0; i < nt; ++i) {
      const double ti = static_cast<double>(std::min(tile, grid - i * tile));
      for (long long j = 0; j < nt; ++j, ++t) {
        const double tj = static_cast<double>(std::min(tile, grid - j * tile));
        const int s = static_cast<int>(t % streams);
        std::vector<int> deps{it == 0 ? h2d : prev_sync};
        exes.push_back(g.add_action(ActionKind::EXE, ti * tj * flops_per_element, s, deps));
      }
    }
    prev_sync = g.add_action(ActionKind::Sync, 0.0, 0, exes);
  }
  g.add_action(ActionKind::D2H, grid_bytes, 0, {prev_sync});
  g.validate();
  return g;
}

FlowGraph nn_flow(long long records, long long tile, int streams, int element_size,
                  double flops_per_element) {
  check_common(records, tile, 1, streams, element_size);
  const long long nt = ceil_div(records, tile);
  FlowGraph g(streams);
  for (long long t = 0; t < nt; ++t) {
    const double sz = static_cast<double>(std::min(tile, records - t * tile));
    const int s = static_cast<int>(t % streams);
    const int h2d = g.add_action(ActionKind::H2D, sz * element_size, s);
    const int exe =
        g.add_action(ActionKind::EXE, sz * flops_per_element, s, {h2d}, EdgeKind::Async);
    // One float distance back per record.
    g.add_action(ActionKind::D2H, sz * 4.0, s, {exe}, EdgeKind::Async);
  }
  g.validate();
  return g;
}

FlowGraph srad_flow(long long grid, long long tile, int iterations, int streams,
                    int element_size, double flops_per_element) {
  check_common(grid, tile, iterations, streams, element_size);
  if (iterations < 1) fail(ErrorCode::InvalidArgument, "srad needs at least one iteration");
  const long long nt = ceil_div(grid, tile);
  const double grid_bytes = static_cast<double>(grid) * grid * element_size;
  const double grid_work = static_cast<double>(grid) * grid * flops_per_element;

  FlowGraph g(streams);
  const int h2d = g.add_action(ActionKind::H2D, grid_bytes, 0);
  const int extract = g.add_action(ActionKind::EXE, grid_work, 0, {h2d});

  // Tile extents, row-major.
  std::vector<double> areas;
  for (long long i = 0; i < nt; ++i) {
    const double ti = static_cast<double>(std::min(tile, grid - i * tile));
    for (long long j = 0; j < nt; ++j) {
      const double tj = static_cast<double>(std::min(tile, grid - j * tile));
      areas.push_back(ti * tj);
    }
  }
  const long long tiles = static_cast<long long>(areas.size());

  // Four phases per iteration; between consecutive tile phases a SYNC joins
  // all streams. Single-tile runs stay a plain chain (FIFO is enough).
  std::vector<int> join{extract};
  for (int it = 0; it < iterations; ++it) {
    for (int phase = 0; phase < 4; ++phase) {
      if (it + phase > 0 && tiles > 1)
        join = {g.add_action(ActionKind::Sync, 0.0, 0, join)};
      std::vector<int> exes;
      for (long long t = 0; t < tiles; ++t) {
        const int s = static_cast<int>(t % streams);
        exes.push_back(g.add_action(ActionKind::EXE, areas[t] * flops_per_element, s, join));
      }
      join = std::move(exes);
    }
  }
  const int compress = g.add_action(ActionKind::EXE, grid_work, 0, join);
  g.add_action(ActionKind::D2H, grid_bytes, 0, {compress});
  g.validate();
  return g;
}

FlowGraph build_flow(const WorkloadParams& p, int streams) {
  switch (p.name) {
    case Benchmark::HBench:
      return hbench_flow(p.hd_blocks, p.dh_blocks, p.block_bytes, p.iterations, p.hbench_tiles,
                         streams);
    case Benchmark::MM:
      return mm_flow(p.d, p.tile, streams, p.element_size);
    case Benchmark::CF:
      return cf_flow(p.d, p.tile, streams, p.element_size);
    case Benchmark::Kmeans:
      return kmeans_flow(p.d, p.tile, p.iterations, streams, p.element_size,
                         p.flops_per_element);
    case Benchmark::Hotspot:
      return hotspot_flow(p.d, p.tile, p.iterations, streams, p.element_size,
                          p.flops_per_element);
    case Benchmark::NN:
      return nn_flow(p.d, p.tile, streams, p.element_size, p.flops_per_element);
    case Benchmark::SRAD:
      return srad_flow(p.d, p.tile, p.iterations, streams, p.element_size,
                       p.flops_per_element);
  }
  fail(ErrorCode::InvalidArgument, "unhandled benchmark");
}

long long task_count(const WorkloadParams& p) {
  const long long axis = (p.tile >= 1 && p.tile <= p.d) ? ceil_div(p.d, p.tile) : 0;
  switch (p.name) {
    case Benchmark::HBench: return std::max<long long>(p.hbench_tiles, 1);
    case Benchmark::MM: return axis * axis;
    case Benchmark::CF: return axis * (axis + 1) * (axis + 2) / 6;
    case Benchmark::Kmeans: return axis;
    case Benchmark::Hotspot: return axis * axis;
    case Benchmark::NN: return axis;
    case Benchmark::SRAD: return axis * axis;
  }
  return 0;
}

long long natural_max_tiles(const WorkloadParams& p) {
  switch (p.name) {
    case Benchmark::HBench: return std::max<long long>(1, std::max(p.hd_blocks, p.dh_blocks));
    default: return p.d;
  }
}

bool task_grid_feasible(const WorkloadParams& p, long long t) {
  if (t < 1 || t > natural_max_tiles(p)) return false;
  if (p.name == Benchmark::CF) return p.d % t == 0;
  return true;
}

WorkloadParams with_task_grid(const WorkloadParams& p, long long t) {
  if (!task_grid_feasible(p, t)) {
    std::ostringstream os;
    os << "tile grid " << t << " is not realizable for " << to_string(p.name);
    fail(ErrorCode::InvalidArgument, os.str());
  }
  WorkloadParams out = p;
  if (p.name == Benchmark::HBench) {
    out.hbench_tiles = t;
  } else {
    out.tile = ceil_div(p.d, t);
  }
  return out;
}

}  // namespace streamsim
