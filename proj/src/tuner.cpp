// SPDX-License-Identifier: Apache-2.0
#include "tuner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "engine.hpp"
#include "text_util.hpp"

namespace streamsim {

std::vector<Candidate> candidate_space(const DeviceSpec& dev, const WorkloadParams& workload,
                                       bool heuristics, int m_max) {
  dev.validate();
  if (m_max < 1) fail(ErrorCode::InvalidArgument, "m_max must be positive");
  const long long t_cap = std::min<long long>(workload.max_tiles, natural_max_tiles(workload));
  if (t_cap < 1) fail(ErrorCode::Tuning, "workload admits no tiling");

  std::vector<Candidate> space;
  if (heuristics) {
    for (int p : aligned_partition_counts(dev)) {
      if (p == 1) continue;  // a single partition forfeits overlap
      for (int m = 1; m <= m_max; ++m) {
        const long long t = static_cast<long long>(m) * p;
        if (t > t_cap) break;
        if (task_grid_feasible(workload, t)) space.push_back({p, t});
      }
    }
  } else {
    for (int p = 1; p <= usable_cores(dev); ++p)
      for (long long t = 1; t <= t_cap; ++t)
        if (task_grid_feasible(workload, t)) space.push_back({p, t});
  }
  return space;
}

TuningResult tune(const WorkloadParams& workload, const DeviceSpec& dev, const LinkSpec& link,
                  bool heuristics, int m_max, double cross_device_sync_overhead) {
  const std::vector<Candidate> space = candidate_space(dev, workload, heuristics, m_max);
  if (space.empty()) fail(ErrorCode::Tuning, "candidate space is empty");

  TuningResult result;
  result.pruned_space_size = static_cast<long long>(space.size());
  result.full_space_size =
      static_cast<long long>(candidate_space(dev, workload, false, m_max).size());

  bool have_best = false;
  for (const Candidate& c : space) {
    const WorkloadParams instance = with_task_grid(workload, c.tiles);
    const FlowGraph graph = build_flow(instance, c.partitions);
    const SimConfig cfg = SimConfig::standard(dev, link, c.partitions, c.partitions,
                                              cross_device_sync_overhead);
    const double mk = simulate(graph, cfg).makespan;
    result.evaluated.push_back({c.partitions, c.tiles, mk});
    // Candidates arrive sorted by (P, T), so strict improvement implements
    // the tie-break toward fewer partitions, then fewer tiles.
    if (!have_best || mk < result.best_makespan) {
      have_best = true;
      result.best_makespan = mk;
      result.best_partitions = c.partitions;
      result.best_tiles = c.tiles;
    }
  }
  return result;
}

long long crossover_iterations(const DeviceSpec& dev, const LinkSpec& link,
                               double bytes_each_way, double elements) {
  dev.validate();
  link.validate();
  if (bytes_each_way < 0.0 || elements < 0.0)
    fail(ErrorCode::InvalidArgument, "bytes and elements must be non-negative");

  const double round_trip = 2.0 * transfer_time(link, bytes_each_way);
  const int threads = usable_threads(dev);
  const double floor_cost = kernel_time(dev, 0.0, threads, 1);
  if (floor_cost >= round_trip) return 0;
  if (elements <= 0.0)
    fail(ErrorCode::UndefinedCrossover,
         "kernel does no work per iteration; compute never reaches the transfer cost");

  const double per_iteration = elements / (static_cast<double>(threads) * dev.per_thread_rate);
  long long n = std::max<long long>(
      0, static_cast<long long>(std::floor((round_trip - floor_cost) / per_iteration)) - 1);
  while (kernel_time(dev, elements * static_cast<double>(n), threads, 1) < round_trip) ++n;
  return n;
}

std::string tuning_csv(const TuningResult& result) {
  std::ostringstream os;
  os << "P,T,makespan_s\n";
  for (const TuningRow& row : result.evaluated)
    os << row.partitions << "," << row.tiles << "," << format_g(row.makespan_s, 9) << "\n";
  os << result.best_partitions << "," << result.best_tiles << ","
     << format_g(result.best_makespan, 9) << "\n";
  return os.str();
}

}  // namespace streamsim
