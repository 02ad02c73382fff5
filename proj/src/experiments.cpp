// SPDX-License-Identifier: Apache-2.0
#include "experiments.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "engine.hpp"
#include "text_util.hpp"
#include "tuner.hpp"

namespace streamsim {
namespace {

long long display_tiles(const WorkloadParams& w) {
  if (w.name == Benchmark::HBench) return w.hbench_tiles;
  return (w.d + w.tile - 1) / w.tile;
}

double run_makespan(const ExperimentConfig& cfg, const WorkloadParams& w, int partitions,
                    int streams) {
  const FlowGraph g = build_flow(w, streams);
  const SimConfig sim =
      SimConfig::standard(cfg.device, cfg.link, partitions, streams, cfg.cross_device_sync);
  return simulate(g, sim).makespan;
}

int checked_partition_count(long long v, const DeviceSpec& dev) {
  if (v < 1 || v > usable_threads(dev))
    fail(ErrorCode::InvalidArgument,
         "partition count " + std::to_string(v) + " is outside [1, usable threads]");
  return static_cast<int>(v);
}

std::string sweep_partitions(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "P,T,makespan_ms\n";
  for (long long v : resolve_range(cfg)) {
    const int p = checked_partition_count(v, cfg.device);
    os << p << "," << display_tiles(cfg.workload) << ","
       << format_ms(run_makespan(cfg, cfg.workload, p, p)) << "\n";
  }
  return os.str();
}

std::string sweep_tiles(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "P,T,makespan_ms\n";
  const int p = cfg.command.partitions;
  int rows = 0;
  for (long long t : resolve_range(cfg)) {
    if (!task_grid_feasible(cfg.workload, t)) continue;
    const WorkloadParams w = with_task_grid(cfg.workload, t);
    os << p << "," << t << "," << format_ms(run_makespan(cfg, w, p, p)) << "\n";
    ++rows;
  }
  if (rows == 0)
    fail(ErrorCode::InvalidArgument,
         "no realizable tile counts in range '" + cfg.command.range_spec + "'");
  return os.str();
}

std::string sweep_blocks(const ExperimentConfig& cfg) {
  if (cfg.workload.name != Benchmark::HBench)
    fail(ErrorCode::InvalidArgument, "the blocks sweep requires the hbench workload");
  const long long m = cfg.workload.hd_blocks;
  std::ostringstream os;
  os << "series,x,hd,dh,makespan_ms\n";
  for (long long x : resolve_range(cfg)) {
    if (x < 0 || x > m)
      fail(ErrorCode::InvalidArgument,
           "block count " + std::to_string(x) + " is outside [0, " + std::to_string(m) + "]");
    const struct {
      const char* series;
      long long hd, dh;
    } patterns[4] = {{"CC", m, m}, {"IC", x, m}, {"CD", m, m - x}, {"ID", x, m - x}};
    for (const auto& pat : patterns) {
      WorkloadParams w = cfg.workload;
      w.hd_blocks = pat.hd;
      w.dh_blocks = pat.dh;
      os << pat.series << "," << x << "," << pat.hd << "," << pat.dh << ","
         << format_ms(run_makespan(cfg, w, cfg.command.partitions, w.streams)) << "\n";
    }
  }
  return os.str();
}

std::string sweep_iterations(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "iterations,data_ms,kernel_ms,expected_ms,measured_ms\n";
  const int p = cfg.command.partitions;
  const int s = cfg.workload.streams;
  const SimConfig sim =
      SimConfig::standard(cfg.device, cfg.link, p, s, cfg.cross_device_sync);
  for (long long v : resolve_range(cfg)) {
    if (v < 0 || v > 1000000)
      fail(ErrorCode::InvalidArgument, "iteration count " + std::to_string(v) + " out of range");
    WorkloadParams w = cfg.workload;
    w.iterations = static_cast<int>(v);
    WorkloadParams transfers_only = w;
    transfers_only.iterations = 0;
    const double data_s = run_makespan(cfg, transfers_only, p, s);

    const FlowGraph g = build_flow(w, s);
    double work = 0.0;
    for (const Action& a : g.actions())
      if (a.kind == ActionKind::EXE) work += a.payload;
    const double kernel_s = kernel_time(cfg.device, work, usable_threads(cfg.device), 1);

    os << v << "," << format_ms(data_s) << "," << format_ms(kernel_s) << ","
       << format_ms(lower_bound(g, sim)) << "," << format_ms(simulate(g, sim).makespan) << "\n";
  }
  return os.str();
}

CommandOutput simulate_command(const ExperimentConfig& cfg) {
  const FlowGraph g = build_flow(cfg.workload, cfg.workload.streams);
  const SimConfig sim = SimConfig::standard(cfg.device, cfg.link, cfg.command.partitions,
                                            cfg.workload.streams, cfg.cross_device_sync);
  return {"timeline.csv", timeline_csv(simulate(g, sim))};
}

CommandOutput sweep_command(const ExperimentConfig& cfg) {
  switch (cfg.command.axis) {
    case SweepAxis::Partitions: return {"sweep.csv", sweep_partitions(cfg)};
    case SweepAxis::Tiles: return {"sweep.csv", sweep_tiles(cfg)};
    case SweepAxis::Blocks: return {"sweep.csv", sweep_blocks(cfg)};
    case SweepAxis::Iterations: return {"sweep.csv", sweep_iterations(cfg)};
  }
  fail(ErrorCode::InvalidArgument, "unknown sweep axis");
}

CommandOutput tune_command(const ExperimentConfig& cfg) {
  const TuningResult r = tune(cfg.workload, cfg.device, cfg.link, cfg.command.heuristics,
                              cfg.command.m_max, cfg.cross_device_sync);
  return {"tune.csv", tuning_csv(r)};
}

CommandOutput calibrate_command(const ExperimentConfig& cfg) {
  const CalibrationResult r =
      calibrate(cfg.calibrate.samples, cfg.calibrate.fit, cfg.device, cfg.link);
  std::ostringstream os;
  os << "parameter,value\n";
  os << "bandwidth," << format_g(r.link.bandwidth) << "\n";
  os << "latency," << format_g(r.link.latency) << "\n";
  os << "per_thread_rate," << format_g(r.device.per_thread_rate) << "\n";
  os << "kernel_launch_overhead," << format_g(r.device.kernel_launch_overhead) << "\n";
  os << "per_stream_overhead," << format_g(r.device.per_stream_overhead) << "\n";
  os << "rms_relative_residual," << format_g(r.rms_relative_residual) << "\n";
  return {"calibration.csv", os.str()};
}

CommandOutput report_command(const ExperimentConfig& cfg) {
  const FlowGraph g = build_flow(cfg.workload, cfg.workload.streams);
  const SimConfig sim = SimConfig::standard(cfg.device, cfg.link, cfg.command.partitions,
                                            cfg.workload.streams, cfg.cross_device_sync);
  const Timeline tl = simulate(g, sim);
  std::ostringstream os;
  os << "metric,value\n";
  os << "makespan_ms," << format_ms(tl.makespan) << "\n";
  os << "lower_bound_ms," << format_ms(lower_bound(g, sim)) << "\n";
  os << "action_count," << g.size() << "\n";
  os << "task_count," << task_count(cfg.workload) << "\n";
  os << "overlappable," << (classify_overlappable(g) ? 1 : 0) << "\n";
  const std::vector<double> util = utilization(tl);
  for (size_t i = 0; i < util.size(); ++i)
    os << "utilization." << tl.resource_names[i] << "," << format_g(util[i], 6) << "\n";
  return {"report.csv", os.str()};
}

}  // namespace

CommandOutput run_command(const ExperimentConfig& cfg) {
  switch (cfg.command.run) {
    case Command::Calibrate: return calibrate_command(cfg);
    case Command::Simulate: return simulate_command(cfg);
    case Command::Sweep: return sweep_command(cfg);
    case Command::Tune: return tune_command(cfg);
    case Command::Report: return report_command(cfg);
  }
  fail(ErrorCode::InvalidArgument, "unknown command");
}

int run_experiment(ExperimentConfig cfg, const RunOverrides& overrides, std::string* error_out,
                   std::string* written_path) {
  try {
    if (overrides.out_dir.has_value()) cfg.output_path = *overrides.out_dir;
    if (overrides.heuristics.has_value()) cfg.command.heuristics = *overrides.heuristics;
    if (overrides.seed.has_value()) cfg.command.seed = *overrides.seed;

    const CommandOutput out = run_command(cfg);

    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_path);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
      fail(ErrorCode::Io,
           "cannot create output directory '" + cfg.output_path + "': " + ec.message());
    const fs::path file = dir / out.filename;
    std::ofstream f(file, std::ios::binary);
    if (!f) fail(ErrorCode::Io, "cannot write '" + file.string() + "'");
    f << out.csv;
    f.flush();
    if (!f) fail(ErrorCode::Io, "write failed for '" + file.string() + "'");
    if (written_path) *written_path = file.string();
    return 0;
  } catch (const Error& e) {
    if (error_out) *error_out = e.what();
    switch (e.code()) {
      case ErrorCode::Parse: return 1;
      case ErrorCode::Io: return 2;
      default: return 3;
    }
  } catch (const std::exception& e) {
    if (error_out) *error_out = e.what();
    return 3;
  }
}

}  // namespace streamsim
