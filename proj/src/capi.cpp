// SPDX-License-Identifier: Apache-2.0
#include "streamsim.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "config.hpp"
#include "engine.hpp"
#include "experiments.hpp"
#include "tuner.hpp"

using namespace streamsim;

struct streamsim_config {
  ExperimentConfig cfg;
};
struct streamsim_graph {
  FlowGraph graph;
};
struct streamsim_timeline {
  Timeline tl;
};
struct streamsim_tuning {
  TuningResult result;
};

namespace {

thread_local std::string g_last_error;

streamsim_status map_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return STREAMSIM_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return STREAMSIM_ERR_PARSE;
    case ErrorCode::GraphConstruction: return STREAMSIM_ERR_GRAPH;
    case ErrorCode::Cycle: return STREAMSIM_ERR_CYCLE;
    case ErrorCode::Config: return STREAMSIM_ERR_CONFIG;
    case ErrorCode::Calibration: return STREAMSIM_ERR_CALIBRATION;
    case ErrorCode::Tuning: return STREAMSIM_ERR_TUNING;
    case ErrorCode::UndefinedCrossover: return STREAMSIM_ERR_UNDEFINED_CROSSOVER;
    case ErrorCode::Io: return STREAMSIM_ERR_IO;
  }
  return STREAMSIM_ERR_INTERNAL;
}

template <typename F>
streamsim_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return STREAMSIM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STREAMSIM_ERR_INTERNAL;
  }
}

streamsim_status arg_error(const char* msg) {
  g_last_error = msg;
  return STREAMSIM_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

SimConfig sim_for(const ExperimentConfig& cfg, const FlowGraph& graph) {
  return SimConfig::standard(cfg.device, cfg.link, cfg.command.partitions, graph.stream_count(),
                             cfg.cross_device_sync);
}

ActionKind kind_from(streamsim_action_kind k) {
  switch (k) {
    case STREAMSIM_ACTION_H2D: return ActionKind::H2D;
    case STREAMSIM_ACTION_EXE: return ActionKind::EXE;
    case STREAMSIM_ACTION_D2H: return ActionKind::D2H;
    case STREAMSIM_ACTION_ALLOC: return ActionKind::Alloc;
    case STREAMSIM_ACTION_SYNC: return ActionKind::Sync;
  }
  fail(ErrorCode::InvalidArgument, "unknown action kind");
}

streamsim_action_kind kind_to(ActionKind k) {
  switch (k) {
    case ActionKind::H2D: return STREAMSIM_ACTION_H2D;
    case ActionKind::EXE: return STREAMSIM_ACTION_EXE;
    case ActionKind::D2H: return STREAMSIM_ACTION_D2H;
    case ActionKind::Alloc: return STREAMSIM_ACTION_ALLOC;
    case ActionKind::Sync: return STREAMSIM_ACTION_SYNC;
  }
  return STREAMSIM_ACTION_SYNC;
}

}  // namespace

extern "C" {

const char* streamsim_version(void) { return "0.1.0"; }

const char* streamsim_status_name(streamsim_status status) {
  switch (status) {
    case STREAMSIM_OK: return "ok";
    case STREAMSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case STREAMSIM_ERR_PARSE: return "parse error";
    case STREAMSIM_ERR_GRAPH: return "graph construction error";
    case STREAMSIM_ERR_CYCLE: return "dependency cycle";
    case STREAMSIM_ERR_CONFIG: return "invalid configuration";
    case STREAMSIM_ERR_CALIBRATION: return "calibration error";
    case STREAMSIM_ERR_TUNING: return "tuning error";
    case STREAMSIM_ERR_UNDEFINED_CROSSOVER: return "undefined crossover";
    case STREAMSIM_ERR_IO: return "i/o error";
    case STREAMSIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* streamsim_last_error(void) { return g_last_error.c_str(); }

void streamsim_string_free(char* s) { std::free(s); }

streamsim_status streamsim_config_parse(const char* text, streamsim_config** out) {
  if (!text || !out) return arg_error("config_parse: null argument");
  return guarded([&] { *out = new streamsim_config{parse_config(text)}; });
}

streamsim_status streamsim_config_parse_file(const char* path, streamsim_config** out) {
  if (!path || !out) return arg_error("config_parse_file: null argument");
  return guarded([&] { *out = new streamsim_config{parse_config_file(path)}; });
}

streamsim_status streamsim_config_serialize(const streamsim_config* config, char** out) {
  if (!config || !out) return arg_error("config_serialize: null argument");
  return guarded([&] { *out = dup_string(serialize_config(config->cfg)); });
}

void streamsim_config_free(streamsim_config* config) { delete config; }

streamsim_status streamsim_usable_threads(const streamsim_config* config, int* out) {
  if (!config || !out) return arg_error("usable_threads: null argument");
  return guarded([&] { *out = usable_threads(config->cfg.device); });
}

streamsim_status streamsim_aligned_partition_counts(const streamsim_config* config, int* counts,
                                                    size_t capacity, size_t* out_size) {
  if (!config || !out_size) return arg_error("aligned_partition_counts: null argument");
  if (capacity > 0 && !counts) return arg_error("aligned_partition_counts: null buffer");
  return guarded([&] {
    const std::vector<int> all = aligned_partition_counts(config->cfg.device);
    *out_size = all.size();
    for (size_t i = 0; i < all.size() && i < capacity; ++i) counts[i] = all[i];
  });
}

streamsim_status streamsim_partition_sizes(const streamsim_config* config, int partitions,
                                           int* sizes, size_t capacity, size_t* out_size,
                                           int* out_aligned) {
  if (!config || !out_size) return arg_error("partition_sizes: null argument");
  if (capacity > 0 && !sizes) return arg_error("partition_sizes: null buffer");
  return guarded([&] {
    const Partitioning p = make_partitioning(config->cfg.device, partitions);
    *out_size = p.thread_assignment.size();
    for (size_t i = 0; i < p.thread_assignment.size() && i < capacity; ++i)
      sizes[i] = static_cast<int>(p.thread_assignment[i].size());
    if (out_aligned) *out_aligned = p.aligned ? 1 : 0;
  });
}

streamsim_status streamsim_transfer_time(const streamsim_config* config, double bytes,
                                         double* out_seconds) {
  if (!config || !out_seconds) return arg_error("transfer_time: null argument");
  return guarded([&] { *out_seconds = transfer_time(config->cfg.link, bytes); });
}

streamsim_status streamsim_kernel_time(const streamsim_config* config, double work, int threads,
                                       int streams_sharing, double* out_seconds) {
  if (!config || !out_seconds) return arg_error("kernel_time: null argument");
  return guarded(
      [&] { *out_seconds = kernel_time(config->cfg.device, work, threads, streams_sharing); });
}

streamsim_status streamsim_crossover_iterations(const streamsim_config* config,
                                                double bytes_each_way, double elements,
                                                long long* out_iterations) {
  if (!config || !out_iterations) return arg_error("crossover_iterations: null argument");
  return guarded([&] {
    *out_iterations =
        crossover_iterations(config->cfg.device, config->cfg.link, bytes_each_way, elements);
  });
}

streamsim_status streamsim_graph_build(const streamsim_config* config, streamsim_graph** out) {
  if (!config || !out) return arg_error("graph_build: null argument");
  return guarded([&] {
    *out = new streamsim_graph{
        build_flow(config->cfg.workload, config->cfg.workload.streams)};
  });
}

streamsim_status streamsim_graph_create(int stream_count, streamsim_graph** out) {
  if (!out) return arg_error("graph_create: null argument");
  return guarded([&] { *out = new streamsim_graph{FlowGraph(stream_count)}; });
}

streamsim_status streamsim_graph_add_action(streamsim_graph* graph, streamsim_action_kind kind,
                                            double payload, int stream, const int* deps,
                                            size_t dep_count, int* out_id) {
  if (!graph) return arg_error("graph_add_action: null graph");
  if (dep_count > 0 && !deps) return arg_error("graph_add_action: null deps");
  return guarded([&] {
    const std::vector<int> dep_ids(deps, deps + dep_count);
    const int id =
        graph->graph.add_action(kind_from(kind), payload, stream, dep_ids, EdgeKind::Async);
    if (out_id) *out_id = id;
  });
}

streamsim_status streamsim_graph_validate(const streamsim_graph* graph) {
  if (!graph) return arg_error("graph_validate: null graph");
  return guarded([&] { graph->graph.validate(); });
}

streamsim_status streamsim_graph_action_count(const streamsim_graph* graph, size_t* out) {
  if (!graph || !out) return arg_error("graph_action_count: null argument");
  return guarded([&] { *out = graph->graph.size(); });
}

streamsim_status streamsim_graph_overlappable(const streamsim_graph* graph, int* out) {
  if (!graph || !out) return arg_error("graph_overlappable: null argument");
  return guarded([&] { *out = classify_overlappable(graph->graph) ? 1 : 0; });
}

streamsim_status streamsim_graph_serialize(const streamsim_graph* graph, char** out) {
  if (!graph || !out) return arg_error("graph_serialize: null argument");
  return guarded([&] { *out = dup_string(graph->graph.serialize()); });
}

void streamsim_graph_free(streamsim_graph* graph) { delete graph; }

streamsim_status streamsim_simulate(const streamsim_config* config, const streamsim_graph* graph,
                                    streamsim_timeline** out) {
  if (!config || !graph || !out) return arg_error("simulate: null argument");
  return guarded([&] {
    *out = new streamsim_timeline{simulate(graph->graph, sim_for(config->cfg, graph->graph))};
  });
}

streamsim_status streamsim_lower_bound(const streamsim_config* config,
                                       const streamsim_graph* graph, double* out_seconds) {
  if (!config || !graph || !out_seconds) return arg_error("lower_bound: null argument");
  return guarded(
      [&] { *out_seconds = lower_bound(graph->graph, sim_for(config->cfg, graph->graph)); });
}

streamsim_status streamsim_timeline_makespan(const streamsim_timeline* timeline,
                                             double* out_seconds) {
  if (!timeline || !out_seconds) return arg_error("timeline_makespan: null argument");
  *out_seconds = timeline->tl.makespan;
  return STREAMSIM_OK;
}

streamsim_status streamsim_timeline_entry_count(const streamsim_timeline* timeline, size_t* out) {
  if (!timeline || !out) return arg_error("timeline_entry_count: null argument");
  *out = timeline->tl.entries.size();
  return STREAMSIM_OK;
}

streamsim_status streamsim_timeline_get_entry(const streamsim_timeline* timeline, size_t index,
                                              streamsim_timeline_entry* out) {
  if (!timeline || !out) return arg_error("timeline_entry: null argument");
  if (index >= timeline->tl.entries.size()) return arg_error("timeline_entry: index out of range");
  const TimelineEntry& e = timeline->tl.entries[index];
  out->action_id = e.action_id;
  out->kind = kind_to(e.kind);
  out->stream = e.stream;
  out->resource = e.resource;
  out->start_s = e.start;
  out->end_s = e.end;
  return STREAMSIM_OK;
}

streamsim_status streamsim_timeline_resource_name(const streamsim_timeline* timeline, int resource,
                                                  const char** out) {
  if (!timeline || !out) return arg_error("timeline_resource_name: null argument");
  if (resource < 0 || static_cast<size_t>(resource) >= timeline->tl.resource_names.size())
    return arg_error("timeline_resource_name: index out of range");
  *out = timeline->tl.resource_names[static_cast<size_t>(resource)].c_str();
  return STREAMSIM_OK;
}

streamsim_status streamsim_timeline_csv(const streamsim_timeline* timeline, char** out) {
  if (!timeline || !out) return arg_error("timeline_csv: null argument");
  return guarded([&] { *out = dup_string(timeline_csv(timeline->tl)); });
}

void streamsim_timeline_free(streamsim_timeline* timeline) { delete timeline; }

streamsim_status streamsim_tune(const streamsim_config* config, streamsim_tuning** out) {
  if (!config || !out) return arg_error("tune: null argument");
  return guarded([&] {
    const ExperimentConfig& c = config->cfg;
    *out = new streamsim_tuning{tune(c.workload, c.device, c.link, c.command.heuristics,
                                     c.command.m_max, c.cross_device_sync)};
  });
}

streamsim_status streamsim_tuning_best(const streamsim_tuning* tuning, int* out_partitions,
                                       long long* out_tiles, double* out_makespan_s) {
  if (!tuning) return arg_error("tuning_best: null tuning");
  if (out_partitions) *out_partitions = tuning->result.best_partitions;
  if (out_tiles) *out_tiles = tuning->result.best_tiles;
  if (out_makespan_s) *out_makespan_s = tuning->result.best_makespan;
  return STREAMSIM_OK;
}

streamsim_status streamsim_tuning_row_count(const streamsim_tuning* tuning, size_t* out) {
  if (!tuning || !out) return arg_error("tuning_row_count: null argument");
  *out = tuning->result.evaluated.size();
  return STREAMSIM_OK;
}

streamsim_status streamsim_tuning_row(const streamsim_tuning* tuning, size_t index,
                                      int* out_partitions, long long* out_tiles,
                                      double* out_makespan_s) {
  if (!tuning) return arg_error("tuning_row: null tuning");
  if (index >= tuning->result.evaluated.size())
    return arg_error("tuning_row: index out of range");
  const TuningRow& row = tuning->result.evaluated[index];
  if (out_partitions) *out_partitions = row.partitions;
  if (out_tiles) *out_tiles = row.tiles;
  if (out_makespan_s) *out_makespan_s = row.makespan_s;
  return STREAMSIM_OK;
}

streamsim_status streamsim_tuning_space(const streamsim_tuning* tuning, long long* out_pruned,
                                        long long* out_full) {
  if (!tuning) return arg_error("tuning_space: null tuning");
  if (out_pruned) *out_pruned = tuning->result.pruned_space_size;
  if (out_full) *out_full = tuning->result.full_space_size;
  return STREAMSIM_OK;
}

streamsim_status streamsim_tuning_csv(const streamsim_tuning* tuning, char** out) {
  if (!tuning || !out) return arg_error("tuning_csv: null argument");
  return guarded([&] { *out = dup_string(tuning_csv(tuning->result)); });
}

void streamsim_tuning_free(streamsim_tuning* tuning) { delete tuning; }

streamsim_status streamsim_run(const streamsim_config* config, const char* command,
                               const char* out_dir, int heuristics, long long seed,
                               int* out_exit_code) {
  if (!config || !out_exit_code) return arg_error("run: null argument");
  return guarded([&] {
    ExperimentConfig cfg = config->cfg;
    if (command) {
      const std::string name(command);
      if (name == "calibrate") cfg.command.run = Command::Calibrate;
      else if (name == "simulate") cfg.command.run = Command::Simulate;
      else if (name == "sweep") cfg.command.run = Command::Sweep;
      else if (name == "tune") cfg.command.run = Command::Tune;
      else if (name == "report") cfg.command.run = Command::Report;
      else fail(ErrorCode::Parse, "unknown command '" + name + "'");
    }
    RunOverrides overrides;
    if (out_dir) overrides.out_dir = std::string(out_dir);
    if (heuristics == 0) overrides.heuristics = false;
    if (heuristics == 1) overrides.heuristics = true;
    if (seed >= 0) overrides.seed = seed;
    std::string error;
    *out_exit_code = run_experiment(cfg, overrides, &error, nullptr);
    if (*out_exit_code != 0) g_last_error = error;
  });
}

}  // extern "C"
