/* SPDX-License-Identifier: Apache-2.0 */
#ifndef STREAMSIM_H
#define STREAMSIM_H

#include <stddef.h>

#if defined(_WIN32)
#define STREAMSIM_API __declspec(dllexport)
#else
#define STREAMSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum streamsim_status {
  STREAMSIM_OK = 0,
  STREAMSIM_ERR_INVALID_ARGUMENT = 1,
  STREAMSIM_ERR_PARSE = 2,
  STREAMSIM_ERR_GRAPH = 3,
  STREAMSIM_ERR_CYCLE = 4,
  STREAMSIM_ERR_CONFIG = 5,
  STREAMSIM_ERR_CALIBRATION = 6,
  STREAMSIM_ERR_TUNING = 7,
  STREAMSIM_ERR_UNDEFINED_CROSSOVER = 8,
  STREAMSIM_ERR_IO = 9,
  STREAMSIM_ERR_INTERNAL = 10
} streamsim_status;

typedef enum streamsim_action_kind {
  STREAMSIM_ACTION_H2D = 0,
  STREAMSIM_ACTION_EXE = 1,
  STREAMSIM_ACTION_D2H = 2,
  STREAMSIM_ACTION_ALLOC = 3,
  STREAMSIM_ACTION_SYNC = 4
} streamsim_action_kind;

typedef struct streamsim_config streamsim_config;     /* experiment description */
typedef struct streamsim_graph streamsim_graph;       /* stream flow graph */
typedef struct streamsim_timeline streamsim_timeline; /* simulation result */
typedef struct streamsim_tuning streamsim_tuning;     /* autotuner result */

typedef struct streamsim_timeline_entry {
  int action_id;
  streamsim_action_kind kind;
  int stream;
  int resource; /* index into the timeline's resource names; -1 when none is held */
  double start_s;
  double end_s;
} streamsim_timeline_entry;

STREAMSIM_API const char* streamsim_version(void);
STREAMSIM_API const char* streamsim_status_name(streamsim_status status);
/* Message for the most recent failure on this thread; empty when none. */
STREAMSIM_API const char* streamsim_last_error(void);
STREAMSIM_API void streamsim_string_free(char* s);

/* Configuration text: flat key = value lines under [section] headers. */
STREAMSIM_API streamsim_status streamsim_config_parse(const char* text, streamsim_config** out);
STREAMSIM_API streamsim_status streamsim_config_parse_file(const char* path,
                                                           streamsim_config** out);
/* Canonical text form; parsing it reproduces the config. Free with
 * streamsim_string_free. */
STREAMSIM_API streamsim_status streamsim_config_serialize(const streamsim_config* config,
                                                          char** out);
STREAMSIM_API void streamsim_config_free(streamsim_config* config);

/* Device model queries against the config's device and link blocks. */
STREAMSIM_API streamsim_status streamsim_usable_threads(const streamsim_config* config, int* out);
/* Writes up to `capacity` counts and always stores the full size; call with
 * capacity 0 to size a buffer. */
STREAMSIM_API streamsim_status streamsim_aligned_partition_counts(const streamsim_config* config,
                                                                  int* counts, size_t capacity,
                                                                  size_t* out_size);
/* Thread counts per partition for an even core-contiguous split. */
STREAMSIM_API streamsim_status streamsim_partition_sizes(const streamsim_config* config,
                                                         int partitions, int* sizes,
                                                         size_t capacity, size_t* out_size,
                                                         int* out_aligned);
STREAMSIM_API streamsim_status streamsim_transfer_time(const streamsim_config* config,
                                                       double bytes, double* out_seconds);
STREAMSIM_API streamsim_status streamsim_kernel_time(const streamsim_config* config, double work,
                                                     int threads, int streams_sharing,
                                                     double* out_seconds);
/* Smallest iteration count at which the kernel pass over `elements` costs
 * at least a round trip of `bytes_each_way` in both directions. */
STREAMSIM_API streamsim_status streamsim_crossover_iterations(const streamsim_config* config,
                                                              double bytes_each_way,
                                                              double elements,
                                                              long long* out_iterations);

/* Graphs. Build from the config's workload block, or assemble by hand. */
STREAMSIM_API streamsim_status streamsim_graph_build(const streamsim_config* config,
                                                     streamsim_graph** out);
STREAMSIM_API streamsim_status streamsim_graph_create(int stream_count, streamsim_graph** out);
/* Dependencies are ids of earlier actions. Returns the new action's id. */
STREAMSIM_API streamsim_status streamsim_graph_add_action(streamsim_graph* graph,
                                                          streamsim_action_kind kind,
                                                          double payload, int stream,
                                                          const int* deps, size_t dep_count,
                                                          int* out_id);
STREAMSIM_API streamsim_status streamsim_graph_validate(const streamsim_graph* graph);
STREAMSIM_API streamsim_status streamsim_graph_action_count(const streamsim_graph* graph,
                                                            size_t* out);
/* 1 when some transfer can run concurrently with compute from another
 * stream, 0 otherwise. */
STREAMSIM_API streamsim_status streamsim_graph_overlappable(const streamsim_graph* graph,
                                                            int* out);
STREAMSIM_API streamsim_status streamsim_graph_serialize(const streamsim_graph* graph, char** out);
STREAMSIM_API void streamsim_graph_free(streamsim_graph* graph);

/* Simulation. Partition count comes from the config's command block, the
 * stream layout from the graph. */
STREAMSIM_API streamsim_status streamsim_simulate(const streamsim_config* config,
                                                  const streamsim_graph* graph,
                                                  streamsim_timeline** out);
STREAMSIM_API streamsim_status streamsim_lower_bound(const streamsim_config* config,
                                                     const streamsim_graph* graph,
                                                     double* out_seconds);
STREAMSIM_API streamsim_status streamsim_timeline_makespan(const streamsim_timeline* timeline,
                                                           double* out_seconds);
STREAMSIM_API streamsim_status streamsim_timeline_entry_count(const streamsim_timeline* timeline,
                                                              size_t* out);
STREAMSIM_API streamsim_status streamsim_timeline_get_entry(const streamsim_timeline* timeline,
                                                            size_t index,
                                                            streamsim_timeline_entry* out);
/* Pointer stays valid while the timeline lives. */
STREAMSIM_API streamsim_status streamsim_timeline_resource_name(
    const streamsim_timeline* timeline, int resource, const char** out);
STREAMSIM_API streamsim_status streamsim_timeline_csv(const streamsim_timeline* timeline,
                                                      char** out);
STREAMSIM_API void streamsim_timeline_free(streamsim_timeline* timeline);

/* Autotuning over (partitions, tiles) for the config's workload. */
STREAMSIM_API streamsim_status streamsim_tune(const streamsim_config* config,
                                              streamsim_tuning** out);
STREAMSIM_API streamsim_status streamsim_tuning_best(const streamsim_tuning* tuning,
                                                     int* out_partitions, long long* out_tiles,
                                                     double* out_makespan_s);
STREAMSIM_API streamsim_status streamsim_tuning_row_count(const streamsim_tuning* tuning,
                                                          size_t* out);
STREAMSIM_API streamsim_status streamsim_tuning_row(const streamsim_tuning* tuning, size_t index,
                                                    int* out_partitions, long long* out_tiles,
                                                    double* out_makespan_s);
STREAMSIM_API streamsim_status streamsim_tuning_space(const streamsim_tuning* tuning,
                                                      long long* out_pruned, long long* out_full);
STREAMSIM_API streamsim_status streamsim_tuning_csv(const streamsim_tuning* tuning, char** out);
STREAMSIM_API void streamsim_tuning_free(streamsim_tuning* tuning);

/* Runs the config's command end to end and writes its CSV under the output
 * path. `command` overrides the config's command when non-NULL (one of
 * "calibrate", "simulate", "sweep", "tune", "report"); `out_dir` overrides
 * the output path when non-NULL; `heuristics` is -1 to keep, 0 off, 1 on;
 * `seed` is kept when negative. The call itself succeeds even when the run
 * fails: *out_exit_code holds 0 on success, 1 for a parse problem, 2 for
 * I/O, 3 for an invalid experiment, with the message in
 * streamsim_last_error. */
STREAMSIM_API streamsim_status streamsim_run(const streamsim_config* config, const char* command,
                                             const char* out_dir, int heuristics, long long seed,
                                             int* out_exit_code);

#ifdef __cplusplus
}
#endif

#endif /* STREAMSIM_H */
