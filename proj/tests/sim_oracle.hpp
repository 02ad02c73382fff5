// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <string>
#include <vector>

#include "engine.hpp"
#include "flow_graph.hpp"

namespace streamsim::testing {

// Reference simulation, written independently of the event engine. Walks a
// quantized clock (step = 1e-6 x the shortest nonzero duration), and at each
// review point scans every unstarted action, committing the one with the
// earliest exact feasible instant. Costs, partition sizes, sharing counts,
// and resource keys are all recomputed here from first principles.
struct OracleResult {
  std::vector<double> start;
  std::vector<double> end;
  double makespan = 0.0;
  double dt = 0.0;
  long long review_points = 0;
};

OracleResult oracle_simulate(const FlowGraph& graph, const SimConfig& config);

// Independent duration model; mirrors the documented cost formulas.
double oracle_duration(const FlowGraph& graph, const SimConfig& config, int action_id);

// Checks a produced timeline against the graph and config: one entry per
// action, durations from the cost model, dependency and FIFO ordering,
// exclusive resources, zero-cost syncs, makespan. Returns human-readable
// violations; empty means legal.
std::vector<std::string> check_legality(const FlowGraph& graph, const SimConfig& config,
                                        const Timeline& timeline);

struct RandomCase {
  FlowGraph graph;
  SimConfig config;
};

// Small random DAG plus a random machine. Payloads are continuous and
// strictly positive for every resource-holding action, so event-time ties
// across distinct resources have measure zero.
RandomCase random_case(std::mt19937& rng);

}  // namespace streamsim::testing
