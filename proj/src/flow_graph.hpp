// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "error.hpp"

namespace streamsim {

enum class ActionKind { H2D, EXE, D2H, Alloc, Sync };

const char* to_string(ActionKind kind);

// Whether the dependency allows the connected stages to pipeline across
// data blocks. Annotation only: the scheduler treats every edge as a hard
// precedence constraint.
enum class EdgeKind { Sync, Async };

struct Action {
  int id = -1;
  ActionKind kind = ActionKind::Sync;
  // Bytes for transfers, element-iterations for EXE, event count for ALLOC,
  // zero for SYNC.
  double payload = 0.0;
  int stream = 0;
  std::vector<int> deps;
  std::vector<EdgeKind> dep_kinds;  // parallel to deps
  int fifo_prev = -1;               // implicit in-stream predecessor
};

class FlowGraph {
 public:
  explicit FlowGraph(int stream_count);

  // Rebuilds FIFO chains from action order; dependency ids are taken as-is
  // and checked by validate(), so cyclic inputs can be represented.
  static FlowGraph from_actions(std::vector<Action> actions, int stream_count);

  int add_action(ActionKind kind, double payload, int stream,
                 const std::vector<int>& deps = {}, EdgeKind dep_kind = EdgeKind::Sync);
  int add_action(ActionKind kind, double payload, int stream,
                 const std::vector<int>& deps, const std::vector<EdgeKind>& dep_kinds);

  void validate() const;

  int stream_count() const { return stream_count_; }
  int size() const { return static_cast<int>(actions_.size()); }
  const Action& action(int id) const { return actions_.at(id); }
  const std::vector<Action>& actions() const { return actions_; }

  // One action per line: id, kind, payload, stream, dep list.
  std::string serialize() const;

 private:
  std::vector<Action> actions_;
  std::vector<int> stream_tail_;
  int stream_count_ = 0;
};

// Task i goes to stream i mod stream_count.
std::vector<int> round_robin_assign(int task_count, int stream_count);

// True when some transfer and some EXE on a different stream have no
// ordering path between them, so temporal overlap is reachable.
bool classify_overlappable(const FlowGraph& graph);

}  // namespace streamsim
