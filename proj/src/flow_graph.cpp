// SPDX-License-Identifier: Apache-2.0
#include "flow_graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "text_util.hpp"

namespace streamsim {

const char* to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::H2D: return "H2D";
    case ActionKind::EXE: return "EXE";
    case ActionKind::D2H: return "D2H";
    case ActionKind::Alloc: return "ALLOC";
    case ActionKind::Sync: return "SYNC";
  }
  return "?";
}

FlowGraph::FlowGraph(int stream_count) : stream_count_(stream_count) {
  if (stream_count < 1) fail(ErrorCode::GraphConstruction, "stream count must be positive");
  stream_tail_.assign(stream_count, -1);
}

FlowGraph FlowGraph::from_actions(std::vector<Action> actions, int stream_count) {
  FlowGraph g(stream_count);
  for (size_t i = 0; i < actions.size(); ++i) {
    Action a = std::move(actions[i]);
    a.id = static_cast<int>(i);
    if (a.stream < 0 || a.stream >= stream_count)
      fail(ErrorCode::GraphConstruction, "action stream out of range");
    if (a.dep_kinds.size() != a.deps.size())
      a.dep_kinds.assign(a.deps.size(), EdgeKind::Sync);
    a.fifo_prev = g.stream_tail_[a.stream];
    g.stream_tail_[a.stream] = a.id;
    g.actions_.push_back(std::move(a));
  }
  return g;
}

static void check_payload(ActionKind kind, double payload) {
  if (payload < 0.0) fail(ErrorCode::GraphConstruction, "action payload must be non-negative");
  if (kind == ActionKind::Sync && payload != 0.0)
    fail(ErrorCode::GraphConstruction, "SYNC carries no payload");
}

int FlowGraph::add_action(ActionKind kind, double payload, int stream,
                          const std::vector<int>& deps, EdgeKind dep_kind) {
  return add_action(kind, payload, stream, deps,
                    std::vector<EdgeKind>(deps.size(), dep_kind));
}

int FlowGraph::add_action(ActionKind kind, double payload, int stream,
                          const std::vector<int>& deps,
                          const std::vector<EdgeKind>& dep_kinds) {
  check_payload(kind, payload);
  if (stream < 0 || stream >= stream_count_)
    fail(ErrorCode::GraphConstruction, "action stream out of range");
  if (dep_kinds.size() != deps.size())
    fail(ErrorCode::GraphConstruction, "dep kind list length mismatch");

  Action a;
  a.id = static_cast<int>(actions_.size());
  a.kind = kind;
  a.payload = payload;
  a.stream = stream;
  for (size_t i = 0; i < deps.size(); ++i) {
    const int d = deps[i];
    if (d < 0 || d >= a.id) {
      std::ostringstream os;
      os << "dependency on unknown action " << d;
      fail(ErrorCode::GraphConstruction, os.str());
    }
    if (std::find(a.deps.begin(), a.deps.end(), d) != a.deps.end()) continue;
    a.deps.push_back(d);
    a.dep_kinds.push_back(dep_kinds[i]);
  }
  a.fifo_prev = stream_tail_[stream];
  stream_tail_[stream] = a.id;
  actions_.push_back(std::move(a));
  return actions_.back().id;
}

void FlowGraph::validate() const {
  const int n = size();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> succ(n);

  for (const Action& a : actions_) {
    check_payload(a.kind, a.payload);
    if (a.stream < 0 || a.stream >= stream_count_)
      fail(ErrorCode::GraphConstruction, "action stream out of range");
    for (int d : a.deps) {
      if (d < 0 || d >= n) fail(ErrorCode::GraphConstruction, "dependency on unknown action");
      if (d == a.id) fail(ErrorCode::Cycle, "action depends on itself");
      succ[d].push_back(a.id);
      ++indeg[a.id];
    }
    if (a.fifo_prev >= 0) {
      succ[a.fifo_prev].push_back(a.id);
      ++indeg[a.id];
    }
  }

  std::deque<int> q;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) q.push_back(i);
  int seen = 0;
  while (!q.empty()) {
    const int a = q.front();
    q.pop_front();
    ++seen;
    for (int s : succ[a])
      if (--indeg[s] == 0) q.push_back(s);
  }
  if (seen != n) {
    std::ostringstream os;
    os << "dependency cycle involving actions:";
    int shown = 0;
    for (int i = 0; i < n && shown < 8; ++i) {
      if (indeg[i] > 0) {
        os << " " << i;
        ++shown;
      }
    }
    fail(ErrorCode::Cycle, os.str());
  }
}

std::string FlowGraph::serialize() const {
  std::ostringstream os;
  for (const Action& a : actions_) {
    os << a.id << " " << to_string(a.kind) << " " << format_g(a.payload, 17) << " "
       << a.stream << " ";
    if (a.deps.empty()) {
      os << "-";
    } else {
      for (size_t i = 0; i < a.deps.size(); ++i) {
        if (i) os << ",";
        os << a.deps[i];
      }
    }
    os << "\n";
  }
  return os.str();
}

std::vector<int> round_robin_assign(int task_count, int stream_count) {
  if (stream_count < 1) fail(ErrorCode::InvalidArgument, "stream count must be positive");
  if (task_count < 0) fail(ErrorCode::InvalidArgument, "task count must be non-negative");
  std::vector<int> assignment(task_count);
  for (int i = 0; i < task_count; ++i) assignment[i] = i % stream_count;
  return assignment;
}

namespace {

// Forward/backward reachability from one action over deps + FIFO edges.
void mark_reachable(const std::vector<std::vector<int>>& adj, int from, std::vector<char>& seen) {
  std::fill(seen.begin(), seen.end(), 0);
  std::deque<int> q{from};
  seen[from] = 1;
  while (!q.empty()) {
    const int a = q.front();
    q.pop_front();
    for (int s : adj[a]) {
      if (!seen[s]) {
        seen[s] = 1;
        q.push_back(s);
      }
    }
  }
}

}  // namespace

bool classify_overlappable(const FlowGraph& graph) {
  graph.validate();
  const int n = graph.size();

  std::vector<int> exes;
  std::vector<int> transfers;
  for (const Action& a : graph.actions()) {
    if (a.kind == ActionKind::EXE) exes.push_back(a.id);
    if (a.kind == ActionKind::H2D || a.kind == ActionKind::D2H) transfers.push_back(a.id);
  }
  if (exes.empty() || transfers.empty()) return false;

  std::vector<std::vector<int>> fwd(n), bwd(n);
  for (const Action& a : graph.actions()) {
    for (int d : a.deps) {
      fwd[d].push_back(a.id);
      bwd[a.id].push_back(d);
    }
    if (a.fifo_prev >= 0) {
      fwd[a.fifo_prev].push_back(a.id);
      bwd[a.id].push_back(a.fifo_prev);
    }
  }

  std::vector<char> below(n), above(n);
  for (int t : transfers) {
    const int t_stream = graph.action(t).stream;
    mark_reachable(fwd, t, below);
    mark_reachable(bwd, t, above);
    for (int e : exes) {
      if (graph.action(e).stream == t_stream) continue;
      if (!below[e] && !above[e]) return true;
    }
  }
  return false;
}

}  // namespace streamsim
