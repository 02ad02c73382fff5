// SPDX-License-Identifier: Apache-2.0
#include "engine.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

#include "text_util.hpp"

namespace streamsim {

SimConfig SimConfig::standard(const DeviceSpec& dev, const LinkSpec& link,
                              int partition_count, int stream_count,
                              double cross_device_sync_overhead) {
  SimConfig cfg;
  cfg.device = dev;
  cfg.link = link;
  cfg.partitioning = make_partitioning(dev, partition_count);
  cfg.cross_device_sync_overhead = cross_device_sync_overhead;
  for (int s = 0; s < stream_count; ++s) {
    cfg.stream_to_device.push_back(s % dev.device_count);
    cfg.stream_to_partition.push_back((s / dev.device_count) % partition_count);
  }
  return cfg;
}

void SimConfig::validate(int stream_count_needed) const {
  device.validate();
  link.validate();
  if (partitioning.partition_count < 1 ||
      partitioning.partition_count != static_cast<int>(partitioning.thread_assignment.size()))
    fail(ErrorCode::Config, "partitioning is empty or inconsistent");
  if (stream_to_partition.size() != stream_to_device.size())
    fail(ErrorCode::Config, "stream maps differ in length");
  if (static_cast<int>(stream_to_partition.size()) < stream_count_needed)
    fail(ErrorCode::Config, "graph uses a stream with no partition/device mapping");
  for (int p : stream_to_partition)
    if (p < 0 || p >= partitioning.partition_count)
      fail(ErrorCode::Config, "stream mapped to a partition that does not exist");
  for (int d : stream_to_device)
    if (d < 0 || d >= device.device_count)
      fail(ErrorCode::Config, "stream mapped to a device that does not exist");
  if (cross_device_sync_overhead < 0.0)
    fail(ErrorCode::Config, "cross-device sync overhead must be non-negative");
}

namespace {

struct ResourceTable {
  std::vector<std::string> names;
  std::vector<int> h2d_engine;  // per device, -1 when transfers do not contend
  std::vector<int> d2h_engine;
  std::vector<int> partition_base;  // per device

  int count() const { return static_cast<int>(names.size()); }
};

ResourceTable build_resources(const SimConfig& cfg) {
  ResourceTable table;
  const int devices = cfg.device.device_count;
  for (int d = 0; d < devices; ++d) {
    const std::string prefix = "dev" + std::to_string(d);
    switch (cfg.link.mode) {
      case LinkMode::Serialized: {
        const int id = table.count();
        table.names.push_back(prefix + ".link");
        table.h2d_engine.push_back(id);
        table.d2h_engine.push_back(id);
        break;
      }
      case LinkMode::DuplexEngines: {
        table.h2d_engine.push_back(table.count());
        table.names.push_back(prefix + ".h2d");
        table.d2h_engine.push_back(table.count());
        table.names.push_back(prefix + ".d2h");
        break;
      }
      case LinkMode::IdealUnlimited:
        table.h2d_engine.push_back(-1);
        table.d2h_engine.push_back(-1);
        break;
    }
  }
  for (int d = 0; d < devices; ++d) {
    table.partition_base.push_back(table.count());
    for (int p = 0; p < cfg.partitioning.partition_count; ++p)
      table.names.push_back("dev" + std::to_string(d) + ".p" + std::to_string(p));
  }
  return table;
}

struct ActionPlan {
  double duration = 0.0;
  int resource = -1;
  int device = 0;
};

std::vector<ActionPlan> plan_actions(const FlowGraph& graph, const SimConfig& cfg,
                                     const ResourceTable& table) {
  // Streams sharing each (device, partition) slot; drives the per-launch
  // stream overhead term.
  std::vector<std::vector<int>> sharing(cfg.device.device_count,
                                        std::vector<int>(cfg.partitioning.partition_count, 0));
  for (size_t s = 0; s < cfg.stream_to_partition.size(); ++s)
    ++sharing[cfg.stream_to_device[s]][cfg.stream_to_partition[s]];

  std::vector<ActionPlan> plans(graph.size());
  for (const Action& a : graph.actions()) {
    ActionPlan& plan = plans[a.id];
    const int dev = cfg.stream_to_device[a.stream];
    const int part = cfg.stream_to_partition[a.stream];
    plan.device = dev;
    switch (a.kind) {
      case ActionKind::H2D:
        plan.duration = transfer_time(cfg.link, a.payload);
        plan.resource = table.h2d_engine[dev];
        break;
      case ActionKind::D2H:
        plan.duration = transfer_time(cfg.link, a.payload);
        plan.resource = table.d2h_engine[dev];
        break;
      case ActionKind::EXE:
        plan.duration = kernel_time(cfg.device, a.payload, cfg.partitioning.threads_in(part),
                                    std::max(1, sharing[dev][part]));
        plan.resource = table.partition_base[dev] + part;
        break;
      case ActionKind::Alloc:
        plan.duration = alloc_time(cfg.device, cfg.partitioning.threads_in(part), a.payload);
        plan.resource = table.partition_base[dev] + part;
        break;
      case ActionKind::Sync:
        plan.duration = 0.0;
        plan.resource = -1;
        break;
    }
  }
  return plans;
}

}  // namespace

Timeline simulate(const FlowGraph& graph, const SimConfig& cfg) {
  graph.validate();
  cfg.validate(graph.stream_count());

  const ResourceTable table = build_resources(cfg);
  const std::vector<ActionPlan> plans = plan_actions(graph, cfg, table);
  const int n = graph.size();

  // Successor lists carry the cross-device flag so the sync penalty is
  // applied per edge.
  std::vector<std::vector<std::pair<int, bool>>> succ(n);
  std::vector<int> indeg(n, 0);
  for (const Action& a : graph.actions()) {
    for (int d : a.deps) {
      const bool crossing = plans[d].device != plans[a.id].device;
      succ[d].push_back({a.id, crossing});
      ++indeg[a.id];
    }
    if (a.fifo_prev >= 0) {
      succ[a.fifo_prev].push_back({a.id, false});
      ++indeg[a.id];
    }
  }

  enum class EvKind { Completion, Ready };
  struct Ev {
    double t;
    long seq;
    EvKind kind;
    int action;
  };
  struct EvLater {
    bool operator()(const Ev& a, const Ev& b) const {
      return a.t > b.t || (a.t == b.t && a.seq > b.seq);
    }
  };
  std::priority_queue<Ev, std::vector<Ev>, EvLater> events;
  long seq = 0;

  std::vector<double> ready_time(n, 0.0);
  std::vector<double> start(n, 0.0), end(n, 0.0);
  std::vector<char> scheduled(n, 0);

  using Waiter = std::tuple<double, int, int>;  // (ready, stream, id)
  std::vector<std::set<Waiter>> waiting(table.count());
  std::vector<double> free_at(table.count(), 0.0);
  std::vector<double> busy(table.count(), 0.0);

  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) events.push({0.0, seq++, EvKind::Ready, i});

  auto start_action = [&](int a, double t) {
    start[a] = t;
    end[a] = t + plans[a].duration;
    scheduled[a] = 1;
    if (plans[a].resource >= 0) {
      busy[plans[a].resource] += plans[a].duration;
      free_at[plans[a].resource] = end[a];
    }
    events.push({end[a], seq++, EvKind::Completion, a});
  };

  std::vector<int> touched;
  while (!events.empty()) {
    const double t = events.top().t;
    for (;;) {
      while (!events.empty() && events.top().t <= t) {
        const Ev ev = events.top();
        events.pop();
        if (ev.kind == EvKind::Completion) {
          const int a = ev.action;
          if (plans[a].resource >= 0) touched.push_back(plans[a].resource);
          for (const auto& [s, crossing] : succ[a]) {
            const double arrival = end[a] + (crossing ? cfg.cross_device_sync_overhead : 0.0);
            ready_time[s] = std::max(ready_time[s], arrival);
            if (--indeg[s] == 0) events.push({ready_time[s], seq++, EvKind::Ready, s});
          }
        } else {
          const int a = ev.action;
          if (plans[a].resource < 0) {
            start_action(a, ready_time[a]);
          } else {
            waiting[plans[a].resource].insert({ready_time[a], graph.action(a).stream, a});
            touched.push_back(plans[a].resource);
          }
        }
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (int r : touched) {
        while (free_at[r] <= t && !waiting[r].empty()) {
          const Waiter w = *waiting[r].begin();
          waiting[r].erase(waiting[r].begin());
          start_action(std::get<2>(w), t);
        }
      }
      touched.clear();
      if (events.empty() || events.top().t > t) break;
    }
  }

  for (int i = 0; i < n; ++i) {
    if (!scheduled[i]) fail(ErrorCode::Config, "scheduler stalled; graph left unscheduled actions");
  }

  Timeline tl;
  tl.resource_names = table.names;
  tl.busy = busy;
  for (const Action& a : graph.actions()) {
    TimelineEntry e;
    e.action_id = a.id;
    e.kind = a.kind;
    e.stream = a.stream;
    e.resource = plans[a.id].resource;
    e.start = start[a.id];
    e.end = end[a.id];
    tl.entries.push_back(e);
    tl.makespan = std::max(tl.makespan, e.end);
  }
  return tl;
}

double makespan(const Timeline& timeline) { return timeline.makespan; }

double lower_bound(const FlowGraph& graph, const SimConfig& cfg) {
  graph.validate();
  cfg.validate(graph.stream_count());

  const ResourceTable table = build_resources(cfg);
  const std::vector<ActionPlan> plans = plan_actions(graph, cfg, table);
  const int n = graph.size();

  std::vector<std::vector<std::pair<int, bool>>> succ(n);
  std::vector<int> indeg(n, 0);
  for (const Action& a : graph.actions()) {
    for (int d : a.deps) {
      succ[d].push_back({a.id, plans[d].device != plans[a.id].device});
      ++indeg[a.id];
    }
    if (a.fifo_prev >= 0) {
      succ[a.fifo_prev].push_back({a.id, false});
      ++indeg[a.id];
    }
  }

  double best = 0.0;
  std::vector<double> path_end(n, 0.0);
  std::deque<int> q;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) q.push_back(i);
  while (!q.empty()) {
    const int a = q.front();
    q.pop_front();
    path_end[a] += plans[a].duration;
    best = std::max(best, path_end[a]);
    for (const auto& [s, crossing] : succ[a]) {
      const double arrival = path_end[a] + (crossing ? cfg.cross_device_sync_overhead : 0.0);
      path_end[s] = std::max(path_end[s], arrival);
      if (--indeg[s] == 0) q.push_back(s);
    }
  }

  std::vector<double> demand(table.count(), 0.0);
  for (int i = 0; i < n; ++i)
    if (plans[i].resource >= 0) demand[plans[i].resource] += plans[i].duration;
  for (double d : demand) best = std::max(best, d);
  return best;
}

std::vector<double> utilization(const Timeline& tl) {
  std::vector<double> u(tl.busy.size(), 0.0);
  if (tl.makespan <= 0.0) return u;
  for (size_t i = 0; i < tl.busy.size(); ++i)
    u[i] = std::min(1.0, tl.busy[i] / tl.makespan);
  return u;
}

std::string timeline_csv(const Timeline& tl) {
  std::ostringstream os;
  os << "action_id,kind,stream,resource,start_s,end_s\n";
  for (const TimelineEntry& e : tl.entries) {
    os << e.action_id << "," << to_string(e.kind) << "," << e.stream << ","
       << (e.resource >= 0 ? tl.resource_names[e.resource] : "-") << ","
       << format_g(e.start, 9) << "," << format_g(e.end, 9) << "\n";
  }
  return os.str();
}

}  // namespace streamsim
