// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace streamsim {

const char* to_string(Command c) {
  switch (c) {
    case Command::Calibrate: return "calibrate";
    case Command::Simulate: return "simulate";
    case Command::Sweep: return "sweep";
    case Command::Tune: return "tune";
    case Command::Report: return "report";
  }
  return "?";
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Partitions: return "partitions";
    case SweepAxis::Tiles: return "tiles";
    case SweepAxis::Blocks: return "blocks";
    case SweepAxis::Iterations: return "iterations";
  }
  return "?";
}

const char* to_string(LinkMode m) {
  switch (m) {
    case LinkMode::Serialized: return "serialized";
    case LinkMode::DuplexEngines: return "duplex";
    case LinkMode::IdealUnlimited: return "ideal";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "config line " << line << ": " << msg;
  fail(ErrorCode::Parse, os.str());
}

double need_double(const std::string& v, int line, const std::string& key) {
  char* endp = nullptr;
  const double out = std::strtod(v.c_str(), &endp);
  if (endp == v.c_str() || trim(endp) != "")
    parse_fail(line, "bad number '" + v + "' for key '" + key + "'");
  return out;
}

long long need_ll(const std::string& v, int line, const std::string& key) {
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    parse_fail(line, "bad integer '" + v + "' for key '" + key + "'");
  return out;
}

int need_int(const std::string& v, int line, const std::string& key) {
  const long long ll = need_ll(v, line, key);
  if (ll < -2147483648LL || ll > 2147483647LL) parse_fail(line, "integer out of range for '" + key + "'");
  return static_cast<int>(ll);
}

bool need_on_off(const std::string& v, int line, const std::string& key) {
  if (v == "on") return true;
  if (v == "off") return false;
  parse_fail(line, "key '" + key + "' expects on|off");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::string section;
  std::istringstream is(text);
  std::string raw;
  int line = 0;

  while (std::getline(is, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') parse_fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "device" && section != "link" && section != "workload" &&
          section != "command" && section != "calibrate" && section != "output")
        parse_fail(line, "unknown section [" + section + "]");
      continue;
    }

    const size_t eq = s.find('=');
    if (eq == std::string::npos) parse_fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) parse_fail(line, "empty key");
    if (section.empty()) parse_fail(line, "key '" + key + "' appears before any section");

    if (section == "device") {
      if (key == "total_cores") cfg.device.total_cores = need_int(value, line, key);
      else if (key == "reserved_cores") cfg.device.reserved_cores = need_int(value, line, key);
      else if (key == "threads_per_core") cfg.device.threads_per_core = need_int(value, line, key);
      else if (key == "per_thread_rate") cfg.device.per_thread_rate = need_double(value, line, key);
      else if (key == "kernel_launch_overhead") cfg.device.kernel_launch_overhead = need_double(value, line, key);
      else if (key == "per_stream_overhead") cfg.device.per_stream_overhead = need_double(value, line, key);
      else if (key == "alloc_cost_per_thread") cfg.device.alloc_cost_per_thread = need_double(value, line, key);
      else if (key == "device_count") cfg.device.device_count = need_int(value, line, key);
      else if (key == "cross_device_sync") cfg.cross_device_sync = need_double(value, line, key);
      else parse_fail(line, "unknown key '" + key + "' in [device]");
    } else if (section == "link") {
      if (key == "bandwidth") cfg.link.bandwidth = need_double(value, line, key);
      else if (key == "latency") cfg.link.latency = need_double(value, line, key);
      else if (key == "mode") {
        if (value == "serialized") cfg.link.mode = LinkMode::Serialized;
        else if (value == "duplex") cfg.link.mode = LinkMode::DuplexEngines;
        else if (value == "ideal") cfg.link.mode = LinkMode::IdealUnlimited;
        else parse_fail(line, "unknown link mode '" + value + "' (serialized|duplex|ideal)");
      } else parse_fail(line, "unknown key '" + key + "' in [link]");
    } else if (section == "workload") {
      if (key == "name") {
        try {
          cfg.workload.name = benchmark_from_string(value);
        } catch (const Error& e) {
          parse_fail(line, e.what());
        }
      }
      else if (key == "d") cfg.workload.d = need_ll(value, line, key);
      else if (key == "tile") cfg.workload.tile = need_ll(value, line, key);
      else if (key == "iterations") cfg.workload.iterations = need_int(value, line, key);
      else if (key == "element_size") cfg.workload.element_size = need_int(value, line, key);
      else if (key == "flops_per_element") cfg.workload.flops_per_element = need_double(value, line, key);
      else if (key == "max_tiles") cfg.workload.max_tiles = need_ll(value, line, key);
      else if (key == "s") cfg.workload.streams = need_int(value, line, key);
      else if (key == "hd") cfg.workload.hd_blocks = need_ll(value, line, key);
      else if (key == "dh") cfg.workload.dh_blocks = need_ll(value, line, key);
      else if (key == "block_bytes") cfg.workload.block_bytes = need_double(value, line, key);
      else if (key == "tiles") cfg.workload.hbench_tiles = need_ll(value, line, key);
      else parse_fail(line, "unknown key '" + key + "' in [workload]");
    } else if (section == "command") {
      if (key == "run") {
        if (value == "calibrate") cfg.command.run = Command::Calibrate;
        else if (value == "simulate") cfg.command.run = Command::Simulate;
        else if (value == "sweep") cfg.command.run = Command::Sweep;
        else if (value == "tune") cfg.command.run = Command::Tune;
        else if (value == "report") cfg.command.run = Command::Report;
        else parse_fail(line, "unknown command '" + value + "'");
      } else if (key == "axis") {
        if (value == "partitions") cfg.command.axis = SweepAxis::Partitions;
        else if (value == "tiles") cfg.command.axis = SweepAxis::Tiles;
        else if (value == "blocks") cfg.command.axis = SweepAxis::Blocks;
        else if (value == "iterations") cfg.command.axis = SweepAxis::Iterations;
        else parse_fail(line, "unknown sweep axis '" + value + "'");
      }
      else if (key == "range") cfg.command.range_spec = value;
      else if (key == "partitions") cfg.command.partitions = need_int(value, line, key);
      else if (key == "heuristics") cfg.command.heuristics = need_on_off(value, line, key);
      else if (key == "m_max") cfg.command.m_max = need_int(value, line, key);
      else if (key == "seed") cfg.command.seed = need_ll(value, line, key);
      else parse_fail(line, "unknown key '" + key + "' in [command]");
    } else if (section == "calibrate") {
      if (key == "fit") {
        CalibrationOptions opts;
        opts.fit_bandwidth = opts.fit_rate = false;
        for (const std::string& item : split(value, ',')) {
          if (item == "bandwidth") opts.fit_bandwidth = true;
          else if (item == "latency") opts.fit_latency = true;
          else if (item == "rate") opts.fit_rate = true;
          else if (item == "launch_overhead") opts.fit_launch_overhead = true;
          else if (item == "stream_overhead") opts.fit_stream_overhead = true;
          else parse_fail(line, "unknown fit parameter '" + item + "'");
        }
        cfg.calibrate.fit = opts;
      } else if (key == "transfer") {
        const auto f = split_ws(value);
        if (f.size() != 2) parse_fail(line, "transfer expects: bytes seconds");
        cfg.calibrate.samples.transfers.push_back(
            {need_double(f[0], line, key), need_double(f[1], line, key)});
      } else if (key == "kernel") {
        const auto f = split_ws(value);
        if (f.size() != 4) parse_fail(line, "kernel expects: work threads streams seconds");
        cfg.calibrate.samples.kernels.push_back({need_double(f[0], line, key),
                                                 need_int(f[1], line, key),
                                                 need_int(f[2], line, key),
                                                 need_double(f[3], line, key)});
      } else parse_fail(line, "unknown key '" + key + "' in [calibrate]");
    } else if (section == "output") {
      if (key == "path") cfg.output_path = value;
      else parse_fail(line, "unknown key '" + key + "' in [output]");
    }
  }

  // Block-level checks; everything below is still a config-text problem.
  try {
    cfg.device.validate();
    cfg.link.validate();
    if (cfg.cross_device_sync < 0.0)
      fail(ErrorCode::InvalidArgument, "cross_device_sync must be non-negative");
    if (cfg.workload.streams < 1) fail(ErrorCode::InvalidArgument, "s must be positive");
    if (cfg.workload.max_tiles < 1) fail(ErrorCode::InvalidArgument, "max_tiles must be positive");
    if (cfg.command.partitions < 1) fail(ErrorCode::InvalidArgument, "partitions must be positive");
    if (cfg.command.m_max < 1) fail(ErrorCode::InvalidArgument, "m_max must be positive");
    resolve_range(cfg);  // syntax + non-emptiness
  } catch (const Error& e) {
    fail(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::Io, "cannot read config file '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return parse_config(os.str());
}

std::vector<long long> resolve_range(const ExperimentConfig& cfg) {
  const std::string& spec = cfg.command.range_spec;
  const auto range_ll = [&spec](const std::string& v) {
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
      fail(ErrorCode::Parse, "bad value '" + v + "' in range '" + spec + "'");
    return out;
  };
  std::vector<long long> out;
  if (spec == "aligned" || spec == "heuristic") {
    for (int p : aligned_partition_counts(cfg.device)) {
      if (spec == "heuristic" && p == 1) continue;
      out.push_back(p);
    }
  } else if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 2 && parts.size() != 3)
      fail(ErrorCode::Parse, "range '" + spec + "' expects lo:hi[:step]");
    const long long lo = range_ll(parts[0]);
    const long long hi = range_ll(parts[1]);
    const long long step = parts.size() == 3 ? range_ll(parts[2]) : 1;
    if (step < 1) fail(ErrorCode::Parse, "range step must be positive");
    for (long long v = lo; v <= hi; v += step) out.push_back(v);
  } else {
    for (const std::string& item : split(spec, ','))
      if (!item.empty()) out.push_back(range_ll(item));
  }
  if (out.empty()) fail(ErrorCode::Parse, "sweep range '" + spec + "' is empty");
  return out;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  const auto num = [](double v) { return format_g(v, 17); };

  os << "[device]\n";
  os << "total_cores = " << cfg.device.total_cores << "\n";
  os << "reserved_cores = " << cfg.device.reserved_cores << "\n";
  os << "threads_per_core = " << cfg.device.threads_per_core << "\n";
  os << "per_thread_rate = " << num(cfg.device.per_thread_rate) << "\n";
  os << "kernel_launch_overhead = " << num(cfg.device.kernel_launch_overhead) << "\n";
  os << "per_stream_overhead = " << num(cfg.device.per_stream_overhead) << "\n";
  os << "alloc_cost_per_thread = " << num(cfg.device.alloc_cost_per_thread) << "\n";
  os << "device_count = " << cfg.device.device_count << "\n";
  os << "cross_device_sync = " << num(cfg.cross_device_sync) << "\n";

  os << "\n[link]\n";
  os << "bandwidth = " << num(cfg.link.bandwidth) << "\n";
  os << "latency = " << num(cfg.link.latency) << "\n";
  os << "mode = " << to_string(cfg.link.mode) << "\n";

  os << "\n[workload]\n";
  os << "name = " << to_string(cfg.workload.name) << "\n";
  os << "d = " << cfg.workload.d << "\n";
  os << "tile = " << cfg.workload.tile << "\n";
  os << "iterations = " << cfg.workload.iterations << "\n";
  os << "element_size = " << cfg.workload.element_size << "\n";
  os << "flops_per_element = " << num(cfg.workload.flops_per_element) << "\n";
  os << "max_tiles = " << cfg.workload.max_tiles << "\n";
  os << "s = " << cfg.workload.streams << "\n";
  os << "hd = " << cfg.workload.hd_blocks << "\n";
  os << "dh = " << cfg.workload.dh_blocks << "\n";
  os << "block_bytes = " << num(cfg.workload.block_bytes) << "\n";
  os << "tiles = " << cfg.workload.hbench_tiles << "\n";

  os << "\n[command]\n";
  os << "run = " << to_string(cfg.command.run) << "\n";
  os << "axis = " << to_string(cfg.command.axis) << "\n";
  os << "range = " << cfg.command.range_spec << "\n";
  os << "partitions = " << cfg.command.partitions << "\n";
  os << "heuristics = " << (cfg.command.heuristics ? "on" : "off") << "\n";
  os << "m_max = " << cfg.command.m_max << "\n";
  os << "seed = " << cfg.command.seed << "\n";

  os << "\n[calibrate]\n";
  std::string fit;
  const CalibrationOptions& f = cfg.calibrate.fit;
  const auto add_fit = [&fit](bool on, const char* name) {
    if (!on) return;
    if (!fit.empty()) fit += ",";
    fit += name;
  };
  add_fit(f.fit_bandwidth, "bandwidth");
  add_fit(f.fit_latency, "latency");
  add_fit(f.fit_rate, "rate");
  add_fit(f.fit_launch_overhead, "launch_overhead");
  add_fit(f.fit_stream_overhead, "stream_overhead");
  if (!fit.empty()) os << "fit = " << fit << "\n";
  for (const TransferSample& s : cfg.calibrate.samples.transfers)
    os << "transfer = " << num(s.bytes) << " " << num(s.seconds) << "\n";
  for (const KernelSample& s : cfg.calibrate.samples.kernels)
    os << "kernel = " << num(s.work) << " " << s.threads << " " << s.streams_sharing << " "
       << num(s.seconds) << "\n";

  os << "\n[output]\n";
  os << "path = " << cfg.output_path << "\n";
  return os.str();
}

}  // namespace streamsim
