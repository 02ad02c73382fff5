// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "experiments.hpp"

using namespace streamsim;
namespace fs = std::filesystem;

namespace {

void expect_parse_error(const std::string& text, const std::string& needle) {
  try {
    parse_config(text);
    FAIL("expected a parse error for: ", text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    INFO("message: ", e.what());
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

long long line_count(const std::string& s) {
  return std::count(s.begin(), s.end(), '\n');
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

fs::path fresh_tmp_dir(const char* tag) {
  const fs::path dir = fs::temp_directory_path() / (std::string("streamsim_cfg_") + tag);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("empty text parses to the reference setup") {
  CHECK(parse_config("") == ExperimentConfig{});
  CHECK(parse_config("# only a comment\n\n") == ExperimentConfig{});
}

TEST_CASE("every field round-trips through serialize and parse") {
  ExperimentConfig c;
  c.device.total_cores = 13;
  c.device.reserved_cores = 1;
  c.device.threads_per_core = 2;
  c.device.per_thread_rate = 3.5e8;
  c.device.kernel_launch_overhead = 1.25e-5;
  c.device.per_stream_overhead = 2e-5;
  c.device.alloc_cost_per_thread = 1e-6;
  c.device.device_count = 2;
  c.cross_device_sync = 1e-4;
  c.link.bandwidth = 5.5e9;
  c.link.latency = 1e-6;
  c.link.mode = LinkMode::DuplexEngines;
  c.workload.name = Benchmark::HBench;
  c.workload.d = 2048;
  c.workload.tile = 256;
  c.workload.iterations = 7;
  c.workload.element_size = 4;
  c.workload.flops_per_element = 2.5;
  c.workload.max_tiles = 32;
  c.workload.streams = 6;
  c.workload.hd_blocks = 12;
  c.workload.dh_blocks = 8;
  c.workload.block_bytes = 524288.0;
  c.workload.hbench_tiles = 12;
  c.command.run = Command::Sweep;
  c.command.axis = SweepAxis::Blocks;
  c.command.range_spec = "0:12:2";
  c.command.partitions = 6;
  c.command.heuristics = false;
  c.command.m_max = 8;
  c.command.seed = 42;
  c.calibrate.fit = {false, true, false, true, true};
  c.calibrate.samples.transfers = {{1048576.0, 0.001}, {2097152.0, 0.0015}};
  c.calibrate.samples.kernels = {{1e6, 4, 2, 0.005}};
  c.output_path = "results/run1";

  const std::string text = serialize_config(c);
  CHECK(parse_config(text) == c);
  CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("defaults survive a round trip and name the default fit") {
  const std::string text = serialize_config(ExperimentConfig{});
  CHECK(parse_config(text) == ExperimentConfig{});
  CHECK(text.find("fit = bandwidth,rate\n") != std::string::npos);
  CHECK(text.find("mode = serialized\n") != std::string::npos);
  CHECK(text.find("run = simulate\n") != std::string::npos);
}

TEST_CASE("messy spacing, comments, and CRLF all parse") {
  const std::string text =
      "# lead-in\r\n"
      "   [device]   # trailing words\r\n"
      "total_cores=29\r\n"
      "\r\n"
      "  reserved_cores =  1  # hold one back\r\n"
      "[workload]\r\n"
      "name = nn\r\n";
  const ExperimentConfig c = parse_config(text);
  CHECK(c.device.total_cores == 29);
  CHECK(c.device.reserved_cores == 1);
  CHECK(c.workload.name == Benchmark::NN);
}

TEST_CASE("parse errors carry the line number and the offense") {
  expect_parse_error("total_cores = 57\n", "config line 1: key 'total_cores' appears before any section");
  expect_parse_error("[device]\ntotal_cores = abc\n", "config line 2: bad integer 'abc' for key 'total_cores'");
  expect_parse_error("[device]\nper_thread_rate = 1e\n", "bad number '1e'");
  expect_parse_error("[device]\nbogus = 1\n", "unknown key 'bogus' in [device]");
  expect_parse_error("[gpu]\n", "config line 1: unknown section [gpu]");
  expect_parse_error("[device\n", "unterminated section header");
  expect_parse_error("[device]\ntotal_cores 57\n", "expected key = value");
  expect_parse_error("[device]\n= 5\n", "empty key");
  expect_parse_error("[device]\ntotal_cores = 3000000000\n", "integer out of range");
  expect_parse_error("[workload]\nname = sort\n", "unknown benchmark 'sort'");
  expect_parse_error("[workload]\nname = sort\n", "expected hbench, mm,");
  expect_parse_error("[link]\nmode = fast\n", "unknown link mode 'fast'");
  expect_parse_error("[command]\nrun = fly\n", "unknown command 'fly'");
  expect_parse_error("[command]\naxis = depth\n", "unknown sweep axis 'depth'");
  expect_parse_error("[command]\nheuristics = yes\n", "expects on|off");
  expect_parse_error("[calibrate]\ntransfer = 5\n", "transfer expects: bytes seconds");
  expect_parse_error("[calibrate]\nkernel = 1 2 3\n", "kernel expects: work threads streams seconds");
  expect_parse_error("[calibrate]\nfit = bandwidth,warp\n", "unknown fit parameter 'warp'");
}

TEST_CASE("block-level validation failures are also parse errors") {
  expect_parse_error("[device]\nreserved_cores = 57\n", "config: ");
  expect_parse_error("[device]\ncross_device_sync = -1\n", "cross_device_sync must be non-negative");
  expect_parse_error("[command]\npartitions = 0\n", "partitions must be positive");
  expect_parse_error("[command]\nm_max = 0\n", "m_max must be positive");
  expect_parse_error("[workload]\ns = 0\n", "s must be positive");
  expect_parse_error("[workload]\nmax_tiles = 0\n", "max_tiles must be positive");
  expect_parse_error("[command]\nrange = 4:2\n", "is empty");
}

TEST_CASE("sweep ranges cover keywords, spans, and lists") {
  ExperimentConfig c;
  const auto with_range = [&](const std::string& spec) {
    c.command.range_spec = spec;
    return resolve_range(c);
  };
  CHECK(with_range("aligned") == std::vector<long long>{1, 2, 4, 7, 8, 14, 28, 56});
  CHECK(with_range("heuristic") == std::vector<long long>{2, 4, 7, 8, 14, 28, 56});
  CHECK(with_range("4:16:4") == std::vector<long long>{4, 8, 12, 16});
  CHECK(with_range("2:5") == std::vector<long long>{2, 3, 4, 5});
  CHECK(with_range("1,5,9") == std::vector<long long>{1, 5, 9});
  CHECK(with_range("7") == std::vector<long long>{7});

  // Keywords expand against the configured device.
  c.device.total_cores = 13;
  c.device.reserved_cores = 1;
  c.device.threads_per_core = 2;
  CHECK(with_range("aligned") == std::vector<long long>{1, 2, 3, 4, 6, 12});

  c = ExperimentConfig{};
  for (const char* bad : {"4:16:0", "a:b", "1:2:3:4", "", "4,x"}) {
    c.command.range_spec = bad;
    CHECK_THROWS_AS(resolve_range(c), Error);
  }
}

TEST_CASE("command outputs have the advertised shapes") {
  ExperimentConfig c;  // mm 1200/100, reference card

  c.command.run = Command::Simulate;
  CommandOutput out = run_command(c);
  CHECK(out.filename == "timeline.csv");
  CHECK(out.csv.starts_with("action_id,kind,stream,resource,start_s,end_s\n"));
  CHECK(line_count(out.csv) == 1 + 432);

  c.command.run = Command::Sweep;
  c.command.axis = SweepAxis::Partitions;
  out = run_command(c);
  CHECK(out.filename == "sweep.csv");
  CHECK(out.csv.starts_with("P,T,makespan_ms\n"));
  CHECK(line_count(out.csv) == 1 + 8);

  c.command.run = Command::Report;
  out = run_command(c);
  CHECK(out.filename == "report.csv");
  CHECK(out.csv.starts_with("metric,value\nmakespan_ms,"));
  CHECK(out.csv.find("\naction_count,432\n") != std::string::npos);
  CHECK(out.csv.find("\ntask_count,144\n") != std::string::npos);
  CHECK(out.csv.find("\noverlappable,1\n") != std::string::npos);
  CHECK(out.csv.find("\nutilization.dev0.link,") != std::string::npos);
  CHECK(out.csv.find("\nutilization.dev0.p0,") != std::string::npos);

  c.command.run = Command::Calibrate;
  c.calibrate.samples.transfers = {{32.0 * 1048576.0, 0.0052}};
  c.calibrate.samples.kernels = {{16.0 * 1048576.0 * 40.0, 224, 1, 0.0052}};
  out = run_command(c);
  CHECK(out.filename == "calibration.csv");
  CHECK(line_count(out.csv) == 1 + 6);
  CHECK(out.csv.starts_with("parameter,value\nbandwidth,"));
  CHECK(out.csv.find("\nrms_relative_residual,") != std::string::npos);
}

TEST_CASE("tile sweeps keep only realizable grids") {
  ExperimentConfig c;
  c.workload.name = Benchmark::CF;
  c.workload.d = 1920;
  c.workload.tile = 240;
  c.command.run = Command::Sweep;
  c.command.axis = SweepAxis::Tiles;
  c.command.partitions = 4;
  c.command.range_spec = "7:10";  // 8 and 10 divide 1920
  const CommandOutput out = run_command(c);
  CHECK(line_count(out.csv) == 1 + 2);
  CHECK(out.csv.find("\n4,8,") != std::string::npos);
  CHECK(out.csv.find("\n4,10,") != std::string::npos);

  c.command.range_spec = "7,9,11,13";
  try {
    run_command(c);
    FAIL("expected no realizable grids");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
    CHECK(std::string(e.what()).find("no realizable tile counts") != std::string::npos);
  }
}

TEST_CASE("block sweeps pin the four transfer mixes") {
  ExperimentConfig c;
  c.workload.name = Benchmark::HBench;
  c.workload.hd_blocks = 8;
  c.workload.dh_blocks = 8;
  c.workload.iterations = 0;
  c.command.run = Command::Sweep;
  c.command.axis = SweepAxis::Blocks;
  c.command.range_spec = "0:8:4";
  const CommandOutput out = run_command(c);
  CHECK(out.csv.starts_with("series,x,hd,dh,makespan_ms\n"));
  CHECK(line_count(out.csv) == 1 + 3 * 4);
  CHECK(out.csv.find("CC,0,8,8,") != std::string::npos);
  CHECK(out.csv.find("IC,4,4,8,") != std::string::npos);
  CHECK(out.csv.find("CD,4,8,4,") != std::string::npos);
  CHECK(out.csv.find("ID,8,8,0,") != std::string::npos);

  c.command.range_spec = "9";
  CHECK_THROWS_AS(run_command(c), Error);

  c.workload.name = Benchmark::MM;
  c.command.range_spec = "0:8:4";
  CHECK_THROWS_AS(run_command(c), Error);
}

TEST_CASE("iteration sweeps report the analytic split") {
  ExperimentConfig c;
  c.workload.name = Benchmark::HBench;
  c.command.run = Command::Sweep;
  c.command.axis = SweepAxis::Iterations;
  c.command.range_spec = "0:3";
  const CommandOutput out = run_command(c);
  CHECK(out.csv.starts_with("iterations,data_ms,kernel_ms,expected_ms,measured_ms\n"));
  CHECK(line_count(out.csv) == 1 + 4);
  CHECK(out.csv.find("\n0,") != std::string::npos);

  c.command.range_spec = "2000000";
  CHECK_THROWS_AS(run_command(c), Error);
}

TEST_CASE("run_experiment writes files and reruns byte-identically") {
  const fs::path dir = fresh_tmp_dir("run");
  ExperimentConfig c;
  c.output_path = dir.string();

  std::string err, path;
  REQUIRE(run_experiment(c, {}, &err, &path) == 0);
  CHECK(path == (dir / "timeline.csv").string());
  const std::string first = slurp(path);
  CHECK(line_count(first) == 1 + 432);

  REQUIRE(run_experiment(c, {}, &err, &path) == 0);
  CHECK(slurp(path) == first);
  fs::remove_all(dir);
}

TEST_CASE("run overrides replace the directory and the heuristics switch") {
  const fs::path dir = fresh_tmp_dir("ovr");
  ExperimentConfig c;
  c.device.total_cores = 5;
  c.device.reserved_cores = 1;
  c.device.threads_per_core = 1;
  c.workload.d = 64;
  c.workload.tile = 16;
  c.workload.max_tiles = 8;
  c.command.run = Command::Tune;
  c.output_path = (dir / "ignored").string();

  RunOverrides ov;
  ov.out_dir = (dir / "actual").string();
  std::string err, path;
  REQUIRE(run_experiment(c, ov, &err, &path) == 0);
  CHECK(path == (dir / "actual" / "tune.csv").string());
  CHECK_FALSE(fs::exists(dir / "ignored"));
  const long long pruned_rows = line_count(slurp(path));
  CHECK(pruned_rows == 1 + 6 + 1);  // header, P=2 x {2,4,6,8} + P=4 x {4,8}, winner

  ov.heuristics = false;
  REQUIRE(run_experiment(c, ov, &err, &path) == 0);
  CHECK(line_count(slurp(path)) == 1 + 4 * 8 + 1);
  fs::remove_all(dir);
}

TEST_CASE("run_experiment maps failures to exit codes") {
  const fs::path dir = fresh_tmp_dir("code");
  ExperimentConfig c;
  c.output_path = (dir / "out").string();
  c.command.partitions = 300;  // beyond the card's 224 threads
  std::string err;
  CHECK(run_experiment(c, {}, &err) == 3);
  CHECK(err.find("invalid partition count 300") != std::string::npos);

  c = ExperimentConfig{};
  fs::create_directories(dir);
  std::ofstream(dir / "blocker").put('x');
  c.output_path = (dir / "blocker" / "sub").string();
  err.clear();
  CHECK(run_experiment(c, {}, &err) == 2);
  CHECK(err.find("cannot create output directory") != std::string::npos);
  fs::remove_all(dir);
}
