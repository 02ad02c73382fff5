// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(CLI_BIN) + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

fs::path scratch(const char* tag) {
  const fs::path dir = fs::temp_directory_path() / (std::string("streamsim_cli_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text,
                      const char* name = "config.ini") {
  const fs::path path = dir / name;
  std::ofstream f(path, std::ios::binary);
  f << text;
  REQUIRE(f.good());
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

std::string first_line(const fs::path& path) {
  const std::string all = slurp(path);
  return all.substr(0, all.find('\n'));
}

}  // namespace

TEST_CASE("simulate writes the timeline and reruns byte-identically") {
  const fs::path dir = scratch("sim");
  const fs::path cfg = write_config(dir, "[workload]\nname = mm\nd = 600\ntile = 200\n");
  const fs::path out = dir / "out";

  REQUIRE(cli("simulate --config " + cfg.string() + " --out " + out.string()) == 0);
  const fs::path csv = out / "timeline.csv";
  REQUIRE(fs::exists(csv));
  CHECK(first_line(csv) == "action_id,kind,stream,resource,start_s,end_s");
  const std::string snapshot = slurp(csv);

  REQUIRE(cli("simulate --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(slurp(csv) == snapshot);
  fs::remove_all(dir);
}

TEST_CASE("sweep, report, and calibrate produce their headers") {
  const fs::path dir = scratch("cmds");
  const fs::path cfg = write_config(dir,
                                    "[workload]\nname = mm\nd = 600\ntile = 200\n"
                                    "[command]\naxis = partitions\nrange = 1,2,4\n"
                                    "[calibrate]\nfit = bandwidth\n"
                                    "transfer = 33554432 0.0052\n");
  const fs::path out = dir / "out";
  const std::string tail = " --config " + cfg.string() + " --out " + out.string();

  REQUIRE(cli("sweep" + tail) == 0);
  CHECK(first_line(out / "sweep.csv") == "P,T,makespan_ms");

  REQUIRE(cli("report" + tail) == 0);
  CHECK(first_line(out / "report.csv") == "metric,value");

  REQUIRE(cli("calibrate" + tail) == 0);
  CHECK(first_line(out / "calibration.csv") == "parameter,value");
  fs::remove_all(dir);
}

TEST_CASE("tune honors the heuristics flag") {
  const fs::path dir = scratch("tune");
  const fs::path cfg = write_config(dir,
                                    "[device]\ntotal_cores = 5\nreserved_cores = 1\n"
                                    "threads_per_core = 1\n"
                                    "[workload]\nname = mm\nd = 64\ntile = 16\nmax_tiles = 8\n");
  const fs::path out = dir / "out";
  const std::string tail = " --config " + cfg.string() + " --out " + out.string();

  REQUIRE(cli("tune" + tail + " --heuristics on") == 0);
  const auto count_lines = [&] {
    const std::string s = slurp(out / "tune.csv");
    return std::count(s.begin(), s.end(), '\n');
  };
  CHECK(count_lines() == 1 + 6 + 1);

  REQUIRE(cli("tune" + tail + " --heuristics off") == 0);
  CHECK(count_lines() == 1 + 32 + 1);
  fs::remove_all(dir);
}

TEST_CASE("argument and config problems map to distinct exit codes") {
  const fs::path dir = scratch("err");
  const fs::path out = dir / "out";

  CHECK(cli("simulate") == 1);  // --config is required
  CHECK(cli("frobnicate --config x") == 1);
  CHECK(cli("") == 1);  // a subcommand is required
  CHECK(cli("simulate --config /nonexistent/config.ini") == 2);

  const fs::path broken = write_config(dir, "[device\n", "broken.ini");
  CHECK(cli("simulate --config " + broken.string()) == 1);

  const fs::path invalid = write_config(dir, "[command]\npartitions = 300\n", "invalid.ini");
  CHECK(cli("simulate --config " + invalid.string() + " --out " + out.string()) == 3);

  const fs::path ok = write_config(dir, "[workload]\nname = mm\nd = 600\ntile = 200\n", "ok.ini");
  CHECK(cli("simulate --config " + ok.string() + " --heuristics sometimes") == 1);

  CHECK(cli("--help") == 0);
  CHECK(cli("simulate --help") == 0);
  CHECK(cli("--version") == 0);
  fs::remove_all(dir);
}
