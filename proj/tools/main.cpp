// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "streamsim.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string heuristics;
  long long seed = -1;
};

void add_common_flags(CLI::App* sub, Options& opts) {
  sub->add_option("--config", opts.config, "Experiment config file")->required();
  sub->add_option("--out", opts.out, "Output directory (overrides the config)");
  sub->add_option("--heuristics", opts.heuristics,
                  "Restrict the tuning search to the pruned space (on|off)")
      ->check(CLI::IsMember({"on", "off"}));
  sub->add_option("--seed", opts.seed, "Reserved for randomized strategies");
}

int run(const char* command, const Options& opts) {
  streamsim_config* config = nullptr;
  streamsim_status st = streamsim_config_parse_file(opts.config.c_str(), &config);
  if (st != STREAMSIM_OK) {
    std::fprintf(stderr, "streamsim: %s\n", streamsim_last_error());
    if (st == STREAMSIM_ERR_IO) return 2;
    return st == STREAMSIM_ERR_PARSE ? 1 : 3;
  }

  int exit_code = 3;
  st = streamsim_run(config, command, opts.out.empty() ? nullptr : opts.out.c_str(),
                     opts.heuristics.empty() ? -1 : (opts.heuristics == "on" ? 1 : 0), opts.seed,
                     &exit_code);
  if (st != STREAMSIM_OK) {
    std::fprintf(stderr, "streamsim: %s\n", streamsim_last_error());
    streamsim_config_free(config);
    return st == STREAMSIM_ERR_PARSE ? 1 : 3;
  }
  if (exit_code != 0) std::fprintf(stderr, "streamsim: %s\n", streamsim_last_error());
  streamsim_config_free(config);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator and autotuner for multi-stream offload"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(streamsim_version()));

  Options opts;
  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"calibrate", "Fit device and link parameters to measured samples"},
      {"simulate", "Simulate the workload and write its timeline"},
      {"sweep", "Sweep one axis and write a row per point"},
      {"tune", "Search (partitions, tiles) for the best makespan"},
      {"report", "Summarize one simulation run"},
  };
  for (const auto& c : commands) add_common_flags(app.add_subcommand(c.name, c.help), opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (const auto& c : commands)
    if (app.get_subcommand(c.name)->parsed()) return run(c.name, opts);
  return 1;
}
