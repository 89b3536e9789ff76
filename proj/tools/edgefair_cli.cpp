// SPDX-License-Identifier: Apache-2.0
/*
Copyright (C) 2026 The edgefair Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.

*/

#include <csignal>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "edgefair/edgefair.h"

namespace fs = std::filesystem;

namespace {

volatile std::sig_atomic_t g_interrupted = 0;

void on_signal(int) { g_interrupted = 1; }

// Runtime failure: diagnostic on stderr, exit 1.
int report_failure(const char* what, efs_status status) {
  std::cerr << "edgefair: " << what << ": " << efs_status_name(status);
  const std::string detail = efs_last_error();
  if (!detail.empty()) std::cerr << " (" << detail << ")";
  std::cerr << "\n";
  return 1;
}

struct ConfigHandle {
  efs_config* cfg = nullptr;
  ~ConfigHandle() { efs_config_free(cfg); }
};

efs_status load_config(const std::string& path, ConfigHandle& out) {
  if (path.empty()) return efs_config_new(&out.cfg);
  return efs_config_load(path.c_str(), &out.cfg);
}

bool ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "edgefair: cannot create " << dir << ": " << ec.message() << "\n";
    return false;
  }
  return true;
}

struct RunArgs {
  std::string scenario = "equal";
  std::string strategy;
  std::uint64_t seed = 1;
  std::string config;
  std::string out = "out";
  bool front_loaded = false;
};

int cmd_run(const RunArgs& a) {
  ConfigHandle cfg;
  if (auto s = load_config(a.config, cfg); s != EFS_OK) return report_failure("config", s);

  efs_scenario_options opts;
  efs_scenario_options_init(&opts);
  opts.scenario = a.scenario.c_str();
  opts.strategy = a.strategy.empty() ? nullptr : a.strategy.c_str();
  opts.seed = a.seed;
  opts.front_loaded = a.front_loaded ? 1 : 0;

  efs_report* report = nullptr;
  if (auto s = efs_run_scenario(&opts, cfg.cfg, &report); s != EFS_OK)
    return report_failure("run", s);

  int rc = 0;
  char* summary = nullptr;
  if (!ensure_dir(a.out)) {
    rc = 1;
  } else if (auto s = efs_report_write(report, a.out.c_str()); s != EFS_OK) {
    rc = report_failure("write report", s);
  } else if (auto s2 = efs_report_summary(report, &summary); s2 != EFS_OK) {
    rc = report_failure("summary", s2);
  } else {
    std::cout << summary;
  }
  efs_string_free(summary);
  efs_report_free(report);
  return rc;
}

struct BenchArgs {
  std::vector<std::uint64_t> sizes{1000, 10000, 100000, 1000000};
  unsigned trials = 5;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string db;
  std::string config;
};

int cmd_bench(const BenchArgs& a) {
  ConfigHandle cfg;
  if (auto s = load_config(a.config, cfg); s != EFS_OK) return report_failure("config", s);
  if (!ensure_dir(a.out)) return 1;

  const bool scratch = a.db.empty();
  const std::string db = scratch ? (fs::path(a.out) / "bench.db").string() : a.db;
  const std::string csv = (fs::path(a.out) / "overheads.csv").string();
  const auto s = efs_bench_run(a.sizes.data(), a.sizes.size(), a.trials, a.seed, cfg.cfg,
                               db.c_str(), csv.c_str());
  if (scratch) {
    std::error_code ec;
    fs::remove(db, ec);
  }
  if (s != EFS_OK) return report_failure("bench", s);
  std::cout << "wrote " << csv << "\n";
  return 0;
}

struct ServeArgs {
  std::string listen = "127.0.0.1:7443";
  std::string db;
  std::string config;
  std::string cert;
  std::string key;
  std::string ca;
  double job_duration_s = 0;
  double job_utilization_pct = 50;
};

int cmd_serve(const ServeArgs& a) {
  ConfigHandle cfg;
  if (auto s = load_config(a.config, cfg); s != EFS_OK) return report_failure("config", s);

  efs_server_options opts;
  efs_server_options_init(&opts);
  opts.listen = a.listen.c_str();
  opts.db_path = a.db.empty() ? nullptr : a.db.c_str();
  opts.cert_file = a.cert.c_str();
  opts.key_file = a.key.c_str();
  opts.ca_file = a.ca.c_str();
  opts.job_duration_s = a.job_duration_s;
  opts.job_utilization_pct = a.job_utilization_pct;

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  efs_server* server = nullptr;
  if (auto s = efs_server_start(&opts, cfg.cfg, &server); s != EFS_OK)
    return report_failure("serve", s);
  std::cerr << "edgefair: listening on port " << efs_server_port(server) << "\n";
  while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  std::cerr << "edgefair: shutting down\n";
  efs_server_stop(server);
  efs_server_free(server);
  return 0;
}

int cmd_dump(const std::string& db, const std::string& out) {
  if (!fs::exists(db)) {
    std::cerr << "edgefair: no store at " << db << "\n";
    return 1;
  }
  efs_store* store = nullptr;
  if (auto s = efs_store_open(db.c_str(), &store); s != EFS_OK) return report_failure("open", s);
  const auto s = efs_store_dump_csv(store, out.empty() ? nullptr : out.c_str());
  efs_store_close(store);
  return s == EFS_OK ? 0 : report_failure("dump", s);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair-share job scheduler for a single edge node"};
  app.require_subcommand(1);
  app.set_version_flag("--version", efs_version());

  const std::vector<std::string> strategies{"fcfs", "client_fair", "priority_fair", "hybrid"};

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Replay a workload scenario on a virtual clock");
  run_cmd->add_option("--scenario", run.scenario, "Workload scenario")
      ->check(CLI::IsMember({"equal", "random", "gaussian"}))
      ->capture_default_str();
  run_cmd->add_option("--strategy", run.strategy, "Overrides the config's strategy")
      ->check(CLI::IsMember(strategies));
  run_cmd->add_option("--seed", run.seed, "RNG seed")->capture_default_str();
  run_cmd->add_option("--config", run.config, "key=value config file")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_flag("--front-loaded", run.front_loaded,
                    "Equal scenario: each client submits its whole batch in turn");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Measure decision latency against history size");
  bench_cmd->add_option("--sizes", bench.sizes, "History sizes")
      ->check(CLI::PositiveNumber)
      ->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Timed decisions per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "RNG seed")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Output directory")->capture_default_str();
  bench_cmd->add_option("--db", bench.db, "Keep the seeded store at this path");
  bench_cmd->add_option("--config", bench.config, "key=value config file")
      ->check(CLI::ExistingFile);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Accept jobs over mutually authenticated TLS");
  serve_cmd->add_option("--listen", serve.listen, "host:port")->capture_default_str();
  serve_cmd->add_option("--db", serve.db, "Store file (in memory if omitted)");
  serve_cmd->add_option("--config", serve.config, "key=value config file")
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--cert", serve.cert, "Server certificate (PEM)")
      ->required()
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--key", serve.key, "Server private key (PEM)")
      ->required()
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--ca", serve.ca, "CA certificate for client authentication")
      ->required()
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--job-duration", serve.job_duration_s,
                        "Simulated job runtime in seconds");
  serve_cmd->add_option("--job-utilization", serve.job_utilization_pct,
                        "Simulated job CPU utilization (%)")
      ->check(CLI::Range(0.0, 100.0))
      ->capture_default_str();

  std::string dump_db;
  std::string dump_out;
  auto* dump_cmd = app.add_subcommand("dump", "Write queue and history as CSV");
  dump_cmd->add_option("--db", dump_db, "Store file")->required();
  dump_cmd->add_option("--out", dump_out, "CSV file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*run_cmd) return cmd_run(run);
  if (*bench_cmd) return cmd_bench(bench);
  if (*serve_cmd) return cmd_serve(serve);
  if (*dump_cmd) return cmd_dump(dump_db, dump_out);
  return 2;
}
