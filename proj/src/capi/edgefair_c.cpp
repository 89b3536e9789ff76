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

#include "edgefair/edgefair.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "edgefair/core/config.hpp"
#include "edgefair/core/error.hpp"
#include "edgefair/lifecycle/node.hpp"
#include "edgefair/lifecycle/service.hpp"
#include "edgefair/lifecycle/simulated_executor.hpp"
#include "edgefair/simulator/bench.hpp"
#include "edgefair/simulator/report.hpp"
#include "edgefair/simulator/simulator.hpp"
#include "edgefair/store/store.hpp"

struct efs_config {
  edgefair::SchedulerConfig cfg;
};

struct efs_store {
  explicit efs_store(const std::string& path) : store(path) {}
  edgefair::Store store;
};

struct efs_node {
  efs_node(edgefair::Store& store, const edgefair::SchedulerConfig& cfg)
      : node(store, cfg, executor) {}
  edgefair::SimulatedExecutor executor;
  edgefair::Node node;
};

struct efs_report {
  edgefair::MetricsReport report;
};

struct efs_server {
  explicit efs_server(edgefair::ServiceOptions opts) : service(std::move(opts)) {}
  edgefair::Service service;
};

namespace {

using namespace edgefair;

thread_local std::string g_last_error;

efs_status code_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return EFS_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidConfig: return EFS_ERR_INVALID_CONFIG;
    case ErrorCode::QueueFull: return EFS_ERR_QUEUE_FULL;
    case ErrorCode::NotFound: return EFS_ERR_NOT_FOUND;
    case ErrorCode::Duplicate: return EFS_ERR_DUPLICATE;
    case ErrorCode::Empty: return EFS_ERR_EMPTY;
    case ErrorCode::PortExhausted: return EFS_ERR_PORT_EXHAUSTED;
    case ErrorCode::ExecutorFailure: return EFS_ERR_EXECUTOR;
    case ErrorCode::StorageFailure: return EFS_ERR_STORAGE;
    case ErrorCode::Io: return EFS_ERR_IO;
  }
  return EFS_ERR_INTERNAL;
}

efs_status fail(efs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

/// Runs `fn`, translating exceptions into status codes.
template <class Fn>
efs_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return EFS_OK;
  } catch (const Error& e) {
    return fail(code_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(EFS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EFS_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what, "must not be NULL");
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

SchedulerConfig config_or_default(const efs_config* cfg) {
  return cfg ? cfg->cfg : SchedulerConfig{};
}

ClientId to_client(const efs_client* c) {
  require(c && c->name, "client");
  return ClientId{c->name, c->address ? c->address : "", c->port};
}

efs_response_kind kind_of(const Response& r) {
  if (std::holds_alternative<response::Queued>(r)) return EFS_RESP_QUEUED;
  if (std::holds_alternative<response::RejectedNoSpace>(r)) return EFS_RESP_REJECTED_NO_SPACE;
  if (std::holds_alternative<response::RemovedFromQueue>(r)) return EFS_RESP_REMOVED_FROM_QUEUE;
  if (std::holds_alternative<response::QueuedForTermination>(r))
    return EFS_RESP_QUEUED_FOR_TERMINATION;
  return EFS_RESP_INVALID_REQUEST;
}

} // namespace

extern "C" {

const char* efs_version(void) { return "1.0.0"; }

const char* efs_status_name(efs_status status) {
  switch (status) {
    case EFS_OK: return "ok";
    case EFS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case EFS_ERR_INVALID_CONFIG: return "invalid config";
    case EFS_ERR_QUEUE_FULL: return "queue full";
    case EFS_ERR_NOT_FOUND: return "not found";
    case EFS_ERR_DUPLICATE: return "duplicate";
    case EFS_ERR_EMPTY: return "empty";
    case EFS_ERR_PORT_EXHAUSTED: return "port exhausted";
    case EFS_ERR_EXECUTOR: return "executor failure";
    case EFS_ERR_STORAGE: return "storage failure";
    case EFS_ERR_IO: return "i/o error";
    case EFS_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* efs_last_error(void) { return g_last_error.c_str(); }

void efs_string_free(char* s) { std::free(s); }

// ---- configuration ----------------------------------------------------------

efs_status efs_config_new(efs_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new efs_config{validate_config(SchedulerConfig{})};
  });
}

efs_status efs_config_load(const char* path, efs_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new efs_config{load_config_file(path)};
  });
}

efs_status efs_config_set(efs_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(value, "value");
    auto updated = cfg->cfg;
    apply_config_entry(updated, key, value);
    cfg->cfg = validate_config(updated);
  });
}

efs_status efs_config_text(const efs_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = dup_string(to_config_text(cfg->cfg));
  });
}

void efs_config_free(efs_config* cfg) { delete cfg; }

// ---- store ------------------------------------------------------------------

efs_status efs_store_open(const char* path, efs_store** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new efs_store(path);
  });
}

void efs_store_close(efs_store* store) { delete store; }

efs_status efs_store_stats_get(efs_store* store, efs_store_stats* out) {
  return guarded([&] {
    require(store, "store");
    require(out, "out");
    out->queue_length = store->store.queue_length();
    out->history_length = static_cast<std::uint64_t>(store->store.history().size());
    out->pending_terminations = store->store.termination_queue().size();
  });
}

efs_status efs_store_dump_csv(efs_store* store, const char* path) {
  return guarded([&] {
    require(store, "store");
    if (!path || std::strcmp(path, "-") == 0) {
      store->store.dump_csv(std::cout);
      std::cout.flush();
      return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, path, "cannot open for writing");
    store->store.dump_csv(out);
    if (!out) throw Error(ErrorCode::Io, path, "write failed");
  });
}

// ---- node -------------------------------------------------------------------

efs_status efs_node_new(efs_store* store, const efs_config* cfg, efs_node** out) {
  return guarded([&] {
    require(store, "store");
    require(out, "out");
    *out = new efs_node(store->store, config_or_default(cfg));
  });
}

void efs_node_free(efs_node* node) { delete node; }

efs_status efs_node_submit(efs_node* node, const efs_client* client, int priority,
                           const int* ports, size_t n_ports, int64_t now_ms,
                           efs_response_kind* kind, int64_t* job_id) {
  return guarded([&] {
    require(node, "node");
    require(kind, "kind");
    require(ports || n_ports == 0, "ports");
    request::NewJob body{Priority{priority}, std::vector<int>(ports, ports + n_ports)};
    const auto r = node->node.handle_request(Request{to_client(client), body}, now_ms);
    *kind = kind_of(r);
    if (job_id) {
      const auto* q = std::get_if<response::Queued>(&r);
      *job_id = q ? q->job_id : -1;
    }
  });
}

efs_status efs_node_terminate(efs_node* node, const efs_client* client, int64_t job_id,
                              int64_t now_ms, efs_response_kind* kind) {
  return guarded([&] {
    require(node, "node");
    require(kind, "kind");
    *kind = kind_of(node->node.handle_request(
        Request{to_client(client), request::Terminate{job_id}}, now_ms));
  });
}

efs_status efs_node_tick(efs_node* node, int64_t now_ms, int64_t* job_id) {
  return guarded([&] {
    require(node, "node");
    require(job_id, "job_id");
    *job_id = -1;
    node->node.reap_exited(now_ms);
    if (auto job = node->node.scheduler_tick(now_ms)) *job_id = job->job_id;
  });
}

efs_status efs_node_drain(efs_node* node, int64_t now_ms, size_t* stopped) {
  return guarded([&] {
    require(node, "node");
    node->node.reap_exited(now_ms);
    const auto n = node->node.drain_terminations(now_ms);
    if (stopped) *stopped = n;
  });
}

efs_status efs_node_running_count(efs_node* node, size_t* out) {
  return guarded([&] {
    require(node, "node");
    require(out, "out");
    *out = node->node.running_count();
  });
}

// ---- scenarios --------------------------------------------------------------

void efs_scenario_options_init(efs_scenario_options* opts) {
  if (!opts) return;
  *opts = efs_scenario_options{"equal", nullptr, 1, 0, 0.0, 0.0};
}

efs_status efs_run_scenario(const efs_scenario_options* opts, const efs_config* cfg,
                            efs_report** out) {
  return guarded([&] {
    require(opts, "opts");
    require(out, "out");
    ScenarioSpec spec;
    const auto kind = parse_scenario(opts->scenario ? opts->scenario : "");
    if (!kind)
      throw Error(ErrorCode::InvalidArgument, "scenario",
                  std::string("unknown scenario '") + (opts->scenario ? opts->scenario : "") + "'");
    spec.kind = *kind;
    spec.seed = opts->seed;
    spec.front_loaded = opts->front_loaded != 0;
    if (opts->window_s > 0) spec.window_s = opts->window_s;
    if (opts->job_duration_s > 0) spec.job_duration_s = opts->job_duration_s;

    auto config = config_or_default(cfg);
    if (opts->strategy) {
      const auto strategy = parse_strategy(opts->strategy);
      if (!strategy)
        throw Error(ErrorCode::InvalidArgument, "strategy",
                    std::string("unknown strategy '") + opts->strategy + "'");
      config.strategy = *strategy;
    }
    *out = new efs_report{run_scenario(spec, config)};
  });
}

efs_status efs_report_json(const efs_report* report, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    *out = dup_string(report_to_json(report->report));
  });
}

efs_status efs_report_summary(const efs_report* report, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    *out = dup_string(summary_table(report->report));
  });
}

efs_status efs_report_write(const efs_report* report, const char* dir) {
  return guarded([&] {
    require(report, "report");
    require(dir, "dir");
    write_report_files(report->report, dir);
  });
}

efs_status efs_report_executed(const efs_report* report, const char* client, int64_t* out) {
  return guarded([&] {
    require(report, "report");
    require(client, "client");
    require(out, "out");
    const auto& m = report->report.per_client_executed;
    auto it = m.find(client);
    if (it == m.end()) throw Error(ErrorCode::NotFound, client, "no such client in report");
    *out = it->second;
  });
}

void efs_report_free(efs_report* report) { delete report; }

// ---- benchmark --------------------------------------------------------------

efs_status efs_bench_run(const uint64_t* sizes, size_t n_sizes, unsigned trials, uint64_t seed,
                         const efs_config* cfg, const char* db_path, const char* csv_path) {
  return guarded([&] {
    require(csv_path, "csv_path");
    BenchOptions opts;
    if (n_sizes > 0) {
      require(sizes, "sizes");
      opts.sizes.assign(sizes, sizes + n_sizes);
    }
    opts.trials = trials;
    opts.seed = seed;
    opts.config = config_or_default(cfg);
    if (db_path) opts.db_path = db_path;
    const auto rows = benchmark_overheads(opts);
    std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, csv_path, "cannot open for writing");
    write_overheads_csv(rows, out);
    if (!out) throw Error(ErrorCode::Io, csv_path, "write failed");
  });
}

// ---- server -----------------------------------------------------------------

void efs_server_options_init(efs_server_options* opts) {
  if (!opts) return;
  *opts = efs_server_options{"127.0.0.1:7443", nullptr, nullptr, nullptr, nullptr, 0.0, 50.0};
}

efs_status efs_server_start(const efs_server_options* opts, const efs_config* cfg,
                            efs_server** out) {
  return guarded([&] {
    require(opts, "opts");
    require(out, "out");
    require(opts->cert_file, "cert_file");
    require(opts->key_file, "key_file");
    require(opts->ca_file, "ca_file");
    ServiceOptions so;
    so.listen = opts->listen ? opts->listen : "127.0.0.1:7443";
    so.db_path = opts->db_path ? opts->db_path : "";
    so.cert_file = opts->cert_file;
    so.key_file = opts->key_file;
    so.ca_file = opts->ca_file;
    so.config = config_or_default(cfg);
    so.job_profile.duration = opts->job_duration_s > 0 ? seconds(opts->job_duration_s)
                                                       : seconds(so.config.max_job_duration_s);
    so.job_profile.utilization_pct = opts->job_utilization_pct;
    auto server = std::make_unique<efs_server>(std::move(so));
    server->service.start();
    *out = server.release();
  });
}

int efs_server_port(const efs_server* server) {
  return server ? server->service.port() : -1;
}

void efs_server_stop(efs_server* server) {
  if (server) server->service.stop();
}

void efs_server_free(efs_server* server) { delete server; }

} // extern "C"
