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

#ifndef EDGEFAIR_EDGEFAIR_H
#define EDGEFAIR_EDGEFAIR_H

/*
 * C interface to the edgefair scheduling engine.
 *
 * Objects are opaque handles created by the _new, _open and _start functions
 * and released by the matching _free or _close function. Every fallible call
 * returns an efs_status; on failure efs_last_error() describes the problem
 * for the calling thread. Strings returned through char** out-parameters are
 * owned by the caller and must be released with efs_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define EFS_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define EFS_API __attribute__((visibility("default")))
#else
#  define EFS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum efs_status {
  EFS_OK = 0,
  EFS_ERR_INVALID_ARGUMENT = 1,
  EFS_ERR_INVALID_CONFIG = 2,
  EFS_ERR_QUEUE_FULL = 3,
  EFS_ERR_NOT_FOUND = 4,
  EFS_ERR_DUPLICATE = 5,
  EFS_ERR_EMPTY = 6,
  EFS_ERR_PORT_EXHAUSTED = 7,
  EFS_ERR_EXECUTOR = 8,
  EFS_ERR_STORAGE = 9,
  EFS_ERR_IO = 10,
  EFS_ERR_INTERNAL = 11
} efs_status;

typedef struct efs_config efs_config;
typedef struct efs_store efs_store;
typedef struct efs_node efs_node;
typedef struct efs_report efs_report;
typedef struct efs_server efs_server;

EFS_API const char* efs_version(void);
EFS_API const char* efs_status_name(efs_status status);
/* Message for the last failing call on this thread; never NULL. */
EFS_API const char* efs_last_error(void);
EFS_API void efs_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

/* Defaults: max_jobs=4, queue_max=100, strategy=hybrid, weights 0.50/0.35/0.15. */
EFS_API efs_status efs_config_new(efs_config** out);
/* Reads a key=value file; the result is validated. */
EFS_API efs_status efs_config_load(const char* path, efs_config** out);
/* Sets one key (same names as the file format, e.g. "max_jobs", "weight.3").
 * The value is validated together with the rest of the config. */
EFS_API efs_status efs_config_set(efs_config* cfg, const char* key, const char* value);
/* Renders the config in file format. */
EFS_API efs_status efs_config_text(const efs_config* cfg, char** out);
EFS_API void efs_config_free(efs_config* cfg);

/* ---- store -------------------------------------------------------------- */

typedef struct efs_store_stats {
  uint64_t queue_length;
  uint64_t history_length;
  uint64_t pending_terminations;
} efs_store_stats;

/* ":memory:" opens a private in-memory store. */
EFS_API efs_status efs_store_open(const char* path, efs_store** out);
EFS_API void efs_store_close(efs_store* store);
EFS_API efs_status efs_store_stats_get(efs_store* store, efs_store_stats* out);
/* Writes queue and history as CSV to `path` (NULL or "-" for stdout). */
EFS_API efs_status efs_store_dump_csv(efs_store* store, const char* path);

/* ---- in-process node (simulated executor, caller-supplied time) ---------- */

typedef enum efs_response_kind {
  EFS_RESP_QUEUED = 0,
  EFS_RESP_REJECTED_NO_SPACE = 1,
  EFS_RESP_REMOVED_FROM_QUEUE = 2,
  EFS_RESP_QUEUED_FOR_TERMINATION = 3,
  EFS_RESP_INVALID_REQUEST = 4
} efs_response_kind;

typedef struct efs_client {
  const char* name;
  const char* address;
  int port;
} efs_client;

/* The node borrows `store`, which must outlive it. */
EFS_API efs_status efs_node_new(efs_store* store, const efs_config* cfg, efs_node** out);
EFS_API void efs_node_free(efs_node* node);
EFS_API efs_status efs_node_submit(efs_node* node, const efs_client* client, int priority,
                                   const int* ports, size_t n_ports, int64_t now_ms,
                                   efs_response_kind* kind, int64_t* job_id);
EFS_API efs_status efs_node_terminate(efs_node* node, const efs_client* client, int64_t job_id,
                                      int64_t now_ms, efs_response_kind* kind);
/* Starts at most one job. *job_id is set to the started job or -1. */
EFS_API efs_status efs_node_tick(efs_node* node, int64_t now_ms, int64_t* job_id);
/* Reaps exited jobs, then stops every job pending termination. */
EFS_API efs_status efs_node_drain(efs_node* node, int64_t now_ms, size_t* stopped);
EFS_API efs_status efs_node_running_count(efs_node* node, size_t* out);

/* ---- scenario replay ----------------------------------------------------- */

typedef struct efs_scenario_options {
  const char* scenario;  /* "equal", "random" or "gaussian" */
  const char* strategy;  /* NULL keeps the config's strategy */
  uint64_t seed;
  int front_loaded;      /* equal scenario only */
  double window_s;       /* 0 keeps the default of 3600 */
  double job_duration_s; /* 0 keeps the default of 300 */
} efs_scenario_options;

EFS_API void efs_scenario_options_init(efs_scenario_options* opts);
/* `cfg` may be NULL for defaults. */
EFS_API efs_status efs_run_scenario(const efs_scenario_options* opts, const efs_config* cfg,
                                    efs_report** out);
EFS_API efs_status efs_report_json(const efs_report* report, char** out);
EFS_API efs_status efs_report_summary(const efs_report* report, char** out);
/* report.json, per_client.csv and per_priority.csv into `dir`. */
EFS_API efs_status efs_report_write(const efs_report* report, const char* dir);
EFS_API efs_status efs_report_executed(const efs_report* report, const char* client,
                                       int64_t* out);
EFS_API void efs_report_free(efs_report* report);

/* ---- overhead benchmark -------------------------------------------------- */

/* Times every strategy at each history size and writes
 * strategy,size,mean_latency_ms rows to `csv_path`. `db_path` holds the
 * seeded history (NULL for memory). */
EFS_API efs_status efs_bench_run(const uint64_t* sizes, size_t n_sizes, unsigned trials,
                                 uint64_t seed, const efs_config* cfg, const char* db_path,
                                 const char* csv_path);

/* ---- TLS service --------------------------------------------------------- */

typedef struct efs_server_options {
  const char* listen;    /* host:port, port 0 for any */
  const char* db_path;   /* NULL for memory */
  const char* cert_file;
  const char* key_file;
  const char* ca_file;   /* CA that signs client certificates */
  double job_duration_s; /* simulated job runtime; 0 uses max_job_duration_s */
  double job_utilization_pct;
} efs_server_options;

EFS_API void efs_server_options_init(efs_server_options* opts);
/* Binds and starts serving in background threads. */
EFS_API efs_status efs_server_start(const efs_server_options* opts, const efs_config* cfg,
                                    efs_server** out);
EFS_API int efs_server_port(const efs_server* server);
EFS_API void efs_server_stop(efs_server* server);
EFS_API void efs_server_free(efs_server* server);

#ifdef __cplusplus
}
#endif

#endif /* EDGEFAIR_EDGEFAIR_H */
