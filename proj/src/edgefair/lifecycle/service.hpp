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

#pragma once

#include <memory>
#include <string>

#include "edgefair/core/config.hpp"
#include "edgefair/lifecycle/node.hpp"
#include "edgefair/lifecycle/simulated_executor.hpp"

namespace edgefair {

struct ServiceOptions {
  /// host:port; port 0 picks a free port.
  std::string listen = "127.0.0.1:7443";
  /// Store file; empty keeps the store in memory.
  std::string db_path;
  /// Server identity and the CA that signs client certificates. A client's
  /// certificate common name is its client name.
  std::string cert_file;
  std::string key_file;
  std::string ca_file;
  SchedulerConfig config;
  /// Scheduler polling period.
  DurationMs tick_interval = 100;
  /// Behaviour of jobs on the simulated backend. The duration is capped at
  /// max_job_duration_s.
  JobProfile job_profile;
  int cores = 4;
};

/// Long-running node: a TLS listener handing requests to a Node, a
/// scheduler thread polling the queue and a monitor thread reaping idle
/// jobs. Connections without a certificate signed by the configured CA are
/// closed before any request is read.
class Service {
public:
  /// Opens the store, loads the TLS material and binds the listener. Throws
  /// Error on any startup failure.
  explicit Service(ServiceOptions options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void start();
  /// Idempotent; joins every thread.
  void stop();

  int port() const noexcept;
  Node& node() noexcept;
  Store& store() noexcept;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace edgefair
