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

#include <map>
#include <string>
#include <vector>

#include "edgefair/core/config.hpp"
#include "edgefair/simulator/scenario.hpp"

namespace edgefair {

/// One scheduling decision made during a replay.
struct Selection {
  TimeMs at = 0;
  JobId job_id = 0;
  std::string client;
  int level = 0;
  /// Distinct clients with queued jobs just before the decision.
  std::size_t waiting_clients = 0;

  friend bool operator==(const Selection&, const Selection&) = default;
};

struct MetricsReport {
  std::string scenario;
  std::string strategy;
  std::uint64_t seed = 0;
  std::string arrival_model;
  SchedulerConfig config;

  std::map<std::string, std::int64_t> per_client_executed;
  std::map<int, std::int64_t> per_priority_executed;
  /// Share of executed jobs per level in percent; all zero when nothing ran.
  std::map<int, double> per_priority_pct;

  std::int64_t total_arrivals = 0;
  std::int64_t executed_total = 0;
  std::int64_t rejected = 0;
  std::int64_t queued_residual = 0;
  std::int64_t terminated_from_queue = 0;
  std::int64_t idle_terminations = 0;
  std::int64_t monitor_passes = 0;

  std::vector<Selection> selections;
  /// Wall-clock time of each scheduling decision in microseconds. Not part
  /// of the serialized report, which must be reproducible.
  std::vector<double> decision_latencies_us;
};

/// Replays the scenario on a virtual clock: arrivals, scheduler ticks after
/// every event, job exits after job_duration_s, and monitor passes every
/// monitor_period_s. Jobs are only started inside the window; the run then
/// continues for two job durations so in-flight jobs finish.
MetricsReport run_scenario(const ScenarioSpec& spec, const SchedulerConfig& cfg);

} // namespace edgefair
