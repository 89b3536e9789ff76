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
#include <optional>
#include <string>
#include <string_view>

#include "edgefair/core/types.hpp"

namespace edgefair {

enum class StrategyKind { Fcfs, ClientFair, PriorityFair, Hybrid };

std::string_view to_string(StrategyKind kind) noexcept;
std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept;

/// priority level -> target fraction of executed jobs
using PriorityWeights = std::map<int, double>;

PriorityWeights default_priority_weights();

struct SchedulerConfig {
  int max_jobs = 4;
  int queue_max = 100;
  /// Fraction of node CPU granted to each job.
  double cpu_unit = 0.25;
  /// Megabytes granted to each job.
  double mem_unit = 256.0;
  StrategyKind strategy = StrategyKind::Hybrid;
  PriorityWeights priority_weights = default_priority_weights();
  double idle_threshold_pct = 10.0;
  double monitor_period_s = 120.0;
  double sample_interval_s = 10.0;
  double min_uptime_s = 60.0;
  double stop_timeout_s = 10.0;
  double max_job_duration_s = 600.0;
  int port_range_min = 30000;
  int port_range_max = 32767;

  bool accepts_priority(Priority p) const { return priority_weights.count(p.level) != 0; }
};

/// Checks every field invariant and fills defaults (an empty weight map
/// becomes the default 0.50/0.35/0.15 split). Throws Error(InvalidConfig)
/// naming the first offending field.
SchedulerConfig validate_config(SchedulerConfig cfg);

/// Applies one `key=value` entry. `weight.N` keys address priority level N;
/// the first weight key seen by a parser replaces the default map.
void apply_config_entry(SchedulerConfig& cfg, std::string_view key, std::string_view value);

/// Flat key=value text, one entry per line; blank lines and `#` comments are
/// ignored. Unknown keys are an error. The result is validated.
SchedulerConfig parse_config_text(std::string_view text);
SchedulerConfig load_config_file(const std::string& path);

/// Inverse of parse_config_text.
std::string to_config_text(const SchedulerConfig& cfg);

} // namespace edgefair
