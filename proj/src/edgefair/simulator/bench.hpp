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

#include <iosfwd>
#include <string>
#include <vector>

#include "edgefair/core/config.hpp"

namespace edgefair {

struct BenchOptions {
  std::vector<std::uint64_t> sizes = {1'000, 10'000, 100'000, 1'000'000};
  unsigned trials = 5;
  /// Cheap decisions are repeated past `trials` until this much time has
  /// been measured, so sub-millisecond means are not dominated by noise.
  double min_time_ms = 50.0;
  std::vector<StrategyKind> strategies = {StrategyKind::Fcfs, StrategyKind::ClientFair,
                                          StrategyKind::PriorityFair, StrategyKind::Hybrid};
  /// Store file for the seeded history; empty keeps it in memory.
  std::string db_path;
  std::uint64_t seed = 1;
  SchedulerConfig config;
};

struct BenchRow {
  StrategyKind strategy;
  std::uint64_t size = 0;
  double mean_latency_ms = 0.0;
};

/// Decision latency against a growing history. History is seeded (six
/// clients, levels 1-3, uniform) up to each size in turn, a probe queue of
/// one job per (client, level) is kept waiting, and each strategy's
/// selection is timed `trials` times in rescan mode, each trial rolled back.
/// Rows come out ordered by size, then by the order of `strategies`.
std::vector<BenchRow> benchmark_overheads(const BenchOptions& options);

void write_overheads_csv(const std::vector<BenchRow>& rows, std::ostream& out);

} // namespace edgefair
