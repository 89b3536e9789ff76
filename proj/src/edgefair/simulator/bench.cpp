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

#include "edgefair/simulator/bench.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ostream>

#include "edgefair/core/error.hpp"
#include "edgefair/simulator/scenario.hpp"
#include "edgefair/store/store.hpp"
#include "edgefair/strategies/strategies.hpp"

namespace edgefair {

std::vector<BenchRow> benchmark_overheads(const BenchOptions& options) {
  if (options.trials == 0) throw Error(ErrorCode::InvalidArgument, "trials", "must be >= 1");
  auto sizes = options.sizes;
  for (auto s : sizes)
    if (s == 0) throw Error(ErrorCode::InvalidArgument, "sizes", "must be positive");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  const auto cfg = validate_config(options.config);

  if (!options.db_path.empty()) std::filesystem::remove(options.db_path);
  Store store(options.db_path.empty() ? Store::kInMemory : options.db_path, AggregateMode::Rescan);

  SeedDistribution dist;
  for (const auto& c : default_clients()) dist.clients.push_back(c.name);
  for (const auto& [level, _] : cfg.priority_weights) dist.levels.push_back(level);
  dist.seed = options.seed;

  std::vector<BenchRow> rows;
  std::uint64_t seeded = 0;
  bool probe_ready = false;
  TimeMs now = 1;
  for (const auto size : sizes) {
    dist.seed = options.seed + seeded;
    store.seed_history(size - seeded, dist);
    seeded = size;
    if (!probe_ready) {
      for (const auto& client : default_clients())
        for (const int level : dist.levels) store.enqueue_job({client, Priority{level}, {}}, now);
      probe_ready = true;
    }
    for (const auto kind : options.strategies) {
      double total_ms = 0.0;
      std::uint64_t counted = 0;
      // Trial 0 warms caches and is not counted.
      for (std::uint64_t trial = 0;
           trial <= options.trials || total_ms < options.min_time_ms; ++trial) {
        Store::Transaction tx(store);
        const auto t0 = std::chrono::steady_clock::now();
        auto pick = select_next(kind, store, cfg, now);
        const auto t1 = std::chrono::steady_clock::now();
        if (!pick) throw Error(ErrorCode::NotFound, "probe queue", "no job selected");
        if (trial == 0) continue;
        total_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
        ++counted;
      }
      rows.push_back({kind, size, total_ms / static_cast<double>(counted)});
    }
  }
  return rows;
}

void write_overheads_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "strategy,size,mean_latency_ms\n";
  for (const auto& r : rows)
    out << to_string(r.strategy) << ',' << r.size << ',' << r.mean_latency_ms << '\n';
}

} // namespace edgefair
