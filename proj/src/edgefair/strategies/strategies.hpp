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
#include <span>
#include <vector>

#include "edgefair/core/config.hpp"
#include "edgefair/core/types.hpp"
#include "edgefair/store/store.hpp"

namespace edgefair {

/// Executed-job share per priority level together with the history
/// size it was computed from.
struct PriorityFractions {
  std::map<int, double> fractions;
  std::int64_t total = 0;

  double at(Priority p) const {
    auto it = fractions.find(p.level);
    return it == fractions.end() ? 0.0 : it->second;
  }
};

/// Executed share for each listed level. A level with no executed jobs, or an empty
/// history, gets 0.
PriorityFractions compute_priority_fractions(Store& store, std::span<const Priority> levels);
/// Executed shares over the currently waiting levels.
PriorityFractions compute_priority_fractions(Store& store);

/// Walks `waiting` (highest level first) and returns the first level whose
/// executed share is strictly below its weight. When none qualifies the
/// highest waiting level wins. `waiting` must be non-empty.
Priority select_priority_level(const PriorityFractions& fractions,
                               std::span<const Priority> waiting,
                               const PriorityWeights& weights);

// Each selector picks one queued job, archives it to history with
// exec_start = now and returns it. An empty queue yields nullopt and leaves
// the store untouched.
std::optional<JobRecord> select_fcfs(Store& store, TimeMs now);
std::optional<JobRecord> select_client_fair(Store& store, TimeMs now);
std::optional<JobRecord> select_priority_fair(Store& store, const PriorityWeights& weights,
                                              TimeMs now);
std::optional<JobRecord> select_hybrid(Store& store, const PriorityWeights& weights, TimeMs now);

std::optional<JobRecord> select_next(StrategyKind kind, Store& store,
                                     const SchedulerConfig& cfg, TimeMs now);

} // namespace edgefair
