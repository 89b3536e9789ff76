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

#include "edgefair/strategies/strategies.hpp"

#include <limits>

namespace edgefair {

namespace {

/// Least-executed client among `clients` (already in ascending name order,
/// so the first minimum wins ties).
std::optional<std::string> least_executed(Store& store, const std::vector<std::string>& clients) {
  std::optional<std::string> best;
  std::int64_t best_count = std::numeric_limits<std::int64_t>::max();
  for (const auto& name : clients) {
    const auto count = store.client_frequency(name);
    if (count < best_count) {
      best_count = count;
      best = name;
    }
  }
  return best;
}

std::optional<JobRecord> archive(Store& store, std::optional<JobRecord> pick, TimeMs now) {
  if (!pick) return std::nullopt;
  return store.move_to_history(pick->job_id, now);
}

Priority choose_level(Store& store, const PriorityWeights& weights) {
  const auto waiting = store.waiting_priorities();
  return select_priority_level(compute_priority_fractions(store, waiting), waiting, weights);
}

} // namespace

PriorityFractions compute_priority_fractions(Store& store, std::span<const Priority> levels) {
  PriorityFractions out;
  out.total = store.total();
  for (const auto level : levels) {
    const auto count = store.priority_count(level);
    out.fractions[level.level] =
        (count > 0 && out.total > 0) ? static_cast<double>(count) / static_cast<double>(out.total)
                                     : 0.0;
  }
  return out;
}

PriorityFractions compute_priority_fractions(Store& store) {
  const auto waiting = store.waiting_priorities();
  return compute_priority_fractions(store, waiting);
}

Priority select_priority_level(const PriorityFractions& fractions,
                               std::span<const Priority> waiting,
                               const PriorityWeights& weights) {
  for (const auto level : waiting) {
    const auto w = weights.find(level.level);
    const double weight = w == weights.end() ? 0.0 : w->second;
    if (fractions.at(level) < weight) return level;
  }
  return waiting.front();
}

std::optional<JobRecord> select_fcfs(Store& store, TimeMs now) {
  Store::Transaction tx(store);
  auto rec = archive(store, store.oldest(), now);
  tx.commit();
  return rec;
}

std::optional<JobRecord> select_client_fair(Store& store, TimeMs now) {
  Store::Transaction tx(store);
  const auto client = least_executed(store, store.waiting_clients());
  if (!client) return std::nullopt;
  auto rec = archive(store, store.oldest_for_client(*client), now);
  tx.commit();
  return rec;
}

std::optional<JobRecord> select_priority_fair(Store& store, const PriorityWeights& weights,
                                              TimeMs now) {
  Store::Transaction tx(store);
  if (store.queue_length() == 0) return std::nullopt;
  const auto level = choose_level(store, weights);
  auto rec = archive(store, store.oldest_for_priority(level), now);
  tx.commit();
  return rec;
}

std::optional<JobRecord> select_hybrid(Store& store, const PriorityWeights& weights, TimeMs now) {
  Store::Transaction tx(store);
  if (store.queue_length() == 0) return std::nullopt;
  const auto level = choose_level(store, weights);
  // Only clients holding a job at the chosen level are candidates, so the
  // (level, client) lookup below always finds a job.
  const auto client = least_executed(store, store.waiting_clients_at(level));
  std::optional<JobRecord> pick;
  if (client) pick = store.oldest_for(level, *client);
  if (!pick) pick = store.oldest_for_priority(level);
  auto rec = archive(store, pick, now);
  tx.commit();
  return rec;
}

std::optional<JobRecord> select_next(StrategyKind kind, Store& store,
                                     const SchedulerConfig& cfg, TimeMs now) {
  switch (kind) {
    case StrategyKind::Fcfs: return select_fcfs(store, now);
    case StrategyKind::ClientFair: return select_client_fair(store, now);
    case StrategyKind::PriorityFair: return select_priority_fair(store, cfg.priority_weights, now);
    case StrategyKind::Hybrid: return select_hybrid(store, cfg.priority_weights, now);
  }
  return std::nullopt;
}

} // namespace edgefair
