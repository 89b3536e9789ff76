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

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgefair/core/types.hpp"

namespace edgefair {

/// How per-client counts, per-level counts and the history total are
/// answered. Incremental reads counters kept in step with every archival;
/// Rescan counts history rows on each query, so its cost grows with the
/// history length.
enum class AggregateMode { Incremental, Rescan };

enum class TerminationReason { ClientRequest, Idle };

std::string_view to_string(TerminationReason reason) noexcept;

struct TerminationEntry {
  JobId job_id = 0;
  TerminationReason reason = TerminationReason::ClientRequest;

  friend bool operator==(const TerminationEntry&, const TerminationEntry&) = default;
};

/// Number of aggregate lookups served since the last reset.
struct QueryCounters {
  std::uint64_t client_frequency = 0;
  std::uint64_t priority_count = 0;
  std::uint64_t total = 0;
  /// Lookups that had to scan history (Rescan mode only).
  std::uint64_t history_scans = 0;
};

/// Synthetic history generator: each record draws its client and level
/// uniformly from the given lists.
struct SeedDistribution {
  std::vector<std::string> clients;
  std::vector<int> levels;
  std::uint64_t seed = 1;
};

/// Job queue, job history and termination queue in one single-file SQLite
/// database. Every public call is atomic; a Transaction groups several calls
/// into one atomic unit and holds the writer lock for its lifetime.
class Store {
public:
  static constexpr const char* kInMemory = ":memory:";

  explicit Store(const std::string& path, AggregateMode mode = AggregateMode::Incremental);
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  /// Nested savepoint. Rolled back on destruction unless committed.
  class Transaction {
  public:
    explicit Transaction(Store& store);
    ~Transaction();
    Transaction(const Transaction&) = delete;
    Transaction& operator=(const Transaction&) = delete;

    void commit();

  private:
    Store& store_;
    std::unique_lock<std::recursive_mutex> lock_;
    std::string name_;
    bool done_ = false;
  };

  AggregateMode aggregate_mode() const noexcept { return mode_; }
  void set_aggregate_mode(AggregateMode mode) noexcept { mode_ = mode; }

  /// 0 means unbounded.
  void set_queue_limit(std::size_t limit);
  std::size_t queue_limit() const;

  // Job queue.
  /// Throws QueueFull at the limit and InvalidArgument when `now` precedes
  /// the latest arrival already recorded.
  JobRecord enqueue_job(const JobRequest& req, TimeMs now);
  std::optional<JobRecord> remove_from_queue(JobId id);
  /// Throws NotFound when the job is not queued.
  JobRecord move_to_history(JobId id, TimeMs exec_start);
  std::optional<JobRecord> find_queued(JobId id);
  bool in_history(JobId id);
  std::size_t queue_length();
  std::vector<JobRecord> queued_jobs();
  TimeMs last_arrival();

  // Aggregates.
  /// Distinct names of clients with queued jobs, ascending.
  std::vector<std::string> waiting_clients();
  /// Same, restricted to jobs queued at `level`.
  std::vector<std::string> waiting_clients_at(Priority level);
  /// Distinct queued levels, highest first.
  std::vector<Priority> waiting_priorities();
  std::int64_t client_frequency(std::string_view client);
  std::int64_t priority_count(Priority level);
  std::int64_t total();

  // Oldest queued record matching a filter; ties go to the lower job id.
  std::optional<JobRecord> oldest();
  std::optional<JobRecord> oldest_for_client(std::string_view client);
  std::optional<JobRecord> oldest_for_priority(Priority level);
  std::optional<JobRecord> oldest_for(Priority level, std::string_view client);

  // History.
  std::vector<JobRecord> history();
  void seed_history(std::uint64_t n, const SeedDistribution& dist);

  // Termination queue (FIFO, no duplicate ids).
  /// Throws Duplicate when the id is already pending.
  void enqueue_termination(JobId id, TerminationReason reason);
  std::optional<TerminationEntry> pop_termination();
  bool termination_pending(JobId id);
  std::vector<TerminationEntry> termination_queue();

  /// CSV of queued and executed jobs ordered by job id, header
  /// `job_id,client,priority,arrival_ms,exec_start_ms`. Queued rows leave
  /// exec_start_ms empty.
  void dump_csv(std::ostream& out);

  QueryCounters counters() const;
  void reset_counters();

private:
  struct Impl;

  mutable std::recursive_mutex mu_;
  std::unique_ptr<Impl> impl_;
  AggregateMode mode_;
};

} // namespace edgefair
