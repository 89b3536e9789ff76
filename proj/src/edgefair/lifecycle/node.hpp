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

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stop_token>
#include <vector>

#include "edgefair/core/clock.hpp"
#include "edgefair/core/config.hpp"
#include "edgefair/lifecycle/executor.hpp"
#include "edgefair/lifecycle/messages.hpp"
#include "edgefair/lifecycle/ports.hpp"
#include "edgefair/store/store.hpp"

namespace edgefair {

struct RunningJob {
  JobId job_id = 0;
  ClientId client;
  Priority priority;
  TimeMs start_time = 0;
  PortMap port_mappings;
};

struct NodeStats {
  std::uint64_t requests = 0;
  std::uint64_t admitted = 0;
  std::uint64_t rejected_no_space = 0;
  std::uint64_t removed_from_queue = 0;
  std::uint64_t invalid = 0;
  std::uint64_t started = 0;
  std::uint64_t executor_failures = 0;
  std::uint64_t idle_detected = 0;
  std::uint64_t terminated = 0;
  std::uint64_t exited = 0;
};

/// First half of a monitor pass: CPU counters of every job old enough to be
/// judged.
struct MonitorSample {
  TimeMs taken_at = 0;
  std::map<JobId, DurationMs> cpu;
};

/// CPU utilisation over an interval as a percentage of the whole node.
double utilization_pct(DurationMs cpu_before, DurationMs cpu_after, DurationMs interval, int cores);

/// Node-side runtime: admission, the scheduler tick, idle detection and
/// termination. All methods are thread-safe; store mutations go through the
/// store's own writer lock.
class Node {
public:
  using Notifier = std::function<void(const std::string& client, const Response&)>;

  /// `cfg` is validated here; the store's queue limit is set to queue_max.
  Node(Store& store, SchedulerConfig cfg, Executor& executor);

  const SchedulerConfig& config() const noexcept { return cfg_; }
  Store& store() noexcept { return store_; }

  /// Receives Started and Terminated notices. Called with the node lock
  /// held, so it must not call back into the node.
  void set_notifier(Notifier fn);

  /// Admission control. Never throws for malformed input; every outcome is
  /// a Response.
  Response handle_request(const Request& req, TimeMs now);

  /// Starts at most one job when the queue is non-empty and capacity is
  /// free. On a launch failure the selection is rolled back, so the job
  /// keeps its place in the queue, and Error(ExecutorFailure) is thrown.
  std::optional<RunningJob> scheduler_tick(TimeMs now);
  /// Ticks until the node is full or the queue is empty.
  std::vector<RunningJob> schedule_ready(TimeMs now);

  MonitorSample begin_monitor_pass(TimeMs now);
  /// Takes the second samples and queues idle jobs for termination.
  /// Returns the ids found idle.
  std::vector<JobId> finish_monitor_pass(const MonitorSample& first, TimeMs now);
  /// Both halves with a sample_interval_s wait in between; the node is not
  /// locked while waiting.
  std::vector<JobId> monitor_pass(Clock& clock, std::stop_token stop = {});

  /// Stops every job in the termination queue. Entries for jobs that are no
  /// longer running are dropped. Returns the number of jobs stopped.
  std::size_t drain_terminations(TimeMs now);

  /// Forgets jobs that exited on their own and frees their ports.
  std::vector<JobId> reap_exited(TimeMs now);

  std::vector<RunningJob> running() const;
  std::size_t running_count() const;
  std::optional<RunningJob> find_running(JobId id) const;
  NodeStats stats() const;

private:
  Response admit(const Request& req, const request::NewJob& job, TimeMs now);
  Response terminate(const Request& req, const request::Terminate& term);
  void notify(const std::string& client, const Response& r);

  Store& store_;
  SchedulerConfig cfg_;
  Executor& executor_;
  mutable std::mutex mu_;
  PortPool ports_;
  std::map<JobId, RunningJob> running_;
  NodeStats stats_;
  Notifier notifier_;
};

/// Repeats {monitor pass; drain terminations} every monitor_period_s, the
/// first pass one period after the call. Stops on request or, when `until`
/// is set, before a pass that would start after it. Returns the number of
/// passes run.
std::size_t run_monitor_loop(Node& node, Clock& clock, std::stop_token stop,
                             std::optional<TimeMs> until = std::nullopt);

} // namespace edgefair
