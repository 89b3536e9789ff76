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
#include <string>
#include <vector>

#include "edgefair/lifecycle/executor.hpp"

namespace edgefair {

/// Synthetic behaviour of one simulated job.
struct JobProfile {
  /// CPU use as a percentage of the whole node.
  double utilization_pct = 80.0;
  /// Runtime before the job exits on its own.
  DurationMs duration = seconds(300);
  /// When false the job ignores the polite stop and must be killed.
  bool honors_stop = true;
};

enum class ExecutorCallKind { Start, Sample, Stop, Kill };

struct ExecutorCall {
  ExecutorCallKind kind;
  JobId job_id;
  TimeMs at;
  /// Grace period for Stop; zero otherwise.
  DurationMs grace = 0;

  friend bool operator==(const ExecutorCall&, const ExecutorCall&) = default;
};

/// In-process executor whose jobs consume CPU at a fixed rate and exit after
/// a fixed duration. Every call is appended to a log.
class SimulatedExecutor final : public Executor {
public:
  using ProfileFn = std::function<JobProfile(const JobRecord&)>;

  explicit SimulatedExecutor(int cores = 4, ProfileFn profile = {});

  void start(const JobRecord& job, const PortMap& ports, TimeMs now) override;
  std::optional<DurationMs> sample_cpu(JobId job, TimeMs now) override;
  StopOutcome stop(JobId job, DurationMs grace, TimeMs now) override;
  std::vector<JobId> reap_exited(TimeMs now) override;
  int core_count() const override { return cores_; }

  /// The next start() call throws ExecutorFailure.
  void fail_next_start() { fail_next_ = true; }
  /// Forces a job to exit at `at`, as if it crashed or finished early.
  void exit_job(JobId job, TimeMs at);

  /// Time at which a running job will exit on its own.
  std::optional<TimeMs> exit_time(JobId job) const;

  const std::vector<ExecutorCall>& calls() const noexcept { return log_; }
  std::vector<ExecutorCall> calls_for(JobId job) const;

private:
  struct Unit {
    JobProfile profile;
    TimeMs started = 0;
    TimeMs exit_at = 0;
    bool stopped = false;
    bool reaped = false;
  };

  bool alive(const Unit& u, TimeMs now) const { return !u.stopped && now < u.exit_at; }

  int cores_;
  ProfileFn profile_;
  bool fail_next_ = false;
  std::map<JobId, Unit> units_;
  std::vector<ExecutorCall> log_;
};

} // namespace edgefair
