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

#include "edgefair/lifecycle/simulated_executor.hpp"

#include <algorithm>
#include <cmath>

#include "edgefair/core/error.hpp"

namespace edgefair {

SimulatedExecutor::SimulatedExecutor(int cores, ProfileFn profile)
    : cores_(cores), profile_(std::move(profile)) {
  if (cores_ < 1) throw Error(ErrorCode::InvalidArgument, "cores", "must be >= 1");
}

void SimulatedExecutor::start(const JobRecord& job, const PortMap&, TimeMs now) {
  if (fail_next_) {
    fail_next_ = false;
    throw Error(ErrorCode::ExecutorFailure, "job " + std::to_string(job.job_id),
                "simulated launch failure");
  }
  Unit u;
  u.profile = profile_ ? profile_(job) : JobProfile{};
  u.started = now;
  u.exit_at = now + u.profile.duration;
  units_[job.job_id] = u;
  log_.push_back({ExecutorCallKind::Start, job.job_id, now});
}

std::optional<DurationMs> SimulatedExecutor::sample_cpu(JobId job, TimeMs now) {
  auto it = units_.find(job);
  if (it == units_.end() || !alive(it->second, now)) return std::nullopt;
  log_.push_back({ExecutorCallKind::Sample, job, now});
  const auto& u = it->second;
  const double busy = u.profile.utilization_pct / 100.0 * cores_;
  return static_cast<DurationMs>(std::llround(busy * static_cast<double>(now - u.started)));
}

StopOutcome SimulatedExecutor::stop(JobId job, DurationMs grace, TimeMs now) {
  auto it = units_.find(job);
  if (it == units_.end() || !alive(it->second, now)) return StopOutcome::AlreadyGone;
  auto& u = it->second;
  log_.push_back({ExecutorCallKind::Stop, job, now, grace});
  u.stopped = true;
  u.reaped = true;
  if (u.profile.honors_stop) return StopOutcome::Graceful;
  log_.push_back({ExecutorCallKind::Kill, job, now + grace});
  return StopOutcome::Killed;
}

std::vector<JobId> SimulatedExecutor::reap_exited(TimeMs now) {
  std::vector<JobId> out;
  for (auto& [id, u] : units_) {
    if (!u.reaped && !alive(u, now)) {
      u.reaped = true;
      out.push_back(id);
    }
  }
  return out;
}

void SimulatedExecutor::exit_job(JobId job, TimeMs at) {
  auto it = units_.find(job);
  if (it != units_.end()) it->second.exit_at = std::min(it->second.exit_at, at);
}

std::optional<TimeMs> SimulatedExecutor::exit_time(JobId job) const {
  auto it = units_.find(job);
  if (it == units_.end() || it->second.stopped) return std::nullopt;
  return it->second.exit_at;
}

std::vector<ExecutorCall> SimulatedExecutor::calls_for(JobId job) const {
  std::vector<ExecutorCall> out;
  std::copy_if(log_.begin(), log_.end(), std::back_inserter(out),
               [job](const ExecutorCall& c) { return c.job_id == job; });
  return out;
}

} // namespace edgefair
