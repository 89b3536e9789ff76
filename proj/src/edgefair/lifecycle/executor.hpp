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

#include <optional>
#include <vector>

#include "edgefair/core/types.hpp"

namespace edgefair {

enum class StopOutcome {
  /// Exited within the grace period.
  Graceful,
  /// Force-killed once the grace period ran out.
  Killed,
  /// Had already exited.
  AlreadyGone,
};

/// Runs jobs in isolated units (containers on a real node). Implementations
/// need not be thread-safe; Node serializes calls.
class Executor {
public:
  virtual ~Executor() = default;

  /// Throws Error(ExecutorFailure) when the unit cannot be launched.
  virtual void start(const JobRecord& job, const PortMap& ports, TimeMs now) = 0;

  /// Cumulative CPU time consumed by the job in milliseconds, summed over
  /// cores; non-decreasing. nullopt once the job has exited.
  virtual std::optional<DurationMs> sample_cpu(JobId job, TimeMs now) = 0;

  /// Requests a stop, waiting up to `grace` before forcing it.
  virtual StopOutcome stop(JobId job, DurationMs grace, TimeMs now) = 0;

  /// Jobs that exited on their own since the previous call.
  virtual std::vector<JobId> reap_exited(TimeMs now) = 0;

  virtual int core_count() const = 0;
};

} // namespace edgefair
