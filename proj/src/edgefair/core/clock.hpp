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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <stop_token>

#include "edgefair/core/types.hpp"

namespace edgefair {

enum class ClockMode { Wall, Virtual };

/// Millisecond time source. Wall mode counts from construction using the
/// steady clock; virtual mode starts at 0 and only moves when advanced.
class Clock {
public:
  explicit Clock(ClockMode mode = ClockMode::Wall);

  Clock(const Clock&) = delete;
  Clock& operator=(const Clock&) = delete;

  ClockMode mode() const noexcept { return mode_; }
  TimeMs now() const noexcept;

  /// Virtual mode only. Moving backwards throws Error(InvalidArgument).
  void advance_to(TimeMs t);

  /// Wall mode blocks (waking early on stop); virtual mode advances time.
  /// Returns false when a stop was requested.
  bool sleep_for(DurationMs d, std::stop_token stop = {});
  bool sleep_until(TimeMs t, std::stop_token stop = {});

private:
  ClockMode mode_;
  std::chrono::steady_clock::time_point epoch_;
  std::atomic<TimeMs> virtual_now_{0};
  std::mutex mu_;
  std::condition_variable_any cv_;
};

} // namespace edgefair
