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

#include "edgefair/core/clock.hpp"

#include "edgefair/core/error.hpp"

namespace edgefair {

Clock::Clock(ClockMode mode) : mode_(mode), epoch_(std::chrono::steady_clock::now()) {}

TimeMs Clock::now() const noexcept {
  if (mode_ == ClockMode::Virtual) return virtual_now_.load(std::memory_order_acquire);
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - epoch_)
      .count();
}

void Clock::advance_to(TimeMs t) {
  if (mode_ != ClockMode::Virtual)
    throw Error(ErrorCode::InvalidArgument, "clock", "cannot advance a wall clock");
  TimeMs cur = virtual_now_.load(std::memory_order_acquire);
  if (t < cur)
    throw Error(ErrorCode::InvalidArgument, "clock",
                "time moved backwards from " + std::to_string(cur) + " to " + std::to_string(t));
  virtual_now_.store(t, std::memory_order_release);
}

bool Clock::sleep_for(DurationMs d, std::stop_token stop) {
  return sleep_until(now() + (d > 0 ? d : 0), stop);
}

bool Clock::sleep_until(TimeMs t, std::stop_token stop) {
  if (mode_ == ClockMode::Virtual) {
    if (t > now()) advance_to(t);
    return !stop.stop_requested();
  }
  std::unique_lock lock(mu_);
  const auto deadline = epoch_ + std::chrono::milliseconds(t);
  cv_.wait_until(lock, stop, deadline, [] { return false; });
  return !stop.stop_requested();
}

} // namespace edgefair
