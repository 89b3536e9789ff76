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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace edgefair {

using JobId = std::int64_t;
/// Milliseconds since the clock's epoch.
using TimeMs = std::int64_t;
using DurationMs = std::int64_t;

inline constexpr DurationMs seconds(double s) { return static_cast<DurationMs>(s * 1000.0); }

struct ClientId {
  std::string name;
  std::string address;
  int port = 0;

  friend bool operator==(const ClientId&, const ClientId&) = default;
};

/// Job importance class. Level 1 is the lowest.
struct Priority {
  int level = 1;

  friend auto operator<=>(const Priority&, const Priority&) = default;
};

struct JobRequest {
  ClientId client;
  Priority priority;
  std::vector<int> ports;

  friend bool operator==(const JobRequest&, const JobRequest&) = default;
};

struct JobRecord {
  JobId job_id = 0;
  JobRequest request;
  TimeMs arrival_time = 0;
  /// Set once the job has been moved to history.
  std::optional<TimeMs> exec_start;

  const std::string& client_name() const { return request.client.name; }
  int level() const { return request.priority.level; }

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

/// requested container port -> host port
using PortMap = std::map<int, int>;

bool valid_port(int port) noexcept;

/// Throws Error(InvalidArgument) when the client or ports are malformed.
void validate_request(const JobRequest& req);

std::string join_ports(const std::vector<int>& ports);
std::vector<int> split_ports(const std::string& text);

} // namespace edgefair
