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
#include <string>
#include <string_view>
#include <vector>

#include "edgefair/core/types.hpp"

namespace edgefair {

enum class ScenarioKind { Equal, Random, Gaussian };

std::string_view to_string(ScenarioKind kind) noexcept;
std::optional<ScenarioKind> parse_scenario(std::string_view name) noexcept;

/// Six clients named A to F.
std::vector<ClientId> default_clients();

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Equal;
  std::vector<ClientId> clients = default_clients();
  double window_s = 3600.0;
  std::uint64_t seed = 1;
  double job_duration_s = 300.0;
  /// CPU use of every simulated job, percent of the node.
  double job_utilization_pct = 80.0;
  /// Equal: exact requests per client. Random: upper bound per client.
  int jobs_per_client = 50;
  /// Equal only: client i sends all its requests inside the i-th slice of
  /// the window instead of the clients taking turns.
  bool front_loaded = false;
  /// Gaussian: requests per client, in client order.
  std::vector<int> gaussian_counts = {15, 45, 90, 90, 45, 15};
};

struct Arrival {
  TimeMs at = 0;
  JobRequest request;

  friend bool operator==(const Arrival&, const Arrival&) = default;
};

/// Throws Error(InvalidArgument) for specs the generators cannot honour.
void validate_scenario(const ScenarioSpec& spec);

/// Time-ordered requests for the whole window; identical for identical
/// specs. Equal ties are broken by client order.
std::vector<Arrival> generate_arrivals(const ScenarioSpec& spec);

/// One-line description of how arrival times are produced.
std::string arrival_model(const ScenarioSpec& spec);

} // namespace edgefair
