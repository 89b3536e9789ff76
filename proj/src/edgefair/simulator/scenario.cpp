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

#include "edgefair/simulator/scenario.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "edgefair/core/error.hpp"

namespace edgefair {

namespace {

constexpr int kLevels = 3;

/// n requests split as evenly as possible, extra requests going to the
/// lowest levels first: 50 -> 17 x PL1, 17 x PL2, 16 x PL3.
std::vector<int> equal_priority_mix(int n) {
  std::vector<int> out;
  for (int level = 1; level <= kLevels; ++level) {
    const int count = n / kLevels + (level <= n % kLevels ? 1 : 0);
    out.insert(out.end(), static_cast<std::size_t>(count), level);
  }
  return out;
}

struct Tagged {
  Arrival arrival;
  std::size_t client_index;
  int seq;
};

std::vector<Arrival> finish(std::vector<Tagged> tagged) {
  std::stable_sort(tagged.begin(), tagged.end(), [](const Tagged& a, const Tagged& b) {
    if (a.arrival.at != b.arrival.at) return a.arrival.at < b.arrival.at;
    if (a.client_index != b.client_index) return a.client_index < b.client_index;
    return a.seq < b.seq;
  });
  std::vector<Arrival> out;
  out.reserve(tagged.size());
  for (auto& t : tagged) out.push_back(std::move(t.arrival));
  return out;
}

JobRequest make_request(const ClientId& client, int level) {
  return JobRequest{client, Priority{level}, {}};
}

std::vector<Arrival> equal_arrivals(const ScenarioSpec& spec, std::mt19937_64& rng) {
  const auto window = seconds(spec.window_s);
  const auto n_clients = static_cast<std::int64_t>(spec.clients.size());
  const std::int64_t per_client = spec.jobs_per_client;
  std::vector<Tagged> out;
  for (std::size_t c = 0; c < spec.clients.size(); ++c) {
    auto mix = equal_priority_mix(spec.jobs_per_client);
    std::shuffle(mix.begin(), mix.end(), rng);
    for (std::int64_t k = 0; k < per_client; ++k) {
      const auto ci = static_cast<std::int64_t>(c);
      TimeMs at = 0;
      if (spec.front_loaded) {
        // Client c owns slice [c, c+1) of the window.
        at = (window * (2 * (ci * per_client + k) + 1)) / (2 * n_clients * per_client);
      } else {
        // Clients take turns; every client's requests are evenly spaced.
        at = (window * (2 * (k * n_clients + ci) + 1)) / (2 * n_clients * per_client);
      }
      out.push_back({{at, make_request(spec.clients[c], mix[static_cast<std::size_t>(k)])}, c,
                     static_cast<int>(k)});
    }
  }
  return finish(std::move(out));
}

std::vector<Arrival> random_arrivals(const ScenarioSpec& spec, std::mt19937_64& rng) {
  const auto window = static_cast<double>(seconds(spec.window_s));
  std::uniform_int_distribution<int> count_dist(1, spec.jobs_per_client);
  std::uniform_int_distribution<int> level_dist(1, kLevels);
  std::vector<Tagged> out;
  for (std::size_t c = 0; c < spec.clients.size(); ++c) {
    const int target = count_dist(rng);
    std::exponential_distribution<double> gap(static_cast<double>(target) / window);
    double t = 0.0;
    for (int k = 0; k < target; ++k) {
      t += gap(rng);
      if (t >= window) break;
      out.push_back({{static_cast<TimeMs>(t), make_request(spec.clients[c], level_dist(rng))}, c, k});
    }
  }
  return finish(std::move(out));
}

std::vector<Arrival> gaussian_arrivals(const ScenarioSpec& spec, std::mt19937_64& rng) {
  const auto window = seconds(spec.window_s);
  std::uniform_int_distribution<int> level_dist(1, kLevels);
  std::vector<Tagged> out;
  const std::size_t n = spec.clients.size();
  for (std::size_t c = 0; c < n; ++c) {
    // First third of the clients arrive late, the last third early, the rest
    // throughout: A,B in the second half, E,F in the first quarter.
    TimeMs lo = 0;
    TimeMs hi = window;
    if (c < n / 3) {
      lo = window / 2;
    } else if (c >= n - n / 3) {
      hi = window / 4;
    }
    std::uniform_int_distribution<TimeMs> time_dist(lo, hi - 1);
    for (int k = 0; k < spec.gaussian_counts[c]; ++k)
      out.push_back({{time_dist(rng), make_request(spec.clients[c], level_dist(rng))}, c, k});
  }
  return finish(std::move(out));
}

} // namespace

std::string_view to_string(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::Equal: return "equal";
    case ScenarioKind::Random: return "random";
    case ScenarioKind::Gaussian: return "gaussian";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario(std::string_view name) noexcept {
  if (name == "equal") return ScenarioKind::Equal;
  if (name == "random") return ScenarioKind::Random;
  if (name == "gaussian") return ScenarioKind::Gaussian;
  return std::nullopt;
}

std::vector<ClientId> default_clients() {
  std::vector<ClientId> out;
  for (int i = 0; i < 6; ++i)
    out.push_back({std::string(1, static_cast<char>('A' + i)), "10.0.0." + std::to_string(i + 1),
                   5000 + i});
  return out;
}

void validate_scenario(const ScenarioSpec& spec) {
  auto bad = [](const char* field, const std::string& why) {
    throw Error(ErrorCode::InvalidArgument, field, why);
  };
  if (spec.clients.empty()) bad("clients", "at least one client is required");
  std::set<std::string> names;
  for (const auto& c : spec.clients) {
    if (c.name.empty()) bad("clients", "client names must be non-empty");
    if (!names.insert(c.name).second) bad("clients", "duplicate client " + c.name);
  }
  if (!(spec.window_s > 0)) bad("window_s", "must be positive");
  if (!(spec.job_duration_s > 0)) bad("job_duration_s", "must be positive");
  if (!(spec.job_utilization_pct >= 0 && spec.job_utilization_pct <= 100))
    bad("job_utilization_pct", "must be within 0-100");
  if (spec.jobs_per_client < 1) bad("jobs_per_client", "must be >= 1");
  if (spec.kind == ScenarioKind::Gaussian) {
    if (spec.gaussian_counts.size() != spec.clients.size())
      bad("gaussian_counts", "needs one count per client");
    for (int n : spec.gaussian_counts)
      if (n < 0) bad("gaussian_counts", "counts must be non-negative");
  }
}

std::vector<Arrival> generate_arrivals(const ScenarioSpec& spec) {
  validate_scenario(spec);
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
    case ScenarioKind::Equal: return equal_arrivals(spec, rng);
    case ScenarioKind::Random: return random_arrivals(spec, rng);
    case ScenarioKind::Gaussian: return gaussian_arrivals(spec, rng);
  }
  return {};
}

std::string arrival_model(const ScenarioSpec& spec) {
  switch (spec.kind) {
    case ScenarioKind::Equal:
      return spec.front_loaded
                 ? "equal: each client sends its requests evenly inside its own slice of the window, "
                   "clients in name order"
                 : "equal: clients take turns, each client's requests evenly spaced over the window";
    case ScenarioKind::Random:
      return "random: per-client request count uniform in [1, " +
             std::to_string(spec.jobs_per_client) +
             "], exponential inter-arrival times at count/window, uniform priorities";
    case ScenarioKind::Gaussian:
      return "gaussian: fixed per-client counts; first third of clients in the second half of the "
             "window, last third in the first quarter, others throughout; uniform priorities";
  }
  return {};
}

} // namespace edgefair
