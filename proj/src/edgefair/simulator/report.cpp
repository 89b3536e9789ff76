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

#include "edgefair/simulator/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "edgefair/core/error.hpp"

namespace edgefair {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, path.string(), "cannot open for writing");
  out << content;
  if (!out) throw Error(ErrorCode::Io, path.string(), "write failed");
}

} // namespace

std::string report_to_json(const MetricsReport& r) {
  json per_client = json::object();
  for (const auto& [client, n] : r.per_client_executed) per_client[client] = n;
  json per_priority = json::object();
  json per_priority_n = json::object();
  for (const auto& [level, pct] : r.per_priority_pct) per_priority[std::to_string(level)] = pct;
  for (const auto& [level, n] : r.per_priority_executed) per_priority_n[std::to_string(level)] = n;

  json selections = json::array();
  for (const auto& s : r.selections)
    selections.push_back({{"at_ms", s.at},
                          {"job_id", s.job_id},
                          {"client", s.client},
                          {"priority", s.level},
                          {"waiting_clients", s.waiting_clients}});

  json weights = json::object();
  for (const auto& [level, w] : r.config.priority_weights) weights[std::to_string(level)] = w;

  const json doc = {
      {"scenario",
       {{"kind", r.scenario}, {"seed", r.seed}, {"arrival_model", r.arrival_model}}},
      {"strategy", r.strategy},
      {"config",
       {{"max_jobs", r.config.max_jobs},
        {"queue_max", r.config.queue_max},
        {"priority_weights", weights},
        {"monitor_period_s", r.config.monitor_period_s},
        {"idle_threshold_pct", r.config.idle_threshold_pct}}},
      {"per_client_executed", per_client},
      {"per_priority_executed", per_priority_n},
      {"per_priority_pct", per_priority},
      {"total_arrivals", r.total_arrivals},
      {"executed_total", r.executed_total},
      {"rejected", r.rejected},
      {"queued_residual", r.queued_residual},
      {"terminated_from_queue", r.terminated_from_queue},
      {"idle_terminations", r.idle_terminations},
      {"monitor_passes", r.monitor_passes},
      {"selections", selections},
  };
  return doc.dump(2) + "\n";
}

void write_per_client_csv(const MetricsReport& r, std::ostream& out) {
  out << "client,count\n";
  for (const auto& [client, n] : r.per_client_executed) out << client << ',' << n << '\n';
}

void write_per_priority_csv(const MetricsReport& r, std::ostream& out) {
  out << "level,pct\n";
  for (auto it = r.per_priority_pct.rbegin(); it != r.per_priority_pct.rend(); ++it)
    out << it->first << ',' << fixed(it->second, 2) << '\n';
}

void write_report_files(const MetricsReport& r, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, dir, ec.message());
  const fs::path base(dir);
  write_file(base / "report.json", report_to_json(r));
  std::ostringstream clients;
  write_per_client_csv(r, clients);
  write_file(base / "per_client.csv", clients.str());
  std::ostringstream levels;
  write_per_priority_csv(r, levels);
  write_file(base / "per_priority.csv", levels.str());
}

std::string summary_table(const MetricsReport& r) {
  std::ostringstream os;
  os << "scenario " << r.scenario << ", strategy " << r.strategy << ", seed " << r.seed << '\n';
  os << std::left << std::setw(10) << "client" << std::right << std::setw(9) << "executed"
     << "    " << std::left << std::setw(8) << "level" << std::right << std::setw(10)
     << "executed%" << '\n';
  std::vector<std::pair<std::string, std::string>> left, right;
  for (const auto& [client, n] : r.per_client_executed) left.emplace_back(client, std::to_string(n));
  for (auto it = r.per_priority_pct.rbegin(); it != r.per_priority_pct.rend(); ++it)
    right.emplace_back("PL" + std::to_string(it->first), fixed(it->second, 2));
  const auto rows = std::max(left.size(), right.size());
  for (std::size_t i = 0; i < rows; ++i) {
    if (i < left.size())
      os << std::left << std::setw(10) << left[i].first << std::right << std::setw(9)
         << left[i].second;
    else
      os << std::string(19, ' ');
    if (i < right.size())
      os << "    " << std::left << std::setw(8) << right[i].first << std::right << std::setw(10)
         << right[i].second;
    os << '\n';
  }
  os << "arrivals " << r.total_arrivals << ", executed " << r.executed_total << ", rejected "
     << r.rejected << ", still queued " << r.queued_residual << '\n';
  return os.str();
}

} // namespace edgefair
