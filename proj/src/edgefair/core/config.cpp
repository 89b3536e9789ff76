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

#include "edgefair/core/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "edgefair/core/error.hpp"

namespace edgefair {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

[[noreturn]] void invalid(std::string field, const std::string& reason) {
  throw Error(ErrorCode::InvalidConfig, std::move(field), reason);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    invalid(std::string(key), "expected an integer, got '" + std::string(value) + "'");
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out))
    invalid(std::string(key), "expected a number, got '" + std::string(value) + "'");
  return out;
}

void require_positive(const char* field, double v) {
  if (!(v > 0.0)) invalid(field, "must be positive");
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

} // namespace

std::string_view to_string(StrategyKind kind) noexcept {
  switch (kind) {
    case StrategyKind::Fcfs: return "fcfs";
    case StrategyKind::ClientFair: return "client_fair";
    case StrategyKind::PriorityFair: return "priority_fair";
    case StrategyKind::Hybrid: return "hybrid";
  }
  return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept {
  if (name == "fcfs") return StrategyKind::Fcfs;
  if (name == "client_fair") return StrategyKind::ClientFair;
  if (name == "priority_fair") return StrategyKind::PriorityFair;
  if (name == "hybrid") return StrategyKind::Hybrid;
  return std::nullopt;
}

PriorityWeights default_priority_weights() { return {{3, 0.50}, {2, 0.35}, {1, 0.15}}; }

SchedulerConfig validate_config(SchedulerConfig cfg) {
  if (cfg.max_jobs < 1) invalid("max_jobs", "must be >= 1");
  if (cfg.queue_max < 1) invalid("queue_max", "must be >= 1");
  if (!(cfg.cpu_unit > 0.0 && cfg.cpu_unit <= 1.0)) invalid("cpu_unit", "must be in (0, 1]");
  require_positive("mem_unit", cfg.mem_unit);

  if (cfg.priority_weights.empty()) cfg.priority_weights = default_priority_weights();
  double sum = 0.0;
  for (const auto& [level, weight] : cfg.priority_weights) {
    if (level < 1) invalid("priority_weights", "level " + std::to_string(level) + " is not positive");
    if (!(weight > 0.0 && weight <= 1.0))
      invalid("priority_weights", "weight for level " + std::to_string(level) + " must be in (0, 1]");
    sum += weight;
  }
  if (std::fabs(sum - 1.0) > kWeightSumTolerance)
    invalid("priority_weights", "weights sum to " + format_double(sum) + ", expected 1");

  if (!(cfg.idle_threshold_pct > 0.0 && cfg.idle_threshold_pct <= 100.0))
    invalid("idle_threshold_pct", "must be in (0, 100]");
  require_positive("monitor_period_s", cfg.monitor_period_s);
  require_positive("sample_interval_s", cfg.sample_interval_s);
  require_positive("min_uptime_s", cfg.min_uptime_s);
  require_positive("stop_timeout_s", cfg.stop_timeout_s);
  require_positive("max_job_duration_s", cfg.max_job_duration_s);
  // The sampling wait runs inside the monitor period.
  if (cfg.sample_interval_s >= cfg.monitor_period_s)
    invalid("sample_interval_s", "must be shorter than monitor_period_s");

  if (!valid_port(cfg.port_range_min)) invalid("port_range_min", "must be within 1-65535");
  if (!valid_port(cfg.port_range_max)) invalid("port_range_max", "must be within 1-65535");
  if (cfg.port_range_min > cfg.port_range_max)
    invalid("port_range_min", "exceeds port_range_max");
  return cfg;
}

void apply_config_entry(SchedulerConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key.starts_with("weight.")) {
    const int level = parse_int(key, key.substr(7));
    cfg.priority_weights[level] = parse_double(key, value);
  } else if (key == "max_jobs") {
    cfg.max_jobs = parse_int(key, value);
  } else if (key == "queue_max") {
    cfg.queue_max = parse_int(key, value);
  } else if (key == "cpu_unit") {
    cfg.cpu_unit = parse_double(key, value);
  } else if (key == "mem_unit") {
    cfg.mem_unit = parse_double(key, value);
  } else if (key == "strategy") {
    auto kind = parse_strategy(value);
    if (!kind) invalid("strategy", "unknown strategy '" + std::string(value) + "'");
    cfg.strategy = *kind;
  } else if (key == "idle_threshold_pct") {
    cfg.idle_threshold_pct = parse_double(key, value);
  } else if (key == "monitor_period_s") {
    cfg.monitor_period_s = parse_double(key, value);
  } else if (key == "sample_interval_s") {
    cfg.sample_interval_s = parse_double(key, value);
  } else if (key == "min_uptime_s") {
    cfg.min_uptime_s = parse_double(key, value);
  } else if (key == "stop_timeout_s") {
    cfg.stop_timeout_s = parse_double(key, value);
  } else if (key == "max_job_duration_s") {
    cfg.max_job_duration_s = parse_double(key, value);
  } else if (key == "port_range_min") {
    cfg.port_range_min = parse_int(key, value);
  } else if (key == "port_range_max") {
    cfg.port_range_max = parse_int(key, value);
  } else {
    invalid(std::string(key), "unknown key");
  }
}

SchedulerConfig parse_config_text(std::string_view text) {
  SchedulerConfig cfg;
  bool weights_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      invalid("line " + std::to_string(line_no), "expected key=value");
    const auto key = trim(line.substr(0, eq));
    if (key.starts_with("weight.") && !weights_seen) {
      cfg.priority_weights.clear();
      weights_seen = true;
    }
    apply_config_entry(cfg, key, line.substr(eq + 1));
  }
  return validate_config(cfg);
}

SchedulerConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string to_config_text(const SchedulerConfig& cfg) {
  std::ostringstream os;
  os << "max_jobs=" << cfg.max_jobs << '\n'
     << "queue_max=" << cfg.queue_max << '\n'
     << "cpu_unit=" << format_double(cfg.cpu_unit) << '\n'
     << "mem_unit=" << format_double(cfg.mem_unit) << '\n'
     << "strategy=" << to_string(cfg.strategy) << '\n';
  for (auto it = cfg.priority_weights.rbegin(); it != cfg.priority_weights.rend(); ++it)
    os << "weight." << it->first << '=' << format_double(it->second) << '\n';
  os << "idle_threshold_pct=" << format_double(cfg.idle_threshold_pct) << '\n'
     << "monitor_period_s=" << format_double(cfg.monitor_period_s) << '\n'
     << "sample_interval_s=" << format_double(cfg.sample_interval_s) << '\n'
     << "min_uptime_s=" << format_double(cfg.min_uptime_s) << '\n'
     << "stop_timeout_s=" << format_double(cfg.stop_timeout_s) << '\n'
     << "max_job_duration_s=" << format_double(cfg.max_job_duration_s) << '\n'
     << "port_range_min=" << cfg.port_range_min << '\n'
     << "port_range_max=" << cfg.port_range_max << '\n';
  return os.str();
}

} // namespace edgefair
