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

#include "edgefair/simulator/simulator.hpp"

#include <chrono>
#include <queue>

#include "edgefair/core/clock.hpp"
#include "edgefair/lifecycle/node.hpp"
#include "edgefair/lifecycle/simulated_executor.hpp"

namespace edgefair {

namespace {

// Lower value runs first among events sharing a timestamp.
enum class EventKind { JobExit = 0, MonitorFinish = 1, MonitorBegin = 2, Arrival = 3 };

struct Event {
  TimeMs at;
  EventKind kind;
  std::uint64_t seq;
  std::size_t payload;

  bool operator>(const Event& o) const {
    if (at != o.at) return at > o.at;
    if (kind != o.kind) return kind > o.kind;
    return seq > o.seq;
  }
};

class EventQueue {
public:
  void push(TimeMs at, EventKind kind, std::size_t payload = 0) {
    q_.push(Event{at, kind, next_seq_++, payload});
  }
  bool empty() const { return q_.empty(); }
  Event pop() {
    auto e = q_.top();
    q_.pop();
    return e;
  }

private:
  std::priority_queue<Event, std::vector<Event>, std::greater<>> q_;
  std::uint64_t next_seq_ = 0;
};

} // namespace

MetricsReport run_scenario(const ScenarioSpec& spec, const SchedulerConfig& cfg_in) {
  const auto cfg = validate_config(cfg_in);
  const auto arrivals = generate_arrivals(spec);

  MetricsReport report;
  report.scenario = std::string(to_string(spec.kind));
  report.strategy = std::string(to_string(cfg.strategy));
  report.seed = spec.seed;
  report.arrival_model = arrival_model(spec);
  report.config = cfg;
  report.total_arrivals = static_cast<std::int64_t>(arrivals.size());
  for (const auto& c : spec.clients) report.per_client_executed[c.name] = 0;
  for (const auto& [level, _] : cfg.priority_weights) report.per_priority_executed[level] = 0;

  Store store(Store::kInMemory);
  const JobProfile profile{spec.job_utilization_pct, seconds(spec.job_duration_s), true};
  SimulatedExecutor executor(4, [profile](const JobRecord&) { return profile; });
  Node node(store, cfg, executor);
  Clock clock(ClockMode::Virtual);

  const TimeMs window_end = seconds(spec.window_s);
  const TimeMs end = window_end + 2 * seconds(spec.job_duration_s);
  const TimeMs period = seconds(cfg.monitor_period_s);
  const TimeMs sample_wait = seconds(cfg.sample_interval_s);

  EventQueue events;
  for (std::size_t i = 0; i < arrivals.size(); ++i)
    events.push(arrivals[i].at, EventKind::Arrival, i);
  if (period <= end) events.push(period, EventKind::MonitorBegin);

  std::vector<MonitorSample> samples;
  auto schedule = [&](TimeMs now) {
    if (now >= window_end) return;
    while (node.running_count() < static_cast<std::size_t>(cfg.max_jobs)) {
      const auto waiting = store.waiting_clients().size();
      const auto t0 = std::chrono::steady_clock::now();
      auto job = node.scheduler_tick(now);
      const auto t1 = std::chrono::steady_clock::now();
      if (!job) break;
      report.decision_latencies_us.push_back(
          std::chrono::duration<double, std::micro>(t1 - t0).count());
      report.selections.push_back(
          {now, job->job_id, job->client.name, job->priority.level, waiting});
      ++report.per_client_executed[job->client.name];
      ++report.per_priority_executed[job->priority.level];
      if (auto exit_at = executor.exit_time(job->job_id)) events.push(*exit_at, EventKind::JobExit);
    }
  };

  while (!events.empty()) {
    const auto ev = events.pop();
    if (ev.at > end) break;
    clock.advance_to(ev.at);
    const auto now = clock.now();
    switch (ev.kind) {
      case EventKind::Arrival: {
        const auto& a = arrivals[ev.payload];
        const auto r = node.handle_request(Request{a.request.client,
                                                   request::NewJob{a.request.priority, a.request.ports}},
                                           now);
        if (std::holds_alternative<response::RejectedNoSpace>(r)) ++report.rejected;
        break;
      }
      case EventKind::JobExit:
        node.reap_exited(now);
        break;
      case EventKind::MonitorBegin:
        samples.push_back(node.begin_monitor_pass(now));
        events.push(now + sample_wait, EventKind::MonitorFinish, samples.size() - 1);
        ++report.monitor_passes;
        if (now + period <= end) events.push(now + period, EventKind::MonitorBegin);
        break;
      case EventKind::MonitorFinish:
        report.idle_terminations +=
            static_cast<std::int64_t>(node.finish_monitor_pass(samples[ev.payload], now).size());
        node.drain_terminations(now);
        break;
    }
    schedule(now);
  }

  const auto stats = node.stats();
  report.executed_total = static_cast<std::int64_t>(stats.started);
  report.queued_residual = static_cast<std::int64_t>(store.queue_length());
  report.terminated_from_queue = static_cast<std::int64_t>(stats.removed_from_queue);
  for (const auto& [level, count] : report.per_priority_executed)
    report.per_priority_pct[level] =
        report.executed_total > 0
            ? 100.0 * static_cast<double>(count) / static_cast<double>(report.executed_total)
            : 0.0;
  return report;
}

} // namespace edgefair
