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

#include "edgefair/lifecycle/node.hpp"

#include "edgefair/core/error.hpp"
#include "edgefair/strategies/strategies.hpp"

namespace edgefair {

double utilization_pct(DurationMs cpu_before, DurationMs cpu_after, DurationMs interval, int cores) {
  if (interval <= 0 || cores <= 0) return 0.0;
  return 100.0 * static_cast<double>(cpu_after - cpu_before) /
         (static_cast<double>(interval) * cores);
}

Node::Node(Store& store, SchedulerConfig cfg, Executor& executor)
    : store_(store),
      cfg_(validate_config(std::move(cfg))),
      executor_(executor),
      ports_(cfg_.port_range_min, cfg_.port_range_max) {
  store_.set_queue_limit(static_cast<std::size_t>(cfg_.queue_max));
}

void Node::set_notifier(Notifier fn) {
  std::lock_guard lock(mu_);
  notifier_ = std::move(fn);
}

void Node::notify(const std::string& client, const Response& r) {
  if (notifier_) notifier_(client, r);
}

Response Node::handle_request(const Request& req, TimeMs now) {
  std::lock_guard lock(mu_);
  ++stats_.requests;
  return std::visit(
      [&](const auto& body) -> Response {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, request::NewJob>) {
          return admit(req, body, now);
        } else if constexpr (std::is_same_v<T, request::Terminate>) {
          return terminate(req, body);
        } else {
          ++stats_.invalid;
          return response::InvalidRequest{"unrecognised request"};
        }
      },
      req.body);
}

Response Node::admit(const Request& req, const request::NewJob& job, TimeMs now) {
  JobRequest jr{req.client, job.priority, job.ports};
  try {
    validate_request(jr);
  } catch (const Error& e) {
    ++stats_.invalid;
    return response::InvalidRequest{e.what()};
  }
  if (!cfg_.accepts_priority(job.priority)) {
    ++stats_.invalid;
    return response::InvalidRequest{"unknown priority level " + std::to_string(job.priority.level)};
  }
  if (store_.queue_length() >= static_cast<std::size_t>(cfg_.queue_max)) {
    ++stats_.rejected_no_space;
    return response::RejectedNoSpace{};
  }
  const auto rec = store_.enqueue_job(jr, now);
  ++stats_.admitted;
  return response::Queued{rec.job_id};
}

Response Node::terminate(const Request& req, const request::Terminate& term) {
  const auto id = term.job_id;
  if (auto queued = store_.find_queued(id)) {
    if (queued->client_name() != req.client.name) {
      ++stats_.invalid;
      return response::InvalidRequest{"job " + std::to_string(id) + " belongs to another client"};
    }
    store_.remove_from_queue(id);
    ++stats_.removed_from_queue;
    return response::RemovedFromQueue{id};
  }
  if (auto it = running_.find(id); it != running_.end() && it->second.client.name != req.client.name) {
    ++stats_.invalid;
    return response::InvalidRequest{"job " + std::to_string(id) + " belongs to another client"};
  }
  if (!store_.termination_pending(id)) store_.enqueue_termination(id, TerminationReason::ClientRequest);
  return response::QueuedForTermination{id};
}

std::optional<RunningJob> Node::scheduler_tick(TimeMs now) {
  std::lock_guard lock(mu_);
  if (running_.size() >= static_cast<std::size_t>(cfg_.max_jobs)) return std::nullopt;

  Store::Transaction tx(store_);
  auto rec = select_next(cfg_.strategy, store_, cfg_, now);
  if (!rec) return std::nullopt;

  // Both failures below unwind `tx`, which puts the job back in the queue.
  PortMap mapping = ports_.allocate(rec->request.ports);
  try {
    executor_.start(*rec, mapping, now);
  } catch (const std::exception& e) {
    ports_.release(mapping);
    ++stats_.executor_failures;
    throw Error(ErrorCode::ExecutorFailure, "job " + std::to_string(rec->job_id), e.what());
  }
  tx.commit();

  RunningJob job{rec->job_id, rec->request.client, rec->request.priority, now, std::move(mapping)};
  running_.emplace(job.job_id, job);
  ++stats_.started;
  notify(job.client.name, response::Started{job.job_id, job.port_mappings});
  return job;
}

std::vector<RunningJob> Node::schedule_ready(TimeMs now) {
  std::vector<RunningJob> out;
  while (auto job = scheduler_tick(now)) out.push_back(std::move(*job));
  return out;
}

MonitorSample Node::begin_monitor_pass(TimeMs now) {
  std::lock_guard lock(mu_);
  MonitorSample sample;
  sample.taken_at = now;
  const auto min_uptime = seconds(cfg_.min_uptime_s);
  for (const auto& [id, job] : running_) {
    if (now - job.start_time < min_uptime) continue;
    if (auto cpu = executor_.sample_cpu(id, now)) sample.cpu.emplace(id, *cpu);
  }
  return sample;
}

std::vector<JobId> Node::finish_monitor_pass(const MonitorSample& first, TimeMs now) {
  std::lock_guard lock(mu_);
  std::vector<JobId> idle;
  const auto interval = now - first.taken_at;
  for (const auto& [id, before] : first.cpu) {
    if (!running_.count(id)) continue;
    const auto after = executor_.sample_cpu(id, now);
    if (!after) continue;
    const double pct = utilization_pct(before, *after, interval, executor_.core_count());
    if (pct >= cfg_.idle_threshold_pct) continue;
    idle.push_back(id);
    ++stats_.idle_detected;
    if (!store_.termination_pending(id)) store_.enqueue_termination(id, TerminationReason::Idle);
  }
  return idle;
}

std::vector<JobId> Node::monitor_pass(Clock& clock, std::stop_token stop) {
  const auto first = begin_monitor_pass(clock.now());
  if (!clock.sleep_for(seconds(cfg_.sample_interval_s), stop)) return {};
  return finish_monitor_pass(first, clock.now());
}

std::size_t Node::drain_terminations(TimeMs now) {
  std::lock_guard lock(mu_);
  std::size_t stopped = 0;
  while (auto entry = store_.pop_termination()) {
    auto it = running_.find(entry->job_id);
    if (it == running_.end()) continue;
    executor_.stop(entry->job_id, seconds(cfg_.stop_timeout_s), now);
    ports_.release(it->second.port_mappings);
    const auto client = it->second.client.name;
    running_.erase(it);
    ++stats_.terminated;
    ++stopped;
    notify(client, response::Terminated{entry->job_id});
  }
  return stopped;
}

std::vector<JobId> Node::reap_exited(TimeMs now) {
  std::lock_guard lock(mu_);
  std::vector<JobId> out;
  for (JobId id : executor_.reap_exited(now)) {
    auto it = running_.find(id);
    if (it == running_.end()) continue;
    ports_.release(it->second.port_mappings);
    running_.erase(it);
    ++stats_.exited;
    out.push_back(id);
  }
  return out;
}

std::vector<RunningJob> Node::running() const {
  std::lock_guard lock(mu_);
  std::vector<RunningJob> out;
  out.reserve(running_.size());
  for (const auto& [_, job] : running_) out.push_back(job);
  return out;
}

std::size_t Node::running_count() const {
  std::lock_guard lock(mu_);
  return running_.size();
}

std::optional<RunningJob> Node::find_running(JobId id) const {
  std::lock_guard lock(mu_);
  auto it = running_.find(id);
  if (it == running_.end()) return std::nullopt;
  return it->second;
}

NodeStats Node::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::size_t run_monitor_loop(Node& node, Clock& clock, std::stop_token stop,
                             std::optional<TimeMs> until) {
  const auto period = seconds(node.config().monitor_period_s);
  std::size_t passes = 0;
  TimeMs next = clock.now() + period;
  while (!until || next <= *until) {
    if (!clock.sleep_until(next, stop)) break;
    node.monitor_pass(clock, stop);
    if (stop.stop_requested()) break;
    node.drain_terminations(clock.now());
    ++passes;
    next += period;
  }
  return passes;
}

} // namespace edgefair
