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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "edgefair/core/error.hpp"
#include "edgefair/lifecycle/node.hpp"
#include "edgefair/lifecycle/ports.hpp"
#include "edgefair/lifecycle/simulated_executor.hpp"

using namespace edgefair;

namespace {

ClientId client(const std::string& name) { return {name, "10.0.0.1", 5000}; }

Request new_job(const std::string& name, int level = 1, std::vector<int> ports = {}) {
  return {client(name), request::NewJob{Priority{level}, std::move(ports)}};
}

Request terminate(const std::string& name, JobId id) {
  return {client(name), request::Terminate{id}};
}

template <class T>
const T& as(const Response& r) {
  const T* p = std::get_if<T>(&r);
  if (!p) throw std::runtime_error("unexpected response alternative " + std::to_string(r.index()));
  return *p;
}

struct Fixture {
  explicit Fixture(SchedulerConfig cfg = {}, SimulatedExecutor::ProfileFn profile = {})
      : executor(4, std::move(profile)), node(store, cfg, executor) {}
  Store store{Store::kInMemory};
  SimulatedExecutor executor;
  Node node;
};

} // namespace

TEST(Ports, LowestFreeInRequestOrder) {
  PortPool pool(30000, 32767);
  const std::vector<int> req{80, 443};
  EXPECT_EQ(pool.allocate(req), (PortMap{{80, 30000}, {443, 30001}}));
  EXPECT_EQ(pool.allocate(std::vector<int>{}), PortMap{});
}

TEST(Ports, ExhaustionAllocatesNothing) {
  PortPool pool(30000, 30000);
  const std::vector<int> two{80, 443};
  try {
    pool.allocate(two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PortExhausted);
  }
  EXPECT_EQ(pool.free_count(), 1u);
}

TEST(Ports, ReleaseMakesReusable) {
  PortPool pool(30000, 30010);
  const auto m = pool.allocate(std::vector<int>{1, 2, 3});
  EXPECT_TRUE(pool.in_use(30001));
  pool.release(m);
  EXPECT_EQ(pool.free_count(), 11u);
  EXPECT_EQ(pool.allocate(std::vector<int>{7}).at(7), 30000);
}

TEST(Admission, QueuedThenRejectedWhenFull) {
  SchedulerConfig cfg;
  cfg.queue_max = 2;
  Fixture f(cfg);
  EXPECT_EQ(as<response::Queued>(f.node.handle_request(new_job("A"), 1)).job_id, 1);
  f.node.handle_request(new_job("A"), 2);
  EXPECT_TRUE(std::holds_alternative<response::RejectedNoSpace>(f.node.handle_request(new_job("B"), 3)));
  EXPECT_EQ(f.store.queue_length(), 2u);
  EXPECT_EQ(f.node.stats().rejected_no_space, 1u);
}

TEST(Admission, TerminateQueuedJobRemovesIt) {
  Fixture f;
  const auto id = as<response::Queued>(f.node.handle_request(new_job("A"), 1)).job_id;
  f.node.handle_request(new_job("B"), 2);
  EXPECT_EQ(as<response::RemovedFromQueue>(f.node.handle_request(terminate("A", id), 3)).job_id, id);
  EXPECT_EQ(f.store.queue_length(), 1u);
}

TEST(Admission, TerminateRunningJobQueuesTermination) {
  Fixture f;
  const auto id = as<response::Queued>(f.node.handle_request(new_job("A"), 1)).job_id;
  ASSERT_TRUE(f.node.scheduler_tick(2));
  EXPECT_EQ(as<response::QueuedForTermination>(f.node.handle_request(terminate("A", id), 3)).job_id,
            id);
  EXPECT_EQ(f.store.termination_queue().size(), 1u);
  // Asking twice does not add a second entry.
  f.node.handle_request(terminate("A", id), 4);
  EXPECT_EQ(f.store.termination_queue().size(), 1u);
}

TEST(Admission, CannotTerminateAnotherClientsJob) {
  Fixture f;
  const auto queued = as<response::Queued>(f.node.handle_request(new_job("A"), 1)).job_id;
  EXPECT_TRUE(std::holds_alternative<response::InvalidRequest>(
      f.node.handle_request(terminate("B", queued), 2)));
  ASSERT_TRUE(f.node.scheduler_tick(3));
  EXPECT_TRUE(std::holds_alternative<response::InvalidRequest>(
      f.node.handle_request(terminate("B", queued), 4)));
  EXPECT_TRUE(f.store.termination_queue().empty());
}

TEST(Admission, InvalidRequests) {
  Fixture f;
  EXPECT_TRUE(std::holds_alternative<response::InvalidRequest>(
      f.node.handle_request({client("A"), request::Invalid{"garbage"}}, 1)));
  EXPECT_TRUE(std::holds_alternative<response::InvalidRequest>(
      f.node.handle_request(new_job("A", 9), 1)));
  EXPECT_TRUE(std::holds_alternative<response::InvalidRequest>(
      f.node.handle_request(new_job("A", 1, {80, 80}), 1)));
  EXPECT_EQ(f.store.queue_length(), 0u);
  EXPECT_EQ(f.node.stats().invalid, 3u);
}

TEST(Tick, FullNodeSelectsNothing) {
  SchedulerConfig cfg;
  cfg.max_jobs = 1;
  Fixture f(cfg);
  f.node.handle_request(new_job("A"), 1);
  f.node.handle_request(new_job("B"), 2);
  ASSERT_TRUE(f.node.scheduler_tick(3));
  EXPECT_FALSE(f.node.scheduler_tick(4));
  EXPECT_EQ(f.store.queue_length(), 1u);
  EXPECT_EQ(f.store.total(), 1);
}

TEST(Tick, EmptyQueue) {
  Fixture f;
  EXPECT_FALSE(f.node.scheduler_tick(0));
}

TEST(Tick, StartsJobWithPorts) {
  Fixture f;
  std::vector<std::pair<std::string, Response>> notices;
  f.node.set_notifier([&](const std::string& c, const Response& r) { notices.emplace_back(c, r); });
  const auto id = as<response::Queued>(f.node.handle_request(new_job("A", 2, {80, 443}), 1)).job_id;
  const auto job = f.node.scheduler_tick(5);
  ASSERT_TRUE(job);
  EXPECT_EQ(job->job_id, id);
  EXPECT_EQ(job->start_time, 5);
  EXPECT_EQ(job->port_mappings, (PortMap{{80, 30000}, {443, 30001}}));
  EXPECT_EQ(f.store.queue_length(), 0u);
  EXPECT_EQ(f.store.total(), 1);
  ASSERT_EQ(notices.size(), 1u);
  EXPECT_EQ(notices[0].first, "A");
  EXPECT_EQ(as<response::Started>(notices[0].second), (response::Started{id, job->port_mappings}));
}

TEST(Tick, LaunchFailureKeepsQueuePosition) {
  Fixture f;
  const auto a = as<response::Queued>(f.node.handle_request(new_job("A", 1, {80}), 1)).job_id;
  f.node.handle_request(new_job("B"), 2);
  f.executor.fail_next_start();
  try {
    f.node.scheduler_tick(3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExecutorFailure);
  }
  EXPECT_EQ(f.store.queue_length(), 2u);
  EXPECT_EQ(f.store.total(), 0);
  EXPECT_EQ(f.store.oldest()->job_id, a);
  EXPECT_EQ(f.node.running_count(), 0u);
  // Ports were given back.
  EXPECT_EQ(f.node.scheduler_tick(4)->port_mappings.at(80), 30000);
}

TEST(Tick, HostPortsUniqueAcrossRunningJobs) {
  Fixture f;
  for (int i = 0; i < 4; ++i) f.node.handle_request(new_job("A", 1, {80, 81}), i);
  const auto started = f.node.schedule_ready(10);
  ASSERT_EQ(started.size(), 4u);
  std::set<int> hosts;
  for (const auto& j : started)
    for (const auto& [_, h] : j.port_mappings) EXPECT_TRUE(hosts.insert(h).second);
}

namespace {

SimulatedExecutor::ProfileFn profile_by_level(std::map<int, double> util,
                                              bool honors_stop = true) {
  return [util, honors_stop](const JobRecord& rec) {
    JobProfile p;
    p.utilization_pct = util.at(rec.level());
    p.duration = seconds(3600);
    p.honors_stop = honors_stop;
    return p;
  };
}

} // namespace

TEST(Monitor, LowUtilizationJobIsQueuedForTermination) {
  Fixture f({}, profile_by_level({{1, 5.0}}));
  f.node.handle_request(new_job("A"), 0);
  const auto job = f.node.scheduler_tick(0);
  const auto first = f.node.begin_monitor_pass(seconds(90));
  EXPECT_EQ(first.cpu.size(), 1u);
  EXPECT_EQ(f.node.finish_monitor_pass(first, seconds(100)), std::vector<JobId>{job->job_id});
  EXPECT_EQ(f.store.termination_queue(),
            (std::vector<TerminationEntry>{{job->job_id, TerminationReason::Idle}}));
}

TEST(Monitor, BusyJobIsLeftAlone) {
  Fixture f({}, profile_by_level({{1, 50.0}}));
  f.node.handle_request(new_job("A"), 0);
  f.node.scheduler_tick(0);
  const auto first = f.node.begin_monitor_pass(seconds(90));
  EXPECT_TRUE(f.node.finish_monitor_pass(first, seconds(100)).empty());
  EXPECT_TRUE(f.store.termination_queue().empty());
}

TEST(Monitor, YoungJobIsNotSampled) {
  Fixture f({}, profile_by_level({{1, 0.0}}));
  f.node.handle_request(new_job("A"), 0);
  const auto job = f.node.scheduler_tick(0);
  const auto first = f.node.begin_monitor_pass(seconds(30));
  EXPECT_TRUE(first.cpu.empty());
  EXPECT_TRUE(f.node.finish_monitor_pass(first, seconds(40)).empty());
  for (const auto& call : f.executor.calls_for(job->job_id))
    EXPECT_NE(call.kind, ExecutorCallKind::Sample);
}

TEST(Monitor, UtilizationFormula) {
  EXPECT_DOUBLE_EQ(utilization_pct(0, 2000, 10'000, 4), 5.0);
  EXPECT_DOUBLE_EQ(utilization_pct(1000, 1000, 10'000, 4), 0.0);
}

TEST(Drain, StopsWithGraceThenForce) {
  Fixture f({}, profile_by_level({{1, 80.0}, {2, 80.0}}, false));
  f.node.handle_request(new_job("A"), 0);
  const auto job = f.node.scheduler_tick(0);
  f.node.handle_request(terminate("A", job->job_id), 5);
  std::vector<Response> notices;
  f.node.set_notifier([&](const std::string&, const Response& r) { notices.push_back(r); });
  EXPECT_EQ(f.node.drain_terminations(seconds(6)), 1u);
  EXPECT_EQ(f.node.running_count(), 0u);
  EXPECT_TRUE(f.store.termination_queue().empty());
  const auto calls = f.executor.calls_for(job->job_id);
  ASSERT_GE(calls.size(), 3u);
  EXPECT_EQ(calls[calls.size() - 2],
            (ExecutorCall{ExecutorCallKind::Stop, job->job_id, seconds(6), seconds(10)}));
  EXPECT_EQ(calls.back(), (ExecutorCall{ExecutorCallKind::Kill, job->job_id, seconds(16), 0}));
  ASSERT_EQ(notices.size(), 1u);
  EXPECT_EQ(as<response::Terminated>(notices[0]).job_id, job->job_id);
}

TEST(Drain, EmptyQueue) {
  Fixture f;
  EXPECT_EQ(f.node.drain_terminations(0), 0u);
}

TEST(Drain, ExitedJobIsDropped) {
  Fixture f;
  f.node.handle_request(new_job("A"), 0);
  const auto job = f.node.scheduler_tick(0);
  f.node.handle_request(terminate("A", job->job_id), 1);
  f.executor.exit_job(job->job_id, 2);
  f.node.reap_exited(3);
  EXPECT_EQ(f.node.drain_terminations(4), 0u);
  EXPECT_TRUE(f.store.termination_queue().empty());
}

TEST(MonitorLoop, FivePassesInTenMinutes) {
  Fixture f;
  Clock clock(ClockMode::Virtual);
  EXPECT_EQ(run_monitor_loop(f.node, clock, {}, seconds(600)), 5u);
}

TEST(MonitorLoop, IdleJobTerminatedOnFirstPass) {
  Fixture f({}, profile_by_level({{1, 0.0}}));
  Clock clock(ClockMode::Virtual);
  f.node.handle_request(new_job("A"), 0);
  const auto job = f.node.scheduler_tick(0);
  EXPECT_EQ(run_monitor_loop(f.node, clock, {}, seconds(120)), 1u);
  EXPECT_EQ(f.node.running_count(), 0u);
  EXPECT_EQ(f.node.stats().idle_detected, 1u);
  const auto calls = f.executor.calls_for(job->job_id);
  EXPECT_EQ(calls.back().kind, ExecutorCallKind::Stop);
  EXPECT_EQ(calls.back().at, seconds(130));
}

// Random request sequences keep the queue and running set bounded and every
// admitted job accounted for.
TEST(AdmissionProperty, BoundsAndConservation) {
  std::mt19937_64 rng(99);
  for (int run = 0; run < 20; ++run) {
    SchedulerConfig cfg;
    cfg.queue_max = 1 + static_cast<int>(rng() % 10);
    cfg.max_jobs = 1 + static_cast<int>(rng() % 4);
    Fixture f(cfg, [](const JobRecord&) {
      JobProfile p;
      p.duration = seconds(5);
      return p;
    });
    std::vector<JobId> known;
    std::int64_t admitted = 0, rejected = 0, removed = 0;
    TimeMs t = 0;
    for (int step = 0; step < 400; ++step) {
      t += 1000;
      const auto op = rng() % 6;
      const std::string who(1, static_cast<char>('A' + rng() % 3));
      if (op < 3) {
        const auto r = f.node.handle_request(new_job(who, 1 + static_cast<int>(rng() % 3)), t);
        if (auto q = std::get_if<response::Queued>(&r)) ++admitted, known.push_back(q->job_id);
        else if (std::holds_alternative<response::RejectedNoSpace>(r)) ++rejected;
      } else if (op == 3 && !known.empty()) {
        const auto id = known[rng() % known.size()];
        const auto owner = f.store.find_queued(id);
        const auto r = f.node.handle_request(terminate(owner ? owner->client_name() : who, id), t);
        if (std::holds_alternative<response::RemovedFromQueue>(r)) ++removed;
      } else if (op == 4) {
        f.node.schedule_ready(t);
      } else {
        f.node.reap_exited(t);
        f.node.drain_terminations(t);
      }
      ASSERT_LE(f.store.queue_length(), static_cast<std::size_t>(cfg.queue_max));
      ASSERT_LE(f.node.running_count(), static_cast<std::size_t>(cfg.max_jobs));
      ASSERT_EQ(admitted, f.store.total() + static_cast<std::int64_t>(f.store.queue_length()) + removed);
    }
    EXPECT_EQ(f.node.stats().rejected_no_space, static_cast<std::uint64_t>(rejected));
  }
}
