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

// Acceptance checks for the scheduling engine. Prints one PASS/FAIL line per
// criterion and exits non-zero if any fails.
//
// usage: edgefair_acceptance <path-to-edgefair-cli> <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "edgefair/core/error.hpp"
#include "edgefair/lifecycle/node.hpp"
#include "edgefair/lifecycle/simulated_executor.hpp"
#include "edgefair/simulator/bench.hpp"
#include "edgefair/simulator/simulator.hpp"
#include "edgefair/strategies/strategies.hpp"
#include "support/oracle.hpp"

using namespace edgefair;
namespace fs = std::filesystem;
using WallClock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(WallClock::time_point t0) {
  return std::chrono::duration<double>(WallClock::now() - t0).count();
}

std::int64_t spread(const std::map<std::string, std::int64_t>& counts) {
  if (counts.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end(),
                                            [](auto& a, auto& b) { return a.second < b.second; });
  return hi->second - lo->second;
}

SchedulerConfig with_strategy(StrategyKind k) {
  SchedulerConfig cfg;
  cfg.strategy = k;
  return cfg;
}

const std::vector<std::string> kClients{"A", "B", "C", "D", "E", "F"};

// 1. Every strategy agrees with the brute-force oracle on random states.
Outcome oracle_equivalence() {
  const auto t0 = WallClock::now();
  std::mt19937_64 rng(1);
  const auto weights = default_priority_weights();
  const SchedulerConfig cfg;
  int states = 0, mismatches = 0, checks = 0;
  for (; states < 1000; ++states) {
    const auto state = edgefair::testing::random_state(rng, kClients, 3, 50, 500);
    Store store(Store::kInMemory);
    const auto ids = edgefair::testing::load_state(store, state);
    for (auto kind : {StrategyKind::Fcfs, StrategyKind::ClientFair, StrategyKind::PriorityFair,
                      StrategyKind::Hybrid}) {
      Store::Transaction probe(store);  // rolled back after each strategy
      const auto expected = edgefair::testing::oracle_select(kind, state, weights);
      const auto got = select_next(kind, store, cfg, store.last_arrival());
      ++checks;
      if (!expected || !got || ids.at(*expected) != got->job_id) ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << states << " states, " << checks << " selections, " << mismatches << " mismatches, "
    << secs << " s";
  return {mismatches == 0 && secs < 30.0, d.str()};
}

// 2. Client fair keeps clients level while all of them are waiting.
Outcome client_fair_fairness() {
  const auto r = run_scenario(ScenarioSpec{}, with_strategy(StrategyKind::ClientFair));
  std::map<std::string, std::int64_t> counts;
  for (const auto& c : kClients) counts[c] = 0;
  std::int64_t worst = 0, saturated = 0;
  for (const auto& s : r.selections) {
    const bool all_waiting = s.waiting_clients == kClients.size();
    ++counts[s.client];
    if (all_waiting) {
      ++saturated;
      worst = std::max(worst, spread(counts));
    }
  }
  const bool equal_final =
      r.executed_total % 6 != 0 || spread(r.per_client_executed) == 0;
  std::ostringstream d;
  d << saturated << " saturated selections, max spread " << worst << ", final spread "
    << spread(r.per_client_executed) << " over " << r.executed_total << " jobs";
  return {saturated > 0 && worst <= 1 && equal_final, d.str()};
}

// 3. Priority fair converges to the configured weights.
Outcome priority_fair_proportions() {
  Store store(Store::kInMemory);
  const auto weights = default_priority_weights();
  std::map<int, int> counts;
  TimeMs t = 0;
  const int n = 1200;
  for (int i = 0; i < n; ++i) {
    for (int l = 1; l <= 3; ++l)
      if (!store.oldest_for_priority(Priority{l}))
        store.enqueue_job({{kClients[i % 6], "10.0.0.1", 5000}, Priority{l}, {}}, t++);
    ++counts[select_priority_fair(store, weights, t)->level()];
  }
  bool ok = true;
  std::ostringstream d;
  d << n << " selections:";
  for (int l = 3; l >= 1; --l) {
    const double f = counts[l] / static_cast<double>(n);
    ok = ok && std::abs(f - weights.at(l)) <= 0.05;
    d << " PL" << l << "=" << f;
  }
  return {ok, d.str()};
}

// 4. Hybrid serves every client, favours higher levels, and is fairer
// across clients than priority fair.
Outcome hybrid_dominance() {
  const auto hybrid = run_scenario(ScenarioSpec{}, with_strategy(StrategyKind::Hybrid));
  const auto pf = run_scenario(ScenarioSpec{}, with_strategy(StrategyKind::PriorityFair));
  bool all_served = true;
  for (const auto& c : kClients) all_served = all_served && hybrid.per_client_executed.at(c) > 0;
  const auto& pct = hybrid.per_priority_pct;
  const bool ordered = pct.at(3) > pct.at(2) && pct.at(2) > pct.at(1);
  const bool fairer = spread(hybrid.per_client_executed) < spread(pf.per_client_executed);
  std::ostringstream d;
  d << "all clients served=" << all_served << ", pct " << pct.at(3) << "/" << pct.at(2) << "/"
    << pct.at(1) << ", spread hybrid " << spread(hybrid.per_client_executed)
    << " vs priority_fair " << spread(pf.per_client_executed);
  return {all_served && ordered && fairer, d.str()};
}

// 5. FCFS starves late clients when early ones flood the queue.
Outcome fcfs_starvation() {
  ScenarioSpec spec;
  spec.front_loaded = true;
  const auto r = run_scenario(spec, with_strategy(StrategyKind::Fcfs));
  std::vector<std::string> starved;
  for (const auto& c : {"D", "E", "F"})
    if (r.per_client_executed.at(c) == 0) starved.push_back(c);
  std::ostringstream d;
  d << "starved late clients:";
  for (const auto& c : starved) d << ' ' << c;
  if (starved.empty()) d << " none";
  return {!starved.empty(), d.str()};
}

// 6. Decision cost grows with history for the fair strategies but not FCFS.
Outcome overhead_ordering() {
  BenchOptions opts;
  opts.sizes = {1'000, 10'000, 100'000, 1'000'000};
  opts.trials = 5;
  const auto rows = benchmark_overheads(opts);
  std::map<std::pair<StrategyKind, std::uint64_t>, double> ms;
  for (const auto& r : rows) ms[{r.strategy, r.size}] = r.mean_latency_ms;
  auto at = [&](StrategyKind k, std::uint64_t n) { return ms.at({k, n}); };
  const std::uint64_t n = 100'000;
  const double h = at(StrategyKind::Hybrid, n), cf = at(StrategyKind::ClientFair, n),
               pf = at(StrategyKind::PriorityFair, n), fc = at(StrategyKind::Fcfs, n);
  double fc_lo = 1e300, fc_hi = 0;
  for (auto size : opts.sizes) {
    fc_lo = std::min(fc_lo, at(StrategyKind::Fcfs, size));
    fc_hi = std::max(fc_hi, at(StrategyKind::Fcfs, size));
  }
  const bool ordered = h > cf && h > pf && cf > fc && pf > fc;
  const bool flat = fc_hi < 2.0 * fc_lo;
  std::ostringstream d;
  d << "at 1e5 ms: hybrid " << h << ", client_fair " << cf << ", priority_fair " << pf
    << ", fcfs " << fc << "; fcfs range x" << fc_hi / fc_lo;
  return {ordered && flat, d.str()};
}

// 7. Idle detection and the stop-then-kill sequence.
Outcome monitor_behaviour() {
  Store store(Store::kInMemory);
  std::map<std::string, JobProfile> profiles;
  profiles["idle"] = {5.0, seconds(3600), false};
  profiles["busy"] = {50.0, seconds(3600), true};
  profiles["young"] = {0.0, seconds(3600), true};
  SimulatedExecutor exec(4, [&](const JobRecord& r) { return profiles.at(r.client_name()); });
  Node node(store, SchedulerConfig{}, exec);
  auto submit = [&](const std::string& who, TimeMs t) {
    node.handle_request({{who, "10.0.0.1", 5000}, request::NewJob{Priority{1}, {}}}, t);
    return node.scheduler_tick(t)->job_id;
  };
  const auto idle = submit("idle", 0);
  const auto busy = submit("busy", 0);
  const auto young = submit("young", seconds(60));

  // One pass at 90 s: idle and busy have run for 90 s, young for 30 s.
  const auto first = node.begin_monitor_pass(seconds(90));
  const auto found = node.finish_monitor_pass(first, seconds(100));
  const bool young_unsampled = first.cpu.count(young) == 0;
  const bool detected = found == std::vector<JobId>{idle};
  node.drain_terminations(seconds(100));

  const auto calls = exec.calls_for(idle);
  bool stop_then_kill = false;
  if (calls.size() >= 2) {
    const auto& stop = calls[calls.size() - 2];
    const auto& kill = calls.back();
    stop_then_kill = stop.kind == ExecutorCallKind::Stop && stop.grace == seconds(10) &&
                     kill.kind == ExecutorCallKind::Kill && kill.at == stop.at + seconds(10);
  }
  // Later passes never flag the busy job.
  edgefair::Clock clock(ClockMode::Virtual);
  clock.advance_to(seconds(100));
  run_monitor_loop(node, clock, {}, seconds(1000));
  bool busy_alive = node.find_running(busy).has_value();
  for (const auto& c : exec.calls_for(busy))
    busy_alive = busy_alive && c.kind != ExecutorCallKind::Stop;

  std::ostringstream d;
  d << "5% job flagged=" << detected << ", 50% job kept=" << busy_alive
    << ", 30 s job unsampled=" << young_unsampled << ", stop(10 s grace) then kill="
    << stop_then_kill;
  return {detected && busy_alive && young_unsampled && stop_then_kill, d.str()};
}

// 8. Admission bounds and job conservation over random request sequences.
Outcome admission_control() {
  std::mt19937_64 rng(8);
  std::int64_t steps = 0, violations = 0;
  for (int run = 0; run < 100; ++run) {
    SchedulerConfig cfg;
    cfg.queue_max = 1 + static_cast<int>(rng() % 12);
    cfg.max_jobs = 1 + static_cast<int>(rng() % 4);
    Store store(Store::kInMemory);
    SimulatedExecutor exec(4, [&](const JobRecord&) {
      JobProfile p;
      p.duration = seconds(1 + static_cast<double>(rng() % 20));
      return p;
    });
    Node node(store, cfg, exec);
    std::vector<std::pair<JobId, std::string>> issued;
    std::int64_t admitted = 0, removed = 0;
    TimeMs t = 0;
    for (int i = 0; i < 300; ++i, ++steps) {
      t += 1000;
      const std::string who(1, static_cast<char>('A' + rng() % 4));
      switch (rng() % 5) {
        case 0:
        case 1: {
          const auto r = node.handle_request(
              {{who, "10.0.0.1", 5000}, request::NewJob{Priority{1 + static_cast<int>(rng() % 3)}, {}}}, t);
          if (auto q = std::get_if<response::Queued>(&r)) ++admitted, issued.emplace_back(q->job_id, who);
          break;
        }
        case 2:
          if (!issued.empty()) {
            const auto& [id, owner] = issued[rng() % issued.size()];
            const auto r = node.handle_request({{owner, "10.0.0.1", 5000}, request::Terminate{id}}, t);
            if (std::holds_alternative<response::RemovedFromQueue>(r)) ++removed;
          }
          break;
        case 3:
          node.reap_exited(t);
          node.schedule_ready(t);
          break;
        default:
          node.drain_terminations(t);
      }
      const bool ok = store.queue_length() <= static_cast<std::size_t>(cfg.queue_max) &&
                      node.running_count() <= static_cast<std::size_t>(cfg.max_jobs) &&
                      admitted == store.total() +
                                      static_cast<std::int64_t>(store.queue_length()) + removed;
      violations += !ok;
    }
  }
  std::ostringstream d;
  d << steps << " steps over 100 random sequences, " << violations << " violations";
  return {violations == 0, d.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. Identical invocations give identical reports, quickly.
Outcome determinism(const std::string& cli, const fs::path& scratch) {
  if (cli.empty()) return {false, "no CLI path given"};
  const auto a = scratch / "run_a", b = scratch / "run_b";
  fs::remove_all(a);
  fs::remove_all(b);
  auto run = [&](const fs::path& out) {
    const std::string cmd = "'" + cli + "' run --scenario equal --strategy hybrid --seed 7 --out '" +
                            out.string() + "' >/dev/null";
    return std::system(cmd.c_str()) == 0;
  };
  const auto t0 = WallClock::now();
  const bool ran_a = run(a);
  const double secs = seconds_since(t0);
  const bool ran_b = run(b);
  const auto ja = slurp(a / "report.json"), jb = slurp(b / "report.json");
  const bool same = ran_a && ran_b && !ja.empty() && ja == jb;
  std::ostringstream d;
  d << "report.json " << (same ? "byte-identical" : "differs") << " (" << ja.size()
    << " bytes), replay took " << secs << " s";
  fs::remove_all(a);
  fs::remove_all(b);
  return {same && secs < 10.0, d.str()};
}

} // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path();
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"client fair fairness", client_fair_fairness},
      {"priority fair proportions", priority_fair_proportions},
      {"hybrid dominance", hybrid_dominance},
      {"fcfs starvation", fcfs_starvation},
      {"overhead ordering", overhead_ordering},
      {"monitor behaviour", monitor_behaviour},
      {"admission control", admission_control},
      {"determinism", [&] { return determinism(cli, scratch); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "criterion " << i + 1 << " "
              << criteria[i].first << ": " << o.detail << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
