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

#include "edgefair/store/store.hpp"

#include <map>
#include <ostream>
#include <random>

#include "edgefair/core/error.hpp"
#include "edgefair/store/sqlite.hpp"

namespace edgefair {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS meta(
  key   TEXT PRIMARY KEY,
  value INTEGER NOT NULL);
INSERT OR IGNORE INTO meta VALUES ('schema_version', 1), ('next_job_id', 1),
  ('last_arrival_ms', 0), ('total', 0), ('queue_limit', 0), ('termination_seq', 0);
CREATE TABLE IF NOT EXISTS queue(
  job_id      INTEGER PRIMARY KEY,
  client      TEXT NOT NULL,
  client_ip   TEXT NOT NULL,
  client_port INTEGER NOT NULL,
  priority    INTEGER NOT NULL,
  ports       TEXT NOT NULL,
  arrival_ms  INTEGER NOT NULL);
CREATE INDEX IF NOT EXISTS queue_by_arrival ON queue(arrival_ms, job_id);
CREATE INDEX IF NOT EXISTS queue_by_client ON queue(client, arrival_ms, job_id);
CREATE INDEX IF NOT EXISTS queue_by_priority ON queue(priority, client, arrival_ms, job_id);
CREATE TABLE IF NOT EXISTS history(
  job_id        INTEGER PRIMARY KEY,
  client        TEXT NOT NULL,
  client_ip     TEXT NOT NULL,
  client_port   INTEGER NOT NULL,
  priority      INTEGER NOT NULL,
  ports         TEXT NOT NULL,
  arrival_ms    INTEGER NOT NULL,
  exec_start_ms INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS client_counts(
  client TEXT PRIMARY KEY,
  n      INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS priority_counts(
  level INTEGER PRIMARY KEY,
  n     INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS terminations(
  seq    INTEGER PRIMARY KEY,
  job_id INTEGER NOT NULL UNIQUE,
  reason TEXT NOT NULL);
)sql";

#define EFS_JOB_COLUMNS "job_id, client, client_ip, client_port, priority, ports, arrival_ms"

JobRecord read_record(const sqlite::Statement& s, bool with_exec_start) {
  JobRecord r;
  r.job_id = s.column_int(0);
  r.request.client.name = s.column_text(1);
  r.request.client.address = s.column_text(2);
  r.request.client.port = static_cast<int>(s.column_int(3));
  r.request.priority = Priority{static_cast<int>(s.column_int(4))};
  r.request.ports = split_ports(s.column_text(5));
  r.arrival_time = s.column_int(6);
  if (with_exec_start) r.exec_start = s.column_int(7);
  return r;
}

std::optional<JobRecord> first_record(sqlite::Statement& s) {
  if (!s.step()) return std::nullopt;
  return read_record(s, false);
}

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n\r") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

TerminationReason parse_reason(const std::string& s) {
  return s == "idle" ? TerminationReason::Idle : TerminationReason::ClientRequest;
}

} // namespace

std::string_view to_string(TerminationReason reason) noexcept {
  return reason == TerminationReason::Idle ? "idle" : "client_request";
}

// Schema has to exist before the statements below are prepared.
static sqlite::Database open_with_schema(const std::string& path) {
  sqlite::Database db(path);
  db.exec("PRAGMA foreign_keys=ON");
  db.exec("PRAGMA cache_size=-65536");
  db.exec(kSchema);
  return db;
}

struct Store::Impl {
  explicit Impl(const std::string& path) : db(open_with_schema(path)) {}

  sqlite::Database db;
  int savepoint_depth = 0;
  QueryCounters counters;

  sqlite::Statement get_meta{db, "SELECT value FROM meta WHERE key = ?1"};
  sqlite::Statement set_meta{db, "UPDATE meta SET value = ?2 WHERE key = ?1"};

  sqlite::Statement insert_queue{
      db, "INSERT INTO queue(" EFS_JOB_COLUMNS ") VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7)"};
  sqlite::Statement select_queued{db, "SELECT " EFS_JOB_COLUMNS " FROM queue WHERE job_id = ?1"};
  sqlite::Statement delete_queued{db, "DELETE FROM queue WHERE job_id = ?1"};
  sqlite::Statement count_queue{db, "SELECT COUNT(*) FROM queue"};
  sqlite::Statement all_queued{
      db, "SELECT " EFS_JOB_COLUMNS " FROM queue ORDER BY arrival_ms, job_id"};

  sqlite::Statement insert_history{
      db, "INSERT INTO history(" EFS_JOB_COLUMNS ", exec_start_ms) "
          "VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8)"};
  sqlite::Statement history_exists{db, "SELECT 1 FROM history WHERE job_id = ?1"};
  sqlite::Statement all_history{
      db, "SELECT " EFS_JOB_COLUMNS ", exec_start_ms FROM history ORDER BY job_id"};
  sqlite::Statement bump_client{
      db, "INSERT INTO client_counts(client, n) VALUES (?1, ?2) "
          "ON CONFLICT(client) DO UPDATE SET n = n + excluded.n"};
  sqlite::Statement bump_priority{
      db, "INSERT INTO priority_counts(level, n) VALUES (?1, ?2) "
          "ON CONFLICT(level) DO UPDATE SET n = n + excluded.n"};

  sqlite::Statement waiting_clients{db, "SELECT DISTINCT client FROM queue ORDER BY client"};
  sqlite::Statement waiting_clients_at{
      db, "SELECT DISTINCT client FROM queue WHERE priority = ?1 ORDER BY client"};
  sqlite::Statement waiting_priorities{
      db, "SELECT DISTINCT priority FROM queue ORDER BY priority DESC"};

  sqlite::Statement client_counter{db, "SELECT n FROM client_counts WHERE client = ?1"};
  sqlite::Statement priority_counter{db, "SELECT n FROM priority_counts WHERE level = ?1"};
  sqlite::Statement client_scan{db, "SELECT COUNT(*) FROM history WHERE client = ?1"};
  sqlite::Statement priority_scan{db, "SELECT COUNT(*) FROM history WHERE priority = ?1"};
  sqlite::Statement total_scan{db, "SELECT COUNT(*) FROM history"};

  sqlite::Statement oldest{
      db, "SELECT " EFS_JOB_COLUMNS " FROM queue ORDER BY arrival_ms, job_id LIMIT 1"};
  sqlite::Statement oldest_client{
      db, "SELECT " EFS_JOB_COLUMNS " FROM queue WHERE client = ?1 "
          "ORDER BY arrival_ms, job_id LIMIT 1"};
  sqlite::Statement oldest_priority{
      db, "SELECT " EFS_JOB_COLUMNS " FROM queue WHERE priority = ?1 "
          "ORDER BY arrival_ms, job_id LIMIT 1"};
  sqlite::Statement oldest_both{
      db, "SELECT " EFS_JOB_COLUMNS " FROM queue WHERE priority = ?1 AND client = ?2 "
          "ORDER BY arrival_ms, job_id LIMIT 1"};

  sqlite::Statement insert_termination{
      db, "INSERT INTO terminations(seq, job_id, reason) VALUES (?1, ?2, ?3)"};
  sqlite::Statement termination_exists{db, "SELECT 1 FROM terminations WHERE job_id = ?1"};
  sqlite::Statement first_termination{
      db, "SELECT job_id, reason, seq FROM terminations ORDER BY seq LIMIT 1"};
  sqlite::Statement delete_termination{db, "DELETE FROM terminations WHERE seq = ?1"};
  sqlite::Statement all_terminations{db, "SELECT job_id, reason FROM terminations ORDER BY seq"};

  sqlite::Statement dump{
      db, "SELECT job_id, client, priority, arrival_ms, NULL FROM queue "
          "UNION ALL SELECT job_id, client, priority, arrival_ms, exec_start_ms FROM history "
          "ORDER BY 1"};

  std::int64_t meta(const char* key) {
    sqlite::Use q(get_meta);
    q->bind(1, std::string_view(key));
    if (!q->step()) throw Error(ErrorCode::StorageFailure, key, "missing meta entry");
    return q->column_int(0);
  }

  void put_meta(const char* key, std::int64_t value) {
    sqlite::Use q(set_meta);
    q->bind(1, std::string_view(key)).bind(2, value).run();
  }

  std::int64_t scalar(sqlite::Statement& s) {
    sqlite::Use q(s);
    return q->step() ? q->column_int(0) : 0;
  }

  std::vector<std::string> names(sqlite::Statement& s) {
    std::vector<std::string> out;
    while (s.step()) out.push_back(s.column_text(0));
    return out;
  }
};

#undef EFS_JOB_COLUMNS

// ---------------------------------------------------------------------------

Store::Store(const std::string& path, AggregateMode mode)
    : impl_(std::make_unique<Impl>(path)), mode_(mode) {}

Store::~Store() = default;

Store::Transaction::Transaction(Store& store) : store_(store), lock_(store.mu_) {
  name_ = "efs_sp" + std::to_string(store_.impl_->savepoint_depth++);
  store_.impl_->db.exec("SAVEPOINT " + name_);
}

Store::Transaction::~Transaction() {
  if (!done_) {
    try {
      store_.impl_->db.exec("ROLLBACK TO " + name_);
      store_.impl_->db.exec("RELEASE " + name_);
    } catch (...) {
      // Nothing sensible to do during unwinding; the connection reports the
      // failure on its next use.
    }
  }
  --store_.impl_->savepoint_depth;
}

void Store::Transaction::commit() {
  if (done_) return;
  store_.impl_->db.exec("RELEASE " + name_);
  done_ = true;
}

void Store::set_queue_limit(std::size_t limit) {
  std::lock_guard lock(mu_);
  impl_->put_meta("queue_limit", static_cast<std::int64_t>(limit));
}

std::size_t Store::queue_limit() const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(impl_->meta("queue_limit"));
}

JobRecord Store::enqueue_job(const JobRequest& req, TimeMs now) {
  validate_request(req);
  Transaction tx(*this);
  auto& s = *impl_;
  const auto limit = s.meta("queue_limit");
  if (limit > 0 && s.scalar(s.count_queue) >= limit)
    throw Error(ErrorCode::QueueFull, "queue", "queue holds " + std::to_string(limit) + " jobs");
  const auto last = s.meta("last_arrival_ms");
  if (now < last)
    throw Error(ErrorCode::InvalidArgument, "arrival_time",
                std::to_string(now) + " precedes latest arrival " + std::to_string(last));

  JobRecord rec{s.meta("next_job_id"), req, now, std::nullopt};
  {
    sqlite::Use q(s.insert_queue);
    q->bind(1, rec.job_id)
        .bind(2, req.client.name)
        .bind(3, req.client.address)
        .bind(4, std::int64_t{req.client.port})
        .bind(5, std::int64_t{req.priority.level})
        .bind(6, join_ports(req.ports))
        .bind(7, now)
        .run();
  }
  s.put_meta("next_job_id", rec.job_id + 1);
  s.put_meta("last_arrival_ms", now);
  tx.commit();
  return rec;
}

std::optional<JobRecord> Store::find_queued(JobId id) {
  std::lock_guard lock(mu_);
  sqlite::Use q(impl_->select_queued);
  q->bind(1, id);
  return first_record(*q);
}

std::optional<JobRecord> Store::remove_from_queue(JobId id) {
  Transaction tx(*this);
  auto rec = find_queued(id);
  if (!rec) return std::nullopt;
  {
    sqlite::Use q(impl_->delete_queued);
    q->bind(1, id).run();
  }
  tx.commit();
  return rec;
}

JobRecord Store::move_to_history(JobId id, TimeMs exec_start) {
  Transaction tx(*this);
  auto& s = *impl_;
  auto rec = find_queued(id);
  if (!rec) throw Error(ErrorCode::NotFound, "job " + std::to_string(id), "not in queue");
  {
    sqlite::Use q(s.delete_queued);
    q->bind(1, id).run();
  }
  {
    sqlite::Use q(s.insert_history);
    q->bind(1, rec->job_id)
        .bind(2, rec->request.client.name)
        .bind(3, rec->request.client.address)
        .bind(4, std::int64_t{rec->request.client.port})
        .bind(5, std::int64_t{rec->request.priority.level})
        .bind(6, join_ports(rec->request.ports))
        .bind(7, rec->arrival_time)
        .bind(8, exec_start)
        .run();
  }
  {
    sqlite::Use q(s.bump_client);
    q->bind(1, rec->request.client.name).bind(2, std::int64_t{1}).run();
  }
  {
    sqlite::Use q(s.bump_priority);
    q->bind(1, std::int64_t{rec->request.priority.level}).bind(2, std::int64_t{1}).run();
  }
  s.put_meta("total", s.meta("total") + 1);
  tx.commit();
  rec->exec_start = exec_start;
  return *rec;
}

bool Store::in_history(JobId id) {
  std::lock_guard lock(mu_);
  sqlite::Use q(impl_->history_exists);
  q->bind(1, id);
  return q->step();
}

std::size_t Store::queue_length() {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(impl_->scalar(impl_->count_queue));
}

std::vector<JobRecord> Store::queued_jobs() {
  std::lock_guard lock(mu_);
  std::vector<JobRecord> out;
  sqlite::Use q(impl_->all_queued);
  while (q->step()) out.push_back(read_record(*q, false));
  return out;
}

TimeMs Store::last_arrival() {
  std::lock_guard lock(mu_);
  return impl_->meta("last_arrival_ms");
}

std::vector<std::string> Store::waiting_clients() {
  std::lock_guard lock(mu_);
  sqlite::Use q(impl_->waiting_clients);
  return impl_->names(*q);
}

std::vector<std::string> Store::waiting_clients_at(Priority level) {
  std::lock_guard lock(mu_);
  sqlite::Use q(impl_->waiting_clients_at);
  q->bind(1, std::int64_t{level.level});
  return impl_->names(*q);
}

std::vector<Priority> Store::waiting_priorities() {
  std::lock_guard lock(mu_);
  std::vector<Priority> out;
  sqlite::Use q(impl_->waiting_priorities);
  while (q->step()) out.push_back(Priority{static_cast<int>(q->column_int(0))});
  return out;
}

std::int64_t Store::client_frequency(std::string_view client) {
  std::lock_guard lock(mu_);
  auto& s = *impl_;
  ++s.counters.client_frequency;
  if (mode_ == AggregateMode::Rescan) ++s.counters.history_scans;
  sqlite::Use q(mode_ == AggregateMode::Rescan ? s.client_scan : s.client_counter);
  q->bind(1, client);
  return q->step() ? q->column_int(0) : 0;
}

std::int64_t Store::priority_count(Priority level) {
  std::lock_guard lock(mu_);
  auto& s = *impl_;
  ++s.counters.priority_count;
  if (mode_ == AggregateMode::Rescan) ++s.counters.history_scans;
  sqlite::Use q(mode_ == AggregateMode::Rescan ? s.priority_scan : s.priority_counter);
  q->bind(1, std::int64_t{level.level});
  return q->step() ? q->column_int(0) : 0;
}

std::int64_t Store::total() {
  std::lock_guard lock(mu_);
  auto& s = *impl_;
  ++s.counters.total;
  if (mode_ == AggregateMode::Rescan) {
    ++s.counters.history_scans;
    return s.scalar(s.total_scan);
  }
  return s.meta("total");
}

std::optional<JobRecord> Store::oldest() {
  std::lock_guard lock(mu_);
  sqlite::Use q(impl_->oldest);
  return first_record(*q);
}

std::optional<JobRecord> Store::oldest_for_client(std::string_view client) {
  std::lock_guard lock(mu_);
  sqlite::Use q(impl_->oldest_client);
  q->bind(1, client);
  return first_record(*q);
}

std::optional<JobRecord> Store::oldest_for_priority(Priority level) {
  std::lock_guard lock(mu_);
  sqlite::Use q(impl_->oldest_priority);
  q->bind(1, std::int64_t{level.level});
  return first_record(*q);
}

std::optional<JobRecord> Store::oldest_for(Priority level, std::string_view client) {
  std::lock_guard lock(mu_);
  sqlite::Use q(impl_->oldest_both);
  q->bind(1, std::int64_t{level.level}).bind(2, client);
  return first_record(*q);
}

std::vector<JobRecord> Store::history() {
  std::lock_guard lock(mu_);
  std::vector<JobRecord> out;
  sqlite::Use q(impl_->all_history);
  while (q->step()) out.push_back(read_record(*q, true));
  return out;
}

void Store::seed_history(std::uint64_t n, const SeedDistribution& dist) {
  if (n == 0) return;
  if (dist.clients.empty() || dist.levels.empty())
    throw Error(ErrorCode::InvalidArgument, "distribution", "needs at least one client and level");
  Transaction tx(*this);
  auto& s = *impl_;
  std::mt19937_64 rng(dist.seed);
  std::uniform_int_distribution<std::size_t> pick_client(0, dist.clients.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_level(0, dist.levels.size() - 1);

  const TimeMs stamp = s.meta("last_arrival_ms");
  JobId next = s.meta("next_job_id");
  std::map<std::string, std::int64_t> per_client;
  std::map<int, std::int64_t> per_level;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto& client = dist.clients[pick_client(rng)];
    const int level = dist.levels[pick_level(rng)];
    sqlite::Use q(s.insert_history);
    q->bind(1, next++)
        .bind(2, client)
        .bind(3, std::string_view("0.0.0.0"))
        .bind(4, std::int64_t{1})
        .bind(5, std::int64_t{level})
        .bind(6, std::string_view())
        .bind(7, stamp)
        .bind(8, stamp)
        .run();
    ++per_client[client];
    ++per_level[level];
  }
  for (const auto& [client, count] : per_client) {
    sqlite::Use q(s.bump_client);
    q->bind(1, client).bind(2, count).run();
  }
  for (const auto& [level, count] : per_level) {
    sqlite::Use q(s.bump_priority);
    q->bind(1, std::int64_t{level}).bind(2, count).run();
  }
  s.put_meta("next_job_id", next);
  s.put_meta("total", s.meta("total") + static_cast<std::int64_t>(n));
  tx.commit();
}

void Store::enqueue_termination(JobId id, TerminationReason reason) {
  Transaction tx(*this);
  auto& s = *impl_;
  {
    sqlite::Use q(s.termination_exists);
    q->bind(1, id);
    if (q->step())
      throw Error(ErrorCode::Duplicate, "job " + std::to_string(id), "already pending termination");
  }
  const auto seq = s.meta("termination_seq") + 1;
  {
    sqlite::Use q(s.insert_termination);
    q->bind(1, seq).bind(2, id).bind(3, to_string(reason)).run();
  }
  s.put_meta("termination_seq", seq);
  tx.commit();
}

std::optional<TerminationEntry> Store::pop_termination() {
  Transaction tx(*this);
  auto& s = *impl_;
  TerminationEntry entry;
  std::int64_t seq = 0;
  {
    sqlite::Use q(s.first_termination);
    if (!q->step()) return std::nullopt;
    entry.job_id = q->column_int(0);
    entry.reason = parse_reason(q->column_text(1));
    seq = q->column_int(2);
  }
  {
    sqlite::Use q(s.delete_termination);
    q->bind(1, seq).run();
  }
  tx.commit();
  return entry;
}

bool Store::termination_pending(JobId id) {
  std::lock_guard lock(mu_);
  sqlite::Use q(impl_->termination_exists);
  q->bind(1, id);
  return q->step();
}

std::vector<TerminationEntry> Store::termination_queue() {
  std::lock_guard lock(mu_);
  std::vector<TerminationEntry> out;
  sqlite::Use q(impl_->all_terminations);
  while (q->step()) out.push_back({q->column_int(0), parse_reason(q->column_text(1))});
  return out;
}

void Store::dump_csv(std::ostream& out) {
  std::lock_guard lock(mu_);
  out << "job_id,client,priority,arrival_ms,exec_start_ms\n";
  sqlite::Use q(impl_->dump);
  while (q->step()) {
    out << q->column_int(0) << ',' << csv_field(q->column_text(1)) << ',' << q->column_int(2)
        << ',' << q->column_int(3) << ',';
    if (!q->column_is_null(4)) out << q->column_int(4);
    out << '\n';
  }
}

QueryCounters Store::counters() const {
  std::lock_guard lock(mu_);
  return impl_->counters;
}

void Store::reset_counters() {
  std::lock_guard lock(mu_);
  impl_->counters = {};
}

} // namespace edgefair
