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

#include <cstdint>
#include <string>
#include <utility>
#include <string_view>

struct sqlite3;
struct sqlite3_stmt;

namespace edgefair::sqlite {

/// Owning connection. Errors surface as Error(StorageFailure).
class Database {
public:
  explicit Database(const std::string& path);
  ~Database();

  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;
  Database(Database&& other) noexcept : db_(std::exchange(other.db_, nullptr)) {}
  Database& operator=(Database&&) = delete;

  void exec(const std::string& sql);
  sqlite3* handle() const noexcept { return db_; }

private:
  sqlite3* db_ = nullptr;
};

/// Prepared statement kept for the lifetime of the connection. Bind indices
/// are 1-based like the underlying API.
class Statement {
public:
  Statement(Database& db, std::string_view sql);
  ~Statement();

  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int index, std::int64_t value);
  Statement& bind(int index, std::string_view value);
  Statement& bind_null(int index);

  /// True while a row is available.
  bool step();
  /// Runs a statement that yields no rows.
  void run();
  void reset() noexcept;

  std::int64_t column_int(int index) const;
  std::string column_text(int index) const;
  bool column_is_null(int index) const;

private:
  [[noreturn]] void fail(const char* what) const;

  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

/// Resets a statement on scope exit so bindings never leak between calls.
class Use {
public:
  explicit Use(Statement& stmt) noexcept : stmt_(stmt) {}
  ~Use() { stmt_.reset(); }
  Use(const Use&) = delete;
  Use& operator=(const Use&) = delete;

  Statement* operator->() noexcept { return &stmt_; }
  Statement& operator*() noexcept { return stmt_; }

private:
  Statement& stmt_;
};

} // namespace edgefair::sqlite
