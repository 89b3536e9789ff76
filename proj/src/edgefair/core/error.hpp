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

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgefair {

enum class ErrorCode {
  InvalidArgument,
  InvalidConfig,
  QueueFull,
  NotFound,
  Duplicate,
  Empty,
  PortExhausted,
  ExecutorFailure,
  StorageFailure,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. `subject` names the offending
/// field, job id or resource when there is one.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string subject, const std::string& reason)
      : std::runtime_error(compose(code, subject, reason)),
        code_(code),
        subject_(std::move(subject)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

private:
  static std::string compose(ErrorCode code, const std::string& subject,
                             const std::string& reason);

  ErrorCode code_;
  std::string subject_;
};

} // namespace edgefair
