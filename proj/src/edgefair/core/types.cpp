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

#include "edgefair/core/types.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "edgefair/core/error.hpp"

namespace edgefair {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::QueueFull: return "QueueFull";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Duplicate: return "Duplicate";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::PortExhausted: return "PortExhausted";
    case ErrorCode::ExecutorFailure: return "ExecutorFailure";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string Error::compose(ErrorCode code, const std::string& subject,
                           const std::string& reason) {
  std::string out(to_string(code));
  if (!subject.empty()) out += "(" + subject + ")";
  if (!reason.empty()) out += ": " + reason;
  return out;
}

bool valid_port(int port) noexcept { return port >= 1 && port <= 65535; }

void validate_request(const JobRequest& req) {
  if (req.client.name.empty())
    throw Error(ErrorCode::InvalidArgument, "client.name", "must be non-empty");
  if (!valid_port(req.client.port))
    throw Error(ErrorCode::InvalidArgument, "client.port", "must be within 1-65535");
  std::set<int> seen;
  for (int p : req.ports) {
    if (!valid_port(p))
      throw Error(ErrorCode::InvalidArgument, "ports",
                  std::to_string(p) + " is outside 1-65535");
    if (!seen.insert(p).second)
      throw Error(ErrorCode::InvalidArgument, "ports",
                  "duplicate port " + std::to_string(p));
  }
}

std::string join_ports(const std::vector<int>& ports) {
  std::string out;
  for (std::size_t i = 0; i < ports.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ports[i]);
  }
  return out;
}

std::vector<int> split_ports(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + comma, value);
    if (ec != std::errc{} || ptr != text.data() + comma)
      throw Error(ErrorCode::InvalidArgument, "ports", "malformed list '" + text + "'");
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

} // namespace edgefair
