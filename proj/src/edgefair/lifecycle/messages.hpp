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

#include <string>
#include <variant>
#include <vector>

#include "edgefair/core/types.hpp"

namespace edgefair {

namespace request {
struct NewJob {
  Priority priority;
  std::vector<int> ports;
  friend bool operator==(const NewJob&, const NewJob&) = default;
};
struct Terminate {
  JobId job_id = 0;
  friend bool operator==(const Terminate&, const Terminate&) = default;
};
struct Invalid {
  std::string raw;
  friend bool operator==(const Invalid&, const Invalid&) = default;
};
} // namespace request

/// A request from an already authenticated client.
struct Request {
  ClientId client;
  std::variant<request::NewJob, request::Terminate, request::Invalid> body;
};

namespace response {
struct Queued {
  JobId job_id = 0;
  friend bool operator==(const Queued&, const Queued&) = default;
};
struct RejectedNoSpace {
  friend bool operator==(const RejectedNoSpace&, const RejectedNoSpace&) = default;
};
struct RemovedFromQueue {
  JobId job_id = 0;
  friend bool operator==(const RemovedFromQueue&, const RemovedFromQueue&) = default;
};
struct QueuedForTermination {
  JobId job_id = 0;
  friend bool operator==(const QueuedForTermination&, const QueuedForTermination&) = default;
};
struct InvalidRequest {
  std::string reason;
  friend bool operator==(const InvalidRequest&, const InvalidRequest&) = default;
};
struct Started {
  JobId job_id = 0;
  PortMap port_mappings;
  friend bool operator==(const Started&, const Started&) = default;
};
struct Terminated {
  JobId job_id = 0;
  friend bool operator==(const Terminated&, const Terminated&) = default;
};
} // namespace response

using Response = std::variant<response::Queued, response::RejectedNoSpace,
                              response::RemovedFromQueue, response::QueuedForTermination,
                              response::InvalidRequest, response::Started, response::Terminated>;

} // namespace edgefair
