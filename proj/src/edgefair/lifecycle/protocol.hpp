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

#include <optional>
#include <string>
#include <string_view>

#include "edgefair/lifecycle/messages.hpp"

namespace edgefair::protocol {

// Newline-delimited JSON. Requests:
//   {"type":"new_job","priority":3,"ports":[80]}
//   {"type":"terminate","job_id":17}
// Responses carry a "status" member naming the variant, e.g.
//   {"status":"queued","job_id":17}
//   {"status":"started","job_id":17,"port_mappings":{"80":30000}}

using RequestBody = decltype(Request::body);

/// Anything that is not a well-formed request becomes request::Invalid.
RequestBody parse_request(std::string_view line);
std::string encode_request(const RequestBody& body);

std::string encode_response(const Response& r);
/// nullopt when the line is not a recognised response.
std::optional<Response> parse_response(std::string_view line);

} // namespace edgefair::protocol
