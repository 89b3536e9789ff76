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

#include "edgefair/lifecycle/protocol.hpp"

#include <json.hpp>

namespace edgefair::protocol {

using nlohmann::json;

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

bool is_int(const json& j) { return j.is_number_integer(); }

} // namespace

RequestBody parse_request(std::string_view line) {
  const request::Invalid invalid{std::string(line)};
  const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) return invalid;
  const auto type = j["type"].get<std::string>();
  if (type == "new_job") {
    if (!j.contains("priority") || !is_int(j["priority"])) return invalid;
    request::NewJob job;
    job.priority = Priority{j["priority"].get<int>()};
    if (j.contains("ports")) {
      if (!j["ports"].is_array()) return invalid;
      for (const auto& p : j["ports"]) {
        if (!is_int(p)) return invalid;
        job.ports.push_back(p.get<int>());
      }
    }
    return job;
  }
  if (type == "terminate") {
    if (!j.contains("job_id") || !is_int(j["job_id"])) return invalid;
    return request::Terminate{j["job_id"].get<JobId>()};
  }
  return invalid;
}

std::string encode_request(const RequestBody& body) {
  const json j = std::visit(
      overloaded{
          [](const request::NewJob& r) {
            return json{{"type", "new_job"}, {"priority", r.priority.level}, {"ports", r.ports}};
          },
          [](const request::Terminate& r) { return json{{"type", "terminate"}, {"job_id", r.job_id}}; },
          [](const request::Invalid& r) { return json{{"type", "invalid"}, {"raw", r.raw}}; },
      },
      body);
  return j.dump();
}

std::string encode_response(const Response& r) {
  const json j = std::visit(
      overloaded{
          [](const response::Queued& v) { return json{{"status", "queued"}, {"job_id", v.job_id}}; },
          [](const response::RejectedNoSpace&) { return json{{"status", "rejected_no_space"}}; },
          [](const response::RemovedFromQueue& v) {
            return json{{"status", "removed_from_queue"}, {"job_id", v.job_id}};
          },
          [](const response::QueuedForTermination& v) {
            return json{{"status", "queued_for_termination"}, {"job_id", v.job_id}};
          },
          [](const response::InvalidRequest& v) {
            return json{{"status", "invalid_request"}, {"reason", v.reason}};
          },
          [](const response::Started& v) {
            json ports = json::object();
            for (const auto& [req, host] : v.port_mappings) ports[std::to_string(req)] = host;
            return json{{"status", "started"}, {"job_id", v.job_id}, {"port_mappings", ports}};
          },
          [](const response::Terminated& v) {
            return json{{"status", "terminated"}, {"job_id", v.job_id}};
          },
      },
      r);
  return j.dump();
}

std::optional<Response> parse_response(std::string_view line) {
  const json j = json::parse(line, nullptr, false);
  if (!j.is_object() || !j.contains("status") || !j["status"].is_string()) return std::nullopt;
  const auto status = j["status"].get<std::string>();
  const auto id = [&]() -> JobId { return j.value("job_id", JobId{0}); };
  try {
    if (status == "queued") return response::Queued{id()};
    if (status == "rejected_no_space") return response::RejectedNoSpace{};
    if (status == "removed_from_queue") return response::RemovedFromQueue{id()};
    if (status == "queued_for_termination") return response::QueuedForTermination{id()};
    if (status == "invalid_request") return response::InvalidRequest{j.value("reason", std::string())};
    if (status == "terminated") return response::Terminated{id()};
    if (status == "started") {
      response::Started s{id(), {}};
      const json mappings = j.value("port_mappings", json::object());
      for (const auto& [k, v] : mappings.items())
        s.port_mappings[std::stoi(k)] = v.get<int>();
      return s;
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

} // namespace edgefair::protocol
