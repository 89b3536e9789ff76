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

#include "edgefair/lifecycle/ports.hpp"

#include "edgefair/core/error.hpp"

namespace edgefair {

PortPool::PortPool(int first, int last) : first_(first), last_(last) {
  if (!valid_port(first) || !valid_port(last) || first > last)
    throw Error(ErrorCode::InvalidArgument, "port range",
                std::to_string(first) + "-" + std::to_string(last) + " is not a valid range");
}

PortMap PortPool::allocate(std::span<const int> requested) {
  if (requested.size() > free_count())
    throw Error(ErrorCode::PortExhausted, "ports",
                std::to_string(requested.size()) + " requested, " +
                    std::to_string(free_count()) + " free");
  PortMap out;
  int candidate = first_;
  for (int port : requested) {
    while (used_.count(candidate)) ++candidate;
    out.emplace(port, candidate);
    used_.insert(candidate);
  }
  return out;
}

void PortPool::release(const PortMap& mapping) {
  for (const auto& [_, host] : mapping) used_.erase(host);
}

std::size_t PortPool::free_count() const noexcept {
  return static_cast<std::size_t>(last_ - first_ + 1) - used_.size();
}

} // namespace edgefair
