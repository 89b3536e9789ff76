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

#include <set>
#include <span>

#include "edgefair/core/types.hpp"

namespace edgefair {

/// Host ports handed out to running jobs, lowest free first.
class PortPool {
public:
  PortPool(int first, int last);

  /// Maps each requested port, in order, to the lowest free host port.
  /// Throws Error(PortExhausted) without allocating anything when the pool is
  /// too small.
  PortMap allocate(std::span<const int> requested);
  void release(const PortMap& mapping);

  std::size_t free_count() const noexcept;
  bool in_use(int host_port) const { return used_.count(host_port) != 0; }

private:
  int first_;
  int last_;
  std::set<int> used_;
};

} // namespace edgefair
