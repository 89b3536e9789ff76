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

#include <iosfwd>
#include <string>

#include "edgefair/simulator/simulator.hpp"

namespace edgefair {

/// Deterministic JSON rendering (sorted keys, no timing data).
std::string report_to_json(const MetricsReport& report);

/// `client,count` rows in client order.
void write_per_client_csv(const MetricsReport& report, std::ostream& out);
/// `level,pct` rows, highest level first.
void write_per_priority_csv(const MetricsReport& report, std::ostream& out);

/// Writes report.json, per_client.csv and per_priority.csv into `dir`,
/// creating it if needed. Throws Error(Io) on failure.
void write_report_files(const MetricsReport& report, const std::string& dir);

/// Per-client counts next to per-priority shares, for terminals.
std::string summary_table(const MetricsReport& report);

} // namespace edgefair
