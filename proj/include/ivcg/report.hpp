// Copyright 2026 The ivcg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ivcg/simulation.hpp"
#include "json.hpp"

namespace ivcg {

// Machine-readable history of one run: header (scenario name, kind, regions,
// discount, horizon, investment ratio), every round and local-design record
// in order, and the per-year budget ledger. Schema in docs/formats.md.
nlohmann::json trace_to_json(const Scenario& sc, const SimState& st);

// Parsed trace. `state` holds history and budgets; its network is empty.
struct Trace {
  std::string scenario;
  RunKind kind = RunKind::Ivcg;
  std::vector<std::string> regions;  // one per operator, operator order
  double discount = 1.0;
  int horizon = 0;
  double alpha = 1.0;
  SimState state;
};

Trace trace_from_json(const nlohmann::json& doc);
Trace read_trace(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// Writes rounds.csv, local_design.csv, budgets.csv, metrics.csv and
// metrics_by_year.csv under `dir`, each file name prefixed by `prefix`.
// Every value is derived from the trace alone.
void emit_report(const Trace& trace, const std::filesystem::path& dir,
                 const std::string& prefix = "");

// Per-region local benefit of a paired IVCG / baseline run (plot data), in the
// same layout as the sweep's table. `strategy` labels the operators' policies.
void emit_region_comparison(const Trace& ivcg, const Trace& ld, double central_budget,
                            const std::string& strategy, const std::filesystem::path& path);

}  // namespace ivcg
