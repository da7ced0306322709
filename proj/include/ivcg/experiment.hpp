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
#include <optional>
#include <vector>

#include "ivcg/report.hpp"
#include "ivcg/simulation.hpp"

namespace ivcg {

// Paired IVCG run and local-design baseline using the same subsidy totals.
struct PairedRun {
  SimState ivcg;
  SimState ld;
  MetricsReport ivcg_metrics;
  MetricsReport ld_metrics;
};

PairedRun run_paired(const Scenario& sc);

// (total SSW of IVCG - SSW of LD) / |SSW of LD| in percent; nullopt when the
// baseline produced no welfare.
std::optional<double> welfare_improvement_pct(const MetricsReport& ivcg, const MetricsReport& ld);

struct SweepCell {
  double central_budget = 0.0;
  double alpha = 1.0;
  std::vector<StrategyKind> strategies;
};

struct SweepRow {
  SweepCell cell;
  MetricsReport ivcg;
  MetricsReport ld;
};

// The scenario's sweep grid in canonical order: budgets, then alphas, then
// strategy assignments. Empty axes fall back to the scenario's own values.
std::vector<SweepCell> sweep_cells(const Scenario& sc);
Scenario with_cell(const Scenario& sc, const SweepCell& cell);
// Cells run concurrently; rows come back in the order of `cells`.
std::vector<SweepRow> run_sweep(const Scenario& sc, const std::vector<SweepCell>& cells,
                                unsigned threads = 0);

// File emitters used by the command-line verbs.
void write_run(const Scenario& sc, const SimState& ivcg, const std::filesystem::path& dir);
void write_baseline(const Scenario& sc, const Trace& ivcg, const SimState& ld,
                    const std::filesystem::path& dir);
void write_sweep(const std::vector<SweepRow>& rows, const std::vector<std::string>& regions,
                 const std::filesystem::path& dir);

// Baseline paired with a previously written IVCG trace.
SimState run_baseline_from_trace(const Scenario& sc, const Trace& ivcg);

}  // namespace ivcg
