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

#include "ivcg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <string>
#include <thread>

#include "ivcg/errors.hpp"
#include "ivcg/format.hpp"

namespace ivcg {

PairedRun run_paired(const Scenario& sc) {
  PairedRun out;
  out.ivcg = run_ivcg(sc);
  out.ld = run_baseline_ld(sc, allocate_subsidies(sc, out.ivcg), yearly_subsidies(out.ivcg, sc.horizon));
  out.ivcg_metrics = compute_metrics(out.ivcg, sc.operators.size(), sc.horizon);
  out.ld_metrics = compute_metrics(out.ld, sc.operators.size(), sc.horizon);
  return out;
}

std::optional<double> welfare_improvement_pct(const MetricsReport& ivcg, const MetricsReport& ld) {
  if (ld.total_social_welfare == 0.0) return std::nullopt;
  return 100.0 * (ivcg.total_social_welfare - ld.total_social_welfare) /
         std::abs(ld.total_social_welfare);
}

std::vector<SweepCell> sweep_cells(const Scenario& sc) {
  auto budgets = sc.sweep.central_budgets;
  if (budgets.empty()) budgets.push_back(sc.central.budget);
  auto alphas = sc.sweep.alphas;
  if (alphas.empty()) alphas.push_back(sc.central.alpha);
  auto strategies = sc.sweep.strategies;
  if (strategies.empty()) {
    std::vector<StrategyKind> own;
    for (const auto& op : sc.operators) own.push_back(op.strategy);
    strategies.push_back(own);
  }
  std::vector<SweepCell> cells;
  for (double b : budgets) {
    for (double a : alphas) {
      for (const auto& s : strategies) cells.push_back({b, a, s});
    }
  }
  return cells;
}

Scenario with_cell(const Scenario& sc, const SweepCell& cell) {
  Scenario out = sc;
  out.central.budget = cell.central_budget;
  out.central.alpha = cell.alpha;
  if (cell.strategies.size() != out.operators.size())
    throw InputError("sweep cell needs one strategy per operator");
  for (std::size_t i = 0; i < out.operators.size(); ++i) out.operators[i].strategy = cell.strategies[i];
  return out;
}

std::vector<SweepRow> run_sweep(const Scenario& sc, const std::vector<SweepCell>& cells,
                                unsigned threads) {
  std::vector<SweepRow> rows(cells.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cells.size());
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      try {
        const Scenario cell_sc = with_cell(sc, cells[k]);
        PairedRun run = run_paired(cell_sc);
        rows[k] = {cells[k], std::move(run.ivcg_metrics), std::move(run.ld_metrics)};
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

namespace {

std::string strategy_label(const std::vector<StrategyKind>& kinds) {
  std::string s;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (i) s += '+';
    s += to_string(kinds[i]);
  }
  return s;
}

}  // namespace

void write_run(const Scenario& sc, const SimState& ivcg, const std::filesystem::path& dir) {
  const auto doc = trace_to_json(sc, ivcg);
  write_json(dir / "trace.json", doc);
  emit_report(trace_from_json(doc), dir);
}

SimState run_baseline_from_trace(const Scenario& sc, const Trace& ivcg) {
  if (ivcg.kind != RunKind::Ivcg) throw InputError("baseline needs an IVCG trace, got a baseline trace");
  if (ivcg.horizon != sc.horizon) throw InputError("trace horizon does not match the scenario");
  std::vector<std::string> regions;
  for (const auto& op : sc.operators) regions.push_back(op.region);
  if (ivcg.regions != regions) throw InputError("trace regions do not match the scenario");
  return run_baseline_ld(sc, allocate_subsidies(sc, ivcg.state), yearly_subsidies(ivcg.state, sc.horizon));
}

void write_baseline(const Scenario& sc, const Trace& ivcg, const SimState& ld,
                    const std::filesystem::path& dir) {
  const auto doc = trace_to_json(sc, ld);
  write_json(dir / "ld_trace.json", doc);
  const Trace ld_trace = trace_from_json(doc);
  emit_report(ld_trace, dir, "ld_");
  std::vector<StrategyKind> kinds;
  for (const auto& op : sc.operators) kinds.push_back(op.strategy);
  emit_region_comparison(ivcg, ld_trace, sc.central.budget, strategy_label(kinds),
                         dir / "plot_local_benefit_by_region.csv");
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_sweep(const std::vector<SweepRow>& rows, const std::vector<std::string>& regions,
                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };

  auto summary = open_csv(dir / "sweep.csv");
  summary << "central_budget,alpha,strategy,ssw_ivcg,total_ssw_ivcg,ssw_ld,improvement_pct,"
             "total_subsidy,subsidy_efficiency\n";
  auto ssw = open_csv(dir / "plot_ssw_vs_budget.csv");
  ssw << "alpha,central_budget,strategy,improvement_pct\n";
  auto se = open_csv(dir / "plot_se_vs_budget.csv");
  se << "alpha,central_budget,strategy,subsidy_efficiency\n";
  auto strat = open_csv(dir / "plot_strategy.csv");
  strat << "strategy,alpha,central_budget,total_ssw_ivcg,ssw_ld\n";
  auto lb = open_csv(dir / "plot_local_benefit_by_region.csv");
  lb << "region,alpha,central_budget,strategy,local_benefit_ivcg,local_benefit_ld,improvement\n";

  for (const auto& r : rows) {
    const std::string label = strategy_label(r.cell.strategies);
    const std::string b = format_number(r.cell.central_budget);
    const std::string a = format_number(r.cell.alpha);
    const auto pct = welfare_improvement_pct(r.ivcg, r.ld);
    summary << b << ',' << a << ',' << label << ',' << format_number(r.ivcg.system_social_welfare)
            << ',' << format_number(r.ivcg.total_social_welfare) << ','
            << format_number(r.ld.total_social_welfare) << ',' << opt(pct) << ','
            << format_number(r.ivcg.total_subsidy) << ','
            << (r.ivcg.subsidy_efficiency ? format_number(*r.ivcg.subsidy_efficiency) : "no-subsidy")
            << '\n';
    ssw << a << ',' << b << ',' << label << ',' << opt(pct) << '\n';
    se << a << ',' << b << ',' << label << ',' << opt(r.ivcg.subsidy_efficiency) << '\n';
    strat << label << ',' << a << ',' << b << ',' << format_number(r.ivcg.total_social_welfare) << ','
          << format_number(r.ld.total_social_welfare) << '\n';
    for (std::size_t i = 0; i < regions.size(); ++i) {
      lb << regions[i] << ',' << a << ',' << b << ',' << label << ','
         << format_number(r.ivcg.total_local_benefit[i]) << ','
         << format_number(r.ld.total_local_benefit[i]) << ','
         << format_number(r.ivcg.total_local_benefit[i] - r.ld.total_local_benefit[i]) << '\n';
    }
  }
}

}  // namespace ivcg
