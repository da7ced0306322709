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

// Command-line front end: run, baseline, sweep, validate, report, gravity.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ivcg/errors.hpp"
#include "ivcg/experiment.hpp"
#include "ivcg/format.hpp"
#include "ivcg/scenario.hpp"

namespace {

using namespace ivcg;

struct Overrides {
  std::optional<int> horizon;
  std::optional<double> alpha;
  std::optional<double> central_budget;
  std::optional<double> central_increment;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> allocator;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--horizon", o.horizon, "planning horizon in years");
  cmd->add_option("--alpha", o.alpha, "investment ratio of the central organization");
  cmd->add_option("--central-budget", o.central_budget, "initial central budget (M EUR)");
  cmd->add_option("--central-increment", o.central_increment, "yearly central increment (M EUR)");
  cmd->add_option("--strategy", o.strategy, "reporting strategy for every operator: btr, minmax, proportional");
  cmd->add_option("--seed", o.seed, "seed recorded with the scenario");
  cmd->add_option("--allocator", o.allocator, "baseline subsidy allocator: region_share, equal, population");
}

Scenario load(const std::string& path, const Overrides& o) {
  Scenario sc = load_scenario(path);
  if (o.horizon) sc.horizon = *o.horizon;
  if (o.alpha) sc.central.alpha = *o.alpha;
  if (o.central_budget) sc.central.budget = *o.central_budget;
  if (o.central_increment) sc.central.yearly_increment = *o.central_increment;
  if (o.strategy) {
    const StrategyKind k = parse_strategy(*o.strategy);
    for (auto& op : sc.operators) op.strategy = k;
  }
  if (o.seed) sc.seed = *o.seed;
  if (o.allocator) sc.allocator = parse_allocator(*o.allocator);
  sc.validate();
  return sc;
}

std::filesystem::path output_dir(const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("IVCG_OUTPUT_DIR"); env && *env) return env;
  return "ivcg-out";
}

void print_metrics(const char* label, const MetricsReport& m, const std::vector<std::string>& regions) {
  std::cout << label << ": ssw " << format_number(m.total_social_welfare) << " (joint "
            << format_number(m.system_social_welfare) << "), subsidy "
            << format_number(m.total_subsidy) << ", se "
            << (m.subsidy_efficiency ? format_number(*m.subsidy_efficiency) : "no-subsidy") << '\n';
  for (std::size_t i = 0; i < regions.size(); ++i)
    std::cout << "  " << regions[i] << " local benefit " << format_number(m.total_local_benefit[i]) << '\n';
}

std::vector<std::string> regions_of(const Scenario& sc) {
  std::vector<std::string> r;
  for (const auto& op : sc.operators) r.push_back(op.region);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inter-regional rail investment mechanism simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string trace_path;
  std::optional<std::string> out;
  Overrides ov;
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "simulate the joint mechanism and write its trace and report");
  run->add_option("scenario", scenario_path, "scenario.json")->required();
  run->add_option("--out", out, "output directory (default: $IVCG_OUTPUT_DIR or ./ivcg-out)");
  add_overrides(run, ov);

  auto* baseline = app.add_subcommand("baseline", "local-design baseline paired with an IVCG trace");
  baseline->add_option("scenario", scenario_path, "scenario.json")->required();
  baseline->add_option("--trace", trace_path, "trace.json written by `run`")->required();
  baseline->add_option("--out", out, "output directory");
  add_overrides(baseline, ov);

  auto* sweep = app.add_subcommand("sweep", "grid over central budgets, investment ratios and strategies");
  sweep->add_option("scenario", scenario_path, "scenario.json")->required();
  sweep->add_option("--out", out, "output directory");
  sweep->add_option("--threads", threads, "worker threads (0: hardware concurrency)");
  add_overrides(sweep, ov);

  auto* validate = app.add_subcommand("validate", "load and check a scenario");
  validate->add_option("scenario", scenario_path, "scenario.json")->required();
  add_overrides(validate, ov);

  auto* report = app.add_subcommand("report", "regenerate CSV tables from a trace");
  report->add_option("trace", trace_path, "trace.json or ld_trace.json")->required();
  report->add_option("--out", out, "output directory");

  std::string network_path;
  double total_trips = 0.0;
  auto* gravity = app.add_subcommand("gravity", "write a gravity-model demand file for a network");
  gravity->add_option("network", network_path, "network text file")->required();
  gravity->add_option("--total", total_trips, "total yearly trips")->required();
  gravity->add_option("--out", out, "demand file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const Scenario sc = load(scenario_path, ov);
      const auto dir = output_dir(out);
      const SimState st = run_ivcg(sc);
      write_run(sc, st, dir);
      print_metrics("ivcg", compute_metrics(st, sc.operators.size(), sc.horizon), regions_of(sc));
      std::cout << "wrote " << (dir / "trace.json").string() << '\n';
    } else if (*baseline) {
      const Scenario sc = load(scenario_path, ov);
      const auto dir = output_dir(out);
      const Trace ivcg = read_trace(trace_path);
      const SimState ld = run_baseline_from_trace(sc, ivcg);
      write_baseline(sc, ivcg, ld, dir);
      const auto mi = compute_metrics(ivcg.state, sc.operators.size(), sc.horizon);
      const auto ml = compute_metrics(ld, sc.operators.size(), sc.horizon);
      print_metrics("ivcg", mi, regions_of(sc));
      print_metrics("ld", ml, regions_of(sc));
      if (const auto pct = welfare_improvement_pct(mi, ml))
        std::cout << "ssw improvement " << format_number(*pct) << "%\n";
      std::cout << "wrote " << (dir / "ld_trace.json").string() << '\n';
    } else if (*sweep) {
      const Scenario sc = load(scenario_path, ov);
      const auto dir = output_dir(out);
      const auto rows = run_sweep(sc, sweep_cells(sc), threads);
      write_sweep(rows, regions_of(sc), dir);
      std::cout << rows.size() << " sweep rows written to " << dir.string() << '\n';
    } else if (*validate) {
      const Scenario sc = load(scenario_path, ov);
      std::cout << "ok: " << sc.name << ", " << sc.network.regions().size() << " regions, "
                << sc.network.cities().size() << " cities, " << sc.network.edges().size()
                << " edges, " << sc.candidates.size() << " candidates, " << sc.demands.size()
                << " od pairs\n";
    } else if (*report) {
      const Trace t = read_trace(trace_path);
      const auto dir = output_dir(out);
      emit_report(t, dir, t.kind == RunKind::Ivcg ? "" : "ld_");
      std::cout << "report written to " << dir.string() << '\n';
    } else if (*gravity) {
      std::ifstream in(network_path);
      if (!in) throw InputError("cannot read '" + network_path + "'");
      const auto net = parse_network(in, network_path);
      const auto demands = gravity_demand(net, total_trips);
      if (out) {
        std::ofstream f(*out);
        if (!f) throw InputError("cannot write '" + *out + "'");
        write_demand(f, demands);
      } else {
        write_demand(std::cout, demands);
      }
    }
  } catch (const RuntimeInvariantError& e) {
    std::cerr << "runtime invariant violated: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const UndefinedError& e) {
    std::cerr << "undefined quantity: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
