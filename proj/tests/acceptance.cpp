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

// Acceptance checks, one PASS/FAIL line per criterion. Run without arguments
// for all of them or with one criterion name. Exit status is non-zero when
// any selected criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "ivcg/demand.hpp"
#include "ivcg/experiment.hpp"
#include "ivcg/format.hpp"
#include "ivcg/mechanism.hpp"
#include "ivcg/report.hpp"
#include "ivcg/scenario.hpp"
#include "ivcg/simulation.hpp"
#include "json.hpp"
#include "scenario_gen.hpp"
#include "support.hpp"

using namespace ivcg;
using namespace ivcg::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kData = IVCG_DATA_DIR;
const fs::path kMini = kData / "mini_europe" / "scenario.json";
const fs::path kGolden = fs::path(IVCG_GOLDEN_DIR) / "mini_europe.json";

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_number(v); }

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("ivcg-accept-" + tag + "-" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<Project> make_projects(const std::vector<double>& costs) {
  std::vector<Project> ps;
  for (std::size_t x = 0; x < costs.size(); ++x) ps.push_back({"p" + std::to_string(x), costs[x]});
  return ps;
}

std::vector<std::size_t> all_of(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// Payment bounds under budget-clamped truthful reports.
// Distributions: operators U{2..5}, projects U{2..6}; cost U[1, 40];
// true benefit 0 with probability 0.2, else U[0, 25]; operator budget
// U[0, 30]; central budget unlimited with probability 0.5, else U[0, 60];
// investment ratio 1 with probability 0.5, else U[0.5, 1].
Verdict payment_bounds() {
  constexpr int kInstances = 20000;
  Gen g(0x1e33a1);
  long violations = 0, committed = 0, checked = 0;
  for (int t = 0; t < kInstances; ++t) {
    const int n_ops = g.integer(2, 5);
    const int n_proj = g.integer(2, 6);
    std::vector<double> costs(n_proj);
    for (double& c : costs) c = g.real(1.0, 40.0);
    const auto ps = make_projects(costs);
    RoundInput in;
    in.projects = ps;
    in.pool = all_of(ps.size());
    in.true_benefits.assign(n_ops, std::vector<double>(n_proj));
    for (auto& row : in.true_benefits)
      for (double& v : row) v = g.coin(0.2) ? 0.0 : g.real(0.0, 25.0);
    for (int i = 0; i < n_ops; ++i) in.policies.push_back({StrategyKind::BTR, g.real(0.0, 30.0)});
    in.central_budget = g.coin() ? kUnreachable : g.real(0.0, 60.0);
    in.alpha = g.coin() ? 1.0 : g.real(0.5, 1.0);
    const RoundOutcome out = run_round(in);
    if (!out.selected) {
      for (double p : out.payments) violations += p != 0.0;
      continue;
    }
    ++committed;
    for (int i = 0; i < n_ops; ++i) {
      const double p = out.payments[i];
      const double v = in.true_benefits[i][*out.selected];
      const double eta = in.policies[i].budget;
      const double tol = 1e-12 * std::max(1.0, v);
      ++checked;
      if (!(p >= 0.0) || p > v + tol || p > eta + tol) ++violations;
    }
  }
  return {violations == 0 && committed > kInstances / 10,
          std::to_string(kInstances) + " instances, " + std::to_string(committed) + " committed, " +
              std::to_string(checked) + " payments checked, " + std::to_string(violations) +
              " violations"};
}

// Exhaustive dominance check for two operators and two projects at alpha 1.
// Operator 0 has true values v in {0..10}^2 and budget eta; operator 1
// reports r in {0..10}^2 with budget 10. Costs run over a fixed grid per
// project. A report profile's outcome does not depend on operator 0's true
// values, so outcomes are tabulated once per (costs, r, eta) and every v is
// checked against that table.
struct DominanceCount {
  long instances = 0;
  long interior = 0;
  long boundary = 0;
  long interior_beaten = 0;
  long boundary_beaten = 0;
  long zero_cost_instances = 0;
  long zero_cost_violations = 0;
  std::string example;
};

DominanceCount dominance_scan(PaymentOptions options) {
  constexpr int kLevels = 11;
  const std::vector<double> cost_grid{0.0, 2.5, 6.5, 10.5, 14.5};
  const std::vector<double> eta_grid{6.0, 10.0};
  const std::array<double, 2> other_budget{0.0, 10.0};
  DominanceCount count;

  struct Outcome {
    int selected = -1;
    double payment = 0.0;
  };
  std::vector<Outcome> table(kLevels * kLevels);

  for (double ca : cost_grid) {
    for (double cb : cost_grid) {
      const auto ps = make_projects({ca, cb});
      const bool zero_cost = ca == 0.0 && cb == 0.0;
      for (double eta : eta_grid) {
        const int top = static_cast<int>(eta);
        for (int ra = 0; ra < kLevels; ++ra) {
          for (int rb = 0; rb < kLevels; ++rb) {
            // Operator 0 may report any grid point inside [0, eta]^2.
            for (int xa = 0; xa <= top; ++xa) {
              for (int xb = 0; xb <= top; ++xb) {
                const ValuationProfile reports(
                    std::vector<std::vector<double>>{{double(xa), double(xb)}, {double(ra), double(rb)}});
                const std::array<double, 2> budgets{eta, other_budget[1]};
                const RoundOutcome out =
                    resolve_round(reports, ps, {0, 1}, budgets, kUnreachable, 1.0, options);
                table[xa * kLevels + xb] = {out.selected ? int(*out.selected) : -1, out.payments[0]};
              }
            }
            auto utility = [&](int va, int vb, int xa, int xb) {
              const Outcome& o = table[xa * kLevels + xb];
              if (o.selected < 0) return 0.0;
              return (o.selected == 0 ? va : vb) - o.payment;
            };
            for (int va = 0; va < kLevels; ++va) {
              for (int vb = 0; vb < kLevels; ++vb) {
                ++count.instances;
                count.zero_cost_instances += zero_cost;
                const int ba = std::min(va, top);
                const int bb = std::min(vb, top);
                const double u = utility(va, vb, ba, bb);
                const bool interior = ba > 0 && ba < top && bb > 0 && bb < top;
                bool beaten = false;
                int wa = 0, wb = 0;
                if (interior) {
                  ++count.interior;
                  for (int xa = 0; xa <= top && !beaten; ++xa) {
                    for (int xb = 0; xb <= top && !beaten; ++xb) {
                      if (utility(va, vb, xa, xb) > u + 1e-9) {
                        beaten = true;
                        wa = xa;
                        wb = xb;
                      }
                    }
                  }
                  count.interior_beaten += beaten;
                } else {
                  ++count.boundary;
                  beaten = utility(va, vb, 0, 0) > u + 1e-9;
                  count.boundary_beaten += beaten;
                }
                if (beaten && zero_cost) ++count.zero_cost_violations;
                if (beaten && count.example.empty()) {
                  std::ostringstream s;
                  s << "costs (" << fmt(ca) << ", " << fmt(cb) << "), eta " << fmt(eta) << ", values ("
                    << va << ", " << vb << "), opponent (" << ra << ", " << rb << "): truthful u="
                    << fmt(u) << ", report (" << wa << ", " << wb << ") u=" << fmt(utility(va, vb, wa, wb));
                  count.example = s.str();
                }
              }
            }
          }
        }
      }
    }
  }
  return count;
}

Verdict truthful_dominance() {
  const DominanceCount c = dominance_scan({});
  const long total = c.interior_beaten + c.boundary_beaten;
  std::ostringstream s;
  s << c.instances << " instances (" << c.interior << " interior, " << c.boundary
    << " boundary); counterexamples: " << c.interior_beaten << " interior, " << c.boundary_beaten
    << " boundary; zero-cost sub-family " << c.zero_cost_violations << " of "
    << c.zero_cost_instances;
  if (!c.example.empty()) s << "; first: " << c.example;
  const DominanceCount r = dominance_scan({.refilter_exclusion_run = true});
  s << "; with re-filtered exclusion run: " << r.interior_beaten + r.boundary_beaten
    << " counterexamples";
  return {total == 0, s.str()};
}

// Brute force over every project with ties resolved by larger surplus, then
// smaller id.
std::pair<std::vector<std::size_t>, std::optional<std::size_t>> select_oracle(
    const std::vector<std::vector<double>>& rows, const std::vector<Project>& ps) {
  std::vector<std::size_t> cand;
  std::optional<std::size_t> best;
  double best_sum = 0.0;
  for (std::size_t x = 0; x < ps.size(); ++x) {
    double s = 0.0;
    for (const auto& r : rows) s += r[x];
    if (!(s > ps[x].cost)) continue;
    cand.push_back(x);
    const double surplus = s - ps[x].cost;
    const bool better = !best || s > best_sum ||
                        (s == best_sum && (surplus > best_sum - ps[*best].cost ||
                                           (surplus == best_sum - ps[*best].cost && ps[x].id < ps[*best].id)));
    if (better) {
      best = x;
      best_sum = s;
    }
  }
  return {cand, best};
}

Verdict selection_oracle() {
  long instances = 0, mismatches = 0, nulls = 0;
  auto check = [&](const std::vector<std::vector<double>>& rows, const std::vector<Project>& ps) {
    ++instances;
    const ValuationProfile v(rows);
    const auto [cand, best] = select_oracle(rows, ps);
    const auto got_cand = candidate_set(v, ps);
    const auto got = select_project(v, ps, got_cand);
    nulls += !best;
    if (got_cand != cand || got != best) ++mismatches;
  };

  // Exhaustive: two operators, 1 to 4 projects, values {0,1,2}, costs {0..3}.
  for (int n = 1; n <= 4; ++n) {
    int combos = 1;
    for (int k = 0; k < n; ++k) combos *= 36;
    for (int code = 0; code < combos; ++code) {
      std::vector<std::vector<double>> rows(2, std::vector<double>(n));
      std::vector<double> costs(n);
      int c = code;
      for (int k = 0; k < n; ++k, c /= 36) {
        const int digit = c % 36;
        rows[0][k] = digit % 3;
        rows[1][k] = (digit / 3) % 3;
        costs[k] = digit / 9;
      }
      check(rows, make_projects(costs));
    }
  }
  // Random: 1 to 5 operators, 1 to 4 projects, real and integer values.
  Gen g(0x5e1ec7);
  for (int t = 0; t < 50000; ++t) {
    const int n_ops = g.integer(1, 5);
    const int n = g.integer(1, 4);
    const bool integral = g.coin();
    auto draw = [&](double hi) { return integral ? std::floor(g.real(0, hi)) : g.real(0, hi); };
    std::vector<std::vector<double>> rows(n_ops, std::vector<double>(n));
    for (auto& r : rows)
      for (double& x : r) x = g.coin(0.2) ? 0.0 : draw(20.0);
    std::vector<double> costs(n);
    for (double& c : costs) c = draw(40.0);
    check(rows, make_projects(costs));
  }
  return {mismatches == 0, std::to_string(instances) + " instances (" + std::to_string(nulls) +
                               " null), " + std::to_string(mismatches) + " mismatches"};
}

std::vector<const JointRound*> joint_rounds(const SimState& st) {
  std::vector<const JointRound*> out;
  for (const auto& h : st.history)
    if (const auto* r = std::get_if<JointRound>(&h)) out.push_back(r);
  return out;
}

Verdict subsidy_contract() {
  long committed = 0, violations = 0, compared = 0, differing = 0;
  auto check_trace = [&](const SimState& st, double alpha) {
    for (const auto* r : joint_rounds(st)) {
      if (!r->selected) continue;
      ++committed;
      const double raised = std::accumulate(r->payments.begin(), r->payments.end(), 0.0);
      const double scale = 1e-9 * std::max(1.0, r->cost);
      if (r->subsidy > alpha * r->cost + scale) ++violations;
      if (std::abs(r->subsidy - std::max(r->cost - raised, 0.0)) > scale) ++violations;
    }
  };
  // Rounds of the two runs agree while their pools and reports agree; any
  // round committing the same project there must carry identical payments.
  auto compare = [&](const SimState& a, const SimState& b) {
    const auto ra = joint_rounds(a);
    const auto rb = joint_rounds(b);
    for (std::size_t k = 0; k < std::min(ra.size(), rb.size()); ++k) {
      if (ra[k]->year != rb[k]->year || ra[k]->pool != rb[k]->pool || ra[k]->reports != rb[k]->reports)
        break;
      if (ra[k]->selected && ra[k]->selected == rb[k]->selected) {
        ++compared;
        differing += ra[k]->payments != rb[k]->payments;
      }
      if (ra[k]->selected != rb[k]->selected) break;
    }
  };

  Gen g(0x5ab51d);
  for (int t = 0; t < 150; ++t) {
    Scenario sc = random_scenario(g);
    for (double alpha : {0.6, 1.0}) {
      sc.central.alpha = alpha;
      check_trace(run_ivcg(sc), alpha);
    }
    sc.central.alpha = 0.6;
    const SimState low = run_ivcg(sc);
    sc.central.alpha = 1.0;
    compare(low, run_ivcg(sc));
  }
  const Scenario mini = load_scenario(kMini);
  for (const auto& cell : sweep_cells(mini)) {
    const Scenario s = with_cell(mini, cell);
    check_trace(run_ivcg(s), s.central.alpha);
  }
  for (double budget : mini.sweep.central_budgets) {
    Scenario s = mini;
    s.central.budget = budget;
    s.central.alpha = 0.6;
    const SimState low = run_ivcg(s);
    s.central.alpha = 1.0;
    compare(low, run_ivcg(s));
  }
  // Single rounds with identical reports under both ratios.
  for (int t = 0; t < 20000; ++t) {
    const int n_ops = g.integer(2, 4);
    const int n = g.integer(1, 5);
    std::vector<double> costs(n);
    for (double& c : costs) c = g.real(0.0, 40.0);
    const auto ps = make_projects(costs);
    std::vector<std::vector<double>> rows(n_ops, std::vector<double>(n));
    for (auto& r : rows)
      for (double& x : r) x = g.real(0.0, 30.0);
    std::vector<double> budgets(n_ops);
    for (double& b : budgets) b = g.real(5.0, 40.0);
    const auto a = resolve_round(ValuationProfile(rows), ps, all_of(n), budgets, kUnreachable, 0.6);
    const auto c = resolve_round(ValuationProfile(rows), ps, all_of(n), budgets, kUnreachable, 1.0);
    if (a.selected) {
      ++committed;
      const double scale = 1e-9 * std::max(1.0, ps[*a.selected].cost);
      if (a.subsidy > 0.6 * ps[*a.selected].cost + scale) ++violations;
    }
    if (a.selected && a.selected == c.selected) {
      ++compared;
      differing += a.payments != c.payments;
    }
  }
  return {violations == 0 && differing == 0 && committed > 0 && compared > 0,
          std::to_string(committed) + " commitments, " + std::to_string(violations) +
              " subsidy violations; " + std::to_string(compared) +
              " same-pick pairs at alpha 0.6 / 1.0, " + std::to_string(differing) + " payment differences"};
}

Verdict demand_model() {
  std::vector<std::string> failures;
  Gen g(0xde3a4d);
  double worst_sum = 0.0;
  for (int t = 0; t < 100000; ++t) {
    std::array<double, kModeCount> costs{};
    for (double& c : costs) c = g.coin(0.25) ? kUnreachable : g.real(0.0, 2000.0);
    if (std::all_of(costs.begin(), costs.end(), [](double c) { return !reachable(c); })) continue;
    const ModeSplit s = mode_split(costs, g.real(0.0, 0.2));
    worst_sum = std::max(worst_sum, std::abs(s.share[0] + s.share[1] + s.share[2] - 1.0));
    for (std::size_t m = 0; m < kModeCount; ++m)
      if (!reachable(costs[m]) && s.share[m] != 0.0) failures.push_back("unreachable share");
  }
  if (worst_sum > 1e-9) failures.push_back("shares sum off by " + fmt(worst_sum));

  const double plane = generalized_cost(DemandParams{}, Mode::Air, 20.0, 30.0, 880.0);
  if (!(std::abs(plane - 106.694) <= 0.001)) failures.push_back("plane cost " + fmt(plane));

  const double beta = 0.0461;
  const ModeSplit two = mode_split({50.0, kUnreachable, 100.0}, beta);
  const double closed = 1.0 / (1.0 + std::exp(-beta * 50.0));
  if (!(std::abs(two[Mode::Rail] - closed) <= 1e-6)) failures.push_back("two-mode logit");

  std::string detail = "max share-sum error " + fmt(worst_sum) + ", plane cost " + fmt(plane) +
                       ", logit " + fmt(two[Mode::Rail]) + " vs closed form " + fmt(closed);
  if (!failures.empty()) detail += "; failed: " + failures.front();
  return {failures.empty(), detail};
}

Verdict budget_replay() {
  const Scenario sc = load_scenario(kMini);
  TempDir dir("replay");
  write_run(sc, run_ivcg(sc), dir.path);
  const Trace trace = read_trace(dir.path / "trace.json");
  const std::size_t n = sc.operators.size();

  std::vector<double> op(n);
  for (std::size_t i = 0; i < n; ++i) op[i] = sc.operators[i].budget;
  double central = sc.central.budget;
  double worst = 0.0;
  int years = 0;
  for (const auto& yb : trace.state.budgets) {
    ++years;
    std::vector<double> paid(n, 0.0), local(n, 0.0);
    double subsidy = 0.0, surplus = 0.0;
    for (const auto& h : trace.state.history) {
      if (const auto* r = std::get_if<JointRound>(&h); r && r->year == yb.year) {
        for (std::size_t i = 0; i < n; ++i) paid[i] += r->payments[i];
        subsidy += r->subsidy;
        surplus += r->surplus;
      } else if (const auto* l = std::get_if<LocalDesignRecord>(&h); l && l->year == yb.year) {
        local[l->op] += l->spend;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      op[i] = next_budget(op[i], sc.discount, paid[i], local[i], sc.operators[i].yearly_increment);
      worst = std::max(worst, std::abs(op[i] - yb.op_end[i]));
    }
    central = next_budget(central, sc.discount, subsidy, 0.0, sc.central.yearly_increment) + surplus;
    worst = std::max(worst, std::abs(central - yb.central_end));
  }

  const SimState ld = run_baseline_from_trace(sc, trace);
  const auto yearly = yearly_subsidies(trace.state, trace.horizon);
  double worst_alloc = 0.0;
  for (const auto& yb : ld.budgets) {
    const double sum = std::accumulate(yb.op_allocated.begin(), yb.op_allocated.end(), 0.0);
    worst_alloc = std::max(worst_alloc, std::abs(sum - yearly[yb.year - 1]) /
                                            std::max(1.0, std::abs(yearly[yb.year - 1])));
  }
  const double total_subsidy = std::accumulate(yearly.begin(), yearly.end(), 0.0);
  return {years == 3 && worst <= 1e-6 && worst_alloc <= 1e-9 && ld.budgets.size() == 3,
          std::to_string(years) + " years replayed, max budget deviation " + fmt(worst) +
              " MEUR; subsidies " + fmt(total_subsidy) + " MEUR, max allocation deviation " +
              fmt(worst_alloc) + " relative"};
}

Verdict local_design_oracle() {
  Gen g(0x10cde5);
  long instances = 0, mismatches = 0, sizes_seen = 0;
  std::vector<int> by_size(11, 0);
  while (instances < 600) {
    const int regions = g.integer(1, 3);
    const int n = g.integer(std::max(3, regions), 8);
    std::vector<std::string> rs;
    for (int r = 0; r < regions; ++r) rs.push_back("R" + std::to_string(r));
    std::vector<CityNode> cities;
    for (int i = 0; i < n; ++i)
      cities.push_back(city("c" + std::to_string(i), rs[i % regions], g.real(0, 10), kUnreachable, 0,
                            g.real(1e4, 1e6)));
    std::vector<NetEdge> edges;
    int k = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const std::string a = "c" + std::to_string(i), b = "c" + std::to_string(j);
        const double km = g.integer(30, 400);
        edges.push_back(edge("k" + std::to_string(k++), a, b, km * g.real(1.0, 1.4), Mode::Car));
        if (g.coin(0.7)) {
          const bool built = g.coin(0.3);
          edges.push_back(edge("r" + std::to_string(k++), a, b, km,  Mode::Rail,
                               built ? EdgeStatus::Implemented : EdgeStatus::NotImplemented,
                               built ? 0.0 : g.real(0.5, 20.0)));
        }
      }
    }
    Scenario sc;
    sc.network = MobilityNetwork(rs, cities, edges);
    sc.demands = gravity_demand(sc.network, g.real(1e7, 5e8));
    for (const auto& e : sc.network.edges())
      if (e.mode == Mode::Rail && e.status == EdgeStatus::NotImplemented) sc.candidates.push_back(e.id);
    for (const auto& r : rs) sc.operators.push_back({r, 0.0, 0.0, StrategyKind::BTR});

    const std::size_t op = static_cast<std::size_t>(g.integer(0, regions - 1));
    std::vector<NetEdge> eligible = eligible_projects(sc, sc.network, op);
    std::shuffle(eligible.begin(), eligible.end(), g.engine());
    eligible.resize(std::min<std::size_t>(eligible.size(), static_cast<std::size_t>(g.integer(1, 10))));
    if (eligible.empty()) continue;
    ++instances;
    ++by_size[eligible.size()];

    const RevenueModel model(sc.network, sc.params, sc.demands);
    const std::size_t region = sc.operator_region(op);
    const double before = model.by_region()[region];
    double total_cost = 0.0;
    for (const auto& e : eligible) total_cost += e.cost;
    const double cap = g.real(0.0, total_cost);

    double best = 0.0, runner_up = 0.0;
    std::vector<std::string> best_ids;
    for (unsigned mask = 1; mask < (1u << eligible.size()); ++mask) {
      std::vector<NetEdge> set;
      double cost = 0.0;
      for (std::size_t x = 0; x < eligible.size(); ++x)
        if (mask & (1u << x)) {
          set.push_back(eligible[x]);
          cost += eligible[x].cost;
        }
      if (cost > cap) continue;
      const double v = (model.by_region(set)[region] - before) / kEurPerBudgetUnit;
      if (v > best) {
        runner_up = best;
        best = v;
        best_ids.clear();
        for (const auto& e : set) best_ids.push_back(e.id);
      } else {
        runner_up = std::max(runner_up, v);
      }
    }
    std::sort(best_ids.begin(), best_ids.end());

    const LocalDesignResult got = solve_local_design(model, {}, region, eligible, cap);
    std::vector<std::string> got_ids = got.projects;
    std::sort(got_ids.begin(), got_ids.end());
    const double tol = 1e-9 * std::max(1.0, std::abs(best));
    bool ok = got.exact && std::abs(got.benefit - best) <= tol;
    if (best - runner_up > tol) ok = ok && got_ids == best_ids;
    mismatches += !ok;
  }
  for (int s : by_size) sizes_seen += s > 0;
  return {mismatches == 0 && by_size[10] > 0,
          std::to_string(instances) + " instances, " + std::to_string(sizes_seen) +
              " distinct eligible-set sizes (" + std::to_string(by_size[10]) + " with 10), " +
              std::to_string(mismatches) + " mismatches"};
}

Verdict directional() {
  const Scenario sc = load_scenario(kMini);
  std::ifstream in(kGolden);
  if (!in) return {false, "missing golden file " + kGolden.string()};
  const auto golden = nlohmann::json::parse(in);
  const double golden_ratio = golden.at("ssw_ratio").get<double>();

  const PairedRun run = run_paired(sc);
  const double ivcg = run.ivcg_metrics.total_social_welfare;
  const double ld = run.ld_metrics.total_social_welfare;
  const double ratio = ivcg / ld;
  const bool positive = sc.central.budget > 0.0 && sc.central.alpha == 1.0;
  const bool ok = positive && ld > 0.0 && ivcg >= ld && std::abs(ratio - golden_ratio) <= 1e-9;
  return {ok, "total SSW IVCG " + fmt(ivcg) + " vs LD " + fmt(ld) + " MEUR, ratio " + fmt(ratio) +
                  " (golden " + fmt(golden_ratio) + "), central budget " + fmt(sc.central.budget) +
                  ", alpha " + fmt(sc.central.alpha)};
}

// Runs the command line tool, capturing stdout; the status goes to `status`.
std::string cli(const std::string& args, int& status) {
  const std::string cmd = "\"" + std::string(IVCG_CLI_PATH) + "\" " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  std::string out;
  if (pipe == nullptr) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  const int raw = ::pclose(pipe);
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = s.str();
  }
  return files;
}

Verdict determinism() {
  TempDir dir("determinism");
  auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
  const std::string mini = q(kMini);
  long compared = 0;
  std::vector<std::string> failures;
  for (int pass = 0; pass < 2; ++pass) {
    const fs::path root = dir.path / std::to_string(pass);
    const std::vector<std::pair<std::string, std::string>> verbs{
        {"validate", "validate " + mini},
        {"run", "run " + mini + " --out " + q(root / "run")},
        {"baseline", "baseline " + mini + " --trace " + q(root / "run" / "trace.json") + " --out " +
                         q(root / "baseline")},
        {"report", "report " + q(root / "run" / "trace.json") + " --out " + q(root / "report")},
        {"sweep", "sweep " + mini + " --threads " + (pass == 0 ? "1" : "4") + " --out " +
                      q(root / "sweep")},
        {"gravity", "gravity " + q(kData / "mini_europe" / "network.txt") + " --total 3e9"}};
    for (const auto& [name, args] : verbs) {
      int status = 0;
      std::string out = cli(args, status);
      // Output paths differ between the passes by construction.
      for (std::size_t at; (at = out.find(root.string())) != std::string::npos;)
        out.replace(at, root.string().size(), "<out>");
      if (status != 0) failures.push_back(name + " exited " + std::to_string(status));
      std::ofstream(root.parent_path() / (std::to_string(pass) + "-" + name + ".stdout"), std::ios::binary)
          << out;
    }
  }
  const auto a = tree(dir.path / "0");
  const auto b = tree(dir.path / "1");
  if (a.size() != b.size()) failures.push_back("file sets differ");
  for (const auto& [name, body] : a) {
    const auto it = b.find(name);
    ++compared;
    if (it == b.end() || it->second != body) failures.push_back(name + " differs");
  }
  for (const char* verb : {"validate", "run", "baseline", "report", "sweep", "gravity"}) {
    const auto read = [&](int pass) {
      return tree(dir.path).at(std::to_string(pass) + "-" + verb + ".stdout");
    };
    ++compared;
    if (read(0) != read(1)) failures.push_back(std::string(verb) + " stdout differs");
  }
  std::string detail = std::to_string(compared) + " outputs compared across two runs of 6 verbs";
  if (!failures.empty()) detail += "; " + failures.front();
  return {failures.empty() && a.size() >= 20, detail};
}

struct Criterion {
  const char* name;
  const char* title;
  std::function<Verdict()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"payment_bounds", "BTR payments lie in [0, min(v_i, budget)]", payment_bounds},
      {"truthful_dominance", "BTR partially dominant at alpha 1 (exhaustive grid)", truthful_dominance},
      {"selection_oracle", "selection matches brute force for up to 4 projects", selection_oracle},
      {"subsidy_contract", "subsidy bound, subsidy identity, alpha-invariant payments", subsidy_contract},
      {"demand_model", "mode shares, plane cost and logit closed form", demand_model},
      {"budget_replay", "mini-Europe budgets replay from the trace; baseline subsidies match",
       budget_replay},
      {"local_design_oracle", "local design matches subset enumeration up to 10 projects",
       local_design_oracle},
      {"directional", "mini-Europe total SSW of IVCG >= local design, golden ratio", directional},
      {"determinism", "byte-identical outputs for every verb", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string wanted = argc > 1 ? argv[1] : "";
  bool matched = false, all_pass = true;
  for (const auto& c : criteria()) {
    if (!wanted.empty() && wanted != c.name) continue;
    matched = true;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_pass = all_pass && v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << c.name << " [" << c.title << "] " << v.detail
              << " (" << fmt(std::round(secs * 100) / 100) << " s)" << std::endl;
  }
  if (!matched) {
    std::cerr << "unknown criterion '" << wanted << "'; known:";
    for (const auto& c : criteria()) std::cerr << ' ' << c.name;
    std::cerr << '\n';
    return 2;
  }
  return all_pass ? 0 : 1;
}
