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

#include "ivcg/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "ivcg/errors.hpp"

namespace ivcg {

std::string_view to_string(SubsidyAllocator a) {
  switch (a) {
    case SubsidyAllocator::RegionShare:
      return "region_share";
    case SubsidyAllocator::Equal:
      return "equal";
    case SubsidyAllocator::Population:
      return "population";
  }
  return "?";
}

SubsidyAllocator parse_allocator(std::string_view text) {
  if (text == "region_share") return SubsidyAllocator::RegionShare;
  if (text == "equal") return SubsidyAllocator::Equal;
  if (text == "population") return SubsidyAllocator::Population;
  throw InputError("unknown subsidy allocator '" + std::string(text) + "'");
}

void Scenario::validate() const {
  params.validate();
  if (horizon < 1) throw InvariantError("planning horizon must be >= 1");
  if (!(discount > 0.0 && discount <= 1.0))
    throw InvariantError("discount factor must lie in (0, 1]");
  if (construction_years < 0) throw InvariantError("construction years must be >= 0");
  if (!(cost_per_km >= 0.0)) throw InvariantError("cost per km must be >= 0");
  if (!(central.alpha >= 0.0 && central.alpha <= 1.0))
    throw InvariantError("investment ratio alpha must lie in [0, 1]");
  if (!(central.budget >= 0.0) || !(central.yearly_increment >= 0.0))
    throw InvariantError("central budget and increment must be >= 0");
  std::vector<bool> covered(network.regions().size(), false);
  for (const auto& op : operators) {
    if (!(op.budget >= 0.0) || !(op.yearly_increment >= 0.0))
      throw InvariantError("operator '" + op.region + "': budget and increment must be >= 0");
    std::size_t r;
    try {
      r = network.region_index(op.region);
    } catch (const InputError&) {
      throw DanglingReferenceError("operator references unknown region '" + op.region + "'");
    }
    if (covered[r]) throw InvariantError("region '" + op.region + "' has two operators");
    covered[r] = true;
  }
  for (std::size_t r = 0; r < covered.size(); ++r) {
    if (!covered[r])
      throw InvariantError("region '" + network.regions()[r] + "' has no operator");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : candidates) {
    auto idx = network.find_edge(id);
    if (!idx) throw DanglingReferenceError("candidate references unknown edge '" + id + "'");
    const NetEdge& e = network.edges()[*idx];
    if (e.mode != Mode::Rail) throw InvariantError("candidate '" + id + "' is not a rail edge");
    if (!seen.insert(id).second) throw InvariantError("candidate '" + id + "' listed twice");
  }
  for (const auto& d : demands) {
    if (d.origin == d.dest) throw InvariantError("trip " + d.origin + "->" + d.dest + ": origin == dest");
    if (!(d.volume >= 0.0) || std::isinf(d.volume))
      throw InvariantError("trip " + d.origin + "->" + d.dest + ": volume must be >= 0");
    try {
      network.city_index(d.origin);
      network.city_index(d.dest);
    } catch (const InputError& e) {
      throw DanglingReferenceError(std::string("demand: ") + e.what());
    }
  }
}

std::size_t Scenario::operator_region(std::size_t op) const {
  return network.region_index(operators.at(op).region);
}

SimState initial_state(const Scenario& sc, RunKind kind) {
  SimState st;
  st.kind = kind;
  st.network = sc.network;
  for (const auto& op : sc.operators) {
    st.operators.push_back({op.region, op.budget, op.yearly_increment, op.strategy, 0.0, 0.0});
  }
  st.central = {sc.central.budget, sc.central.yearly_increment, sc.central.alpha, 0.0};
  return st;
}

std::vector<NetEdge> committed_extra(const MobilityNetwork& net) {
  std::vector<NetEdge> out;
  for (const auto& e : net.edges()) {
    if (e.mode == Mode::Rail && e.status == EdgeStatus::UnderConstruction) out.push_back(e);
  }
  return out;
}

std::vector<std::string> open_candidates(const Scenario& sc, const MobilityNetwork& net) {
  std::vector<std::string> out;
  for (const auto& id : sc.candidates) {
    if (net.edge(id).status == EdgeStatus::NotImplemented) out.push_back(id);
  }
  return out;
}

namespace {

int construction_time(const Scenario& sc, const NetEdge& e) {
  return e.construction_remaining > 0 ? e.construction_remaining : sc.construction_years;
}

bool fits(double spend, double cap) { return spend <= cap + 1e-9 * std::max(1.0, cap); }

class SetBenefit {
 public:
  SetBenefit(const RevenueModel& model, std::span<const NetEdge> base, std::size_t region)
      : model_(model), base_(base.begin(), base.end()), region_(region) {
    before_ = model_.by_region(base_)[region_];
  }

  double operator()(std::span<const NetEdge> eligible, const std::vector<std::size_t>& set) const {
    if (set.empty()) return 0.0;
    std::vector<NetEdge> extra = base_;
    for (std::size_t k : set) extra.push_back(eligible[k]);
    return (model_.by_region(extra)[region_] - before_) / kEurPerBudgetUnit;
  }

 private:
  const RevenueModel& model_;
  std::vector<NetEdge> base_;
  std::size_t region_;
  double before_ = 0.0;
};

}  // namespace

LocalDesignResult solve_local_design(const RevenueModel& model, std::span<const NetEdge> base,
                                     std::size_t region, std::span<const NetEdge> eligible,
                                     double cap) {
  LocalDesignResult result;
  if (!(cap > 0.0) || eligible.empty()) return result;
  const SetBenefit benefit(model, base, region);

  std::vector<std::size_t> order(eligible.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return eligible[x].id < eligible[y].id; });

  std::vector<std::size_t> best;
  double best_value = 0.0;

  if (eligible.size() <= kExactLimit) {
    // Depth-first over include/exclude decisions in id order, pruning sets
    // that no longer fit the cap.
    std::vector<std::size_t> current;
    auto visit = [&](auto&& self, std::size_t pos, double spend) -> void {
      if (pos == order.size()) {
        const double v = benefit(eligible, current);
        if (v > best_value) {
          best_value = v;
          best = current;
        }
        return;
      }
      const NetEdge& e = eligible[order[pos]];
      if (fits(spend + e.cost, cap)) {
        current.push_back(order[pos]);
        self(self, pos + 1, spend + e.cost);
        current.pop_back();
      }
      self(self, pos + 1, spend);
    };
    visit(visit, 0, 0.0);
  } else {
    result.exact = false;
    std::vector<double> single(eligible.size());
    for (std::size_t k = 0; k < eligible.size(); ++k) single[k] = benefit(eligible, {k});
    std::vector<std::size_t> ranked = order;
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t x, std::size_t y) {
      const double rx = single[x] / std::max(eligible[x].cost, 1e-12);
      const double ry = single[y] / std::max(eligible[y].cost, 1e-12);
      return rx > ry;
    });
    double spend = 0.0;
    for (std::size_t k : ranked) {
      if (!(single[k] > 0.0) || !fits(spend + eligible[k].cost, cap)) continue;
      auto trial = best;
      trial.push_back(k);
      const double v = benefit(eligible, trial);
      if (v > best_value) {
        best = std::move(trial);
        best_value = v;
        spend += eligible[k].cost;
      }
    }
    // Single swaps until no swap improves; each accepted swap strictly
    // raises the objective, so this terminates.
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t in = 0; in < best.size() && !improved; ++in) {
        for (std::size_t k : order) {
          if (std::find(best.begin(), best.end(), k) != best.end()) continue;
          const double new_spend = spend - eligible[best[in]].cost + eligible[k].cost;
          if (!fits(new_spend, cap)) continue;
          auto trial = best;
          trial[in] = k;
          const double v = benefit(eligible, trial);
          if (v > best_value) {
            best = std::move(trial);
            best_value = v;
            spend = new_spend;
            improved = true;
            break;
          }
        }
      }
    }
  }

  std::sort(best.begin(), best.end(),
            [&](std::size_t x, std::size_t y) { return eligible[x].id < eligible[y].id; });
  for (std::size_t k : best) {
    result.projects.push_back(eligible[k].id);
    result.spend += eligible[k].cost;
  }
  result.benefit = best_value;
  return result;
}

std::vector<NetEdge> eligible_projects(const Scenario& sc, const MobilityNetwork& net,
                                       std::size_t op) {
  const std::size_t region = sc.operator_region(op);
  std::vector<NetEdge> out;
  for (const auto& id : open_candidates(sc, net)) {
    const NetEdge& e = net.edge(id);
    auto [ra, rb] = net.edge_regions(e);
    if (ra == region || rb == region) out.push_back(e);
  }
  return out;
}

LocalDesignResult local_design(const Scenario& sc, const SimState& st, std::size_t op,
                               double budget_cap) {
  if (budget_cap < 0.0) throw InputError("local design budget cap must be >= 0");
  const RevenueModel model(st.network, sc.params, sc.demands);
  const auto base = committed_extra(st.network);
  auto eligible = eligible_projects(sc, st.network, op);
  std::erase_if(eligible, [&](const NetEdge& e) { return !fits(e.cost, budget_cap); });
  return solve_local_design(model, base, sc.operator_region(op), eligible, budget_cap);
}

namespace {

// Every operator's benefit (M€) of adding `added` on top of the committed
// network.
std::vector<double> benefits_of(const Scenario& sc, const MobilityNetwork& net,
                                const RevenueModel& model, std::span<const NetEdge> added) {
  auto extra = committed_extra(net);
  const auto before = model.by_region(extra);
  extra.insert(extra.end(), added.begin(), added.end());
  const auto after = model.by_region(extra);
  std::vector<double> out(sc.operators.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t r = sc.operator_region(i);
    out[i] = (after[r] - before[r]) / kEurPerBudgetUnit;
  }
  return out;
}

void commit_all(const Scenario& sc, MobilityNetwork& net, const std::vector<std::string>& ids) {
  for (const auto& id : ids) net.commit(id, construction_time(sc, net.edge(id)));
}

void local_design_phase(const Scenario& sc, SimState& st, int year, std::vector<double>& avail,
                        YearBudget& yb) {
  for (std::size_t i = 0; i < st.operators.size(); ++i) {
    LocalDesignRecord rec;
    rec.year = year;
    rec.op = i;
    rec.cap = std::max(avail[i], 0.0);
    const auto result = local_design(sc, st, i, rec.cap);
    rec.projects = result.projects;
    rec.spend = result.spend;
    {
      const RevenueModel model(st.network, sc.params, sc.demands);
      std::vector<NetEdge> added;
      for (const auto& id : rec.projects) added.push_back(st.network.edge(id));
      rec.benefits = rec.projects.empty() ? std::vector<double>(st.operators.size(), 0.0)
                                          : benefits_of(sc, st.network, model, added);
    }
    commit_all(sc, st.network, rec.projects);
    avail[i] -= rec.spend;
    yb.op_local[i] += rec.spend;
    st.operators[i].spent_local += rec.spend;
    st.history.emplace_back(std::move(rec));
  }
}

YearBudget open_year(const Scenario& sc, const SimState& st, int year, std::vector<double>& avail,
                     double& central_avail) {
  const std::size_t n = st.operators.size();
  YearBudget yb;
  yb.year = year;
  yb.op_start.resize(n);
  yb.op_increment.resize(n);
  yb.op_payments.assign(n, 0.0);
  yb.op_local.assign(n, 0.0);
  yb.op_allocated.assign(n, 0.0);
  avail.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    yb.op_start[i] = st.operators[i].budget;
    yb.op_increment[i] = st.operators[i].yearly_increment;
    avail[i] = sc.discount * st.operators[i].budget + st.operators[i].yearly_increment;
  }
  yb.central_start = st.central.budget;
  yb.central_increment = st.central.yearly_increment;
  central_avail = sc.discount * st.central.budget + st.central.yearly_increment;
  return yb;
}

void close_year(const Scenario& sc, SimState& st, int year, const std::vector<double>& avail,
                double central_avail, YearBudget yb) {
  for (std::size_t i = 0; i < st.operators.size(); ++i) {
    const double expected = next_budget(yb.op_start[i], sc.discount, yb.op_payments[i],
                                        yb.op_local[i], yb.op_increment[i]) +
                            yb.op_allocated[i];
    if (!std::isfinite(avail[i]) || !std::isfinite(expected))
      throw RuntimeInvariantError("operator budget is not finite");
    if (std::abs(expected - avail[i]) > 1e-9 * std::max(1.0, std::abs(expected)))
      throw RuntimeInvariantError("operator budget drifted from its update equation");
    if (avail[i] < -1e-9 * std::max(1.0, yb.op_start[i]))
      throw RuntimeInvariantError("operator budget became negative");
    st.operators[i].budget = std::max(avail[i], 0.0);
  }
  if (!std::isfinite(central_avail))
    throw RuntimeInvariantError("central budget is not finite");
  if (central_avail < -1e-9 * std::max(1.0, yb.central_start))
    throw RuntimeInvariantError("central budget became negative");
  st.central.budget = std::max(central_avail, 0.0);
  yb.op_end.clear();
  for (const auto& op : st.operators) yb.op_end.push_back(op.budget);
  yb.central_end = st.central.budget;
  st.budgets.push_back(std::move(yb));
  st.network = advance_construction(std::move(st.network));
  st.year = year;
}

}  // namespace

SimState run_year_ivcg(const Scenario& sc, SimState st) {
  if (st.year >= sc.horizon) throw InputError("simulation already reached the horizon");
  const int year = st.year + 1;
  const std::size_t n = st.operators.size();
  std::vector<double> avail;
  double central_avail = 0.0;
  YearBudget yb = open_year(sc, st, year, avail, central_avail);

  std::vector<Project> projects;
  for (const auto& id : sc.candidates) projects.push_back({id, st.network.edge(id).cost});

  for (int round = 1;; ++round) {
    // An empty pool still runs, so each year ends on a recorded null round
    // unless the centre has run dry.
    if (!(central_avail > 0.0)) break;
    const auto open = open_candidates(sc, st.network);

    const RevenueModel model(st.network, sc.params, sc.demands);
    RoundInput in;
    in.projects = projects;
    in.central_budget = central_avail;
    in.alpha = st.central.alpha;
    in.true_benefits.assign(n, std::vector<double>(projects.size(), 0.0));
    for (std::size_t x = 0; x < projects.size(); ++x) {
      if (std::find(open.begin(), open.end(), projects[x].id) == open.end()) continue;
      in.pool.push_back(x);
      const NetEdge added[] = {st.network.edge(projects[x].id)};
      const auto b = benefits_of(sc, st.network, model, added);
      for (std::size_t i = 0; i < n; ++i) in.true_benefits[i][x] = b[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      in.policies.push_back({st.operators[i].policy, std::max(avail[i], 0.0), sc.literal_minmax});
    }
    const RoundOutcome out = run_round(in);

    JointRound rec;
    rec.year = year;
    rec.round = round;
    for (std::size_t x : in.pool) rec.pool.push_back(projects[x].id);
    rec.reports.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t x : in.pool) rec.reports[i].push_back(out.reports.at(i, x));
    }
    for (const auto& ex : out.excluded) {
      rec.excluded.push_back({projects[ex.project].id, ex.reason, ex.subsidy});
    }
    rec.payments = out.payments;
    if (!out.selected) {
      rec.benefits.assign(n, 0.0);
      st.history.emplace_back(std::move(rec));
      break;
    }
    const std::size_t x = *out.selected;
    rec.selected = projects[x].id;
    rec.cost = projects[x].cost;
    rec.subsidy = out.subsidy;
    rec.surplus = std::max(out.total_payments() - rec.cost, 0.0);
    for (std::size_t i = 0; i < n; ++i) rec.benefits.push_back(in.true_benefits[i][x]);

    for (std::size_t i = 0; i < n; ++i) {
      avail[i] -= out.payments[i];
      yb.op_payments[i] += out.payments[i];
      st.operators[i].spent_joint += out.payments[i];
    }
    central_avail += rec.surplus - rec.subsidy;
    yb.central_subsidy += rec.subsidy;
    yb.central_surplus += rec.surplus;
    st.central.spent_subsidy += rec.subsidy;
    commit_all(sc, st.network, {projects[x].id});
    st.history.emplace_back(std::move(rec));
  }

  local_design_phase(sc, st, year, avail, yb);
  close_year(sc, st, year, avail, central_avail, std::move(yb));
  return st;
}

SimState run_ivcg(const Scenario& sc) {
  sc.validate();
  SimState st = initial_state(sc, RunKind::Ivcg);
  while (st.year < sc.horizon) st = run_year_ivcg(sc, std::move(st));
  return st;
}

std::vector<double> yearly_subsidies(const SimState& ivcg, int horizon) {
  std::vector<double> out(static_cast<std::size_t>(horizon), 0.0);
  for (const auto& h : ivcg.history) {
    if (const auto* r = std::get_if<JointRound>(&h)) {
      if (r->year >= 1 && r->year <= horizon) out[r->year - 1] += r->subsidy;
    }
  }
  return out;
}

SubsidyAllocation allocate_subsidies(const Scenario& sc, const SimState& ivcg) {
  const std::size_t n = sc.operators.size();
  SubsidyAllocation alloc(static_cast<std::size_t>(sc.horizon), std::vector<double>(n, 0.0));
  std::vector<std::size_t> op_of_region(sc.network.regions().size());
  for (std::size_t i = 0; i < n; ++i) op_of_region[sc.operator_region(i)] = i;
  std::vector<double> population(n, 0.0);
  for (std::size_t c = 0; c < sc.network.cities().size(); ++c) {
    population[op_of_region[sc.network.city_region(c)]] += sc.network.cities()[c].population;
  }
  const double total_population = std::accumulate(population.begin(), population.end(), 0.0);

  for (const auto& h : ivcg.history) {
    const auto* r = std::get_if<JointRound>(&h);
    if (r == nullptr || !r->selected || !(r->subsidy > 0.0)) continue;
    if (r->year < 1 || r->year > sc.horizon) throw InputError("trace year outside the horizon");
    auto& row = alloc[r->year - 1];
    switch (sc.allocator) {
      case SubsidyAllocator::RegionShare: {
        auto [ra, rb] = sc.network.edge_regions(sc.network.edge(*r->selected));
        if (ra == rb) {
          row[op_of_region[ra]] += r->subsidy;
        } else {
          row[op_of_region[ra]] += 0.5 * r->subsidy;
          row[op_of_region[rb]] += 0.5 * r->subsidy;
        }
        break;
      }
      case SubsidyAllocator::Equal:
      case SubsidyAllocator::Population: {
        double given = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          const double w = sc.allocator == SubsidyAllocator::Equal
                               ? 1.0 / static_cast<double>(n)
                               : population[i] / total_population;
          row[i] += w * r->subsidy;
          given += w * r->subsidy;
        }
        row[n - 1] += r->subsidy - given;
        break;
      }
    }
  }
  return alloc;
}

SimState run_baseline_ld(const Scenario& sc, const SubsidyAllocation& allocation,
                         std::span<const double> ivcg_yearly_subsidy) {
  sc.validate();
  const std::size_t n = sc.operators.size();
  if (allocation.size() != static_cast<std::size_t>(sc.horizon) ||
      ivcg_yearly_subsidy.size() != allocation.size())
    throw InputError("subsidy allocation must cover every year of the horizon");
  for (std::size_t t = 0; t < allocation.size(); ++t) {
    if (allocation[t].size() != n) throw InputError("subsidy allocation needs one entry per operator");
    double sum = 0.0;
    for (double v : allocation[t]) {
      if (!(v >= 0.0)) throw InputError("allocated subsidies must be >= 0");
      sum += v;
    }
    const double want = ivcg_yearly_subsidy[t];
    if (std::abs(sum - want) > 1e-9 * std::max(1.0, std::abs(want)))
      throw InputError("allocated subsidies for year " + std::to_string(t + 1) +
                       " do not match the paired IVCG run");
  }

  SimState st = initial_state(sc, RunKind::LocalDesign);
  while (st.year < sc.horizon) {
    const int year = st.year + 1;
    std::vector<double> avail;
    double central_avail = 0.0;
    YearBudget yb = open_year(sc, st, year, avail, central_avail);
    for (std::size_t i = 0; i < n; ++i) {
      yb.op_allocated[i] = allocation[year - 1][i];
      avail[i] += yb.op_allocated[i];
      yb.central_subsidy += yb.op_allocated[i];
    }
    st.central.spent_subsidy += yb.central_subsidy;
    // The centre's funds leave through the allocation; its own trajectory is
    // not simulated in the baseline.
    central_avail = st.central.budget;
    local_design_phase(sc, st, year, avail, yb);
    close_year(sc, st, year, avail, central_avail, std::move(yb));
  }
  return st;
}

MetricsReport compute_metrics(const SimState& st, std::size_t operators, int horizon) {
  MetricsReport m;
  m.local_benefit.assign(operators, 0.0);
  m.total_local_benefit.assign(operators, 0.0);
  m.per_year.resize(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    auto& y = m.per_year[t];
    y.year = t + 1;
    y.local_benefit.assign(operators, 0.0);
    y.total_local_benefit.assign(operators, 0.0);
  }
  const bool ld = st.kind == RunKind::LocalDesign;
  for (const auto& h : st.history) {
    if (const auto* r = std::get_if<JointRound>(&h)) {
      auto& y = m.per_year.at(r->year - 1);
      y.subsidy += r->subsidy;
      if (!r->selected) continue;
      for (std::size_t i = 0; i < operators; ++i) {
        y.local_benefit[i] += r->benefits[i];
        y.total_local_benefit[i] += r->benefits[i];
      }
    } else {
      const auto& l = std::get<LocalDesignRecord>(h);
      auto& y = m.per_year.at(l.year - 1);
      for (std::size_t i = 0; i < operators; ++i) {
        y.total_local_benefit[i] += l.benefits[i];
        if (ld) y.local_benefit[i] += l.benefits[i];
      }
    }
  }
  if (ld) {
    for (const auto& b : st.budgets) m.per_year.at(b.year - 1).subsidy = b.central_subsidy;
  }
  for (auto& y : m.per_year) {
    for (std::size_t i = 0; i < operators; ++i) {
      y.social_welfare += y.local_benefit[i];
      y.total_social_welfare += y.total_local_benefit[i];
      m.local_benefit[i] += y.local_benefit[i];
      m.total_local_benefit[i] += y.total_local_benefit[i];
    }
    m.system_social_welfare += y.social_welfare;
    m.total_social_welfare += y.total_social_welfare;
    m.total_subsidy += y.subsidy;
  }
  if (m.total_subsidy > 0.0) m.subsidy_efficiency = m.system_social_welfare / m.total_subsidy;
  return m;
}

}  // namespace ivcg
