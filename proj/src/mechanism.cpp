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

#include "ivcg/mechanism.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "ivcg/errors.hpp"

namespace ivcg {

namespace {

// Absolute slack for comparisons of money amounts that went through a few
// additions; amounts are M€ and rarely exceed 1e6.
bool leq(double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::abs(b)); }

std::vector<std::size_t> all_projects(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

// argmax of `score` over `candidates` with the documented tie-break.
template <typename Score>
std::optional<std::size_t> argmax(std::span<const Project> projects,
                                  std::span<const std::size_t> candidates, Score&& score) {
  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t x : candidates) {
    const double s = score(x);
    if (!best) {
      best = x;
      best_score = s;
      continue;
    }
    const Project& p = projects[x];
    const Project& q = projects[*best];
    bool better = s > best_score;
    if (s == best_score) {
      const double surplus_p = s - p.cost;
      const double surplus_q = best_score - q.cost;
      better = surplus_p > surplus_q || (surplus_p == surplus_q && p.id < q.id);
    }
    if (better) {
      best = x;
      best_score = s;
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::BTR:
      return "btr";
    case StrategyKind::Minmax:
      return "minmax";
    case StrategyKind::Proportional:
      return "proportional";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "btr") return StrategyKind::BTR;
  if (lower == "minmax") return StrategyKind::Minmax;
  if (lower == "proportional") return StrategyKind::Proportional;
  throw InputError("unknown strategy '" + std::string(text) + "'");
}

std::string_view to_string(ExclusionReason r) {
  switch (r) {
    case ExclusionReason::InvestmentRatio:
      return "investment_ratio";
    case ExclusionReason::CentralBudget:
      return "central_budget";
    case ExclusionReason::OperatorBudget:
      return "operator_budget";
  }
  return "?";
}

ValuationProfile::ValuationProfile(std::vector<std::vector<double>> values)
    : values_(std::move(values)) {
  for (const auto& row : values_) {
    if (row.size() != projects()) throw InputError("ragged valuation profile");
    for (double v : row) {
      if (!(v >= 0.0) || std::isinf(v)) throw InputError("reported values must be finite and >= 0");
    }
  }
}

void ValuationProfile::set(std::size_t op, std::size_t project, double v) {
  if (!(v >= 0.0) || std::isinf(v)) throw InputError("reported values must be finite and >= 0");
  values_.at(op).at(project) = v;
}

void ValuationProfile::set_row(std::size_t op, std::vector<double> row) {
  if (row.size() != projects()) throw InputError("report row has the wrong length");
  for (double v : row) {
    if (!(v >= 0.0) || std::isinf(v)) throw InputError("reported values must be finite and >= 0");
  }
  values_.at(op) = std::move(row);
}

double ValuationProfile::total(std::size_t project) const {
  double s = 0.0;
  for (const auto& row : values_) s += row[project];
  return s;
}

double ValuationProfile::total_without(std::size_t project, std::size_t op) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i != op) s += values_[i][project];
  }
  return s;
}

std::vector<std::size_t> candidate_set(const ValuationProfile& v, std::span<const Project> projects,
                                       std::span<const std::size_t> pool) {
  std::vector<std::size_t> out;
  for (std::size_t x : pool) {
    if (v.total(x) > projects[x].cost) out.push_back(x);
  }
  return out;
}

std::vector<std::size_t> candidate_set(const ValuationProfile& v,
                                       std::span<const Project> projects) {
  const auto pool = all_projects(projects.size());
  return candidate_set(v, projects, pool);
}

std::optional<std::size_t> select_project(const ValuationProfile& v,
                                          std::span<const Project> projects,
                                          std::span<const std::size_t> candidates) {
  return argmax(projects, candidates, [&](std::size_t x) { return v.total(x); });
}

std::vector<double> clarke_payments(const ValuationProfile& v, std::span<const Project> projects,
                                    std::span<const std::size_t> candidates,
                                    std::optional<std::size_t> selected, PaymentOptions options) {
  std::vector<double> pay(v.operators(), 0.0);
  if (!selected) return pay;
  for (std::size_t i = 0; i < v.operators(); ++i) {
    auto others = [&](std::size_t x) { return v.total_without(x, i); };
    std::vector<std::size_t> reduced;
    std::span<const std::size_t> pool = candidates;
    if (options.refilter_exclusion_run) {
      for (std::size_t x : candidates) {
        if (others(x) > projects[x].cost) reduced.push_back(x);
      }
      pool = reduced;
    }
    const auto without_i = argmax(projects, pool, others);
    const double welfare_without = without_i ? others(*without_i) : 0.0;
    pay[i] = welfare_without - others(*selected);
  }
  return pay;
}

double subsidy(double cost, std::span<const double> payments) {
  const double raised = std::accumulate(payments.begin(), payments.end(), 0.0);
  return std::max(cost - raised, 0.0);
}

bool admissibility_check(double subsidy_value, double cost, double alpha, double central_budget) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("investment ratio must lie in [0, 1]");
  return leq(subsidy_value, alpha * cost) && leq(subsidy_value, central_budget);
}

std::vector<double> strategy_report(const StrategyPolicy& policy, std::span<const double> benefits,
                                    std::span<const Project> projects,
                                    std::span<const std::size_t> pool) {
  if (benefits.size() != projects.size())
    throw InputError("benefit vector does not match the project list");
  const double budget = std::max(policy.budget, 0.0);
  std::vector<double> report(projects.size(), 0.0);
  if (policy.kind == StrategyKind::BTR) {
    for (std::size_t x : pool) report[x] = std::max(0.0, std::min(benefits[x], budget));
    return report;
  }
  const auto best = argmax(projects, pool, [&](std::size_t x) { return benefits[x]; });
  if (!best || !(benefits[*best] > 0.0)) return report;
  const double top = benefits[*best];
  if (policy.kind == StrategyKind::Minmax) {
    report[*best] = policy.literal_minmax ? std::max(budget, top) : std::min(budget, top);
    return report;
  }
  for (std::size_t x : pool) report[x] = std::max(0.0, benefits[x] / top * budget);
  return report;
}

double RoundOutcome::total_payments() const {
  return std::accumulate(payments.begin(), payments.end(), 0.0);
}

RoundOutcome resolve_round(ValuationProfile reports, std::span<const Project> projects,
                           std::vector<std::size_t> pool, std::span<const double> operator_budgets,
                           double central_budget, double alpha, PaymentOptions options) {
  const std::size_t ops = reports.operators();
  if (operator_budgets.size() != ops) throw InputError("one budget per operator required");
  if (reports.projects() != projects.size() && ops > 0)
    throw InputError("report profile does not match the project list");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("investment ratio must lie in [0, 1]");

  RoundOutcome out;
  out.reports = std::move(reports);
  out.payments.assign(ops, 0.0);
  for (;;) {
    const auto candidates = candidate_set(out.reports, projects, pool);
    const auto pick = select_project(out.reports, projects, candidates);
    if (!pick) return out;

    auto pay = clarke_payments(out.reports, projects, candidates, pick, options);
    const double cost = projects[*pick].cost;
    const double p0 = subsidy(cost, pay);

    std::optional<ExclusionReason> reason;
    if (!leq(p0, alpha * cost)) {
      reason = ExclusionReason::InvestmentRatio;
    } else if (!leq(p0, central_budget)) {
      reason = ExclusionReason::CentralBudget;
    } else {
      for (std::size_t i = 0; i < ops; ++i) {
        if (!leq(pay[i], operator_budgets[i])) reason = ExclusionReason::OperatorBudget;
      }
    }
    if (reason) {
      out.excluded.push_back({*pick, *reason, p0});
      pool.erase(std::find(pool.begin(), pool.end(), *pick));
      continue;
    }
    out.selected = pick;
    out.payments = std::move(pay);
    out.subsidy = p0;
    out.admissible = true;
    return out;
  }
}

RoundOutcome run_round(const RoundInput& in) {
  const std::size_t ops = in.policies.size();
  if (in.true_benefits.size() != ops) throw InputError("one benefit row per operator required");

  ValuationProfile reports(ops, in.projects.size());
  std::vector<double> budgets(ops);
  for (std::size_t i = 0; i < ops; ++i) {
    reports.set_row(i, strategy_report(in.policies[i], in.true_benefits[i], in.projects, in.pool));
    budgets[i] = in.policies[i].budget;
  }
  return resolve_round(std::move(reports), in.projects, in.pool, budgets, in.central_budget,
                       in.alpha, in.payment_options);
}

}  // namespace ivcg
