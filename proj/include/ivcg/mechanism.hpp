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

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ivcg {

enum class StrategyKind { BTR, Minmax, Proportional };

std::string_view to_string(StrategyKind k);
StrategyKind parse_strategy(std::string_view text);  // throws InputError

// A candidate infrastructure project as seen by the mechanism.
struct Project {
  std::string id;
  double cost = 0.0;
};

// Reported values, one row per operator, one column per project.
class ValuationProfile {
 public:
  ValuationProfile() = default;
  ValuationProfile(std::size_t operators, std::size_t projects)
      : values_(operators, std::vector<double>(projects, 0.0)) {}
  explicit ValuationProfile(std::vector<std::vector<double>> values);

  std::size_t operators() const { return values_.size(); }
  std::size_t projects() const { return values_.empty() ? 0 : values_.front().size(); }

  double at(std::size_t op, std::size_t project) const { return values_[op][project]; }
  void set(std::size_t op, std::size_t project, double v);
  void set_row(std::size_t op, std::vector<double> row);
  const std::vector<double>& row(std::size_t op) const { return values_[op]; }

  double total(std::size_t project) const;
  double total_without(std::size_t project, std::size_t op) const;

 private:
  std::vector<std::vector<double>> values_;
};

// Projects whose summed reports strictly exceed their cost, restricted to
// `pool` (indices into `projects`). Returned in pool order.
std::vector<std::size_t> candidate_set(const ValuationProfile& v, std::span<const Project> projects,
                                       std::span<const std::size_t> pool);
std::vector<std::size_t> candidate_set(const ValuationProfile& v, std::span<const Project> projects);

// Welfare-maximizing candidate; ties go to the larger surplus over cost,
// then to the smaller project id. nullopt is the null project.
std::optional<std::size_t> select_project(const ValuationProfile& v,
                                          std::span<const Project> projects,
                                          std::span<const std::size_t> candidates);

struct PaymentOptions {
  // When set, the run without operator i re-filters candidates using only the
  // other operators' reports. The default keeps the round's candidate set,
  // which is what bounds every payment to [0, v_i(selected)].
  bool refilter_exclusion_run = false;
};

// Clarke pivot payments for `selected` among `candidates`. All zero when
// nothing is selected.
std::vector<double> clarke_payments(const ValuationProfile& v, std::span<const Project> projects,
                                    std::span<const std::size_t> candidates,
                                    std::optional<std::size_t> selected,
                                    PaymentOptions options = {});

// Central top-up: max(cost - sum(payments), 0).
double subsidy(double cost, std::span<const double> payments);

// subsidy <= alpha * cost (non-strict) and subsidy <= central_budget.
bool admissibility_check(double subsidy_value, double cost, double alpha,
                         double central_budget = std::numeric_limits<double>::infinity());

struct StrategyPolicy {
  StrategyKind kind = StrategyKind::BTR;
  double budget = 0.0;  // available budget at round time
  // Minmax reports max(budget, benefit) on its best project instead of the
  // budget-clamped min(budget, benefit).
  bool literal_minmax = false;
};

// Reports of one operator for every project (zero outside `pool`).
std::vector<double> strategy_report(const StrategyPolicy& policy, std::span<const double> benefits,
                                    std::span<const Project> projects,
                                    std::span<const std::size_t> pool);

enum class ExclusionReason { InvestmentRatio, CentralBudget, OperatorBudget };

std::string_view to_string(ExclusionReason r);

struct Exclusion {
  std::size_t project;
  ExclusionReason reason;
  double subsidy;
};

struct RoundOutcome {
  std::optional<std::size_t> selected;
  ValuationProfile reports;
  std::vector<double> payments;  // per operator
  double subsidy = 0.0;
  bool admissible = false;  // true iff a project was committed
  std::vector<Exclusion> excluded;

  double total_payments() const;
};

struct RoundInput {
  std::span<const Project> projects;
  std::vector<std::size_t> pool;  // projects still open this round
  // [operator][project] true benefits, in the same currency as costs.
  std::vector<std::vector<double>> true_benefits;
  std::vector<StrategyPolicy> policies;
  double central_budget = 0.0;
  double alpha = 1.0;
  PaymentOptions payment_options{};
};

// Selection, pricing and admissibility for a fixed report profile. Picks
// failing the investment ratio, the central budget or an operator's budget are
// excluded and the round continues with the remaining pool.
RoundOutcome resolve_round(ValuationProfile reports, std::span<const Project> projects,
                           std::vector<std::size_t> pool, std::span<const double> operator_budgets,
                           double central_budget, double alpha, PaymentOptions options = {});

// One mechanism round: build reports, then select / price / check, excluding
// inadmissible picks until one passes or no candidate remains.
RoundOutcome run_round(const RoundInput& in);

}  // namespace ivcg
