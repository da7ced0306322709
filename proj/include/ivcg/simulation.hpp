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
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ivcg/demand.hpp"
#include "ivcg/mechanism.hpp"
#include "ivcg/network.hpp"

namespace ivcg {

// Revenue is computed in €/year; budgets, costs and valuations are in M€.
inline constexpr double kEurPerBudgetUnit = 1e6;

// B^t = δ B^{t-1} - p^t - h^t + a^t.
inline double next_budget(double previous, double discount, double payments, double local_spend,
                          double increment) {
  return discount * previous - payments - local_spend + increment;
}

struct OperatorSpec {
  std::string region;
  double budget = 0.0;            // B_i at year 0
  double yearly_increment = 0.0;  // a_i
  StrategyKind strategy = StrategyKind::BTR;
};

struct CentralSpec {
  double budget = 0.0;            // B_0 at year 0
  double yearly_increment = 0.0;  // a_0
  double alpha = 1.0;             // investment ratio
};

// How the IVCG subsidies are handed to regions for the local-design baseline.
enum class SubsidyAllocator { RegionShare, Equal, Population };

std::string_view to_string(SubsidyAllocator a);
SubsidyAllocator parse_allocator(std::string_view text);

// Grid explored by the `sweep` experiment.
struct SweepSpec {
  std::vector<double> central_budgets;
  std::vector<double> alphas;
  std::vector<std::vector<StrategyKind>> strategies;  // one entry per operator
};

struct Scenario {
  std::string name;
  MobilityNetwork network;  // candidate projects are not-implemented rail edges
  std::vector<TripDemand> demands;
  DemandParams params;
  int horizon = 7;
  double discount = 0.976;
  int construction_years = 0;  // used when a candidate edge carries none
  double cost_per_km = 15.7;   // M€/km, for inline candidates
  double rail_lifetime_years = 33.0;  // carried for completeness; unused
  std::vector<OperatorSpec> operators;  // exactly one per region
  CentralSpec central;
  std::vector<std::string> candidates;  // edge ids, in canonical order
  bool literal_minmax = false;
  SubsidyAllocator allocator = SubsidyAllocator::RegionShare;
  std::uint64_t seed = 0;
  SweepSpec sweep;

  // Throws InvariantError / DanglingReferenceError.
  void validate() const;
  std::size_t operator_region(std::size_t op) const;
};

struct OperatorState {
  std::string region;
  double budget = 0.0;
  double yearly_increment = 0.0;
  StrategyKind policy = StrategyKind::BTR;
  double spent_joint = 0.0;
  double spent_local = 0.0;
};

struct CentralState {
  double budget = 0.0;
  double yearly_increment = 0.0;
  double alpha = 1.0;
  double spent_subsidy = 0.0;
};

struct ExclusionRecord {
  std::string project;
  ExclusionReason reason;
  double subsidy;
};

// One mechanism round, including the final null round of a year.
struct JointRound {
  int year = 0;
  int round = 0;
  std::vector<std::string> pool;
  std::vector<std::vector<double>> reports;  // [operator][pool position]
  std::optional<std::string> selected;
  double cost = 0.0;
  std::vector<double> payments;
  double subsidy = 0.0;
  double surplus = 0.0;  // payments above cost, credited to the centre
  std::vector<double> benefits;  // true b_i(selected) at selection time
  std::vector<ExclusionRecord> excluded;
};

// One operator's local design step in one year.
struct LocalDesignRecord {
  int year = 0;
  std::size_t op = 0;
  double cap = 0.0;
  std::vector<std::string> projects;
  double spend = 0.0;
  std::vector<double> benefits;  // every operator's benefit of the set
};

using HistoryEntry = std::variant<JointRound, LocalDesignRecord>;

struct YearBudget {
  int year = 0;
  std::vector<double> op_start;
  std::vector<double> op_increment;
  std::vector<double> op_payments;
  std::vector<double> op_local;
  std::vector<double> op_allocated;  // baseline only
  std::vector<double> op_end;
  double central_start = 0.0;
  double central_increment = 0.0;
  double central_subsidy = 0.0;
  double central_surplus = 0.0;
  double central_end = 0.0;
};

enum class RunKind { Ivcg, LocalDesign };

struct SimState {
  RunKind kind = RunKind::Ivcg;
  int year = 0;
  MobilityNetwork network;
  std::vector<OperatorState> operators;
  CentralState central;
  std::vector<HistoryEntry> history;
  std::vector<YearBudget> budgets;
};

SimState initial_state(const Scenario& sc, RunKind kind = RunKind::Ivcg);

// Rail edges committed but not yet in service; valuations treat them as built.
std::vector<NetEdge> committed_extra(const MobilityNetwork& net);

// Open candidate ids (not yet committed), in scenario order.
std::vector<std::string> open_candidates(const Scenario& sc, const MobilityNetwork& net);

struct LocalDesignResult {
  std::vector<std::string> projects;
  double spend = 0.0;
  double benefit = 0.0;  // the designing operator's b_i(set), M€
  bool exact = true;
};

// Budget-capped choice of projects maximizing one region's set benefit.
// `base` holds the committed-but-not-in-service edges; `eligible` must be
// not-implemented rail edges. Exact search up to kExactLimit projects,
// greedy plus single swaps beyond.
inline constexpr std::size_t kExactLimit = 15;

LocalDesignResult solve_local_design(const RevenueModel& model, std::span<const NetEdge> base,
                                     std::size_t region, std::span<const NetEdge> eligible,
                                     double cap);

// Eligible projects of an operator: open candidates touching its region.
std::vector<NetEdge> eligible_projects(const Scenario& sc, const MobilityNetwork& net,
                                       std::size_t op);

LocalDesignResult local_design(const Scenario& sc, const SimState& st, std::size_t op,
                               double budget_cap);

SimState run_year_ivcg(const Scenario& sc, SimState st);
SimState run_ivcg(const Scenario& sc);

// [year-1][operator] subsidy handed to each region for the baseline.
using SubsidyAllocation = std::vector<std::vector<double>>;

// Per-year subsidy totals of an IVCG history.
std::vector<double> yearly_subsidies(const SimState& ivcg, int horizon);

SubsidyAllocation allocate_subsidies(const Scenario& sc, const SimState& ivcg);

// Local design only, with each region's allocated subsidy added to its
// budget. Throws InputError when allocation totals differ from
// `ivcg_yearly_subsidy`.
SimState run_baseline_ld(const Scenario& sc, const SubsidyAllocation& allocation,
                         std::span<const double> ivcg_yearly_subsidy);

struct YearMetrics {
  int year = 0;
  std::vector<double> local_benefit;  // joint projects
  double social_welfare = 0.0;        // joint projects
  double subsidy = 0.0;
  std::vector<double> total_local_benefit;  // joint and local projects
  double total_social_welfare = 0.0;
};

struct MetricsReport {
  std::vector<double> local_benefit;  // LB_i over joint projects
  double system_social_welfare = 0.0;  // SSW over joint projects
  std::optional<double> subsidy_efficiency;  // nullopt: no subsidy was paid
  double total_subsidy = 0.0;
  std::vector<double> total_local_benefit;  // including local designs
  double total_social_welfare = 0.0;
  std::vector<YearMetrics> per_year;
};

MetricsReport compute_metrics(const SimState& st, std::size_t operators, int horizon);

}  // namespace ivcg
