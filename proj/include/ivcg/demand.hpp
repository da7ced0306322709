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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ivcg/network.hpp"

namespace ivcg {

struct TripDemand {
  std::string origin;
  std::string dest;
  double volume = 0.0;  // trips per year
};

// Generalized-cost and pricing parameters. Defaults are the reference values
// used throughout the project (see data/defaults.params).
struct DemandParams {
  std::array<double, kModeCount> vot_in_vehicle{29.75, 46.76, 20.35};  // €/h
  double vot_access = 17.05;                                            // €/h
  double vot_wait = 25.0;                                               // €/h
  std::array<double, kModeCount> wait_time{0.5, 1.5, 0.0};              // h
  double cost_sensitivity = 0.0461;                                     // 1/€
  double urban_speed = 38.0;                                            // km/h
  std::array<double, kModeCount> mode_speed{148.0, 880.0, 116.5};       // km/h
  double rail_price_per_km = 50.4 / 148.0;                              // €/km

  // Throws InvariantError on a non-positive rate/speed or negative wait.
  void validate() const;
};

struct ModeSplit {
  std::array<double, kModeCount> share{0.0, 0.0, 0.0};
  double operator[](Mode m) const { return share[index(m)]; }
};

// Monetized door-to-door cost of one trip. Infinite inputs give kUnreachable.
double generalized_cost(const DemandParams& params, Mode mode, double access_origin_km,
                        double access_dest_km, double distance_km);

double travel_cost(const MobilityNetwork& net, const DemandParams& params, Mode mode,
                   std::string_view origin, std::string_view dest,
                   std::span<const NetEdge> extra_edges = {});

// Multinomial logit over the three modes, max-shifted; unreachable modes get
// exactly zero. Throws UndefinedError when every cost is infinite.
ModeSplit mode_split(const std::array<double, kModeCount>& costs, double cost_sensitivity);

// Rail revenue per region for one network snapshot. Air and car costs do not
// depend on rail projects and are cached at construction, so evaluating many
// hypothetical rail edge sets against the same snapshot is cheap.
//
// The network passed in must outlive the model.
class RevenueModel {
 public:
  RevenueModel(const MobilityNetwork& net, const DemandParams& params,
               std::span<const TripDemand> demands);

  // €/year per region (indexed like net.regions()) with `extra` rail edges
  // made traversable.
  std::vector<double> by_region(std::span<const NetEdge> extra = {}) const;
  // Same demand priced with every region share set to one.
  double system(std::span<const NetEdge> extra = {}) const;

  const MobilityNetwork& network() const { return *net_; }

 private:
  struct OdPair {
    std::size_t origin;
    std::size_t dest;
    double volume;
    double air_cost;
    double car_cost;
  };

  template <typename Sink>
  void accumulate(std::span<const NetEdge> extra, Sink&& sink) const;

  const MobilityNetwork* net_;
  DemandParams params_;
  std::vector<OdPair> pairs_;
};

double rail_revenue(const MobilityNetwork& net, const DemandParams& params,
                    std::span<const TripDemand> demands, std::string_view region,
                    std::span<const NetEdge> extra_edges = {});

// Additional yearly revenue of `region` when `project` is added (€/year,
// may be negative). Throws InputError unless project is a not-implemented
// rail edge.
double project_benefit(const MobilityNetwork& net, const DemandParams& params,
                       std::span<const TripDemand> demands, std::string_view region,
                       const NetEdge& project);

// Sum over regions of the benefit of adding all `projects` together (€/year).
double social_welfare(const MobilityNetwork& net, const DemandParams& params,
                      std::span<const TripDemand> demands, std::span<const NetEdge> projects);

// Gravity-model demand q_ij = k * s_i * s_j / d_ij^2 over every ordered city
// pair, with d_ij the shortest car distance and k chosen so the volumes sum
// to `total_trips`. Pairs without a car path get no demand.
std::vector<TripDemand> gravity_demand(const MobilityNetwork& net, double total_trips);

}  // namespace ivcg
