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

#include "ivcg/demand.hpp"

#include <algorithm>
#include <cmath>

#include "ivcg/errors.hpp"

namespace ivcg {

void DemandParams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || std::isinf(x))
      throw InvariantError(std::string("parameter ") + name + " must be > 0");
  };
  for (Mode m : kModes) {
    const std::string suffix(to_string(m));
    positive(vot_in_vehicle[index(m)], ("vot_" + suffix).c_str());
    positive(mode_speed[index(m)], ("speed_" + suffix).c_str());
    if (!(wait_time[index(m)] >= 0.0) || std::isinf(wait_time[index(m)]))
      throw InvariantError("parameter wait_" + suffix + " must be >= 0");
  }
  positive(vot_access, "vot_access");
  positive(vot_wait, "vot_wait");
  positive(cost_sensitivity, "cost_sensitivity");
  positive(urban_speed, "urban_speed");
  positive(rail_price_per_km, "rail_price_per_km");
}

double generalized_cost(const DemandParams& p, Mode mode, double access_origin_km,
                        double access_dest_km, double distance_km) {
  if (!reachable(access_origin_km) || !reachable(access_dest_km) || !reachable(distance_km))
    return kUnreachable;
  const std::size_t m = index(mode);
  return p.vot_access * (access_origin_km + access_dest_km) / p.urban_speed +
         p.vot_wait * p.wait_time[m] + p.vot_in_vehicle[m] * distance_km / p.mode_speed[m];
}

double travel_cost(const MobilityNetwork& net, const DemandParams& params, Mode mode,
                   std::string_view origin, std::string_view dest,
                   std::span<const NetEdge> extra_edges) {
  const double d = shortest_mode_distance(net, mode, origin, dest, extra_edges);
  const auto& o = net.cities()[net.city_index(origin)];
  const auto& t = net.cities()[net.city_index(dest)];
  return generalized_cost(params, mode, o.access(mode), t.access(mode), d);
}

ModeSplit mode_split(const std::array<double, kModeCount>& costs, double cost_sensitivity) {
  double lowest = kUnreachable;
  for (double c : costs) {
    if (std::isnan(c)) throw InputError("mode cost is NaN");
    lowest = std::min(lowest, c);
  }
  if (!reachable(lowest)) throw UndefinedError("every mode is unreachable");
  ModeSplit split;
  double total = 0.0;
  for (std::size_t m = 0; m < kModeCount; ++m) {
    if (!reachable(costs[m])) continue;
    split.share[m] = std::exp(-cost_sensitivity * (costs[m] - lowest));
    total += split.share[m];
  }
  for (double& s : split.share) s /= total;
  return split;
}

RevenueModel::RevenueModel(const MobilityNetwork& net, const DemandParams& params,
                           std::span<const TripDemand> demands)
    : net_(&net), params_(params) {
  params_.validate();
  const DistanceTable table(net);
  pairs_.reserve(demands.size());
  for (const auto& r : demands) {
    const std::size_t o = net.city_index(r.origin);
    const std::size_t d = net.city_index(r.dest);
    if (o == d) throw InvariantError("trip " + r.origin + "->" + r.dest + ": origin == dest");
    if (!(r.volume >= 0.0) || std::isinf(r.volume))
      throw InvariantError("trip " + r.origin + "->" + r.dest + ": volume must be >= 0");
    const auto& co = net.cities()[o];
    const auto& cd = net.cities()[d];
    pairs_.push_back({o, d, r.volume,
                      generalized_cost(params_, Mode::Air, co.access(Mode::Air),
                                       cd.access(Mode::Air), table.distance(Mode::Air, o, d)),
                      generalized_cost(params_, Mode::Car, co.access(Mode::Car),
                                       cd.access(Mode::Car), table.distance(Mode::Car, o, d))});
  }
}

template <typename Sink>
void RevenueModel::accumulate(std::span<const NetEdge> extra, Sink&& sink) const {
  const ModeRouter rail(*net_, Mode::Rail, extra);
  for (const auto& od : pairs_) {
    if (od.volume == 0.0) continue;
    const double km = rail.distance(od.origin, od.dest);
    if (!reachable(km)) continue;
    const auto& co = net_->cities()[od.origin];
    const auto& cd = net_->cities()[od.dest];
    const double rail_cost =
        generalized_cost(params_, Mode::Rail, co.access(Mode::Rail), cd.access(Mode::Rail), km);
    if (!reachable(rail_cost)) continue;
    const ModeSplit split =
        mode_split({rail_cost, od.air_cost, od.car_cost}, params_.cost_sensitivity);
    const double rail_trips = od.volume * split[Mode::Rail];
    sink(rail, od, km * params_.rail_price_per_km * rail_trips);
  }
}

std::vector<double> RevenueModel::by_region(std::span<const NetEdge> extra) const {
  std::vector<double> revenue(net_->regions().size(), 0.0);
  accumulate(extra, [&](const ModeRouter& rail, const OdPair& od, double fare_revenue) {
    const auto shares = rail_region_shares(*net_, rail, od.origin, od.dest);
    for (std::size_t r = 0; r < revenue.size(); ++r) revenue[r] += shares[r] * fare_revenue;
  });
  return revenue;
}

double RevenueModel::system(std::span<const NetEdge> extra) const {
  double total = 0.0;
  accumulate(extra, [&](const ModeRouter&, const OdPair&, double fare_revenue) {
    total += fare_revenue;
  });
  return total;
}

double rail_revenue(const MobilityNetwork& net, const DemandParams& params,
                    std::span<const TripDemand> demands, std::string_view region,
                    std::span<const NetEdge> extra_edges) {
  const std::size_t r = net.region_index(region);
  return RevenueModel(net, params, demands).by_region(extra_edges)[r];
}

namespace {

void require_project(const MobilityNetwork& net, const NetEdge& project) {
  if (project.mode != Mode::Rail)
    throw InputError("project '" + project.id + "' is not a rail edge");
  if (project.status != EdgeStatus::NotImplemented)
    throw InputError("project '" + project.id + "' is already implemented or under way");
  if (auto idx = net.find_edge(project.id);
      idx && net.edges()[*idx].status != EdgeStatus::NotImplemented)
    throw InputError("project '" + project.id + "' is already implemented or under way");
}

}  // namespace

double project_benefit(const MobilityNetwork& net, const DemandParams& params,
                       std::span<const TripDemand> demands, std::string_view region,
                       const NetEdge& project) {
  require_project(net, project);
  const std::size_t r = net.region_index(region);
  const RevenueModel model(net, params, demands);
  const NetEdge with[] = {project};
  return model.by_region(with)[r] - model.by_region()[r];
}

double social_welfare(const MobilityNetwork& net, const DemandParams& params,
                      std::span<const TripDemand> demands, std::span<const NetEdge> projects) {
  for (const auto& p : projects) require_project(net, p);
  if (projects.empty()) return 0.0;
  const RevenueModel model(net, params, demands);
  const auto after = model.by_region(projects);
  const auto before = model.by_region();
  double w = 0.0;
  for (std::size_t r = 0; r < after.size(); ++r) w += after[r] - before[r];
  return w;
}

std::vector<TripDemand> gravity_demand(const MobilityNetwork& net, double total_trips) {
  if (!(total_trips >= 0.0)) throw InputError("total trips must be >= 0");
  const ModeRouter car(net, Mode::Car);
  const auto& cities = net.cities();
  std::vector<TripDemand> out;
  double mass = 0.0;
  for (std::size_t i = 0; i < cities.size(); ++i) {
    for (std::size_t j = 0; j < cities.size(); ++j) {
      if (i == j) continue;
      const double d = car.distance(i, j);
      if (!reachable(d)) continue;
      const double w = cities[i].population * cities[j].population / (d * d);
      out.push_back({cities[i].id, cities[j].id, w});
      mass += w;
    }
  }
  for (auto& t : out) t.volume = mass > 0.0 ? total_trips * t.volume / mass : 0.0;
  return out;
}

}  // namespace ivcg
