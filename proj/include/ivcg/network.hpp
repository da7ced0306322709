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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ivcg {

enum class Mode : std::uint8_t { Rail = 0, Air = 1, Car = 2 };

inline constexpr std::array<Mode, 3> kModes{Mode::Rail, Mode::Air, Mode::Car};
inline constexpr std::size_t kModeCount = kModes.size();

constexpr std::size_t index(Mode m) { return static_cast<std::size_t>(m); }

std::string_view to_string(Mode m);
// Accepts "rail", "air", "car" (case-insensitive). Throws InputError.
Mode parse_mode(std::string_view text);

enum class EdgeStatus : int {
  NotImplemented = 0,
  Implemented = 1,
  UnderConstruction = 2,
};

// Marker for "no path" / "no station". Never a large finite number.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

inline bool reachable(double km_or_cost) { return !std::isinf(km_or_cost); }

struct CityNode {
  std::string id;
  std::string region;
  double population = 0.0;
  // Distance from the city centre to the nearest station, per mode.
  std::array<double, kModeCount> access_km{kUnreachable, kUnreachable,
                                           kUnreachable};

  double access(Mode m) const { return access_km[index(m)]; }
};

struct NetEdge {
  std::string id;
  std::string a;
  std::string b;
  Mode mode = Mode::Rail;
  EdgeStatus status = EdgeStatus::NotImplemented;
  int construction_remaining = 0;  // years
  double length_km = 0.0;
  double speed_kmh = 0.0;
  double cost = 0.0;  // M€

  bool traversable() const { return status == EdgeStatus::Implemented; }
};

// Labeled undirected multi-modal graph partitioned into regions.
//
// Cities and edges keep their insertion order; that order is the canonical
// order for every report and serialization.
class MobilityNetwork {
 public:
  MobilityNetwork() = default;
  // Validates every invariant; throws InvariantError / DanglingReferenceError.
  MobilityNetwork(std::vector<std::string> regions, std::vector<CityNode> cities,
                  std::vector<NetEdge> edges);

  const std::vector<std::string>& regions() const { return regions_; }
  const std::vector<CityNode>& cities() const { return cities_; }
  const std::vector<NetEdge>& edges() const { return edges_; }

  std::size_t city_index(std::string_view id) const;  // throws InputError
  std::size_t region_index(std::string_view id) const;  // throws InputError
  std::optional<std::size_t> find_edge(std::string_view id) const;
  std::size_t edge_index(std::string_view id) const;  // throws InputError
  const NetEdge& edge(std::string_view id) const { return edges_[edge_index(id)]; }

  std::size_t city_region(std::size_t city) const { return city_region_[city]; }
  bool is_cross_border(const NetEdge& e) const;
  // Regions of the edge's two endpoints (equal for intra-regional edges).
  std::pair<std::size_t, std::size_t> edge_regions(const NetEdge& e) const;

  void add_edge(NetEdge e);
  // Marks a not-implemented edge as committed: Implemented when years == 0,
  // otherwise UnderConstruction with `years` remaining.
  void commit(std::string_view edge_id, int years);
  // Direct mutation for tools; re-validates the edge.
  void set_edge(std::size_t idx, NetEdge e);

 private:
  void validate_edge(const NetEdge& e) const;

  std::vector<std::string> regions_;
  std::vector<CityNode> cities_;
  std::vector<NetEdge> edges_;
  std::vector<std::size_t> city_region_;
  std::unordered_map<std::string, std::size_t> city_lookup_;
  std::unordered_map<std::string, std::size_t> edge_lookup_;
};

// All-pairs shortest distances over one mode's traversable edges plus any
// extra edges of that mode. Deterministic path reconstruction: among equal
// length shortest paths the lexicographically smallest edge-id sequence wins.
class ModeRouter {
 public:
  ModeRouter(const MobilityNetwork& net, Mode mode,
             std::span<const NetEdge> extra_edges = {});

  double distance(std::size_t origin, std::size_t dest) const;
  // Edges (as pointers into the network or the extra list) along the chosen
  // shortest path. Empty when origin == dest or unreachable.
  std::vector<const NetEdge*> path(std::size_t origin, std::size_t dest) const;

 private:
  struct Link {
    std::size_t to;
    double length;
    const NetEdge* edge;
  };

  const MobilityNetwork* net_;
  std::size_t n_ = 0;
  std::vector<std::vector<Link>> adj_;
  std::vector<double> dist_;  // n_ x n_
};

// Distances of every mode for one network snapshot. Air paths are a single
// flight, optionally preceded by a car drive to the departure airport.
class DistanceTable {
 public:
  DistanceTable(const MobilityNetwork& net,
                std::span<const NetEdge> extra_rail = {});

  double distance(Mode m, std::size_t origin, std::size_t dest) const;
  const ModeRouter& rail() const { return rail_; }

 private:
  const MobilityNetwork* net_;
  ModeRouter rail_;
  ModeRouter car_;
  std::vector<const NetEdge*> flights_;
};

// Shortest travel distance of `mode` between two cities; kUnreachable when no
// admissible path exists. `extra_edges` must be rail edges.
double shortest_mode_distance(const MobilityNetwork& net, Mode mode,
                              std::string_view origin, std::string_view dest,
                              std::span<const NetEdge> extra_edges = {});

// Per-region fraction of a shortest rail path's length; cross-border edges
// split their length evenly between the two endpoint regions. Indexed like
// net.regions(). Throws UndefinedError when no rail path exists.
std::vector<double> rail_region_shares(const MobilityNetwork& net,
                                       const ModeRouter& rail,
                                       std::size_t origin, std::size_t dest);

double rail_region_share(const MobilityNetwork& net, std::string_view origin,
                         std::string_view dest, std::string_view region,
                         std::span<const NetEdge> extra_edges = {});

// Ticks every under-construction edge by one year.
MobilityNetwork advance_construction(MobilityNetwork net);

}  // namespace ivcg
