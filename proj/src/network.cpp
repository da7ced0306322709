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

#include "ivcg/network.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>
#include <utility>

#include "ivcg/errors.hpp"

namespace ivcg {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Rail:
      return "rail";
    case Mode::Air:
      return "air";
    case Mode::Car:
      return "car";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rail") return Mode::Rail;
  if (lower == "air") return Mode::Air;
  if (lower == "car") return Mode::Car;
  throw InputError("unknown mode '" + std::string(text) + "'");
}

MobilityNetwork::MobilityNetwork(std::vector<std::string> regions,
                                 std::vector<CityNode> cities,
                                 std::vector<NetEdge> edges)
    : regions_(std::move(regions)) {
  if (regions_.empty()) throw InvariantError("network declares no regions");
  std::unordered_set<std::string> seen;
  for (const auto& r : regions_) {
    if (r.empty()) throw InvariantError("empty region id");
    if (!seen.insert(r).second) throw InvariantError("duplicate region '" + r + "'");
  }
  for (auto& c : cities) {
    if (c.id.empty()) throw InvariantError("empty city id");
    if (city_lookup_.count(c.id)) throw InvariantError("duplicate city '" + c.id + "'");
    if (!(c.population > 0.0))
      throw InvariantError("city '" + c.id + "': population must be > 0");
    for (double d : c.access_km) {
      if (std::isnan(d) || d < 0.0)
        throw InvariantError("city '" + c.id + "': access distance must be >= 0 or inf");
    }
    auto rit = std::find(regions_.begin(), regions_.end(), c.region);
    if (rit == regions_.end())
      throw DanglingReferenceError("city '" + c.id + "' references unknown region '" +
                                   c.region + "'");
    city_lookup_.emplace(c.id, cities_.size());
    city_region_.push_back(static_cast<std::size_t>(rit - regions_.begin()));
    cities_.push_back(std::move(c));
  }
  for (auto& e : edges) add_edge(std::move(e));
}

std::size_t MobilityNetwork::city_index(std::string_view id) const {
  auto it = city_lookup_.find(std::string(id));
  if (it == city_lookup_.end()) throw InputError("unknown city '" + std::string(id) + "'");
  return it->second;
}

std::size_t MobilityNetwork::region_index(std::string_view id) const {
  auto it = std::find(regions_.begin(), regions_.end(), id);
  if (it == regions_.end()) throw InputError("unknown region '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - regions_.begin());
}

std::optional<std::size_t> MobilityNetwork::find_edge(std::string_view id) const {
  auto it = edge_lookup_.find(std::string(id));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t MobilityNetwork::edge_index(std::string_view id) const {
  auto idx = find_edge(id);
  if (!idx) throw InputError("unknown edge '" + std::string(id) + "'");
  return *idx;
}

std::pair<std::size_t, std::size_t> MobilityNetwork::edge_regions(const NetEdge& e) const {
  return {city_region_[city_index(e.a)], city_region_[city_index(e.b)]};
}

bool MobilityNetwork::is_cross_border(const NetEdge& e) const {
  auto [ra, rb] = edge_regions(e);
  return ra != rb;
}

void MobilityNetwork::validate_edge(const NetEdge& e) const {
  const std::string where = "edge '" + e.id + "'";
  if (e.id.empty()) throw InvariantError("empty edge id");
  if (!city_lookup_.count(e.a))
    throw DanglingReferenceError(where + " references unknown city '" + e.a + "'");
  if (!city_lookup_.count(e.b))
    throw DanglingReferenceError(where + " references unknown city '" + e.b + "'");
  if (e.a == e.b) throw InvariantError(where + ": endpoints must be distinct");
  if (!(e.length_km > 0.0) || std::isinf(e.length_km))
    throw InvariantError(where + ": length must be > 0");
  if (!(e.speed_kmh > 0.0)) throw InvariantError(where + ": speed must be > 0");
  if (!(e.cost >= 0.0)) throw InvariantError(where + ": cost must be >= 0");
  if (e.construction_remaining < 0)
    throw InvariantError(where + ": construction time must be >= 0");
  if (e.status == EdgeStatus::Implemented && e.construction_remaining != 0)
    throw InvariantError(where + ": implemented edge has construction time left");
  if (e.status == EdgeStatus::UnderConstruction && e.construction_remaining == 0)
    throw InvariantError(where + ": under-construction edge has no time left");
}

void MobilityNetwork::add_edge(NetEdge e) {
  validate_edge(e);
  if (edge_lookup_.count(e.id)) throw InvariantError("duplicate edge '" + e.id + "'");
  edge_lookup_.emplace(e.id, edges_.size());
  edges_.push_back(std::move(e));
}

void MobilityNetwork::set_edge(std::size_t idx, NetEdge e) {
  validate_edge(e);
  if (e.id != edges_.at(idx).id) throw InputError("set_edge may not rename an edge");
  edges_[idx] = std::move(e);
}

void MobilityNetwork::commit(std::string_view edge_id, int years) {
  NetEdge& e = edges_[edge_index(edge_id)];
  if (e.status != EdgeStatus::NotImplemented)
    throw InputError("edge '" + e.id + "' is already committed");
  if (years < 0) throw InputError("construction time must be >= 0");
  e.status = years == 0 ? EdgeStatus::Implemented : EdgeStatus::UnderConstruction;
  e.construction_remaining = years;
}

MobilityNetwork advance_construction(MobilityNetwork net) {
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    NetEdge e = net.edges()[i];
    if (e.status != EdgeStatus::UnderConstruction) continue;
    e.construction_remaining -= 1;
    if (e.construction_remaining <= 0) {
      e.construction_remaining = 0;
      e.status = EdgeStatus::Implemented;
    }
    net.set_edge(i, std::move(e));
  }
  return net;
}

// ---------------------------------------------------------------------------

ModeRouter::ModeRouter(const MobilityNetwork& net, Mode mode,
                       std::span<const NetEdge> extra_edges)
    : net_(&net), n_(net.cities().size()), adj_(n_), dist_(n_ * n_, kUnreachable) {
  auto add = [&](const NetEdge& e) {
    const std::size_t u = net.city_index(e.a);
    const std::size_t v = net.city_index(e.b);
    adj_[u].push_back({v, e.length_km, &e});
    adj_[v].push_back({u, e.length_km, &e});
    double& d = dist_[u * n_ + v];
    if (e.length_km < d) {
      d = e.length_km;
      dist_[v * n_ + u] = e.length_km;
    }
  };
  for (const auto& e : net.edges()) {
    if (e.mode == mode && e.traversable()) add(e);
  }
  for (const auto& e : extra_edges) {
    if (e.mode != Mode::Rail) throw InputError("extra edge '" + e.id + "' is not a rail edge");
    if (mode == Mode::Rail) add(e);
  }
  for (std::size_t i = 0; i < n_; ++i) dist_[i * n_ + i] = 0.0;
  // Floyd-Warshall; the graphs handled here have at most a few hundred cities.
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t i = 0; i < n_; ++i) {
      const double dik = dist_[i * n_ + k];
      if (!reachable(dik)) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        const double cand = dik + dist_[k * n_ + j];
        if (cand < dist_[i * n_ + j]) dist_[i * n_ + j] = cand;
      }
    }
  }
  for (auto& links : adj_) {
    std::sort(links.begin(), links.end(),
              [](const Link& x, const Link& y) { return x.edge->id < y.edge->id; });
  }
}

double ModeRouter::distance(std::size_t origin, std::size_t dest) const {
  if (origin >= n_ || dest >= n_) throw InputError("city index out of range");
  return dist_[origin * n_ + dest];
}

std::vector<const NetEdge*> ModeRouter::path(std::size_t origin, std::size_t dest) const {
  std::vector<const NetEdge*> out;
  const double total = distance(origin, dest);
  if (origin == dest || !reachable(total)) return out;
  const double tol = 1e-9 * std::max(1.0, total);
  std::size_t at = origin;
  while (at != dest) {
    const double here = dist_[at * n_ + dest];
    const Link* chosen = nullptr;
    for (const auto& link : adj_[at]) {
      const double rest = dist_[link.to * n_ + dest];
      if (!reachable(rest) || !(rest < here)) continue;
      if (std::abs(link.length + rest - here) <= tol) {
        chosen = &link;  // links are sorted by edge id
        break;
      }
    }
    if (chosen == nullptr) throw RuntimeInvariantError("shortest path reconstruction failed");
    out.push_back(chosen->edge);
    at = chosen->to;
  }
  return out;
}

DistanceTable::DistanceTable(const MobilityNetwork& net, std::span<const NetEdge> extra_rail)
    : net_(&net), rail_(net, Mode::Rail, extra_rail), car_(net, Mode::Car) {
  for (const auto& e : net.edges()) {
    if (e.mode == Mode::Air && e.traversable()) flights_.push_back(&e);
  }
}

double DistanceTable::distance(Mode m, std::size_t origin, std::size_t dest) const {
  switch (m) {
    case Mode::Rail:
      return rail_.distance(origin, dest);
    case Mode::Car:
      return car_.distance(origin, dest);
    case Mode::Air: {
      double best = kUnreachable;
      for (const NetEdge* f : flights_) {
        const std::size_t a = net_->city_index(f->a);
        const std::size_t b = net_->city_index(f->b);
        // The flight must land at the destination; any drive precedes it.
        std::size_t depart;
        if (a == dest) {
          depart = b;
        } else if (b == dest) {
          depart = a;
        } else {
          continue;
        }
        const double drive = car_.distance(origin, depart);
        if (!reachable(drive)) continue;
        best = std::min(best, drive + f->length_km);
      }
      return best;
    }
  }
  return kUnreachable;
}

double shortest_mode_distance(const MobilityNetwork& net, Mode mode, std::string_view origin,
                              std::string_view dest, std::span<const NetEdge> extra_edges) {
  const std::size_t o = net.city_index(origin);
  const std::size_t d = net.city_index(dest);
  if (o == d) throw InputError("origin and destination must differ");
  for (const auto& e : extra_edges) {
    if (e.mode != Mode::Rail) throw InputError("extra edge '" + e.id + "' is not a rail edge");
  }
  if (mode == Mode::Rail) return ModeRouter(net, Mode::Rail, extra_edges).distance(o, d);
  return DistanceTable(net, extra_edges).distance(mode, o, d);
}

std::vector<double> rail_region_shares(const MobilityNetwork& net, const ModeRouter& rail,
                                       std::size_t origin, std::size_t dest) {
  if (origin == dest) throw InputError("origin and destination must differ");
  const auto edges = rail.path(origin, dest);
  if (edges.empty()) throw UndefinedError("no rail path; region share is undefined");
  std::vector<double> km(net.regions().size(), 0.0);
  double total = 0.0;
  for (const NetEdge* e : edges) {
    auto [ra, rb] = net.edge_regions(*e);
    if (ra == rb) {
      km[ra] += e->length_km;
    } else {
      km[ra] += 0.5 * e->length_km;
      km[rb] += 0.5 * e->length_km;
    }
    total += e->length_km;
  }
  for (double& x : km) x /= total;
  return km;
}

double rail_region_share(const MobilityNetwork& net, std::string_view origin,
                         std::string_view dest, std::string_view region,
                         std::span<const NetEdge> extra_edges) {
  const std::size_t r = net.region_index(region);
  ModeRouter rail(net, Mode::Rail, extra_edges);
  return rail_region_shares(net, rail, net.city_index(origin), net.city_index(dest))[r];
}

}  // namespace ivcg
