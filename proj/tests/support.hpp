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

// Small builders and hand-rolled generators shared by the test binaries.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ivcg/network.hpp"

namespace ivcg::testing {

inline CityNode city(std::string id, std::string region, double rail_access = 0.0,
                     double air_access = kUnreachable, double car_access = 0.0,
                     double population = 1000.0) {
  CityNode c;
  c.id = std::move(id);
  c.region = std::move(region);
  c.population = population;
  c.access_km = {rail_access, air_access, car_access};
  return c;
}

inline NetEdge edge(std::string id, std::string a, std::string b, double km,
                    Mode mode = Mode::Rail, EdgeStatus status = EdgeStatus::Implemented,
                    double cost = 0.0) {
  NetEdge e;
  e.id = std::move(id);
  e.a = std::move(a);
  e.b = std::move(b);
  e.mode = mode;
  e.status = status;
  e.length_km = km;
  e.speed_kmh = mode == Mode::Rail ? 148.0 : mode == Mode::Air ? 880.0 : 116.5;
  e.cost = cost;
  return e;
}

inline NetEdge candidate(std::string id, std::string a, std::string b, double km, double cost) {
  return edge(std::move(id), std::move(a), std::move(b), km, Mode::Rail,
              EdgeStatus::NotImplemented, cost);
}

// Deterministic generator; every property suite seeds its own.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Random connected-ish multi-region rail/car graph with n cities; some rail
// edges are left unbuilt so they can serve as candidates.
inline MobilityNetwork random_network(Gen& g, int n, int regions = 2) {
  std::vector<std::string> rs;
  for (int r = 0; r < regions; ++r) rs.push_back("R" + std::to_string(r));
  std::vector<CityNode> cities;
  for (int i = 0; i < n; ++i) {
    cities.push_back(city("c" + std::to_string(i), rs[static_cast<std::size_t>(g.integer(0, regions - 1))],
                          g.real(0.0, 10.0), kUnreachable, 0.0, g.real(1e4, 1e6)));
  }
  std::vector<NetEdge> edges;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::string a = "c" + std::to_string(i);
      const std::string b = "c" + std::to_string(j);
      if (g.coin(0.45)) {
        const EdgeStatus st = g.coin(0.75) ? EdgeStatus::Implemented : EdgeStatus::NotImplemented;
        edges.push_back(edge("r" + std::to_string(k++), a, b, g.integer(20, 400), Mode::Rail, st,
                             g.real(0.0, 50.0)));
      }
      edges.push_back(edge("k" + std::to_string(k++), a, b, g.integer(20, 500), Mode::Car));
    }
  }
  return MobilityNetwork(rs, cities, edges);
}

}  // namespace ivcg::testing
