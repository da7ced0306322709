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

// Random simulation scenarios for property and acceptance suites.

#pragma once

#include "ivcg/simulation.hpp"
#include "support.hpp"

namespace ivcg::testing {

// Every not-implemented rail edge becomes a candidate; costs are scaled so
// that a typical project costs a few years of a regional budget.
inline Scenario random_scenario(Gen& g, int max_cities = 7) {
  Scenario sc;
  sc.name = "random";
  const int regions = g.integer(2, 3);
  for (;;) {
    sc.network = random_network(g, g.integer(regions + 1, max_cities), regions);
    std::vector<bool> used(sc.network.regions().size(), false);
    for (std::size_t c = 0; c < sc.network.cities().size(); ++c) used[sc.network.city_region(c)] = true;
    bool ok = std::find(used.begin(), used.end(), false) == used.end();
    for (const auto& e : sc.network.edges()) {
      if (e.mode == Mode::Rail && e.status == EdgeStatus::NotImplemented) {
        sc.candidates.push_back(e.id);
      }
    }
    if (ok && !sc.candidates.empty()) break;
    sc.candidates.clear();
  }
  // Rescale candidate costs to M€ comparable with yearly revenue benefits.
  for (std::size_t k = 0; k < sc.network.edges().size(); ++k) {
    NetEdge e = sc.network.edges()[k];
    if (e.status != EdgeStatus::NotImplemented) continue;
    e.cost = g.real(0.5, 30.0);
    if (g.coin(0.2)) e.construction_remaining = g.integer(1, 2);
    sc.network.set_edge(k, e);
  }
  sc.demands = gravity_demand(sc.network, g.real(1e6, 2e8));
  sc.horizon = g.integer(1, 3);
  sc.construction_years = g.coin(0.3) ? 1 : 0;
  for (const auto& r : sc.network.regions()) {
    const StrategyKind k = g.coin(0.6) ? StrategyKind::BTR
                           : g.coin()  ? StrategyKind::Minmax
                                       : StrategyKind::Proportional;
    sc.operators.push_back({r, g.real(0.0, 15.0), g.real(0.0, 5.0), k});
  }
  sc.central = {g.real(0.0, 30.0), g.real(0.0, 10.0), g.coin(0.5) ? 1.0 : g.real(0.3, 1.0)};
  sc.allocator = static_cast<SubsidyAllocator>(g.integer(0, 2));
  return sc;
}

}  // namespace ivcg::testing
