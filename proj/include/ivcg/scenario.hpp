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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ivcg/simulation.hpp"

namespace ivcg {

// Text formats are documented in docs/formats.md. Every parser reports
// problems as ParseError (syntax, with file:line) or as the domain error
// raised by the validated type, prefixed with the location.

MobilityNetwork parse_network(std::istream& in, const std::string& source);
void write_network(std::ostream& out, const MobilityNetwork& net);

std::vector<TripDemand> parse_demand(std::istream& in, const std::string& source);
void write_demand(std::ostream& out, std::span<const TripDemand> demands);

// Applies `key = value` overrides to the scenario's model parameters.
void apply_params(std::istream& in, const std::string& source, Scenario& sc);
void write_params(std::ostream& out, const Scenario& sc);

// Reads scenario.json and the network / demand / params files it names
// (paths relative to the scenario file), then validates everything.
Scenario load_scenario(const std::filesystem::path& path);

// Writes scenario.json, network.txt, demand.txt and params.txt into `dir`.
void save_scenario(const std::filesystem::path& dir, const Scenario& sc);

}  // namespace ivcg
